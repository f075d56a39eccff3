// dtt_sim: command-line driver for dynamic traitor tracing experiments.
//
//   dtt_sim run       --config configs/adaptive_interleaving.json --trials 100
//   dtt_sim trace     --config configs/adaptive_maj_min.json --out traj.csv
//   dtt_sim calibrate --defense majority --attack majority --p 0.5 --c 4 --n 50
//   dtt_sim params    --config configs/classic_dynamic.json
//
// Exit codes: 0 success, 2 configuration error, 3 calibration failure.

#include "dtt/config_io.hpp"
#include "dtt/errors.hpp"
#include "dtt/experiment.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using nlohmann::json;

struct Overrides {
    std::string config_path;
    std::optional<int> c, n, trials, pirates;
    std::optional<double> eps1, eps2, Z, delta, p;
    std::optional<std::int64_t> ell;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> attack, defense, mode, threshold, export_kind;
    std::string out;
    std::string format;
};

void add_common(CLI::App* cmd, Overrides& o, const std::string& default_format) {
    o.format = default_format;
    cmd->add_option("--config", o.config_path, "JSON experiment config");
    cmd->add_option("--c", o.c, "assumed coalition size");
    cmd->add_option("--n", o.n, "number of users");
    cmd->add_option("--eps1", o.eps1, "target false-accusation probability");
    cmd->add_option("--eps2", o.eps2, "target probability of missing a pirate");
    cmd->add_option("--ell", o.ell, "number of segments");
    cmd->add_option("--Z", o.Z, "accusation threshold");
    cmd->add_option("--delta", o.delta, "arcsine cutoff (selects arcsine sampling)");
    cmd->add_option("--p", o.p, "fixed bias (selects fixed sampling)");
    cmd->add_option("--attack", o.attack, "attack name or composite, e.g. majority@1,minority@3001");
    cmd->add_option("--defense", o.defense, "tardos|interleaving|all1|all0|coinflip|majority|minority");
    cmd->add_option("--mode", o.mode, "static|original|modified");
    cmd->add_option("--threshold", o.threshold, "constant|adaptive");
    cmd->add_option("--trials", o.trials, "number of trials");
    cmd->add_option("--pirates", o.pirates, "number of pirates (default c)");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--export", o.export_kind, "none|aggregate|trajectories");
    cmd->add_option("--out", o.out, "output path (default stdout)");
    cmd->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
}

dtt::ExperimentConfig build_config(const Overrides& o) {
    json j = o.config_path.empty() ? json::object() : dtt::load_json_file(o.config_path);
    if (!j.contains("params")) {
        j["params"] = json::object();
    }
    auto& params = j["params"];
    if (o.c) params["c"] = *o.c;
    if (o.n) params["n"] = *o.n;
    if (o.eps1) params["eps1"] = *o.eps1;
    if (o.eps2) params["eps2"] = *o.eps2;
    if (o.ell) params["ell"] = *o.ell;
    if (o.Z) params["Z"] = *o.Z;
    if (o.delta) {
        params["delta"] = *o.delta;
        j["sampler"] = {{"kind", "arcsine"}, {"delta", *o.delta}};
    }
    if (o.p) j["sampler"] = {{"kind", "fixed"}, {"p", *o.p}};
    if (o.attack) j["attack"] = *o.attack;
    if (o.defense) j["defense"] = {{"kind", *o.defense}};
    if (o.mode) j["mode"]["variant"] = *o.mode;
    if (o.threshold) j["mode"]["threshold"] = *o.threshold;
    if (o.trials) j["trials"] = *o.trials;
    if (o.pirates) j["pirate_count"] = *o.pirates;
    if (o.seed) j["master_seed"] = *o.seed;
    if (o.export_kind) j["export"] = *o.export_kind;
    // A changed coalition size without an explicit pirate count follows c.
    if (o.c && !o.pirates && !j.contains("pirate_count")) {
        j["pirate_count"] = *o.c;
    }
    return dtt::config_from_json(j);
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw dtt::ConfigError("cannot open output '" + path + "'");
            }
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

json envelope(const dtt::ExperimentConfig& cfg) {
    return {{"tool_version", dtt::kToolVersion}, {"config_echo", dtt::config_to_json(cfg)}};
}

void write_stats(std::ostream& out, const dtt::AggregateStats& s, const json& head, const std::string& format) {
    if (format == "json") {
        json doc = head;
        doc.update(dtt::stats_to_json(s));
        out << doc.dump(2) << '\n';
        return;
    }
    out << "trials_run,fraction_all_pirates_caught,fraction_any_innocent_accused,catch_time_median,"
           "catch_time_p90,catch_time_max,innocent_score_mean,innocent_score_variance,coalition_score_mean,"
           "performance_indicator\n";
    using dtt::format_double;
    out << s.trials_run << ',' << format_double(s.fraction_all_pirates_caught) << ','
        << format_double(s.fraction_any_innocent_accused) << ',' << format_double(s.catch_time.median) << ','
        << format_double(s.catch_time.p90) << ',' << format_double(s.catch_time.max) << ','
        << format_double(s.innocent_score_mean) << ',' << format_double(s.innocent_score_variance) << ','
        << format_double(s.coalition_score_mean) << ',' << format_double(s.performance_indicator) << '\n';
}

std::string trajectory_path(const std::string& out) {
    if (out.empty()) {
        return "trajectories.csv";
    }
    const auto dot = out.find_last_of('.');
    return (dot == std::string::npos ? out : out.substr(0, dot)) + "_trajectories.csv";
}

int cmd_run(const Overrides& o) {
    const auto cfg = build_config(o);
    const auto result = dtt::run_experiment(cfg);
    if (cfg.export_kind == dtt::ExportKind::None) {
        std::cerr << "trials=" << result.stats.trials_run
                  << " all_caught=" << result.stats.fraction_all_pirates_caught
                  << " innocent_accused=" << result.stats.fraction_any_innocent_accused
                  << " median_catch=" << result.stats.catch_time.median << '\n';
        return 0;
    }
    Output out(o.out);
    write_stats(out.stream(), result.stats, envelope(cfg), o.format);
    if (result.first_trial) {
        std::ofstream traj(trajectory_path(o.out));
        if (!traj) {
            throw dtt::ConfigError("cannot open trajectory output");
        }
        dtt::export_trajectories(*result.first_trial, dtt::CsvTrajectoryWriter(traj));
    }
    return 0;
}

int cmd_trace(const Overrides& o, std::int64_t trial) {
    auto cfg = build_config(o);
    const auto report = dtt::run_trial(cfg, trial, true);
    Output out(o.out);
    if (o.format == "json") {
        json doc = envelope(cfg);
        doc["trial"] = trial;
        doc.update(dtt::report_to_json(report));
        json records = json::array();
        dtt::export_trajectories(report, [&](const dtt::TrajectoryRecord& r) {
            records.push_back({{"segment", r.segment}, {"series", r.series}, {"value", r.value}});
        });
        doc["trajectories"] = std::move(records);
        out.stream() << doc.dump(2) << '\n';
    } else {
        const auto n = dtt::export_trajectories(report, dtt::CsvTrajectoryWriter(out.stream()));
        std::cerr << "records=" << n << " segments=" << report.segments_used
                  << " caught=" << report.caught.size() << '/' << report.pirates.size()
                  << " false_accusations=" << report.false_accusations.size()
                  << " reason=" << dtt::to_string(report.terminated_reason) << '\n';
    }
    return 0;
}

int cmd_calibrate(const Overrides& o, double target, std::int64_t search_trials,
                  const dtt::CalibrationOptions& opts) {
    auto cfg = build_config(o);
    const auto result = dtt::calibrate_threshold(cfg, target, search_trials, opts);
    cfg.params.Z = result.Z;
    json head = envelope(cfg);
    head["calibrated_Z"] = result.Z;
    head["target_eps1"] = target;
    head["evaluations"] = result.evaluations;
    Output out(o.out);
    write_stats(out.stream(), result.operating_point, head, o.format);
    return 0;
}

int cmd_params(const Overrides& o) {
    const auto cfg = build_config(o);
    Output out(o.out);
    const json params = dtt::config_to_json(cfg)["params"];
    if (o.format == "csv") {
        out.stream() << "ell,Z,delta,c,n,eps1,eps2\n"
                     << cfg.params.ell << ',' << dtt::format_double(cfg.params.Z) << ','
                     << dtt::format_double(cfg.params.delta.value()) << ',' << cfg.params.c << ','
                     << cfg.params.n << ',' << dtt::format_double(cfg.params.eps1) << ','
                     << dtt::format_double(cfg.params.eps2) << '\n';
    } else {
        out.stream() << json{{"tool_version", dtt::kToolVersion}, {"params", params}}.dump(2) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic traitor tracing simulator"};
    app.require_subcommand(1);

    Overrides run_o, trace_o, cal_o, params_o;
    auto* run = app.add_subcommand("run", "run a Monte Carlo experiment");
    add_common(run, run_o, "json");

    auto* trace = app.add_subcommand("trace", "run one trial and export its trajectories");
    add_common(trace, trace_o, "csv");
    std::int64_t trial = 0;
    trace->add_option("--trial", trial, "trial index");

    auto* calibrate = app.add_subcommand("calibrate", "search the smallest Z meeting a false-accusation target");
    add_common(calibrate, cal_o, "json");
    double target = 0.01;
    std::int64_t search_trials = 200;
    dtt::CalibrationOptions opts;
    calibrate->add_option("--target-eps1", target, "target innocent-accusation fraction");
    calibrate->add_option("--search-trials", search_trials, "trials per evaluated threshold");
    calibrate->add_option("--z-lo", opts.z_lo, "lower end of the threshold bracket");
    calibrate->add_option("--z-hi", opts.z_hi, "upper end of the threshold bracket");
    calibrate->add_option("--rel-tol", opts.rel_tol, "relative bracket width to stop at");

    auto* params = app.add_subcommand("params", "print the derived scheme parameters");
    add_common(params, params_o, "json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*run) return cmd_run(run_o);
        if (*trace) return cmd_trace(trace_o, trial);
        if (*calibrate) return cmd_calibrate(cal_o, target, search_trials, opts);
        if (*params) return cmd_params(params_o);
    } catch (const dtt::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const dtt::CalibrationFailure& e) {
        std::cerr << "calibration failed: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
