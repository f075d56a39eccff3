#include "dtt/config_io.hpp"

#include "dtt/errors.hpp"
#include "dtt/parameterization.hpp"

#include <cmath>
#include <fstream>

namespace dtt {

using nlohmann::json;

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) {
        return fallback;
    }
    return j.at(key).get<T>();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

AttackStrategy attack_from_json(const json& j) {
    if (j.is_string()) {
        return parse_attack(j.get<std::string>());
    }
    const auto kind = j.at("kind").get<std::string>();
    if (kind != "composite") {
        return parse_attack(kind);
    }
    std::vector<AttackStage> stages;
    for (const auto& st : j.at("stages")) {
        stages.push_back({st.at("from").get<std::int64_t>(), attack_from_json(st.at("attack"))});
    }
    return AttackStrategy::composite(std::move(stages));
}

json attack_to_json(const AttackStrategy& a) {
    if (a.kind() != AttackKind::Composite) {
        return std::string(to_string(a.kind()));
    }
    json stages = json::array();
    for (const auto& st : a.stages()) {
        stages.push_back({{"from", st.first_segment}, {"attack", attack_to_json(st.strategy)}});
    }
    return {{"kind", "composite"}, {"stages", stages}};
}

ExportKind export_from_string(std::string_view s) {
    if (s == "none") return ExportKind::None;
    if (s == "aggregate") return ExportKind::Aggregate;
    if (s == "trajectories") return ExportKind::Trajectories;
    throw ConfigError("unknown export kind '" + std::string(s) + "'");
}

std::string_view to_string(ExportKind e) {
    switch (e) {
        case ExportKind::None: return "none";
        case ExportKind::Aggregate: return "aggregate";
        case ExportKind::Trajectories: return "trajectories";
    }
    return "?";
}

ExperimentConfig config_from_json_unchecked(const json& j) {
    ExperimentConfig cfg;
    const json params = j.value("params", json::object());

    cfg.mode.variant = trace_variant_from_string(get_or<std::string>(j.value("mode", json::object()), "variant", "modified"));
    cfg.mode.threshold =
        threshold_rule_from_string(get_or<std::string>(j.value("mode", json::object()), "threshold", "constant"));

    const int c = get_or<int>(params, "c", 10);
    const int n = get_or<int>(params, "n", 100);
    const double eps1 = get_or<double>(params, "eps1", 1e-3);
    const double eps2 = get_or<double>(params, "eps2", 1e-3);

    std::optional<double> provider_bias;
    StaticParams base{14150, 650.0, 1.0 / 350.0};
    if (j.contains("provider")) {
        const auto provider = provider_from_json(j.at("provider"));
        const auto derived = cfg.mode.variant == TraceVariant::Static ? static_params(c, n, eps1, eps2, provider)
                                                                     : dynamic_params(c, n, eps1, eps2, provider);
        base = {derived.ell, derived.Z, derived.delta.value()};
        if (const auto* t = std::get_if<StaticLengthProvider::AsymptoticTable1>(&provider.variant())) {
            provider_bias = table1_asymptotic(t->attack, c, n, t->safety_factor, t->bias).p;
        }
    }
    cfg.params.ell = get_or<std::int64_t>(params, "ell", base.ell);
    cfg.params.Z = get_or<double>(params, "Z", base.Z);
    cfg.params.delta = Cutoff{get_or<double>(params, "delta", base.delta)};
    cfg.params.c = c;
    cfg.params.n = n;
    cfg.params.eps1 = eps1;
    cfg.params.eps2 = eps2;

    if (j.contains("defense")) {
        const auto& d = j.at("defense");
        const auto name = d.is_string() ? d.get<std::string>() : d.at("kind").get<std::string>();
        auto f = defense_from_name(name, get_or<int>(d, "c", c));
        if (get_or<bool>(d, "swap", false)) {
            f = ScoreFunction(f.kind(), f.coalition_size(), !f.swapped());
        }
        cfg.defense = f;
    }
    if (j.contains("attack")) {
        cfg.attack = attack_from_json(j.at("attack"));
    }
    if (j.contains("sampler")) {
        const auto& s = j.at("sampler");
        const auto kind = s.at("kind").get<std::string>();
        if (kind == "fixed") {
            cfg.sampler = BiasSampler::fixed(s.at("p").get<double>());
        } else if (kind == "arcsine") {
            cfg.sampler = BiasSampler::arcsine(Cutoff{get_or<double>(s, "delta", cfg.params.delta.value())});
        } else {
            throw ConfigError("unknown sampler '" + kind + "'");
        }
    } else if (provider_bias) {
        cfg.sampler = BiasSampler::fixed(*provider_bias);
    } else {
        cfg.sampler = BiasSampler::arcsine(cfg.params.delta);
    }
    cfg.trials = j.value("trials", std::int64_t{1});
    cfg.master_seed = j.value("master_seed", std::uint64_t{0});
    cfg.pirate_count = j.value("pirate_count", c);
    cfg.export_kind = export_from_string(j.value("export", std::string("aggregate")));
    return cfg;
}

} // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
}

TraceVariant trace_variant_from_string(std::string_view name) {
    if (name == "static") return TraceVariant::Static;
    if (name == "original") return TraceVariant::DynamicOriginal;
    if (name == "modified") return TraceVariant::DynamicModified;
    throw ConfigError("unknown mode '" + std::string(name) + "' (static|original|modified)");
}

ThresholdRule threshold_rule_from_string(std::string_view name) {
    if (name == "constant") return ThresholdRule::Constant;
    if (name == "adaptive") return ThresholdRule::Adaptive;
    throw ConfigError("unknown threshold rule '" + std::string(name) + "' (constant|adaptive)");
}

std::string_view to_string(TraceVariant v) {
    switch (v) {
        case TraceVariant::Static: return "static";
        case TraceVariant::DynamicOriginal: return "original";
        case TraceVariant::DynamicModified: return "modified";
    }
    return "?";
}

std::string_view to_string(ThresholdRule t) { return t == ThresholdRule::Adaptive ? "adaptive" : "constant"; }

ScoreFunction defense_from_name(std::string_view name, int c) {
    if (name == "all0") {
        return ScoreFunction::all0(c);
    }
    const auto kind = score_kind_from_string(name);
    return ScoreFunction(kind, needs_coalition_size(kind) ? c : 0);
}

std::string defense_name(const ScoreFunction& f) {
    if (f.kind() == ScoreKind::All1Optimal && f.swapped()) {
        return "all0";
    }
    return std::string(to_string(f.kind()));
}

StaticLengthProvider provider_from_json(const json& j) {
    try {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "explicit") {
            return StaticLengthProvider(StaticLengthProvider::Explicit{
                j.at("ell").get<std::int64_t>(), j.at("Z").get<double>(), j.value("delta", 0.0)});
        }
        if (kind == "classic_tardos") {
            return StaticLengthProvider(StaticLengthProvider::ClassicTardos{});
        }
        if (kind == "table1") {
            StaticLengthProvider::AsymptoticTable1 t{attack_class_from_string(j.at("attack").get<std::string>())};
            t.safety_factor = j.value("safety_factor", 2.0);
            const auto bias = j.value("bias", std::string("one_over_c"));
            if (bias != "optimal" && bias != "one_over_c") {
                throw ConfigError("table1 bias must be 'optimal' or 'one_over_c'");
            }
            t.bias = bias == "optimal" ? BiasChoice::Optimal : BiasChoice::OneOverC;
            t.Z = j.at("Z").get<double>();
            t.delta = j.value("delta", 0.0);
            return StaticLengthProvider(t);
        }
        throw ConfigError("unknown provider '" + kind + "'");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("provider: ") + e.what());
    }
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    try {
        auto cfg = config_from_json_unchecked(j);
        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

json config_to_json(const ExperimentConfig& cfg) {
    json sampler;
    if (const auto* f = std::get_if<BiasSampler::Fixed>(&cfg.sampler.variant())) {
        sampler = {{"kind", "fixed"}, {"p", f->p}};
    } else {
        sampler = {{"kind", "arcsine"},
                   {"delta", std::get<BiasSampler::ArcsineCutoff>(cfg.sampler.variant()).delta.value()}};
    }
    json defense = {{"kind", defense_name(cfg.defense)}};
    if (needs_coalition_size(cfg.defense.kind())) {
        defense["c"] = cfg.defense.coalition_size();
    }
    return {
        {"params",
         {{"ell", cfg.params.ell},
          {"Z", cfg.params.Z},
          {"delta", cfg.params.delta.value()},
          {"c", cfg.params.c},
          {"n", cfg.params.n},
          {"eps1", cfg.params.eps1},
          {"eps2", cfg.params.eps2}}},
        {"mode", {{"variant", to_string(cfg.mode.variant)}, {"threshold", to_string(cfg.mode.threshold)}}},
        {"defense", defense},
        {"attack", attack_to_json(cfg.attack)},
        {"sampler", sampler},
        {"trials", cfg.trials},
        {"master_seed", cfg.master_seed},
        {"pirate_count", cfg.pirate_count},
        {"export", to_string(cfg.export_kind)},
    };
}

json stats_to_json(const AggregateStats& s) {
    return {
        {"trials_run", s.trials_run},
        {"fraction_all_pirates_caught", s.fraction_all_pirates_caught},
        {"fraction_any_innocent_accused", s.fraction_any_innocent_accused},
        {"catch_time", {{"median", s.catch_time.median}, {"p90", s.catch_time.p90}, {"max", s.catch_time.max}}},
        {"mean_pirates_caught", s.mean_pirates_caught},
        {"exonerations", s.exonerations},
        {"innocent_accusations", s.innocent_accusations},
        {"innocent_score_mean", number_or_null(s.innocent_score_mean)},
        {"innocent_score_variance", number_or_null(s.innocent_score_variance)},
        {"coalition_score_mean", number_or_null(s.coalition_score_mean)},
        {"performance_indicator", number_or_null(s.performance_indicator)},
        {"terminations",
         {{"AllPiratesCaught", s.terminations[0]},
          {"LengthExhausted", s.terminations[1]},
          {"PirateSilence", s.terminations[2]}}},
    };
}

json report_to_json(const TrialReport& r) {
    auto disconnections = [](const std::vector<Disconnection>& v) {
        json out = json::array();
        for (const auto& d : v) {
            out.push_back({{"user", d.user}, {"segment", d.segment}, {"score", d.score}});
        }
        return out;
    };
    json exonerated = json::array();
    for (const auto& e : r.exonerated) {
        exonerated.push_back({{"user", e.user}, {"segment", e.segment}});
    }
    return {
        {"pirates", r.pirates},
        {"caught", disconnections(r.caught)},
        {"false_accusations", disconnections(r.false_accusations)},
        {"exonerated", exonerated},
        {"segments_used", r.segments_used},
        {"terminated_reason", to_string(r.terminated_reason)},
    };
}

} // namespace dtt
