#include "dtt/experiment.hpp"

#include "dtt/errors.hpp"
#include "dtt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace dtt {

void ExperimentConfig::validate() const {
    params.validate();
    mode.validate();
    if (trials < 1) {
        throw ConfigError("trials must be >= 1");
    }
    if (pirate_count < 1) {
        throw ConfigError("at least one pirate is required");
    }
    if (pirate_count > params.n) {
        throw ConfigError("pirate_count exceeds the number of users");
    }
    if (mode.threshold == ThresholdRule::Adaptive && defense.kind() == ScoreKind::All1Optimal) {
        throw ConfigError("adaptive threshold needs a defense without exonerating cells");
    }
}

double nearest_rank_quantile(std::vector<std::int64_t> values, double q) {
    if (values.empty()) {
        throw std::invalid_argument("quantile of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
    return static_cast<double>(values[std::clamp<std::size_t>(rank, 1, values.size()) - 1]);
}

void Aggregator::add(const TrialReport& report) {
    ++trials_;
    pirates_caught_ += static_cast<std::int64_t>(report.caught.size());
    exonerations_ += static_cast<std::int64_t>(report.exonerated.size());
    innocent_accusations_ += static_cast<std::int64_t>(report.false_accusations.size());
    if (!report.false_accusations.empty()) {
        ++any_innocent_;
    }
    if (auto t = report.catch_all_segment()) {
        ++all_caught_;
        catch_times_.push_back(*t);
    } else {
        catch_times_.push_back(report.ell + 1);
    }
    innocent_.merge(report.innocent_increments);
    coalition_.merge(report.coalition_increments);
    ++terminations_[static_cast<std::size_t>(report.terminated_reason)];
}

void Aggregator::merge(const Aggregator& other) {
    trials_ += other.trials_;
    all_caught_ += other.all_caught_;
    any_innocent_ += other.any_innocent_;
    pirates_caught_ += other.pirates_caught_;
    exonerations_ += other.exonerations_;
    innocent_accusations_ += other.innocent_accusations_;
    catch_times_.insert(catch_times_.end(), other.catch_times_.begin(), other.catch_times_.end());
    innocent_.merge(other.innocent_);
    coalition_.merge(other.coalition_);
    for (std::size_t r = 0; r < terminations_.size(); ++r) {
        terminations_[r] += other.terminations_[r];
    }
}

AggregateStats Aggregator::finish() const {
    AggregateStats s;
    s.trials_run = trials_;
    if (trials_ == 0) {
        return s;
    }
    const auto t = static_cast<double>(trials_);
    s.fraction_all_pirates_caught = static_cast<double>(all_caught_) / t;
    s.fraction_any_innocent_accused = static_cast<double>(any_innocent_) / t;
    s.catch_time = {nearest_rank_quantile(catch_times_, 0.5), nearest_rank_quantile(catch_times_, 0.9),
                    nearest_rank_quantile(catch_times_, 1.0)};
    s.mean_pirates_caught = static_cast<double>(pirates_caught_) / t;
    s.exonerations = exonerations_;
    s.innocent_accusations = innocent_accusations_;
    s.innocent_score_mean = innocent_.mean();
    s.innocent_score_variance = innocent_.variance();
    s.coalition_score_mean = coalition_.mean();
    const double mu = coalition_.mean();
    s.performance_indicator =
        mu != 0.0 ? innocent_.variance() / (mu * mu) : std::numeric_limits<double>::quiet_NaN();
    s.terminations = terminations_;
    return s;
}

AggregateStats aggregate(std::span<const TrialReport> reports) {
    Aggregator agg;
    for (const auto& r : reports) {
        agg.add(r);
    }
    return agg.finish();
}

std::vector<std::size_t> choose_pirates(int n, int count, std::uint64_t trial_seed) {
    if (count < 0 || count > n) {
        throw ConfigError("cannot choose " + std::to_string(count) + " pirates among " + std::to_string(n));
    }
    std::vector<std::size_t> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    // Segment 0 is never used by a trace, so its lanes are free for this.
    const auto key = CounterRng(trial_seed).segment_key(0);
    for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
        const double u = CounterRng::draw(key, i);
        const auto span = ids.size() - i;
        const auto pick = i + std::min(span - 1, static_cast<std::size_t>(u * static_cast<double>(span)));
        std::swap(ids[i], ids[pick]);
    }
    ids.resize(static_cast<std::size_t>(count));
    std::sort(ids.begin(), ids.end());
    return ids;
}

TrialReport run_trial(const ExperimentConfig& cfg, std::int64_t trial_index, bool record_trajectory) {
    const auto seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(trial_index));
    const auto pirates = choose_pirates(cfg.params.n, cfg.pirate_count, seed);
    return run_trace(cfg.params, cfg.mode, cfg.sampler, cfg.defense, cfg.attack, pirates, seed,
                     TraceOptions{record_trajectory});
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;
    Aggregator agg;
    const bool keep_first = cfg.export_kind == ExportKind::Trajectories;
    for (std::int64_t t = 0; t < cfg.trials; ++t) {
        auto report = run_trial(cfg, t, keep_first && t == 0);
        agg.add(report);
        if (keep_first && t == 0) {
            result.first_trial = std::move(report);
        }
    }
    result.stats = agg.finish();
    return result;
}

std::size_t export_trajectories(const TrialReport& report, const RecordSink& sink) {
    if (!report.trajectory) {
        throw std::invalid_argument("report was recorded without trajectories");
    }
    std::vector<unsigned char> is_pirate(report.users, 0);
    for (auto j : report.pirates) {
        is_pirate[j] = 1;
    }
    std::vector<std::int64_t> exonerated_at(report.users, std::numeric_limits<std::int64_t>::max());
    for (const auto& e : report.exonerated) {
        exonerated_at[e.user] = e.segment;
    }

    std::size_t count = 0;
    auto emit = [&](std::int64_t segment, std::string series, double value) {
        sink(TrajectoryRecord{segment, std::move(series), value});
        ++count;
    };
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& snap : *report.trajectory) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        bool any = false;
        for (std::size_t j = 0; j < report.users; ++j) {
            if (is_pirate[j] || exonerated_at[j] <= snap.segment) {
                continue;
            }
            lo = std::min(lo, snap.scores[j]);
            hi = std::max(hi, snap.scores[j]);
            any = true;
        }
        emit(snap.segment, "innocent_min", any ? lo : nan);
        emit(snap.segment, "innocent_max", any ? hi : nan);
        double sum = 0.0;
        for (auto j : report.pirates) {
            emit(snap.segment, "pirate_" + std::to_string(j), snap.scores[j]);
            sum += snap.scores[j];
        }
        emit(snap.segment, "pirate_mean", report.pirates.empty() ? nan : sum / static_cast<double>(report.pirates.size()));
        emit(snap.segment, "threshold", snap.threshold);
    }
    return count;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvTrajectoryWriter::CsvTrajectoryWriter(std::ostream& out) : out_(&out) {
    *out_ << "segment,series,value\n";
    if (!*out_) {
        throw std::runtime_error("trajectory sink: write failed");
    }
}

void CsvTrajectoryWriter::operator()(const TrajectoryRecord& record) {
    *out_ << record.segment << ',' << record.series << ',' << format_double(record.value) << '\n';
    if (!*out_) {
        throw std::runtime_error("trajectory sink: write failed");
    }
}

CalibrationResult calibrate_threshold(ExperimentConfig cfg, double target_eps1, std::int64_t search_trials,
                                      const CalibrationOptions& options) {
    if (!(target_eps1 > 0.0 && target_eps1 <= 1.0)) {
        throw ConfigError("target eps1 must lie in (0, 1]");
    }
    if (!(options.z_lo > 0.0 && options.z_hi > options.z_lo)) {
        throw ConfigError("threshold bracket must satisfy 0 < lo < hi");
    }
    if (!(options.rel_tol > 0.0) || search_trials < 1) {
        throw ConfigError("calibration needs rel_tol > 0 and search_trials >= 1");
    }
    cfg.trials = search_trials;
    cfg.export_kind = ExportKind::Aggregate;
    cfg.params.Z = options.z_lo;
    cfg.validate();

    int evaluations = 0;
    auto evaluate = [&](double z) {
        cfg.params.Z = z;
        ++evaluations;
        return run_experiment(cfg).stats;
    };
    auto meets = [&](const AggregateStats& s) { return s.fraction_any_innocent_accused <= target_eps1; };

    auto stats = evaluate(options.z_lo);
    if (meets(stats)) {
        return {options.z_lo, stats, evaluations};
    }
    // Grow geometrically until the target is met, then bisect.
    double failing = options.z_lo;
    double passing = 0.0;
    AggregateStats passing_stats;
    for (double z = std::min(2.0 * failing, options.z_hi);; z = std::min(2.0 * z, options.z_hi)) {
        auto s = evaluate(z);
        if (meets(s)) {
            passing = z;
            passing_stats = s;
            break;
        }
        failing = z;
        if (z >= options.z_hi) {
            throw CalibrationFailure("no threshold in [" + format_double(options.z_lo) + ", " +
                                     format_double(options.z_hi) + "] reaches eps1 <= " +
                                     format_double(target_eps1) + " (measured " +
                                     format_double(s.fraction_any_innocent_accused) + " at the top)");
        }
    }
    while (passing - failing > options.rel_tol * passing) {
        const double mid = 0.5 * (failing + passing);
        auto s = evaluate(mid);
        if (meets(s)) {
            passing = mid;
            passing_stats = s;
        } else {
            failing = mid;
        }
    }
    return {passing, passing_stats, evaluations};
}

} // namespace dtt
