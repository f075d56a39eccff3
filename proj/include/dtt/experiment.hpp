#pragma once
// Seeded Monte Carlo over independent traces, aggregate statistics,
// trajectory export and empirical threshold calibration.

#include "dtt/attack_strategies.hpp"
#include "dtt/bias_model.hpp"
#include "dtt/score_functions.hpp"
#include "dtt/tracing_engine.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dtt {

enum class ExportKind { None, Aggregate, Trajectories };

struct ExperimentConfig {
    SchemeParams params;
    TraceMode mode;
    ScoreFunction defense = ScoreFunction::tardos();
    AttackStrategy attack = AttackStrategy::interleaving();
    BiasSampler sampler = BiasSampler::arcsine(Cutoff{1.0 / 350.0});
    std::int64_t trials = 1;
    std::uint64_t master_seed = 0;
    int pirate_count = 2;
    ExportKind export_kind = ExportKind::Aggregate;

    // Throws ConfigError.
    void validate() const;
};

struct CatchTimeQuantiles {
    double median = 0.0;
    double p90 = 0.0;
    double max = 0.0;
};

struct AggregateStats {
    std::int64_t trials_run = 0;
    double fraction_all_pirates_caught = 0.0;
    double fraction_any_innocent_accused = 0.0;
    // Segment of the last pirate's disconnection; trials that did not catch
    // everyone count as ell + 1.
    CatchTimeQuantiles catch_time;
    double mean_pirates_caught = 0.0;
    std::int64_t exonerations = 0;
    std::int64_t innocent_accusations = 0;
    // Per-segment innocent weight moments, pooled over user-segments.
    double innocent_score_mean = 0.0;
    double innocent_score_variance = 0.0;
    // Per-segment sum of the connected pirates' weights.
    double coalition_score_mean = 0.0;
    // sigma^2 / mu^2 with sigma^2 the innocent variance and mu the coalition
    // mean, i.e. the inverse square of the sigma-normalised coalition drift.
    double performance_indicator = 0.0;
    std::array<std::int64_t, 3> terminations{}; // indexed by Termination
};

// Order-insensitive accumulation of trial reports.
class Aggregator {
public:
    void add(const TrialReport& report);
    void merge(const Aggregator& other);
    AggregateStats finish() const;

private:
    std::int64_t trials_ = 0;
    std::int64_t all_caught_ = 0;
    std::int64_t any_innocent_ = 0;
    std::int64_t pirates_caught_ = 0;
    std::int64_t exonerations_ = 0;
    std::int64_t innocent_accusations_ = 0;
    std::vector<std::int64_t> catch_times_;
    RunningMoments innocent_;
    RunningMoments coalition_;
    std::array<std::int64_t, 3> terminations_{};
};

AggregateStats aggregate(std::span<const TrialReport> reports);

// Nearest-rank quantile of a non-empty sample, q in (0, 1].
double nearest_rank_quantile(std::vector<std::int64_t> values, double q);

// Pirate ids for one trial: a seeded uniform subset of size count.
std::vector<std::size_t> choose_pirates(int n, int count, std::uint64_t trial_seed);

// Trial t of an experiment, reproducible in isolation.
TrialReport run_trial(const ExperimentConfig& cfg, std::int64_t trial_index, bool record_trajectory = false);

struct ExperimentResult {
    AggregateStats stats;
    std::optional<TrialReport> first_trial; // kept when exporting trajectories
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct TrajectoryRecord {
    std::int64_t segment;
    std::string series;
    double value;
};

using RecordSink = std::function<void(const TrajectoryRecord&)>;

// One record per (segment, series): innocent_min, innocent_max, pirate_<id>
// per pirate, pirate_mean, threshold. The innocent envelope skips exonerated
// users and is NaN when no innocent is left. Throws std::invalid_argument when
// the report carries no trajectory.
std::size_t export_trajectories(const TrialReport& report, const RecordSink& sink);

// CSV sink with header "segment,series,value"; values use 17 significant digits.
class CsvTrajectoryWriter {
public:
    explicit CsvTrajectoryWriter(std::ostream& out);
    void operator()(const TrajectoryRecord& record);

private:
    std::ostream* out_;
};

std::string format_double(double v);

struct CalibrationOptions {
    double z_lo = 1.0;
    double z_hi = 1e5;
    double rel_tol = 0.01;
};

struct CalibrationResult {
    double Z;
    AggregateStats operating_point;
    int evaluations;
};

// Smallest Z in [z_lo, z_hi] (to rel_tol) whose measured innocent-accusation
// fraction over search_trials trials is <= target_eps1. Every evaluation uses
// the same master seed. cfg.params.Z is ignored. Throws ConfigError on a bad
// bracket or target and CalibrationFailure if z_hi misses the target.
CalibrationResult calibrate_threshold(ExperimentConfig cfg, double target_eps1, std::int64_t search_trials,
                                      const CalibrationOptions& options = {});

} // namespace dtt
