#pragma once
// Static and dynamic Tardos-style tracing.
//
// A trace walks segments i = 1..ell: draw a bias, hand out symbols to the
// connected users, let the coalition answer, score every connected user and
// apply the disconnect rule of the selected mode. Two dynamic rules exist:
//
//   original  S_j(i) = S_j(i-1) + S_{j,i}; disconnect every j with S_j(i) > T
//   modified  if some j has S_j(i-1) + S_{j,i} > T, disconnect those users and
//             keep every other score at S_j(i-1); otherwise add S_{j,i}
//
// with T = Z (constant) or T = Z * sigma_bar(i) (adaptive), where sigma_bar
// is the root mean of the raw per-segment innocent second moments.

#include "dtt/attack_strategies.hpp"
#include "dtt/bias_model.hpp"
#include "dtt/score_functions.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dtt {

struct SchemeParams {
    std::int64_t ell = 1;
    double Z = 1.0;
    Cutoff delta{0.0};
    int c = 2;
    int n = 2;
    double eps1 = 1e-3;
    double eps2 = 1e-3;

    // Throws ConfigError on ell < 1, Z <= 0, c outside [2, n] or eps outside (0, 1).
    void validate() const;
};

enum class TraceVariant { Static, DynamicOriginal, DynamicModified };
enum class ThresholdRule { Constant, Adaptive };

struct TraceMode {
    TraceVariant variant = TraceVariant::DynamicModified;
    ThresholdRule threshold = ThresholdRule::Constant;

    // Static tracing only supports a constant threshold.
    void validate() const;
};

// Welford accumulator; merges are associative up to rounding.
class RunningMoments {
public:
    void add(double x);
    void add(double x, std::uint64_t times);
    void merge(const RunningMoments& other);

    std::uint64_t count() const { return count_; }
    double mean() const { return mean_; }
    // Population variance (divides by count).
    double variance() const { return count_ ? m2_ / static_cast<double>(count_) : 0.0; }

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct StepResult {
    std::vector<std::size_t> disconnected;
    bool frozen = false; // modified rule: scores held at S_j(i-1)
};

class TraceState {
public:
    explicit TraceState(std::size_t users);

    std::size_t users() const { return scores_.size(); }
    std::span<const double> scores() const { return scores_; }
    double score(std::size_t j) const { return scores_[j]; }
    bool active(std::size_t j) const { return active_[j] != 0; }
    bool exonerated(std::size_t j) const { return exonerated_[j] != 0; }
    // Active and not exonerated: the users a threshold test applies to.
    bool accusable(std::size_t j) const { return active_[j] && !exonerated_[j]; }

    double sigma_sq_sum() const { return sigma_sq_sum_; }
    std::int64_t segments_scored() const { return segments_scored_; }
    std::int64_t segment_index() const { return segment_index_; }

    void set_score(std::size_t j, double s) { scores_[j] = s; }
    void exonerate(std::size_t j) { exonerated_[j] = 1; }
    void disconnect(std::size_t j) { active_[j] = 0; }

    // One segment of the original rule. increments[j] is read for accusable
    // users only. sigma_sq is this segment's raw innocent second moment, or
    // empty when undefined; a defined value always enters the accumulator.
    StepResult step_original(std::span<const double> increments, double threshold,
                             std::optional<double> sigma_sq);

    // One segment of the modified rule. A frozen segment leaves every score
    // and the sigma accumulator untouched.
    StepResult step_modified(std::span<const double> increments, double threshold,
                             std::optional<double> sigma_sq);

private:
    void commit_sigma(std::optional<double> sigma_sq);

    std::vector<double> scores_;
    std::vector<unsigned char> active_;
    std::vector<unsigned char> exonerated_;
    double sigma_sq_sum_ = 0.0;
    std::int64_t segments_scored_ = 0;
    std::int64_t segment_index_ = 0;
};

// Z * sqrt(mean sigma_k^2), where the mean includes the current segment's
// value when given. Falls back to Z when nothing has been accumulated.
double adaptive_threshold(const TraceState& state, double Z, std::optional<double> current_sigma_sq);

enum class Termination { AllPiratesCaught, LengthExhausted, PirateSilence };

std::string_view to_string(Termination t);

struct Disconnection {
    std::size_t user;
    std::int64_t segment;
    double score;
};

struct Exoneration {
    std::size_t user;
    std::int64_t segment;
};

struct SegmentSnapshot {
    std::int64_t segment;
    double bias;
    int output;
    double threshold;
    std::vector<double> scores;
};

struct TrialReport {
    std::vector<std::size_t> pirates; // ground truth, sorted
    std::size_t users = 0;
    std::vector<Disconnection> caught;
    std::vector<Disconnection> false_accusations;
    std::vector<Exoneration> exonerated;
    std::int64_t segments_used = 0;
    std::int64_t ell = 0;
    Termination terminated_reason = Termination::LengthExhausted;
    std::optional<std::vector<SegmentSnapshot>> trajectory;

    // Per-segment weights of connected, non-exonerated users.
    RunningMoments innocent_increments;
    // Per-segment sum of the connected pirates' weights.
    RunningMoments coalition_increments;

    bool all_pirates_caught() const { return !pirates.empty() && caught.size() == pirates.size(); }
    // Segment at which the last pirate was caught, if all were.
    std::optional<std::int64_t> catch_all_segment() const;
};

struct TraceOptions {
    bool record_trajectory = false;
};

// Runs one trace. pirates holds user ids in [0, n); an empty set yields a
// PirateSilence report. Throws ConfigError on invalid parameters.
TrialReport run_trace(const SchemeParams& params, const TraceMode& mode, const BiasSampler& sampler,
                      const ScoreFunction& f, const AttackStrategy& attack,
                      std::span<const std::size_t> pirates, std::uint64_t seed,
                      const TraceOptions& options = {});

} // namespace dtt
