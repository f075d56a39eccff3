#include "dtt/tracing_engine.hpp"

#include "dtt/errors.hpp"
#include "dtt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dtt {

void SchemeParams::validate() const {
    if (ell < 1) {
        throw ConfigError("ell must be >= 1, got " + std::to_string(ell));
    }
    if (!(Z > 0.0)) {
        throw ConfigError("threshold Z must be > 0");
    }
    if (c < 2 || c > n) {
        throw ConfigError("need 2 <= c <= n, got c = " + std::to_string(c) + ", n = " + std::to_string(n));
    }
    if (!(eps1 > 0.0 && eps1 < 1.0) || !(eps2 > 0.0 && eps2 < 1.0)) {
        throw ConfigError("eps1 and eps2 must lie in (0, 1)");
    }
}

void TraceMode::validate() const {
    if (variant == TraceVariant::Static && threshold == ThresholdRule::Adaptive) {
        throw ConfigError("static tracing does not support the adaptive threshold");
    }
}

void RunningMoments::add(double x) {
    ++count_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(count_);
    m2_ += d * (x - mean_);
}

void RunningMoments::add(double x, std::uint64_t times) {
    if (times == 0) {
        return;
    }
    RunningMoments batch;
    batch.count_ = times;
    batch.mean_ = x;
    merge(batch);
}

void RunningMoments::merge(const RunningMoments& other) {
    if (other.count_ == 0) {
        return;
    }
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const double d = other.mean_ - mean_;
    mean_ += d * nb / n;
    m2_ += other.m2_ + d * d * na * nb / n;
    count_ += other.count_;
}

TraceState::TraceState(std::size_t users)
    : scores_(users, 0.0), active_(users, 1), exonerated_(users, 0) {}

void TraceState::commit_sigma(std::optional<double> sigma_sq) {
    if (sigma_sq) {
        sigma_sq_sum_ += *sigma_sq;
        ++segments_scored_;
    }
}

StepResult TraceState::step_original(std::span<const double> increments, double threshold,
                                     std::optional<double> sigma_sq) {
    ++segment_index_;
    StepResult out;
    for (std::size_t j = 0; j < scores_.size(); ++j) {
        if (!accusable(j)) {
            continue;
        }
        scores_[j] += increments[j];
        if (scores_[j] > threshold) {
            active_[j] = 0;
            out.disconnected.push_back(j);
        }
    }
    commit_sigma(sigma_sq);
    return out;
}

StepResult TraceState::step_modified(std::span<const double> increments, double threshold,
                                     std::optional<double> sigma_sq) {
    ++segment_index_;
    StepResult out;
    for (std::size_t j = 0; j < scores_.size(); ++j) {
        if (accusable(j) && scores_[j] + increments[j] > threshold) {
            out.disconnected.push_back(j);
        }
    }
    if (out.disconnected.empty()) {
        for (std::size_t j = 0; j < scores_.size(); ++j) {
            if (accusable(j)) {
                scores_[j] += increments[j];
            }
        }
        commit_sigma(sigma_sq);
        return out;
    }
    out.frozen = true;
    for (std::size_t j : out.disconnected) {
        // The crossing value is what gets recorded for the disconnected user.
        scores_[j] += increments[j];
        active_[j] = 0;
    }
    return out;
}

double adaptive_threshold(const TraceState& state, double Z, std::optional<double> current_sigma_sq) {
    double sum = state.sigma_sq_sum();
    auto count = static_cast<double>(state.segments_scored());
    if (current_sigma_sq) {
        sum += *current_sigma_sq;
        count += 1.0;
    }
    if (count == 0.0) {
        return Z;
    }
    return Z * std::sqrt(sum / count);
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::AllPiratesCaught: return "AllPiratesCaught";
        case Termination::LengthExhausted: return "LengthExhausted";
        case Termination::PirateSilence: return "PirateSilence";
    }
    return "unknown";
}

std::optional<std::int64_t> TrialReport::catch_all_segment() const {
    if (!all_pirates_caught()) {
        return std::nullopt;
    }
    std::int64_t last = 0;
    for (const auto& d : caught) {
        last = std::max(last, d.segment);
    }
    return last;
}

TrialReport run_trace(const SchemeParams& params, const TraceMode& mode, const BiasSampler& sampler,
                      const ScoreFunction& f, const AttackStrategy& attack,
                      std::span<const std::size_t> pirates, std::uint64_t seed,
                      const TraceOptions& options) {
    params.validate();
    mode.validate();
    if (mode.threshold == ThresholdRule::Adaptive && f.kind() == ScoreKind::All1Optimal) {
        throw ConfigError("adaptive threshold needs finite score cells; " + f.describe() +
                          " has an exonerating cell");
    }

    const auto n = static_cast<std::size_t>(params.n);
    TrialReport report;
    report.users = n;
    report.ell = params.ell;
    report.pirates.assign(pirates.begin(), pirates.end());
    std::sort(report.pirates.begin(), report.pirates.end());
    if (std::adjacent_find(report.pirates.begin(), report.pirates.end()) != report.pirates.end()) {
        throw ConfigError("duplicate pirate id");
    }
    if (!report.pirates.empty() && report.pirates.back() >= n) {
        throw ConfigError("pirate id out of range");
    }
    if (options.record_trajectory) {
        report.trajectory.emplace();
    }
    if (report.pirates.empty()) {
        report.terminated_reason = Termination::PirateSilence;
        return report;
    }

    std::vector<unsigned char> is_pirate(n, 0);
    for (auto j : report.pirates) {
        is_pirate[j] = 1;
    }

    const bool is_static = mode.variant == TraceVariant::Static;
    const CounterRng rng(seed);
    TraceState state(n);
    std::vector<double> increments(n, 0.0);
    std::vector<unsigned char> symbols(n, 0);
    int pirates_active = static_cast<int>(report.pirates.size());

    for (std::int64_t i = 1; i <= params.ell; ++i) {
        if (pirates_active == 0) {
            break;
        }
        const auto key = rng.segment_key(static_cast<std::uint64_t>(i));
        const double p = sampler.next(CounterRng::draw(key, CounterRng::kBiasLane));

        Tally tally{0, 0};
        for (std::size_t j = 0; j < n; ++j) {
            if (!state.active(j)) {
                continue;
            }
            const auto x = static_cast<unsigned char>(CounterRng::draw(key, CounterRng::kFirstUserLane + j) < p);
            symbols[j] = x;
            if (is_pirate[j]) {
                ++tally.c_active;
                tally.ones += x;
            }
        }
        const int y = attack.respond(tally, i, CounterRng::draw(key, CounterRng::kAttackLane));
        const auto cells = f.column(y, p);

        std::optional<double> sigma_sq;
        if (!cells[0].is_exonerating() && !cells[1].is_exonerating()) {
            const double h0 = cells[0].value();
            const double h1 = cells[1].value();
            sigma_sq = p * h1 * h1 + (1.0 - p) * h0 * h0;
        }

        std::uint64_t innocent_count[2] = {0, 0};
        double coalition_sum = 0.0;
        bool coalition_scored = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (!state.accusable(j)) {
                continue;
            }
            const Score& s = cells[symbols[j]];
            if (s.is_exonerating()) {
                state.exonerate(j);
                report.exonerated.push_back({j, i});
                continue;
            }
            increments[j] = s.value();
            if (is_pirate[j]) {
                coalition_sum += increments[j];
                coalition_scored = true;
            } else {
                ++innocent_count[symbols[j]];
            }
        }
        if (coalition_scored) {
            report.coalition_increments.add(coalition_sum);
        }
        for (int x = 0; x < 2; ++x) {
            if (innocent_count[x] > 0) {
                // All innocents with the same symbol share one weight.
                report.innocent_increments.add(cells[x].value(), innocent_count[x]);
            }
        }

        double threshold = params.Z;
        if (mode.threshold == ThresholdRule::Adaptive) {
            threshold = adaptive_threshold(state, params.Z, sigma_sq);
        }

        StepResult step;
        switch (mode.variant) {
            case TraceVariant::Static:
                step = state.step_original(increments, std::numeric_limits<double>::infinity(), sigma_sq);
                break;
            case TraceVariant::DynamicOriginal:
                step = state.step_original(increments, threshold, sigma_sq);
                break;
            case TraceVariant::DynamicModified:
                step = state.step_modified(increments, threshold, sigma_sq);
                break;
        }
        for (auto j : step.disconnected) {
            const Disconnection d{j, i, state.score(j)};
            if (is_pirate[j]) {
                report.caught.push_back(d);
                --pirates_active;
            } else {
                report.false_accusations.push_back(d);
            }
        }
        if (report.trajectory) {
            report.trajectory->push_back(
                {i, p, y, is_static ? params.Z : threshold,
                 std::vector<double>(state.scores().begin(), state.scores().end())});
        }
        report.segments_used = i;
    }

    if (is_static) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!state.exonerated(j) && state.score(j) > params.Z) {
                const Disconnection d{j, params.ell, state.score(j)};
                (is_pirate[j] ? report.caught : report.false_accusations).push_back(d);
            }
        }
        report.terminated_reason = Termination::LengthExhausted;
    } else {
        report.terminated_reason =
            pirates_active == 0 ? Termination::AllPiratesCaught : Termination::LengthExhausted;
    }
    return report;
}

} // namespace dtt
