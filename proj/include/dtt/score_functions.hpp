#pragma once
// Per-segment accusation weights h(x, y, p) for the symmetric Tardos score,
// the interleaving defense and the attack-specific optimal scores.

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace dtt {

using Symbol = int; // 0 or 1

// Finite weight, or the exonerating -infinity cell. The latter never takes
// part in arithmetic: a user hitting it is known to be innocent.
class Score {
public:
    static constexpr Score finite(double v) { return Score(v, false); }
    static constexpr Score exonerating() { return Score(0.0, true); }

    constexpr bool is_exonerating() const { return exonerating_; }
    // Throws std::logic_error on the exonerating cell.
    double value() const;

    friend constexpr bool operator==(const Score&, const Score&) = default;

private:
    constexpr Score(double v, bool ex) : value_(v), exonerating_(ex) {}

    double value_;
    bool exonerating_;
};

enum class ScoreKind {
    TardosSymmetric,
    InterleavingDefense,
    All1Optimal,
    CoinFlipOptimal,
    MajorityOptimal,
    MinorityApprox,
};

std::string_view to_string(ScoreKind kind);
// Throws ConfigError on an unknown name.
ScoreKind score_kind_from_string(std::string_view name);
bool needs_coalition_size(ScoreKind kind);

struct InnocentMoments {
    double mean;
    double variance;
};

class ScoreFunction {
public:
    // c is required (>= 2) for All1Optimal, CoinFlipOptimal and MinorityApprox
    // and ignored otherwise. With swap set, every evaluation happens at
    // (1 - x, 1 - y, 1 - p); swapping All1Optimal yields the all-0 defense.
    explicit ScoreFunction(ScoreKind kind, int c = 0, bool swap = false);

    static ScoreFunction tardos() { return ScoreFunction(ScoreKind::TardosSymmetric); }
    static ScoreFunction interleaving() { return ScoreFunction(ScoreKind::InterleavingDefense); }
    static ScoreFunction majority() { return ScoreFunction(ScoreKind::MajorityOptimal); }
    static ScoreFunction all1(int c) { return ScoreFunction(ScoreKind::All1Optimal, c); }
    static ScoreFunction all0(int c) { return ScoreFunction(ScoreKind::All1Optimal, c, true); }
    static ScoreFunction coin_flip(int c) { return ScoreFunction(ScoreKind::CoinFlipOptimal, c); }
    static ScoreFunction minority(int c) { return ScoreFunction(ScoreKind::MinorityApprox, c); }

    ScoreKind kind() const { return kind_; }
    int coalition_size() const { return c_; }
    bool swapped() const { return swap_; }

    // p must lie strictly inside (0, 1); throws std::domain_error otherwise.
    Score evaluate(Symbol x, Symbol y, double p) const;

    // Both cells of one pirate output: {h(0, y, p), h(1, y, p)}.
    std::array<Score, 2> column(Symbol y, double p) const;

    // Mean and variance of an innocent user's weight, whose symbol is
    // Bernoulli(p) independent of y. Empty when an exonerating cell is
    // reachable, since the moments are then undefined.
    std::optional<InnocentMoments> innocent_moments(double p, Symbol y) const;

    // Raw second moment p h(1,y,p)^2 + (1-p) h(0,y,p)^2 (not mean-centred).
    // Throws std::domain_error if either cell is exonerating.
    double sigma_sq_segment(double p, Symbol y) const;

    std::string describe() const;

private:
    std::array<Score, 2> base_column(Symbol y, double p) const;

    ScoreKind kind_;
    int c_;
    bool swap_;
};

} // namespace dtt
