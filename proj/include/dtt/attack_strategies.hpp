#pragma once
// Coalition channel: maps the per-segment tally of pirate symbols to the
// pirate output y under the marking assumption.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dtt {

struct Tally {
    int ones;      // active pirates holding symbol 1
    int c_active;  // active pirates
};

enum class AttackKind { Interleaving, All1, All0, CoinFlip, Majority, Minority, Composite };

std::string_view to_string(AttackKind kind);

struct AttackStage;

class AttackStrategy {
public:
    static AttackStrategy interleaving() { return AttackStrategy(AttackKind::Interleaving); }
    static AttackStrategy all1() { return AttackStrategy(AttackKind::All1); }
    static AttackStrategy all0() { return AttackStrategy(AttackKind::All0); }
    static AttackStrategy coin_flip() { return AttackStrategy(AttackKind::CoinFlip); }
    static AttackStrategy majority() { return AttackStrategy(AttackKind::Majority); }
    static AttackStrategy minority() { return AttackStrategy(AttackKind::Minority); }
    // Stages must start at segment 1 and have strictly increasing first segments.
    static AttackStrategy composite(std::vector<AttackStage> stages);
    // Throws ConfigError for unknown names or composites.
    static AttackStrategy from_kind(AttackKind kind);

    AttackKind kind() const { return kind_; }
    const std::vector<AttackStage>& stages() const { return stages_; }

    // Stage in effect at a 1-based segment index (itself if not composite).
    const AttackStrategy& stage_at(std::int64_t segment) const;

    // P(y = 1 | tally) at the given segment, marking assumption included.
    double prob_one(Tally t, std::int64_t segment = 1) const;

    // Pirate output for a tally; u is a uniform draw in [0, 1].
    int respond(Tally t, std::int64_t segment, double u) const;

    std::string describe() const;

private:
    explicit AttackStrategy(AttackKind kind) : kind_(kind) {}

    AttackKind kind_;
    std::vector<AttackStage> stages_;
};

struct AttackStage {
    std::int64_t first_segment;
    AttackStrategy strategy;
};

// Parses "majority", "interleaving", ... or a composite "majority@1,minority@3001".
AttackStrategy parse_attack(std::string_view text);

} // namespace dtt
