#include "dtt/attack_strategies.hpp"

#include "dtt/errors.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace dtt {

std::string_view to_string(AttackKind kind) {
    switch (kind) {
        case AttackKind::Interleaving: return "interleaving";
        case AttackKind::All1: return "all1";
        case AttackKind::All0: return "all0";
        case AttackKind::CoinFlip: return "coinflip";
        case AttackKind::Majority: return "majority";
        case AttackKind::Minority: return "minority";
        case AttackKind::Composite: return "composite";
    }
    return "unknown";
}

AttackStrategy AttackStrategy::from_kind(AttackKind kind) {
    if (kind == AttackKind::Composite) {
        throw ConfigError("composite attack needs explicit stages");
    }
    return AttackStrategy(kind);
}

AttackStrategy AttackStrategy::composite(std::vector<AttackStage> stages) {
    if (stages.empty()) {
        throw ConfigError("composite attack needs at least one stage");
    }
    if (stages.front().first_segment != 1) {
        throw ConfigError("composite attack must start at segment 1");
    }
    for (std::size_t s = 1; s < stages.size(); ++s) {
        if (stages[s].first_segment <= stages[s - 1].first_segment) {
            throw ConfigError("composite stage segments must be strictly increasing");
        }
    }
    AttackStrategy a(AttackKind::Composite);
    a.stages_ = std::move(stages);
    return a;
}

const AttackStrategy& AttackStrategy::stage_at(std::int64_t segment) const {
    if (kind_ != AttackKind::Composite) {
        return *this;
    }
    auto it = std::upper_bound(stages_.begin(), stages_.end(), segment,
                               [](std::int64_t s, const AttackStage& st) { return s < st.first_segment; });
    const AttackStage& stage = it == stages_.begin() ? stages_.front() : *std::prev(it);
    return stage.strategy.stage_at(segment);
}

double AttackStrategy::prob_one(Tally t, std::int64_t segment) const {
    if (t.c_active < 1 || t.ones < 0 || t.ones > t.c_active) {
        throw std::invalid_argument("invalid tally");
    }
    if (t.ones == 0) {
        return 0.0;
    }
    if (t.ones == t.c_active) {
        return 1.0;
    }
    const int k = t.ones;
    const int zeros = t.c_active - k;
    switch (kind_) {
        case AttackKind::Interleaving: return static_cast<double>(k) / t.c_active;
        case AttackKind::All1: return 1.0;
        case AttackKind::All0: return 0.0;
        case AttackKind::CoinFlip: return 0.5;
        case AttackKind::Majority: return k > zeros ? 1.0 : (k == zeros ? 0.5 : 0.0);
        case AttackKind::Minority: return k < zeros ? 1.0 : (k == zeros ? 0.5 : 0.0);
        case AttackKind::Composite: return stage_at(segment).prob_one(t, segment);
    }
    throw std::logic_error("unhandled attack kind");
}

int AttackStrategy::respond(Tally t, std::int64_t segment, double u) const {
    const double prob = prob_one(t, segment);
    if (prob >= 1.0) {
        return 1;
    }
    if (prob <= 0.0) {
        return 0;
    }
    return u < prob ? 1 : 0;
}

std::string AttackStrategy::describe() const {
    if (kind_ != AttackKind::Composite) {
        return std::string(to_string(kind_));
    }
    std::string out;
    for (const auto& st : stages_) {
        if (!out.empty()) {
            out += ',';
        }
        out += st.strategy.describe() + "@" + std::to_string(st.first_segment);
    }
    return out;
}

namespace {

AttackStrategy parse_simple(std::string_view name) {
    for (auto k : {AttackKind::Interleaving, AttackKind::All1, AttackKind::All0, AttackKind::CoinFlip,
                   AttackKind::Majority, AttackKind::Minority}) {
        if (to_string(k) == name) {
            return AttackStrategy::from_kind(k);
        }
    }
    throw ConfigError("unknown attack '" + std::string(name) + "'");
}

} // namespace

AttackStrategy parse_attack(std::string_view text) {
    if (text.find('@') == std::string_view::npos && text.find(',') == std::string_view::npos) {
        return parse_simple(text);
    }
    std::vector<AttackStage> stages;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = text.substr(0, comma);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        const auto at = item.find('@');
        if (at == std::string_view::npos) {
            throw ConfigError("composite attack stage '" + std::string(item) + "' lacks @segment");
        }
        std::int64_t first = 0;
        const auto digits = item.substr(at + 1);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), first);
        if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
            throw ConfigError("bad stage segment in '" + std::string(item) + "'");
        }
        stages.push_back({first, parse_simple(item.substr(0, at))});
    }
    return AttackStrategy::composite(std::move(stages));
}

} // namespace dtt
