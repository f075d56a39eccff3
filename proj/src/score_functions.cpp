#include "dtt/score_functions.hpp"

#include "dtt/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dtt {

double Score::value() const {
    if (exonerating_) {
        throw std::logic_error("exonerating score cell has no numeric value");
    }
    return value_;
}

std::string_view to_string(ScoreKind kind) {
    switch (kind) {
        case ScoreKind::TardosSymmetric: return "tardos";
        case ScoreKind::InterleavingDefense: return "interleaving";
        case ScoreKind::All1Optimal: return "all1";
        case ScoreKind::CoinFlipOptimal: return "coinflip";
        case ScoreKind::MajorityOptimal: return "majority";
        case ScoreKind::MinorityApprox: return "minority";
    }
    return "unknown";
}

ScoreKind score_kind_from_string(std::string_view name) {
    for (auto k : {ScoreKind::TardosSymmetric, ScoreKind::InterleavingDefense, ScoreKind::All1Optimal,
                   ScoreKind::CoinFlipOptimal, ScoreKind::MajorityOptimal, ScoreKind::MinorityApprox}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw ConfigError("unknown score function '" + std::string(name) + "'");
}

bool needs_coalition_size(ScoreKind kind) {
    return kind == ScoreKind::All1Optimal || kind == ScoreKind::CoinFlipOptimal ||
           kind == ScoreKind::MinorityApprox;
}

ScoreFunction::ScoreFunction(ScoreKind kind, int c, bool swap) : kind_(kind), c_(c), swap_(swap) {
    if (needs_coalition_size(kind) && c < 2) {
        throw ConfigError(std::string(to_string(kind)) + " score needs coalition size c >= 2");
    }
}

namespace {

struct All1Cells {
    double h00, h01, h11;
};

// 1 - (1-p)^c computed without cancellation for small p.
double one_minus_pow_complement(double p, int c) { return -std::expm1(c * std::log1p(-p)); }

All1Cells all1_cells(double p, int c) {
    const double q = 1.0 - p;
    const double denom = one_minus_pow_complement(p, c);
    return {p / q, -p * std::pow(q, c - 1) / denom, std::pow(q, c) / denom};
}

} // namespace

std::array<Score, 2> ScoreFunction::base_column(Symbol y, double p) const {
    const double q = 1.0 - p;
    switch (kind_) {
        case ScoreKind::TardosSymmetric: {
            const double r = std::sqrt(p / q);
            const double s = std::sqrt(q / p);
            return y == 0 ? std::array{Score::finite(r), Score::finite(-s)}
                          : std::array{Score::finite(-r), Score::finite(s)};
        }
        case ScoreKind::InterleavingDefense:
            return y == 0 ? std::array{Score::finite(p / q), Score::finite(-1.0)}
                          : std::array{Score::finite(-1.0), Score::finite(q / p)};
        case ScoreKind::All1Optimal: {
            const auto cells = all1_cells(p, c_);
            return y == 0 ? std::array{Score::finite(cells.h00), Score::exonerating()}
                          : std::array{Score::finite(cells.h01), Score::finite(cells.h11)};
        }
        case ScoreKind::MinorityApprox: {
            const auto cells = all1_cells(p, c_);
            return y == 0 ? std::array{Score::finite(cells.h00), Score::finite(-1.0)}
                          : std::array{Score::finite(cells.h01), Score::finite(cells.h11)};
        }
        case ScoreKind::CoinFlipOptimal: {
            const double pc = std::pow(p, c_);
            const double qc = std::pow(q, c_);
            const double pre = std::pow(p, c_ - 1) + std::pow(q, c_ - 1);
            const double a = 1.0 - pc + qc;
            const double b = 1.0 + pc - qc;
            return y == 0 ? std::array{Score::finite(pre * p / a), Score::finite(-pre * q / a)}
                          : std::array{Score::finite(-pre * p / b), Score::finite(pre * q / b)};
        }
        case ScoreKind::MajorityOptimal:
            return y == 0 ? std::array{Score::finite(1.0), Score::finite(-1.0)}
                          : std::array{Score::finite(-1.0), Score::finite(1.0)};
    }
    throw std::logic_error("unhandled score kind");
}

std::array<Score, 2> ScoreFunction::column(Symbol y, double p) const {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("score function evaluated at p = " + std::to_string(p) +
                                " outside (0, 1)");
    }
    if (!swap_) {
        return base_column(y, p);
    }
    const auto c = base_column(1 - y, 1.0 - p);
    return {c[1], c[0]};
}

Score ScoreFunction::evaluate(Symbol x, Symbol y, double p) const { return column(y, p)[x]; }

std::optional<InnocentMoments> ScoreFunction::innocent_moments(double p, Symbol y) const {
    const auto cells = column(y, p);
    if (cells[0].is_exonerating() || cells[1].is_exonerating()) {
        return std::nullopt;
    }
    const double h0 = cells[0].value();
    const double h1 = cells[1].value();
    const double mean = p * h1 + (1.0 - p) * h0;
    const double variance = p * h1 * h1 + (1.0 - p) * h0 * h0 - mean * mean;
    return InnocentMoments{mean, variance};
}

double ScoreFunction::sigma_sq_segment(double p, Symbol y) const {
    const auto cells = column(y, p);
    if (cells[0].is_exonerating() || cells[1].is_exonerating()) {
        throw std::domain_error("sigma_sq_segment: exonerating cell for " + describe());
    }
    const double h0 = cells[0].value();
    const double h1 = cells[1].value();
    return p * h1 * h1 + (1.0 - p) * h0 * h0;
}

std::string ScoreFunction::describe() const {
    std::string out(to_string(kind_));
    if (needs_coalition_size(kind_)) {
        out += "(c=" + std::to_string(c_) + ")";
    }
    if (swap_) {
        out += "[swapped]";
    }
    return out;
}

} // namespace dtt
