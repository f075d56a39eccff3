#pragma once
// JSON form of experiment configurations and reports.
//
// A config mirrors ExperimentConfig field for field:
//
//   {
//     "params":   {"ell": 14150, "Z": 650, "delta": 0.002857, "c": 10, "n": 100,
//                  "eps1": 0.001, "eps2": 0.001},
//     "provider": {"kind": "classic_tardos"},            (optional)
//     "mode":     {"variant": "modified", "threshold": "adaptive"},
//     "defense":  {"kind": "interleaving"},
//     "attack":   "majority@1,minority@3001",
//     "sampler":  {"kind": "arcsine", "delta": 0.002857},
//     "trials": 100, "master_seed": 1, "pirate_count": 10, "export": "aggregate"
//   }
//
// A provider fills in whichever of ell, Z and delta "params" leaves out;
// dynamic modes go through the static-to-dynamic length reduction.

#include "dtt/experiment.hpp"
#include "dtt/parameterization.hpp"

#include "json.hpp"

#include <string>
#include <string_view>

namespace dtt {

inline constexpr std::string_view kToolVersion = "0.3.1";

// Throw ConfigError on malformed input.
nlohmann::json load_json_file(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

StaticLengthProvider provider_from_json(const nlohmann::json& j);

TraceVariant trace_variant_from_string(std::string_view name);
ThresholdRule threshold_rule_from_string(std::string_view name);
std::string_view to_string(TraceVariant v);
std::string_view to_string(ThresholdRule t);
// Accepts the score kind names plus "all0" (swapped all-1 defense).
ScoreFunction defense_from_name(std::string_view name, int c);
std::string defense_name(const ScoreFunction& f);

nlohmann::json stats_to_json(const AggregateStats& s);
nlohmann::json report_to_json(const TrialReport& r);

} // namespace dtt
