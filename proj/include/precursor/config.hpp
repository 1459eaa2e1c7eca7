#pragma once

#include <string>

#include "precursor/pipeline.hpp"
#include "precursor/serialize.hpp"
#include "precursor/simgen.hpp"

namespace precursor {

struct IoConfig {
    std::string telemetry;
    std::string events;
    std::string outdir;
};

struct EvalConfig {
    Flight tolerance = 2;
    int lag_depth = 3;
};

/// The analysis configuration file. Every section and key is optional;
/// unknown keys are rejected.
///
///   io.{telemetry, events, outdir}
///   match.{w, h, m}                                     20, 0, 0
///   detect.{rank, quantile, quantile_overrides,
///           normal_before, normal_after}                1, 0.95, {}, 50, 30
///   grouping.{measure, rho}                             "pearson", 0.7
///   filter.{kind, alpha, theta, max_size}               "hard", 0.05, 2, 2
///   target.{code_prefix}                                ""
///   eval.{tolerance, lag_depth}                         2, 3
struct RunConfig {
    IoConfig io;
    PipelineConfig pipeline;
    EvalConfig eval;
};

/// Relative io paths are resolved against `base_dir` when it is non-empty.
RunConfig parse_run_config(const Json& j, const std::string& base_dir = {});
RunConfig load_run_config(const std::string& path);
Json to_json(const RunConfig& cfg);

/// Simulation config: units, flights_per_unit, groups[{size, correlation}],
/// planted[{groups, lead_lo, lead_hi, magnitude}], events_per_unit,
/// units_with_events, event_code, seed. Unknown keys are rejected.
sim::SimConfig parse_sim_config(const Json& j);
sim::SimConfig load_sim_config(const std::string& path);
Json to_json(const sim::SimConfig& cfg);

/// Reads and parses a JSON file; throws InputError on failure.
Json read_json_file(const std::string& path);

}  // namespace precursor
