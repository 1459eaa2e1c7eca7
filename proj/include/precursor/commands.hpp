#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace precursor::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kEmptyPrecursors = 3,
    kNoTargetEvents = 4,
};

struct CommonOptions {
    std::string config;                   // path; empty = defaults
    std::optional<std::string> out;       // overrides io.outdir
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

struct CurvesOptions {
    CommonOptions common;
    std::string scores;                   // external unit_id,flight,score file
    std::string baseline;                 // parameter name for the thresholding baseline
    std::string direction = "below";
    std::optional<std::string> events;    // overrides io.events
    std::optional<long long> tolerance;   // overrides eval.tolerance
    double nu = 0.6;
    std::string features_out;             // optional lagged-feature export
};

/// Writes telemetry.csv, events.csv and manifest.json into --out.
int cmd_simulate(const CommonOptions& opt, std::ostream& log);
/// Fits the full pipeline and writes grouping.json, detectors/, stats.json,
/// precursors.json and alarms.csv.
int cmd_run(const CommonOptions& opt, std::ostream& log);
/// Leave-one-unit-out; writes folds/<unit>.json and aggregate.json.
int cmd_crossval(const CommonOptions& opt, std::ostream& log);
/// Writes curves.csv and operating_point.csv.
int cmd_curves(const CurvesOptions& opt, std::ostream& log);

}  // namespace precursor::cli
