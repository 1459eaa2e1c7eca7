#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "precursor/core.hpp"
#include "precursor/detect.hpp"
#include "precursor/grouping.hpp"
#include "precursor/matching.hpp"
#include "precursor/synth.hpp"

namespace precursor {

struct DetectConfig {
    int rank = 1;
    double quantile = 0.95;
    /// Parameter name -> quantile; applies to the group containing it.
    std::map<std::string, double> quantile_overrides;
    Flight normal_before = 50;
    Flight normal_after = 30;
};

struct GroupingConfig {
    DependenceMeasure measure = DependenceMeasure::Pearson;
    double rho = 0.7;
};

struct PipelineConfig {
    MatchParams match;
    DetectConfig detect;
    GroupingConfig grouping;
    SearchConfig search;
    std::string code_prefix;
    unsigned threads = 1;
};

/// Everything learned from a training fleet.
struct FittedModel {
    std::vector<EventRecord> targets;
    ZScoreStats normalization;
    ParameterGrouping grouping;
    std::vector<SubspaceDetector> detectors;
    /// Groups too small for the configured rank; they get no detector.
    std::vector<std::vector<std::string>> skipped_groups;
    PeriodLayout layout;
    std::vector<AlarmSeries> alarms;       // one per detector, on the training fleet
    std::vector<MatchStats> alarm_stats;   // aligned with `alarms`
    PrecursorSet precursors;
};

/// normalize -> group -> fit detectors -> binarize -> match -> search -> pool.
/// Throws NoTargetEventsError when no event matches the prefix inside the
/// observed ranges.
FittedModel fit_pipeline(std::span<const TelemetryPanel> fleet, std::span<const EventRecord> events,
                         const PipelineConfig& cfg);

/// Detector alarms of a fitted model on (possibly unseen) units.
std::vector<AlarmSeries> detector_alarms(const FittedModel& model, std::span<const TelemetryPanel> fleet,
                                         unsigned threads = 1);

/// The pooled early-warning signal of a fitted model on (possibly unseen) units.
AlarmSeries predict(const FittedModel& model, std::span<const TelemetryPanel> fleet, unsigned threads = 1);

/// Quantile for a group after applying per-parameter overrides (the first
/// member, in name order, that has an override wins).
double group_quantile(const DetectConfig& cfg, const std::vector<std::string>& group);

}  // namespace precursor
