#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "precursor/core.hpp"
#include "precursor/matching.hpp"
#include "precursor/pipeline.hpp"
#include "precursor/synth.hpp"

namespace precursor {

// ---------------------------------------------------------------------------
// Leave-one-unit-out cross-validation

struct FoldResult {
    std::string held_out_unit;
    bool skipped = false;
    std::string skip_reason;
    MatchCounts counts;                 // held-out unit only
    std::optional<MatchStats> stats;    // absent when the held-out unit has no target window
    PrecursorSet precursors;            // trained without the held-out unit
    AlarmSeries held_out_signal;        // pooled warning signal on the held-out unit
};

struct CrossValidation {
    std::vector<FoldResult> folds;  // ordered by unit id
    MatchCounts aggregate;          // summed over non-skipped folds
    std::optional<MatchStats> aggregate_stats;
};

/// One fold per unit: every fitted quantity is re-estimated on the other
/// units, then the pooled signal is matched against the held-out unit's
/// target events. A fold whose training units carry no target event is
/// marked skipped. Throws InputError with fewer than two units.
CrossValidation leave_one_unit_out(std::span<const TelemetryPanel> fleet, std::span<const EventRecord> events,
                                   const PipelineConfig& cfg);

// ---------------------------------------------------------------------------
// Per-flight scoring harness

/// Appends "<p>@lag-<k>" for k = 1..depth after the original columns; lags
/// are by row, and the first k rows are missing. Throws InputError if
/// depth >= rows.
TelemetryPanel lag_features(const TelemetryPanel& panel, int depth);

enum class Direction { Above, Below };
Direction parse_direction(const std::string& s);

/// Score = value (Above) or -value (Below), so every fixed threshold on the
/// parameter is a threshold on the score.
ScoreSeries threshold_baseline(const ScoreSeries& series, Direction direction);

/// One parameter of one panel as a series.
ScoreSeries parameter_series(const TelemetryPanel& panel, const std::string& column);

/// A binary alarm as a 0/1 score over the given flights.
std::vector<ScoreSeries> alarm_scores(const AlarmSeries& alarm, std::span<const TelemetryPanel> fleet);

struct CurvePoint {
    double nu = 0.0;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 1.0;
    std::optional<double> recall;  // undefined without events
    double fpr = 0.0;
};

/// Maximum number of flags matched one-to-one to event onsets with
/// |flag - onset| <= tolerance. Both inputs sorted ascending.
std::size_t match_flags_to_onsets(std::span<const Flight> flags, std::span<const Flight> onsets, Flight tolerance);

/// Sweeps the threshold over the distinct non-missing scores, descending;
/// a flight is flagged when its score >= nu. Negatives per unit are the scored
/// flights minus its events, so fpr = fp / (fp + tn).
/// Throws InputError for events on units without scores.
std::vector<CurvePoint> roc_pr_curves(std::span<const ScoreSeries> scores, std::span<const EventRecord> events,
                                      Flight tolerance);

/// Highest precision among points with recall >= r; 0 if none reaches r.
double interpolated_precision(std::span<const CurvePoint> curve, double r);

/// Point whose threshold is closest to nu (ties: the higher threshold).
const CurvePoint* nearest_point(std::span<const CurvePoint> curve, double nu);

}  // namespace precursor
