#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "precursor/core.hpp"

namespace precursor {

/// Predictive window [onset - h - w, onset - h) of one event, clipped to the
/// unit's observation range. Only non-empty windows are kept.
struct TrueWindow {
    std::size_t event = 0;  // index into PeriodLayout::events
    FlightRange span;
};

/// Onset-plus-maintenance zone [onset - h, end + m), clipped.
struct IrrelevantZone {
    std::size_t event = 0;
    FlightRange span;
};

struct UnitLayout {
    std::string unit_id;
    FlightRange range;
    std::vector<TrueWindow> true_windows;
    std::vector<IrrelevantZone> irrelevant;
    /// Maximal runs of flights covered by neither family, ascending.
    std::vector<FlightRange> false_segments;
};

/// True windows, irrelevant zones and false segments for every unit.
struct PeriodLayout {
    MatchParams params;
    std::vector<EventRecord> events;   // kept events, grouped by unit, sorted by onset
    std::vector<EventRecord> dropped;  // events outside their unit's range
    std::vector<UnitLayout> units;     // ordered by unit id

    const UnitLayout* unit(const std::string& unit_id) const;
    std::size_t k_plus() const;
    std::size_t k_minus() const;
};

/// Observation ranges of every unit of a fleet.
std::map<std::string, FlightRange> observation_ranges(std::span<const TelemetryPanel> fleet);

/// Lays out the three period families. An event whose onset falls outside its
/// unit's range (or whose unit is unknown) is moved to `dropped`.
PeriodLayout layout_periods(std::span<const EventRecord> events, const MatchParams& params,
                            const std::map<std::string, FlightRange>& ranges);

enum class FiringKind { True, Irrelevant, False };

std::string to_string(FiringKind k);

struct FiringLabel {
    std::string unit_id;
    Flight flight = 0;
    FiringKind kind = FiringKind::False;
    /// Credited events (True: every owning true window; Irrelevant: owning zones).
    std::vector<std::size_t> events;
    /// Index of the false segment within the unit (False only).
    std::size_t segment = 0;
};

/// One label per firing; precedence True > Irrelevant > False.
/// Throws InputError for a firing outside its unit's observation range.
std::vector<FiringLabel> classify_firings(const AlarmSeries& alarm, const PeriodLayout& layout);

/// Raw counters for one alarm against one layout, summed over units.
struct MatchCounts {
    std::size_t k_plus = 0;
    std::size_t k_minus = 0;
    std::size_t s_plus = 0;
    std::size_t s_minus = 0;
    std::size_t u_plus = 0;
    std::size_t u_minus = 0;
    std::size_t s_irrelevant = 0;

    MatchCounts& operator+=(const MatchCounts& o);
    bool operator==(const MatchCounts&) const = default;
};

/// Counters plus the per-period samples fed to the significance test.
struct MatchTally {
    MatchCounts counts;
    std::vector<double> true_window_firings;  // one entry per true window
    std::vector<double> false_segment_firings;  // one entry per false segment
};

MatchTally tally_matches(const AlarmSeries& alarm, const PeriodLayout& layout);

/// Counters and the derived early-warning metrics.
///   fa = S-/K+,  cf = U+/K+,  fa/cf = S-/U+ (+inf when U+ = 0)
struct MatchStats {
    MatchCounts counts;
    double fa = 0.0;
    double cf = 0.0;
    double fa_over_cf = 0.0;
    double p_value = 1.0;
};

/// Throws DataError("no target events in range") when K+ = 0.
MatchStats match_stats(const MatchTally& tally);
MatchStats match_stats(const AlarmSeries& alarm, const PeriodLayout& layout);
/// Metrics from bare counters (no p-value); nullopt when K+ = 0.
std::optional<MatchStats> stats_from_counts(const MatchCounts& counts);

/// One-sided Welch test of mean(true_counts) > mean(false_counts).
/// Returns 1 when either sample has fewer than two entries; with both variances
/// zero, returns 0 if the true mean is larger and 1 otherwise.
double significance_test(std::span<const double> true_counts, std::span<const double> false_counts);

bool gate_ttest(const MatchStats& stats, double alpha);
bool hard_filter(const MatchStats& stats, double theta);
bool soft_filter(const MatchStats& stats, double theta);

}  // namespace precursor
