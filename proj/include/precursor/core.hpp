#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace precursor {

/// Integer flight counter; the unit of every window, horizon and delay.
using Flight = std::int64_t;

/// A cell of telemetry. `std::nullopt` is the missing marker.
using Value = std::optional<double>;

/// Malformed input or configuration (bad file, bad header, bad parameter).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation that cannot proceed on the data it was given.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No event matches the requested target (code prefix or observation range).
class NoTargetEventsError : public DataError {
public:
    using DataError::DataError;
};

/// Half-open flight range [begin, end) observed for one unit.
struct FlightRange {
    Flight begin = 0;
    Flight end = 0;

    bool contains(Flight t) const { return t >= begin && t < end; }
    Flight length() const { return end > begin ? end - begin : 0; }
    bool empty() const { return end <= begin; }
    bool operator==(const FlightRange&) const = default;
};

/// Per-unit snapshot panel: one row per flight, one column per parameter.
///
/// Immutable after construction. The constructor enforces strictly increasing
/// flights, unique column names and uniform row arity.
class TelemetryPanel {
public:
    TelemetryPanel() = default;
    TelemetryPanel(std::string unit_id, std::vector<Flight> flights, std::vector<std::string> phases,
                   std::vector<std::string> columns, std::vector<Value> values);

    const std::string& unit_id() const { return unit_id_; }
    std::size_t rows() const { return flights_.size(); }
    std::size_t cols() const { return columns_.size(); }

    const std::vector<Flight>& flights() const { return flights_; }
    Flight flight(std::size_t row) const { return flights_[row]; }
    const std::vector<std::string>& phases() const { return phases_; }
    const std::vector<std::string>& columns() const { return columns_; }
    /// Row-major rows() x cols().
    const std::vector<Value>& values() const { return values_; }

    const Value& at(std::size_t row, std::size_t col) const { return values_[row * columns_.size() + col]; }
    std::optional<std::size_t> column_index(const std::string& name) const;
    /// Throws InputError when the column is absent.
    std::size_t require_column(const std::string& name) const;
    std::vector<Value> column(std::size_t col) const;

    /// [first flight, last flight + 1); empty for a panel without rows.
    FlightRange range() const;
    /// Row index of `t`, if recorded.
    std::optional<std::size_t> row_of(Flight t) const;

private:
    std::string unit_id_;
    std::vector<Flight> flights_;
    std::vector<std::string> phases_;
    std::vector<std::string> columns_;
    std::vector<Value> values_;
};

/// All units, ordered by unit id.
using Fleet = std::vector<TelemetryPanel>;

/// Sorts by unit id and rejects duplicate units or mismatched column sets.
Fleet make_fleet(std::vector<TelemetryPanel> panels);

/// A failure occurrence on [onset, end) of one unit's timeline.
struct EventRecord {
    std::string unit_id;
    Flight onset = 0;
    Flight end = 0;
    std::string code;

    bool operator==(const EventRecord&) const = default;
};

/// Throws InputError if end <= onset.
void validate_event(const EventRecord& e);

/// Events whose code starts with `prefix` (ATA/JASC-style hierarchical selection).
std::vector<EventRecord> select_events(std::span<const EventRecord> events, const std::string& prefix);

/// Events of one unit, sorted by onset.
std::vector<EventRecord> events_of(std::span<const EventRecord> events, const std::string& unit_id);

/// Predictive window, horizon and maintenance-effect delay, all in flights.
struct MatchParams {
    Flight w = 20;
    Flight h = 0;
    Flight m = 0;

    void validate() const;
    bool operator==(const MatchParams&) const = default;
};

/// A named binary signal stored as sorted, deduplicated firing flights per unit.
struct AlarmSeries {
    std::string alarm_id;
    std::map<std::string, std::vector<Flight>> firings;

    /// Sorts and deduplicates every firing set.
    void normalize();
    std::size_t total_firings() const;
    bool operator==(const AlarmSeries&) const = default;
};

/// Row selection for one panel.
using RowMask = std::vector<bool>;
/// One mask per fleet unit, aligned with the fleet order.
using FleetMask = std::vector<RowMask>;

/// A per-flight real series for one unit (scores, single parameters).
struct ScoreSeries {
    std::string unit_id;
    std::vector<Flight> flights;
    std::vector<Value> values;
};

/// Per-column z-score statistics (population standard deviation).
struct ZScoreStats {
    std::vector<std::string> columns;
    std::vector<double> mean;
    std::vector<double> stddev;
};

/// Estimates mean and 1/N standard deviation over the masked rows of every unit.
/// Throws DataError("no reference rows") if no row is selected.
ZScoreStats fit_zscore(std::span<const TelemetryPanel> fleet, std::span<const RowMask> masks);

/// Applies the statistics by column name. Zero-variance columns are only centered.
TelemetryPanel apply_zscore(const TelemetryPanel& panel, const ZScoreStats& stats);

/// z-scores every column of `panel` with statistics from the rows in `stats_rows`.
TelemetryPanel normalize_panel(const TelemetryPanel& panel, const RowMask& stats_rows);

}  // namespace precursor
