#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "precursor/core.hpp"

namespace precursor::io {

// CSV formats (UTF-8, comma separated, '.' decimal point, no quoting):
//   telemetry: unit_id,flight,phase,<param>...   missing = empty cell
//   events:    unit_id,onset,end,code
//   scores:    unit_id,flight,score
//   alarms:    unit_id,flight,alarm_id
// All readers throw InputError with the offending line number.

Fleet read_telemetry(std::istream& in);
Fleet read_telemetry_file(const std::string& path);
void write_telemetry(std::ostream& out, const Fleet& fleet);

std::vector<EventRecord> read_events(std::istream& in);
std::vector<EventRecord> read_events_file(const std::string& path);
void write_events(std::ostream& out, const std::vector<EventRecord>& events);

std::vector<ScoreSeries> read_scores(std::istream& in);
std::vector<ScoreSeries> read_scores_file(const std::string& path);
void write_scores(std::ostream& out, const std::vector<ScoreSeries>& scores);

/// One row per firing, alarms in the given order, units and flights ascending.
void write_alarms(std::ostream& out, const std::vector<AlarmSeries>& alarms);

/// Shortest-safe text for a real: 17 significant digits.
std::string format_real(double v);

/// Splits one CSV line on commas; a trailing '\r' is stripped.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace precursor::io
