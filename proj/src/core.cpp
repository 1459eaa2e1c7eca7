#include "precursor/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace precursor {

TelemetryPanel::TelemetryPanel(std::string unit_id, std::vector<Flight> flights, std::vector<std::string> phases,
                               std::vector<std::string> columns, std::vector<Value> values)
    : unit_id_(std::move(unit_id)),
      flights_(std::move(flights)),
      phases_(std::move(phases)),
      columns_(std::move(columns)),
      values_(std::move(values)) {
    if (phases_.empty()) {
        phases_.assign(flights_.size(), std::string{});
    }
    if (phases_.size() != flights_.size()) {
        throw InputError("unit " + unit_id_ + ": phase labels do not match row count");
    }
    for (std::size_t i = 1; i < flights_.size(); ++i) {
        if (flights_[i] <= flights_[i - 1]) {
            throw InputError("unit " + unit_id_ + ": flight indices not strictly increasing at flight " +
                             std::to_string(flights_[i]));
        }
    }
    std::set<std::string> seen;
    for (const auto& c : columns_) {
        if (!seen.insert(c).second) {
            throw InputError("duplicate column name '" + c + "'");
        }
    }
    if (values_.size() != flights_.size() * columns_.size()) {
        throw InputError("unit " + unit_id_ + ": ragged rows");
    }
}

std::optional<std::size_t> TelemetryPanel::column_index(const std::string& name) const {
    auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - columns_.begin());
}

std::size_t TelemetryPanel::require_column(const std::string& name) const {
    auto idx = column_index(name);
    if (!idx) {
        throw InputError("unit " + unit_id_ + ": missing column '" + name + "'");
    }
    return *idx;
}

std::vector<Value> TelemetryPanel::column(std::size_t col) const {
    std::vector<Value> out(rows());
    for (std::size_t r = 0; r < rows(); ++r) {
        out[r] = at(r, col);
    }
    return out;
}

FlightRange TelemetryPanel::range() const {
    if (flights_.empty()) {
        return {};
    }
    return {flights_.front(), flights_.back() + 1};
}

std::optional<std::size_t> TelemetryPanel::row_of(Flight t) const {
    auto it = std::lower_bound(flights_.begin(), flights_.end(), t);
    if (it == flights_.end() || *it != t) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - flights_.begin());
}

Fleet make_fleet(std::vector<TelemetryPanel> panels) {
    std::sort(panels.begin(), panels.end(),
              [](const TelemetryPanel& a, const TelemetryPanel& b) { return a.unit_id() < b.unit_id(); });
    for (std::size_t i = 1; i < panels.size(); ++i) {
        if (panels[i].unit_id() == panels[i - 1].unit_id()) {
            throw InputError("duplicate unit '" + panels[i].unit_id() + "'");
        }
        if (panels[i].columns() != panels[0].columns()) {
            throw InputError("unit '" + panels[i].unit_id() + "' has a different column set");
        }
    }
    return panels;
}

void validate_event(const EventRecord& e) {
    if (e.end <= e.onset) {
        throw InputError("event " + e.code + " on unit " + e.unit_id + ": end must exceed onset");
    }
}

std::vector<EventRecord> select_events(std::span<const EventRecord> events, const std::string& prefix) {
    std::vector<EventRecord> out;
    for (const auto& e : events) {
        if (e.code.starts_with(prefix)) {
            out.push_back(e);
        }
    }
    return out;
}

std::vector<EventRecord> events_of(std::span<const EventRecord> events, const std::string& unit_id) {
    std::vector<EventRecord> out;
    for (const auto& e : events) {
        if (e.unit_id == unit_id) {
            out.push_back(e);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const EventRecord& a, const EventRecord& b) {
        return a.onset != b.onset ? a.onset < b.onset : a.end < b.end;
    });
    return out;
}

void MatchParams::validate() const {
    if (w < 1) throw InputError("predictive window w must be >= 1");
    if (h < 0) throw InputError("horizon h must be >= 0");
    if (m < 0) throw InputError("maintenance delay m must be >= 0");
}

void AlarmSeries::normalize() {
    for (auto& [unit, ts] : firings) {
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    }
}

std::size_t AlarmSeries::total_firings() const {
    std::size_t n = 0;
    for (const auto& [unit, ts] : firings) {
        n += ts.size();
    }
    return n;
}

ZScoreStats fit_zscore(std::span<const TelemetryPanel> fleet, std::span<const RowMask> masks) {
    if (fleet.empty() || masks.size() != fleet.size()) {
        throw DataError("no reference rows");
    }
    const auto& columns = fleet.front().columns();
    const std::size_t p = columns.size();
    std::vector<double> sum(p, 0.0);
    std::vector<std::size_t> count(p, 0);
    bool any_row = false;
    for (std::size_t u = 0; u < fleet.size(); ++u) {
        const auto& panel = fleet[u];
        if (panel.columns() != columns) {
            throw InputError("unit '" + panel.unit_id() + "' has a different column set");
        }
        if (masks[u].size() != panel.rows()) {
            throw InputError("row mask size mismatch for unit '" + panel.unit_id() + "'");
        }
        for (std::size_t r = 0; r < panel.rows(); ++r) {
            if (!masks[u][r]) continue;
            any_row = true;
            for (std::size_t c = 0; c < p; ++c) {
                if (const auto& v = panel.at(r, c)) {
                    sum[c] += *v;
                    ++count[c];
                }
            }
        }
    }
    if (!any_row) {
        throw DataError("no reference rows");
    }
    ZScoreStats stats{columns, std::vector<double>(p), std::vector<double>(p)};
    for (std::size_t c = 0; c < p; ++c) {
        if (count[c] == 0) {
            throw DataError("column '" + columns[c] + "' has no reference values");
        }
        stats.mean[c] = sum[c] / static_cast<double>(count[c]);
    }
    // Second pass keeps the variance free of cancellation.
    std::vector<double> ss(p, 0.0);
    for (std::size_t u = 0; u < fleet.size(); ++u) {
        const auto& panel = fleet[u];
        for (std::size_t r = 0; r < panel.rows(); ++r) {
            if (!masks[u][r]) continue;
            for (std::size_t c = 0; c < p; ++c) {
                if (const auto& v = panel.at(r, c)) {
                    const double d = *v - stats.mean[c];
                    ss[c] += d * d;
                }
            }
        }
    }
    for (std::size_t c = 0; c < p; ++c) {
        stats.stddev[c] = std::sqrt(ss[c] / static_cast<double>(count[c]));
    }
    return stats;
}

TelemetryPanel apply_zscore(const TelemetryPanel& panel, const ZScoreStats& stats) {
    std::vector<std::size_t> src(stats.columns.size());
    for (std::size_t c = 0; c < stats.columns.size(); ++c) {
        src[c] = panel.require_column(stats.columns[c]);
    }
    std::vector<Value> out = panel.values();
    const std::size_t p = panel.cols();
    for (std::size_t c = 0; c < stats.columns.size(); ++c) {
        const double mu = stats.mean[c];
        const double sd = stats.stddev[c];
        for (std::size_t r = 0; r < panel.rows(); ++r) {
            auto& cell = out[r * p + src[c]];
            if (!cell) continue;
            cell = sd > 0.0 ? (*cell - mu) / sd : *cell - mu;
        }
    }
    return TelemetryPanel(panel.unit_id(), panel.flights(), panel.phases(), panel.columns(), std::move(out));
}

TelemetryPanel normalize_panel(const TelemetryPanel& panel, const RowMask& stats_rows) {
    const std::vector<RowMask> masks{stats_rows};
    const auto stats = fit_zscore(std::span<const TelemetryPanel>(&panel, 1), masks);
    return apply_zscore(panel, stats);
}

}  // namespace precursor
