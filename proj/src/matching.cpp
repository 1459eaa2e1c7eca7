#include "precursor/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

namespace precursor {
namespace {

FlightRange clip(FlightRange r, const FlightRange& to) {
    r.begin = std::max(r.begin, to.begin);
    r.end = std::min(r.end, to.end);
    if (r.end < r.begin) r.end = r.begin;
    return r;
}

std::vector<FlightRange> complement(std::vector<FlightRange> covered, const FlightRange& range) {
    std::sort(covered.begin(), covered.end(),
              [](const FlightRange& a, const FlightRange& b) { return a.begin < b.begin; });
    std::vector<FlightRange> out;
    Flight cursor = range.begin;
    for (const auto& c : covered) {
        if (c.empty()) continue;
        if (c.begin > cursor) out.push_back({cursor, c.begin});
        cursor = std::max(cursor, c.end);
    }
    if (cursor < range.end) out.push_back({cursor, range.end});
    return out;
}

std::size_t segment_of(const std::vector<FlightRange>& segments, Flight t) {
    auto it = std::upper_bound(segments.begin(), segments.end(), t,
                               [](Flight v, const FlightRange& s) { return v < s.begin; });
    return static_cast<std::size_t>(it - segments.begin()) - 1;
}

double mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs, double mu) {
    double s = 0.0;
    for (double x : xs) s += (x - mu) * (x - mu);
    return s / static_cast<double>(xs.size() - 1);
}

}  // namespace

const UnitLayout* PeriodLayout::unit(const std::string& unit_id) const {
    auto it = std::lower_bound(units.begin(), units.end(), unit_id,
                               [](const UnitLayout& u, const std::string& id) { return u.unit_id < id; });
    if (it == units.end() || it->unit_id != unit_id) return nullptr;
    return &*it;
}

std::size_t PeriodLayout::k_plus() const {
    std::size_t k = 0;
    for (const auto& u : units) k += u.true_windows.size();
    return k;
}

std::size_t PeriodLayout::k_minus() const {
    std::size_t k = 0;
    for (const auto& u : units) k += u.false_segments.size();
    return k;
}

std::map<std::string, FlightRange> observation_ranges(std::span<const TelemetryPanel> fleet) {
    std::map<std::string, FlightRange> out;
    for (const auto& p : fleet) out[p.unit_id()] = p.range();
    return out;
}

PeriodLayout layout_periods(std::span<const EventRecord> events, const MatchParams& params,
                            const std::map<std::string, FlightRange>& ranges) {
    params.validate();
    PeriodLayout layout;
    layout.params = params;
    for (const auto& [unit_id, range] : ranges) {
        for (const auto& e : events_of(events, unit_id)) {
            validate_event(e);
            if (range.contains(e.onset)) {
                layout.events.push_back(e);
            } else {
                layout.dropped.push_back(e);
            }
        }
    }
    for (const auto& e : events) {
        if (!ranges.contains(e.unit_id)) layout.dropped.push_back(e);
    }

    std::size_t next_event = 0;
    for (const auto& [unit_id, range] : ranges) {
        UnitLayout ul{unit_id, range, {}, {}, {}};
        std::vector<FlightRange> covered;
        while (next_event < layout.events.size() && layout.events[next_event].unit_id == unit_id) {
            const auto& e = layout.events[next_event];
            const FlightRange win = clip({e.onset - params.h - params.w, e.onset - params.h}, range);
            const FlightRange zone = clip({e.onset - params.h, e.end + params.m}, range);
            if (!win.empty()) {
                ul.true_windows.push_back({next_event, win});
                covered.push_back(win);
            }
            if (!zone.empty()) {
                ul.irrelevant.push_back({next_event, zone});
                covered.push_back(zone);
            }
            ++next_event;
        }
        ul.false_segments = complement(std::move(covered), range);
        layout.units.push_back(std::move(ul));
    }
    return layout;
}

std::string to_string(FiringKind k) {
    switch (k) {
        case FiringKind::True: return "true";
        case FiringKind::Irrelevant: return "irrelevant";
        case FiringKind::False: return "false";
    }
    return "?";
}

std::vector<FiringLabel> classify_firings(const AlarmSeries& alarm, const PeriodLayout& layout) {
    std::vector<FiringLabel> labels;
    for (const auto& [unit_id, times] : alarm.firings) {
        if (times.empty()) continue;
        const UnitLayout* ul = layout.unit(unit_id);
        if (ul == nullptr) {
            throw InputError("alarm " + alarm.alarm_id + " fires on unknown unit '" + unit_id + "'");
        }
        for (Flight t : times) {
            if (!ul->range.contains(t)) {
                throw InputError("alarm " + alarm.alarm_id + " fires at flight " + std::to_string(t) +
                                 " outside the range of unit '" + unit_id + "'");
            }
            FiringLabel label{unit_id, t, FiringKind::False, {}, 0};
            for (const auto& w : ul->true_windows) {
                if (w.span.contains(t)) label.events.push_back(w.event);
            }
            if (!label.events.empty()) {
                label.kind = FiringKind::True;
            } else {
                for (const auto& z : ul->irrelevant) {
                    if (z.span.contains(t)) label.events.push_back(z.event);
                }
                if (!label.events.empty()) {
                    label.kind = FiringKind::Irrelevant;
                } else {
                    label.segment = segment_of(ul->false_segments, t);
                }
            }
            labels.push_back(std::move(label));
        }
    }
    return labels;
}

MatchCounts& MatchCounts::operator+=(const MatchCounts& o) {
    k_plus += o.k_plus;
    k_minus += o.k_minus;
    s_plus += o.s_plus;
    s_minus += o.s_minus;
    u_plus += o.u_plus;
    u_minus += o.u_minus;
    s_irrelevant += o.s_irrelevant;
    return *this;
}

MatchTally tally_matches(const AlarmSeries& alarm, const PeriodLayout& layout) {
    MatchTally tally;
    // Per-event true-window counts and per-segment false counts, in layout order.
    std::vector<double> per_event(layout.events.size(), 0.0);
    std::map<std::string, std::vector<double>> per_segment;
    for (const auto& ul : layout.units) per_segment[ul.unit_id].assign(ul.false_segments.size(), 0.0);

    for (const auto& label : classify_firings(alarm, layout)) {
        switch (label.kind) {
            case FiringKind::True:
                ++tally.counts.s_plus;
                for (std::size_t e : label.events) per_event[e] += 1.0;
                break;
            case FiringKind::Irrelevant:
                ++tally.counts.s_irrelevant;
                break;
            case FiringKind::False:
                ++tally.counts.s_minus;
                per_segment[label.unit_id][label.segment] += 1.0;
                break;
        }
    }
    for (const auto& ul : layout.units) {
        for (const auto& w : ul.true_windows) {
            ++tally.counts.k_plus;
            if (per_event[w.event] > 0.0) ++tally.counts.u_plus;
            tally.true_window_firings.push_back(per_event[w.event]);
        }
        for (double c : per_segment[ul.unit_id]) {
            ++tally.counts.k_minus;
            if (c > 0.0) ++tally.counts.u_minus;
            tally.false_segment_firings.push_back(c);
        }
    }
    return tally;
}

std::optional<MatchStats> stats_from_counts(const MatchCounts& counts) {
    if (counts.k_plus == 0) return std::nullopt;
    MatchStats s;
    s.counts = counts;
    const auto kp = static_cast<double>(counts.k_plus);
    s.fa = static_cast<double>(counts.s_minus) / kp;
    s.cf = static_cast<double>(counts.u_plus) / kp;
    s.fa_over_cf = counts.u_plus == 0 ? std::numeric_limits<double>::infinity()
                                      : static_cast<double>(counts.s_minus) / static_cast<double>(counts.u_plus);
    return s;
}

MatchStats match_stats(const MatchTally& tally) {
    auto s = stats_from_counts(tally.counts);
    if (!s) {
        throw DataError("no target events in range");
    }
    s->p_value = significance_test(tally.true_window_firings, tally.false_segment_firings);
    return *s;
}

MatchStats match_stats(const AlarmSeries& alarm, const PeriodLayout& layout) {
    return match_stats(tally_matches(alarm, layout));
}

double significance_test(std::span<const double> true_counts, std::span<const double> false_counts) {
    if (true_counts.size() < 2 || false_counts.size() < 2) return 1.0;
    const double na = static_cast<double>(true_counts.size());
    const double nb = static_cast<double>(false_counts.size());
    const double ma = mean(true_counts);
    const double mb = mean(false_counts);
    const double va = sample_variance(true_counts, ma);
    const double vb = sample_variance(false_counts, mb);
    if (va == 0.0 && vb == 0.0) {
        return ma > mb ? 0.0 : 1.0;
    }
    const double ea = va / na;
    const double eb = vb / nb;
    const double t = (ma - mb) / std::sqrt(ea + eb);
    // Welch-Satterthwaite degrees of freedom.
    const double df = (ea + eb) * (ea + eb) / (ea * ea / (na - 1.0) + eb * eb / (nb - 1.0));
    const boost::math::students_t dist(df);
    return boost::math::cdf(boost::math::complement(dist, t));
}

bool gate_ttest(const MatchStats& stats, double alpha) { return stats.counts.u_plus > 1 && stats.p_value < alpha; }

bool hard_filter(const MatchStats& stats, double theta) {
    return static_cast<double>(stats.counts.u_plus) >= theta && stats.counts.u_minus == 0;
}

bool soft_filter(const MatchStats& stats, double theta) {
    return std::isfinite(stats.fa_over_cf) && stats.fa_over_cf <= theta;
}

}  // namespace precursor
