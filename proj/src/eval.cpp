#include "precursor/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "precursor/parallel.hpp"

namespace precursor {

CrossValidation leave_one_unit_out(std::span<const TelemetryPanel> fleet, std::span<const EventRecord> events,
                                   const PipelineConfig& cfg) {
    if (fleet.size() < 2) {
        throw InputError("cross-validation needs at least two units");
    }
    CrossValidation cv;
    cv.folds.resize(fleet.size());
    const auto targets = select_events(events, cfg.code_prefix);

    // Folds run in parallel; each fold is sequential inside.
    PipelineConfig fold_cfg = cfg;
    fold_cfg.threads = 1;
    parallel_for(fleet.size(), cfg.threads, [&](std::size_t k) {
        const auto& held_out = fleet[k];
        FoldResult& fold = cv.folds[k];
        fold.held_out_unit = held_out.unit_id();

        Fleet training;
        for (std::size_t u = 0; u < fleet.size(); ++u) {
            if (u != k) training.push_back(fleet[u]);
        }
        std::vector<EventRecord> training_events;
        for (const auto& e : events) {
            if (e.unit_id != held_out.unit_id()) training_events.push_back(e);
        }

        FittedModel model;
        try {
            model = fit_pipeline(training, training_events, fold_cfg);
        } catch (const NoTargetEventsError& e) {
            fold.skipped = true;
            fold.skip_reason = e.what();
            return;
        }
        fold.precursors = model.precursors;
        const std::span<const TelemetryPanel> test(&held_out, 1);
        fold.held_out_signal = predict(model, test);
        const auto layout = layout_periods(events_of(targets, held_out.unit_id()), cfg.match, observation_ranges(test));
        const auto tally = tally_matches(fold.held_out_signal, layout);
        fold.counts = tally.counts;
        if (tally.counts.k_plus > 0) fold.stats = match_stats(tally);
    });

    for (const auto& fold : cv.folds) {
        if (!fold.skipped) cv.aggregate += fold.counts;
    }
    cv.aggregate_stats = stats_from_counts(cv.aggregate);
    return cv;
}

TelemetryPanel lag_features(const TelemetryPanel& panel, int depth) {
    if (depth < 0) throw InputError("lag depth must be >= 0");
    if (depth == 0) return panel;
    if (static_cast<std::size_t>(depth) >= panel.rows()) throw InputError("lag depth must be below the row count");
    const std::size_t p = panel.cols();
    const std::size_t n = panel.rows();
    const auto d = static_cast<std::size_t>(depth);
    std::vector<std::string> columns = panel.columns();
    for (const auto& c : panel.columns()) {
        for (std::size_t k = 1; k <= d; ++k) columns.push_back(c + "@lag-" + std::to_string(k));
    }
    const std::size_t wide = columns.size();
    std::vector<Value> values(n * wide);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < p; ++c) {
            values[r * wide + c] = panel.at(r, c);
            for (std::size_t k = 1; k <= d; ++k) {
                values[r * wide + p + c * d + (k - 1)] = r >= k ? panel.at(r - k, c) : Value{};
            }
        }
    }
    return TelemetryPanel(panel.unit_id(), panel.flights(), panel.phases(), std::move(columns), std::move(values));
}

Direction parse_direction(const std::string& s) {
    if (s == "above") return Direction::Above;
    if (s == "below") return Direction::Below;
    throw InputError("direction must be 'above' or 'below', got '" + s + "'");
}

ScoreSeries threshold_baseline(const ScoreSeries& series, Direction direction) {
    ScoreSeries out = series;
    if (direction == Direction::Below) {
        for (auto& v : out.values) {
            if (v) v = -*v;
        }
    }
    return out;
}

ScoreSeries parameter_series(const TelemetryPanel& panel, const std::string& column) {
    return {panel.unit_id(), panel.flights(), panel.column(panel.require_column(column))};
}

std::vector<ScoreSeries> alarm_scores(const AlarmSeries& alarm, std::span<const TelemetryPanel> fleet) {
    std::vector<ScoreSeries> out;
    for (const auto& panel : fleet) {
        ScoreSeries s{panel.unit_id(), panel.flights(), std::vector<Value>(panel.rows(), 0.0)};
        if (auto it = alarm.firings.find(panel.unit_id()); it != alarm.firings.end()) {
            for (Flight t : it->second) {
                if (auto r = panel.row_of(t)) s.values[*r] = 1.0;
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::size_t match_flags_to_onsets(std::span<const Flight> flags, std::span<const Flight> onsets, Flight tolerance) {
    // Left-to-right sweep: each flag takes the earliest onset it can still reach.
    // All acceptance intervals have the same width, so this is a maximum matching.
    std::size_t matched = 0;
    std::size_t j = 0;
    for (Flight f : flags) {
        while (j < onsets.size() && onsets[j] < f - tolerance) ++j;
        if (j < onsets.size() && onsets[j] <= f + tolerance) {
            ++matched;
            ++j;
        }
    }
    return matched;
}

std::vector<CurvePoint> roc_pr_curves(std::span<const ScoreSeries> scores, std::span<const EventRecord> events,
                                      Flight tolerance) {
    if (tolerance < 0) {
        throw InputError("tolerance must be >= 0");
    }
    std::map<std::string, std::size_t> unit_index;
    for (std::size_t u = 0; u < scores.size(); ++u) unit_index[scores[u].unit_id] = u;

    std::vector<std::vector<Flight>> onsets(scores.size());
    for (const auto& e : events) {
        auto it = unit_index.find(e.unit_id);
        if (it == unit_index.end()) {
            throw InputError("event on unit '" + e.unit_id + "' has no scores");
        }
        onsets[it->second].push_back(e.onset);
    }
    for (auto& o : onsets) std::sort(o.begin(), o.end());

    struct Scored {
        double score;
        std::size_t unit;
        Flight flight;
    };
    std::vector<Scored> all;
    for (std::size_t u = 0; u < scores.size(); ++u) {
        for (std::size_t i = 0; i < scores[u].values.size(); ++i) {
            if (scores[u].values[i]) all.push_back({*scores[u].values[i], u, scores[u].flights[i]});
        }
    }
    std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) { return a.score > b.score; });

    const std::size_t positives = events.size();
    const std::size_t negatives = all.size() > positives ? all.size() - positives : 0;

    std::vector<std::vector<Flight>> flags(scores.size());
    std::vector<std::size_t> unit_tp(scores.size(), 0);
    std::size_t tp = 0, flagged = 0;
    std::vector<CurvePoint> curve;
    for (std::size_t i = 0; i < all.size();) {
        const double nu = all[i].score;
        std::set<std::size_t> touched;
        for (; i < all.size() && all[i].score == nu; ++i) {
            auto& f = flags[all[i].unit];
            f.insert(std::upper_bound(f.begin(), f.end(), all[i].flight), all[i].flight);
            touched.insert(all[i].unit);
            ++flagged;
        }
        for (std::size_t u : touched) {
            tp -= unit_tp[u];
            unit_tp[u] = match_flags_to_onsets(flags[u], onsets[u], tolerance);
            tp += unit_tp[u];
        }
        CurvePoint pt;
        pt.nu = nu;
        pt.tp = tp;
        pt.fp = flagged - tp;
        pt.fn = positives - tp;
        pt.tn = negatives > pt.fp ? negatives - pt.fp : 0;
        pt.precision = flagged == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(flagged);
        if (positives > 0) pt.recall = static_cast<double>(tp) / static_cast<double>(positives);
        pt.fpr = pt.fp + pt.tn == 0 ? 0.0 : static_cast<double>(pt.fp) / static_cast<double>(pt.fp + pt.tn);
        curve.push_back(pt);
    }
    return curve;
}

double interpolated_precision(std::span<const CurvePoint> curve, double r) {
    double best = 0.0;
    for (const auto& pt : curve) {
        if (pt.recall && *pt.recall >= r) best = std::max(best, pt.precision);
    }
    return best;
}

const CurvePoint* nearest_point(std::span<const CurvePoint> curve, double nu) {
    const CurvePoint* best = nullptr;
    for (const auto& pt : curve) {
        if (best == nullptr || std::abs(pt.nu - nu) < std::abs(best->nu - nu)) best = &pt;
    }
    return best;
}

}  // namespace precursor
