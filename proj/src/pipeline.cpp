#include "precursor/pipeline.hpp"

#include <optional>

#include "precursor/parallel.hpp"

namespace precursor {

double group_quantile(const DetectConfig& cfg, const std::vector<std::string>& group) {
    for (const auto& name : group) {
        if (auto it = cfg.quantile_overrides.find(name); it != cfg.quantile_overrides.end()) return it->second;
    }
    return cfg.quantile;
}

FittedModel fit_pipeline(std::span<const TelemetryPanel> fleet, std::span<const EventRecord> events,
                         const PipelineConfig& cfg) {
    if (fleet.empty()) {
        throw InputError("empty fleet");
    }
    FittedModel model;
    model.targets = select_events(events, cfg.code_prefix);
    if (model.targets.empty()) {
        throw NoTargetEventsError("no events with code prefix '" + cfg.code_prefix + "'");
    }
    model.layout = layout_periods(model.targets, cfg.match, observation_ranges(fleet));
    if (model.layout.k_plus() == 0) {
        throw NoTargetEventsError("no target events in range");
    }

    const FleetMask normal =
        select_normal_regime(fleet, model.targets, cfg.detect.normal_before, cfg.detect.normal_after);
    model.normalization = fit_zscore(fleet, normal);
    Fleet normalized;
    normalized.reserve(fleet.size());
    for (const auto& panel : fleet) normalized.push_back(apply_zscore(panel, model.normalization));

    const auto dep = compute_dependence(normalized, cfg.grouping.measure, normal);
    model.grouping = build_groups(dep, cfg.grouping.rho);

    std::vector<std::vector<std::string>> fit_groups;
    for (const auto& g : model.grouping.groups) {
        if (static_cast<int>(g.size()) > cfg.detect.rank) {
            fit_groups.push_back(g);
        } else {
            model.skipped_groups.push_back(g);
        }
    }

    model.detectors.resize(fit_groups.size());
    model.alarms.resize(fit_groups.size());
    parallel_for(fit_groups.size(), cfg.threads, [&](std::size_t g) {
        auto det = fit_subspace(normalized, normal, fit_groups[g], cfg.detect.rank);
        det.quantile = group_quantile(cfg.detect, det.group);
        std::vector<ScoreSeries> scores;
        for (const auto& panel : normalized) scores.push_back(score_reconstruction(det, panel));
        det.threshold = fit_threshold(masked_scores(scores, normal), det.quantile);
        model.alarms[g] = binarize(det, scores);
        model.detectors[g] = std::move(det);
    });

    model.alarm_stats.resize(model.alarms.size());
    parallel_for(model.alarms.size(), cfg.threads,
                 [&](std::size_t i) { model.alarm_stats[i] = match_stats(model.alarms[i], model.layout); });

    SearchConfig search = cfg.search;
    search.threads = cfg.threads;
    model.precursors = search_combinations(model.alarms, model.layout, search, cfg.code_prefix);
    return model;
}

std::vector<AlarmSeries> detector_alarms(const FittedModel& model, std::span<const TelemetryPanel> fleet,
                                         unsigned threads) {
    Fleet normalized;
    for (const auto& panel : fleet) normalized.push_back(apply_zscore(panel, model.normalization));
    std::vector<AlarmSeries> out(model.detectors.size());
    parallel_for(model.detectors.size(), threads, [&](std::size_t g) {
        std::vector<ScoreSeries> scores;
        for (const auto& panel : normalized) scores.push_back(score_reconstruction(model.detectors[g], panel));
        out[g] = binarize(model.detectors[g], scores);
    });
    return out;
}

AlarmSeries predict(const FittedModel& model, std::span<const TelemetryPanel> fleet, unsigned threads) {
    const auto alarms = detector_alarms(model, fleet, threads);
    return apply_precursors(model.precursors, alarms);
}

}  // namespace precursor
