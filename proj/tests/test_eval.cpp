#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "precursor/eval.hpp"
#include "precursor/serialize.hpp"
#include "precursor/simgen.hpp"

using namespace precursor;

namespace {

ScoreSeries series(std::string unit, std::vector<Value> v, Flight first = 1) {
    ScoreSeries s{std::move(unit), {}, std::move(v)};
    for (std::size_t i = 0; i < s.values.size(); ++i) s.flights.push_back(first + static_cast<Flight>(i));
    return s;
}

// Brute force: flag every flight scoring >= nu, then maximum matching per unit.
std::size_t oracle_tp(const std::vector<ScoreSeries>& scores, const std::vector<EventRecord>& events, double nu,
                      Flight tol) {
    std::size_t tp = 0;
    for (const auto& s : scores) {
        std::vector<Flight> flags, onsets;
        for (std::size_t i = 0; i < s.values.size(); ++i)
            if (s.values[i] && *s.values[i] >= nu) flags.push_back(s.flights[i]);
        for (const auto& e : events)
            if (e.unit_id == s.unit_id) onsets.push_back(e.onset);
        tp += oracle::max_matching(flags, onsets, tol);
    }
    return tp;
}

sim::SimConfig small_sim(int units) {
    sim::SimConfig cfg;
    cfg.units = units;
    cfg.flights_per_unit = 300;
    cfg.groups = std::vector<sim::GroupSpec>(3, sim::GroupSpec{3, 0.8});
    cfg.events_per_unit = 2;
    cfg.seed = 4;
    return cfg;
}

PipelineConfig small_pipeline() {
    PipelineConfig p;
    p.detect.quantile = 0.99;
    return p;
}

}  // namespace

TEST(LagFeatures, DepthZeroIsIdentity) {
    const TelemetryPanel p("A", {1, 2, 3}, {}, {"x"}, {1.0, 2.0, 3.0});
    const auto q = lag_features(p, 0);
    EXPECT_EQ(q.columns(), p.columns());
    EXPECT_EQ(q.values(), p.values());
}

TEST(LagFeatures, SingleLag) {
    const TelemetryPanel p("A", {1, 2, 3}, {}, {"x"}, {1.0, 2.0, 3.0});
    const auto q = lag_features(p, 1);
    ASSERT_EQ(q.cols(), 2u);
    EXPECT_EQ(q.column(1), (std::vector<Value>{std::nullopt, 1.0, 2.0}));
}

TEST(LagFeatures, ColumnCountAndOriginalsPreserved) {
    std::vector<Value> v;
    for (int i = 0; i < 5 * 3; ++i) v.push_back(static_cast<double>(i));
    const TelemetryPanel p("A", {1, 2, 3, 4, 5}, {}, {"a", "b", "c"}, v);
    const auto q = lag_features(p, 3);
    EXPECT_EQ(q.cols(), 12u);
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(q.column(c), p.column(c));
    EXPECT_THROW(lag_features(p, 5), InputError);
    EXPECT_THROW(lag_features(p, -1), InputError);
}

TEST(Baseline, DirectionBelowNegates) {
    const auto s = series("A", {3.0, std::nullopt, -1.0});
    const auto b = threshold_baseline(s, Direction::Below);
    EXPECT_EQ(b.values, (std::vector<Value>{-3.0, std::nullopt, 1.0}));
    EXPECT_EQ(threshold_baseline(s, Direction::Above).values, s.values);
    EXPECT_THROW(parse_direction("sideways"), InputError);
}

TEST(Baseline, ConstantSeriesGivesOnePoint) {
    const std::vector<ScoreSeries> s{series("A", {2.0, 2.0, 2.0, 2.0})};
    const std::vector<EventRecord> ev{{"A", 2, 3, "E"}};
    EXPECT_EQ(roc_pr_curves(s, ev, 0).size(), 1u);
}

TEST(Curves, PerfectScorer) {
    const std::vector<ScoreSeries> s{series("A", {0, 0, 0, 1, 0, 0, 0, 1, 0, 0})};
    const std::vector<EventRecord> ev{{"A", 4, 5, "E"}, {"A", 8, 9, "E"}};
    const auto curve = roc_pr_curves(s, ev, 0);
    ASSERT_EQ(curve.size(), 2u);
    EXPECT_EQ(curve[0].precision, 1.0);
    EXPECT_EQ(*curve[0].recall, 1.0);
    EXPECT_EQ(curve[0].fpr, 0.0);
}

TEST(Curves, FlagWithinTolerance) {
    std::vector<Value> v(30, 0.0);
    v[17] = 1.0;  // flight 18
    const std::vector<ScoreSeries> s{series("A", v)};
    const std::vector<EventRecord> ev{{"A", 20, 21, "E"}};
    EXPECT_EQ(roc_pr_curves(s, ev, 2)[0].tp, 1u);
    EXPECT_EQ(roc_pr_curves(s, ev, 1)[0].tp, 0u);
}

TEST(Curves, TwoFlagsOneEvent) {
    std::vector<Value> v(30, 0.0);
    v[18] = v[20] = 1.0;  // flights 19 and 21
    const std::vector<ScoreSeries> s{series("A", v)};
    const std::vector<EventRecord> ev{{"A", 20, 21, "E"}};
    const auto pt = roc_pr_curves(s, ev, 2)[0];
    EXPECT_EQ(pt.tp, 1u);
    EXPECT_EQ(pt.fp, 1u);
    EXPECT_EQ(pt.fn, 0u);
}

TEST(Curves, DistinctScoresGiveOnePointEach) {
    const std::vector<ScoreSeries> s{series("A", {1.0, 2.0, 3.0})};
    const std::vector<EventRecord> ev{{"A", 3, 4, "E"}};
    const auto curve = roc_pr_curves(s, ev, 0);
    ASSERT_EQ(curve.size(), 3u);
    EXPECT_EQ(curve[0].nu, 3.0);
    EXPECT_EQ(curve[0].tp, 1u);
    EXPECT_EQ(curve[2].fp, 2u);
    EXPECT_EQ(curve[2].tn, 0u);
}

TEST(Curves, SweepBeatsNearestFirstCounterexample) {
    const std::vector<Flight> flags{0, 3}, onsets{2, 4};
    EXPECT_EQ(match_flags_to_onsets(flags, onsets, 2), 2u);
}

TEST(Curves, EventOnUnknownUnit) {
    const std::vector<ScoreSeries> s{series("A", {1.0})};
    const std::vector<EventRecord> ev{{"B", 1, 2, "E"}};
    EXPECT_THROW(roc_pr_curves(s, ev, 0), InputError);
}

TEST(Curves, NoEventsLeavesRecallUndefined) {
    const std::vector<ScoreSeries> s{series("A", {1.0, 0.0})};
    const auto curve = roc_pr_curves(s, {}, 2);
    ASSERT_FALSE(curve.empty());
    EXPECT_FALSE(curve[0].recall.has_value());
}

TEST(CurveProperties, MatchesOracleAndIsMonotone) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> level(0, 6);
    for (int t = 0; t < 300; ++t) {
        const Flight n = std::uniform_int_distribution<Flight>(1, 20)(rng);
        std::vector<Value> v;
        for (Flight i = 0; i < n; ++i) v.push_back(static_cast<double>(level(rng)));
        const std::vector<ScoreSeries> s{series("A", v)};
        std::vector<EventRecord> ev;
        const int k = std::uniform_int_distribution<int>(0, 3)(rng);
        for (int e = 0; e < k; ++e) {
            const Flight onset = std::uniform_int_distribution<Flight>(1, n)(rng);
            ev.push_back({"A", onset, onset + 1, "E"});
        }
        std::vector<std::vector<CurvePoint>> by_tol;
        for (Flight tol : {0, 1, 2}) {
            const auto curve = roc_pr_curves(s, ev, tol);
            for (std::size_t i = 0; i < curve.size(); ++i) {
                EXPECT_EQ(curve[i].tp, oracle_tp(s, ev, curve[i].nu, tol));
                EXPECT_GE(curve[i].precision, 0.0);
                EXPECT_LE(curve[i].precision, 1.0);
                if (i > 0) {
                    EXPECT_GE(curve[i].fpr, curve[i - 1].fpr);
                    if (curve[i].recall) EXPECT_GE(*curve[i].recall, *curve[i - 1].recall);
                }
            }
            by_tol.push_back(curve);
        }
        for (std::size_t k2 = 1; k2 < by_tol.size(); ++k2)
            for (std::size_t i = 0; i < by_tol[k2].size(); ++i)
                EXPECT_GE(by_tol[k2][i].tp, by_tol[k2 - 1][i].tp);
    }
}

TEST(Curves, InterpolatedPrecision) {
    std::vector<CurvePoint> c(3);
    c[0].recall = 0.2, c[0].precision = 0.5;
    c[1].recall = 0.6, c[1].precision = 0.7;
    c[2].recall = 1.0, c[2].precision = 0.4;
    EXPECT_EQ(interpolated_precision(c, 0.5), 0.7);
    EXPECT_EQ(interpolated_precision(c, 0.9), 0.4);
    EXPECT_EQ(nearest_point(c, 0.0), &c[0]);
}

TEST(AlarmScores, FiringsBecomeOnes) {
    const TelemetryPanel p("A", {1, 2, 3}, {}, {"x"}, {0.0, 0.0, 0.0});
    const AlarmSeries a{"x", {{"A", {2}}}};
    const std::vector<TelemetryPanel> fleet{p};
    const auto s = alarm_scores(a, fleet);
    EXPECT_EQ(s[0].values, (std::vector<Value>{0.0, 1.0, 0.0}));
}

TEST(CrossValidation, OneFoldPerUnitAndMicroAggregate) {
    const auto data = sim::generate_fleet(small_sim(3));
    const auto cv = leave_one_unit_out(data.panels, data.events, small_pipeline());
    ASSERT_EQ(cv.folds.size(), 3u);
    MatchCounts sum;
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(cv.folds[k].held_out_unit, data.panels[k].unit_id());
        if (!cv.folds[k].skipped) sum += cv.folds[k].counts;
    }
    EXPECT_EQ(cv.aggregate, sum);
}

TEST(CrossValidation, EventFreeUnitContributesOnlyFalseCounts) {
    auto cfg = small_sim(3);
    cfg.units_with_events = 2;
    const auto data = sim::generate_fleet(cfg);
    const auto cv = leave_one_unit_out(data.panels, data.events, small_pipeline());
    std::size_t quiet = 0;
    for (const auto& f : cv.folds) {
        if (events_of(data.events, f.held_out_unit).empty()) {
            ++quiet;
            EXPECT_EQ(f.counts.k_plus, 0u);
            EXPECT_EQ(f.counts.s_plus, 0u);
            EXPECT_FALSE(f.stats.has_value());
        }
    }
    EXPECT_EQ(quiet, 1u);
}

TEST(CrossValidation, NeedsTwoUnits) {
    const auto data = sim::generate_fleet(small_sim(1));
    EXPECT_THROW(leave_one_unit_out(data.panels, data.events, small_pipeline()), InputError);
}

TEST(CrossValidation, HeldOutDataDoesNotLeak) {
    const auto data = sim::generate_fleet(small_sim(3));
    const auto cv = leave_one_unit_out(data.panels, data.events, small_pipeline());

    // Scramble unit 0's telemetry and drop its events.
    auto panels = data.panels;
    std::vector<Value> v = panels[0].values();
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 50.0);
    for (auto& x : v) x = g(rng);
    panels[0] = TelemetryPanel(panels[0].unit_id(), panels[0].flights(), panels[0].phases(), panels[0].columns(), v);
    std::vector<EventRecord> events;
    for (const auto& e : data.events)
        if (e.unit_id != panels[0].unit_id()) events.push_back(e);

    const auto altered = leave_one_unit_out(panels, events, small_pipeline());
    EXPECT_EQ(dump(to_json(altered.folds[0].precursors)), dump(to_json(cv.folds[0].precursors)));
}

TEST(CrossValidation, ThreadCountDoesNotChangeResults) {
    const auto data = sim::generate_fleet(small_sim(4));
    auto cfg = small_pipeline();
    const auto a = dump(to_json(leave_one_unit_out(data.panels, data.events, cfg)));
    cfg.threads = 3;
    EXPECT_EQ(dump(to_json(leave_one_unit_out(data.panels, data.events, cfg))), a);
}
