#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "precursor/grouping.hpp"
#include "precursor/io.hpp"
#include "precursor/simgen.hpp"

using namespace precursor;

namespace {

std::string serialized(const sim::Fleet& f) {
    std::stringstream s;
    io::write_telemetry(s, f.panels);
    io::write_events(s, f.events);
    return s.str();
}

sim::SimConfig quick(std::uint64_t seed) {
    sim::SimConfig cfg;
    cfg.units = 4;
    cfg.flights_per_unit = 500;
    cfg.groups = std::vector<sim::GroupSpec>(3);
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST(Simgen, SeedDeterminism) {
    EXPECT_EQ(serialized(sim::generate_fleet(quick(3))), serialized(sim::generate_fleet(quick(3))));
    EXPECT_NE(serialized(sim::generate_fleet(quick(3))), serialized(sim::generate_fleet(quick(4))));
}

TEST(Simgen, ShapeAndNames) {
    const auto f = sim::generate_fleet(quick(1));
    ASSERT_EQ(f.panels.size(), 4u);
    EXPECT_EQ(f.panels[0].unit_id(), "U000");
    EXPECT_EQ(f.panels[0].cols(), 15u);
    EXPECT_EQ(f.panels[0].columns()[6], "g1_p1");
    EXPECT_EQ(f.panels[0].range(), (FlightRange{1, 501}));
    EXPECT_EQ(f.events.size(), 12u);
    for (const auto& e : f.events) EXPECT_EQ(e.code, "7100W330");
}

TEST(Simgen, WithinGroupCorrelationOnCleanFlights) {
    auto cfg = quick(2);
    cfg.groups = {sim::GroupSpec{4, 0.8}, sim::GroupSpec{3, 0.9}};
    cfg.planted = {sim::PlantedSpec{{0}, 5, 15, 6.0}};
    const auto f = sim::generate_fleet(cfg);
    std::set<std::pair<std::string, Flight>> dirty;
    for (const auto& e : f.manifest.events) dirty.insert({e.unit_id, e.anomaly_flight});
    for (const auto& p : f.panels) {
        for (int g = 0; g < 2; ++g) {
            for (int a = 0; a < cfg.groups[g].size; ++a) {
                for (int b = a + 1; b < cfg.groups[g].size; ++b) {
                    std::vector<Value> x, y;
                    const auto ca = p.require_column(sim::parameter_name(g, a));
                    const auto cb = p.require_column(sim::parameter_name(g, b));
                    for (std::size_t r = 0; r < p.rows(); ++r) {
                        if (dirty.count({p.unit_id(), p.flight(r)})) continue;
                        x.push_back(p.at(r, ca));
                        y.push_back(p.at(r, cb));
                    }
                    EXPECT_NEAR(*pearson(x, y), cfg.groups[g].correlation, 0.05);
                }
            }
        }
    }
}

TEST(Simgen, PooledCorrelationIsTight) {
    // Pooled over the fleet the sampling error is well inside +-0.05.
    auto cfg = quick(5);
    cfg.groups = {sim::GroupSpec{2, 0.8}};
    cfg.planted = {sim::PlantedSpec{{0}, 5, 15, 6.0}};
    cfg.events_per_unit = 0;
    cfg.units = 8;
    const auto f = sim::generate_fleet(cfg);
    std::vector<Value> x, y;
    for (const auto& p : f.panels) {
        for (std::size_t r = 0; r < p.rows(); ++r) {
            x.push_back(p.at(r, 0));
            y.push_back(p.at(r, 1));
        }
    }
    EXPECT_NEAR(*pearson(x, y), 0.8, 0.05);
}

TEST(Simgen, EventsRespectSpacingAndLeads) {
    const auto cfg = quick(7);
    const auto f = sim::generate_fleet(cfg);
    const Flight spacing = cfg.min_spacing();
    for (const auto& p : f.panels) {
        const auto ev = events_of(f.events, p.unit_id());
        for (std::size_t i = 1; i < ev.size(); ++i) EXPECT_GE(ev[i].onset - ev[i - 1].end, spacing - 1);
        for (const auto& e : ev) EXPECT_TRUE(p.range().contains(e.onset));
    }
    for (const auto& e : f.manifest.events) {
        EXPECT_GE(e.lead, 5);
        EXPECT_LE(e.lead, 15);
        EXPECT_EQ(e.onset - e.lead, e.anomaly_flight);
    }
}

TEST(Simgen, ManifestConfirmsPlantedSignal) {
    const auto f = sim::generate_fleet(quick(1));
    EXPECT_TRUE(f.manifest.planted_scores_exceed_q95);
    ASSERT_EQ(f.manifest.planted_groups.size(), 1u);
    EXPECT_EQ(f.manifest.planted_groups[0].size(), 2u);
}

TEST(Simgen, InfeasiblePlacementIsAnError) {
    auto cfg = quick(1);
    cfg.flights_per_unit = 60;
    cfg.events_per_unit = 5;
    EXPECT_THROW(sim::generate_fleet(cfg), InputError);
}

TEST(Simgen, InvalidConfigs) {
    auto cfg = quick(1);
    cfg.groups[0].size = 1;
    EXPECT_THROW(sim::generate_fleet(cfg), InputError);
    cfg = quick(1);
    cfg.planted[0].groups = {7};
    EXPECT_THROW(sim::generate_fleet(cfg), InputError);
}

TEST(Simgen, EventFreeUnits) {
    auto cfg = quick(1);
    cfg.units_with_events = 1;
    const auto f = sim::generate_fleet(cfg);
    for (const auto& e : f.events) EXPECT_EQ(e.unit_id, "U000");
}
