#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "precursor/core.hpp"

namespace precursor::sim {

struct GroupSpec {
    int size = 5;
    double correlation = 0.8;
};

/// A precursor planted before every event assigned to it: each listed group
/// deviates by `magnitude` marginal standard deviations on flight onset - lead.
struct PlantedSpec {
    std::vector<int> groups;
    Flight lead_lo = 5;
    Flight lead_hi = 15;
    double magnitude = 6.0;
};

struct SimConfig {
    int units = 16;
    Flight flights_per_unit = 500;
    std::vector<GroupSpec> groups = std::vector<GroupSpec>(8);
    std::vector<PlantedSpec> planted = {PlantedSpec{{0, 1}, 5, 15, 6.0}};
    int events_per_unit = 3;
    /// Units 0..units_with_events-1 carry events; -1 means every unit.
    int units_with_events = -1;
    std::string event_code = "7100W330";
    std::uint64_t seed = 1;

    void validate() const;
    Flight min_spacing() const;
};

struct PlantedEvent {
    std::string unit_id;
    Flight onset = 0;
    std::size_t planted = 0;  // index into SimConfig::planted
    Flight lead = 0;
    Flight anomaly_flight = 0;
};

/// Ground truth of a generated fleet.
struct Manifest {
    std::uint64_t seed = 0;
    /// Parameter names of every planted group, per planted spec.
    std::vector<std::vector<std::vector<std::string>>> planted_groups;
    std::vector<PlantedEvent> events;
    /// Per planted spec and group: 95% quantile of the group's rank-1
    /// reconstruction score on non-anomalous flights, and the smallest score
    /// on its anomaly flights.
    std::vector<std::vector<double>> normal_q95;
    std::vector<std::vector<double>> min_planted_score;
    bool planted_scores_exceed_q95 = false;
};

struct Fleet {
    precursor::Fleet panels;
    std::vector<EventRecord> events;
    Manifest manifest;
};

/// Parameter name of member `j` of group `g`: "g<g>_p<j>".
std::string parameter_name(int g, int j);
/// Unit id of unit `u`: "U000".
std::string unit_name(int u);

/// Deterministic given cfg.seed. Throws InputError for an invalid config or
/// when the events cannot be placed with the minimum spacing.
Fleet generate_fleet(const SimConfig& cfg);

}  // namespace precursor::sim
