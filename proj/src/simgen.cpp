#include "precursor/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "precursor/detect.hpp"

namespace precursor::sim {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(index)));
}

Flight max_lead(const SimConfig& cfg) {
    Flight lead = 0;
    for (const auto& p : cfg.planted) lead = std::max(lead, p.lead_hi);
    return lead;
}

}  // namespace

std::string parameter_name(int g, int j) { return "g" + std::to_string(g) + "_p" + std::to_string(j); }

std::string unit_name(int u) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "U%03d", u);
    return buf;
}

Flight SimConfig::min_spacing() const { return 2 * (max_lead(*this) + 10); }

void SimConfig::validate() const {
    if (units < 1) throw InputError("units must be >= 1");
    if (flights_per_unit < 2) throw InputError("flights_per_unit must be >= 2");
    if (groups.empty()) throw InputError("at least one group is required");
    for (const auto& g : groups) {
        if (g.size < 2) throw InputError("group size must be >= 2");
        if (!(g.correlation >= 0.0 && g.correlation < 1.0)) throw InputError("group correlation must lie in [0, 1)");
    }
    if (events_per_unit < 0) throw InputError("events_per_unit must be >= 0");
    if (events_per_unit > 0 && planted.empty()) throw InputError("events need at least one planted precursor");
    if (units_with_events > units) throw InputError("units_with_events exceeds units");
    for (const auto& p : planted) {
        if (p.groups.empty() || p.groups.size() > 3) throw InputError("a planted precursor spans 1 to 3 groups");
        for (int g : p.groups) {
            if (g < 0 || g >= static_cast<int>(groups.size())) throw InputError("planted group index out of range");
        }
        if (p.lead_lo < 1 || p.lead_hi < p.lead_lo) throw InputError("planted lead range must satisfy 1 <= lo <= hi");
        if (p.magnitude < 0.0) throw InputError("planted magnitude must be >= 0");
    }
}

Fleet generate_fleet(const SimConfig& cfg) {
    cfg.validate();
    const int n_groups = static_cast<int>(cfg.groups.size());
    const Flight T = cfg.flights_per_unit;

    // Fleet-wide structure: parameter offsets/scales and anomaly directions.
    auto structure = stream(cfg.seed, 0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> offset(-10.0, 10.0);
    std::uniform_real_distribution<double> log_scale(-1.0, 1.0);
    std::vector<std::string> columns;
    std::vector<std::vector<double>> centre(n_groups), scale(n_groups), direction(n_groups);
    for (int g = 0; g < n_groups; ++g) {
        const int d = cfg.groups[g].size;
        double mean = 0.0;
        for (int j = 0; j < d; ++j) {
            columns.push_back(parameter_name(g, j));
            centre[g].push_back(offset(structure));
            scale[g].push_back(std::exp(log_scale(structure)));
            direction[g].push_back(gauss(structure));
            mean += direction[g].back();
        }
        // Remove the component along the shared factor (1,...,1)/sqrt(d).
        mean /= d;
        double norm = 0.0;
        for (double& v : direction[g]) {
            v -= mean;
            norm += v * v;
        }
        norm = std::sqrt(norm);
        for (double& v : direction[g]) v /= norm;
    }

    const int with_events = cfg.units_with_events < 0 ? cfg.units : cfg.units_with_events;
    const Flight spacing = cfg.min_spacing();
    const Flight lo = max_lead(cfg) + 1;
    const Flight hi = T;
    const Flight n_ev = cfg.events_per_unit;
    const Flight slack = n_ev == 0 ? 0 : (hi - lo) - (n_ev - 1) * spacing;
    if (n_ev > 0 && with_events > 0 && slack < 0) {
        throw InputError("cannot place " + std::to_string(n_ev) + " events with spacing " + std::to_string(spacing) +
                         " in " + std::to_string(T) + " flights");
    }

    Fleet out;
    out.manifest.seed = cfg.seed;
    for (const auto& p : cfg.planted) {
        std::vector<std::vector<std::string>> names;
        for (int g : p.groups) {
            std::vector<std::string> members;
            for (int j = 0; j < cfg.groups[g].size; ++j) members.push_back(parameter_name(g, j));
            names.push_back(std::move(members));
        }
        out.manifest.planted_groups.push_back(std::move(names));
    }

    std::vector<TelemetryPanel> panels;
    std::vector<RowMask> clean_rows;
    std::size_t event_counter = 0;
    for (int u = 0; u < cfg.units; ++u) {
        auto rng = stream(cfg.seed, static_cast<std::uint64_t>(u) + 1);
        const std::string unit = unit_name(u);

        // anomaly[g] holds the flights where group g is displaced.
        std::vector<std::vector<Flight>> anomaly(n_groups);
        if (u < with_events && n_ev > 0) {
            std::uniform_int_distribution<Flight> pick(0, slack);
            std::vector<Flight> offsets(static_cast<std::size_t>(n_ev));
            for (auto& o : offsets) o = pick(rng);
            std::sort(offsets.begin(), offsets.end());
            for (Flight i = 0; i < n_ev; ++i) {
                const Flight onset = lo + offsets[static_cast<std::size_t>(i)] + i * spacing;
                const std::size_t which = event_counter++ % cfg.planted.size();
                const auto& p = cfg.planted[which];
                std::uniform_int_distribution<Flight> lead_dist(p.lead_lo, p.lead_hi);
                const Flight lead = lead_dist(rng);
                out.events.push_back({unit, onset, onset + 1, cfg.event_code});
                out.manifest.events.push_back({unit, onset, which, lead, onset - lead});
                for (int g : p.groups) anomaly[g].push_back(onset - lead);
            }
        }

        std::vector<Flight> flights(static_cast<std::size_t>(T));
        std::vector<Value> values;
        values.reserve(static_cast<std::size_t>(T) * columns.size());
        RowMask clean(static_cast<std::size_t>(T), true);
        for (Flight t = 1; t <= T; ++t) {
            flights[static_cast<std::size_t>(t - 1)] = t;
            for (int g = 0; g < n_groups; ++g) {
                const double rho = cfg.groups[g].correlation;
                const double shared = gauss(rng);
                const bool displaced = std::find(anomaly[g].begin(), anomaly[g].end(), t) != anomaly[g].end();
                double magnitude = 0.0;
                if (displaced) {
                    clean[static_cast<std::size_t>(t - 1)] = false;
                    for (const auto& pe : out.manifest.events) {
                        if (pe.unit_id == unit && pe.anomaly_flight == t) {
                            magnitude = std::max(magnitude, cfg.planted[pe.planted].magnitude);
                        }
                    }
                }
                for (int j = 0; j < cfg.groups[g].size; ++j) {
                    double x = std::sqrt(rho) * shared + std::sqrt(1.0 - rho) * gauss(rng);
                    if (displaced) x += magnitude * direction[g][j];
                    values.push_back(centre[g][j] + scale[g][j] * x);
                }
            }
        }
        panels.emplace_back(unit, std::move(flights), std::vector<std::string>(static_cast<std::size_t>(T), "1"),
                            columns, std::move(values));
        clean_rows.push_back(std::move(clean));
    }
    out.panels = make_fleet(std::move(panels));

    // Record how the planted flights score under a rank-1 model of clean data.
    bool all_exceed = !out.manifest.events.empty();
    const auto stats = fit_zscore(out.panels, clean_rows);
    precursor::Fleet normalized;
    for (const auto& p : out.panels) normalized.push_back(apply_zscore(p, stats));
    for (std::size_t k = 0; k < cfg.planted.size(); ++k) {
        std::vector<double> q95s, mins;
        for (const auto& members : out.manifest.planted_groups[k]) {
            const auto det = fit_subspace(normalized, clean_rows, members, 1);
            std::vector<ScoreSeries> scores;
            for (const auto& p : normalized) scores.push_back(score_reconstruction(det, p));
            const double q95 = fit_threshold(masked_scores(scores, clean_rows), 0.95);
            double lowest = std::numeric_limits<double>::infinity();
            for (const auto& pe : out.manifest.events) {
                if (pe.planted != k) continue;
                const auto u = static_cast<std::size_t>(std::stoi(pe.unit_id.substr(1)));
                const auto row = out.panels[u].row_of(pe.anomaly_flight);
                lowest = std::min(lowest, *scores[u].values[*row]);
            }
            if (!(lowest > q95)) all_exceed = false;
            q95s.push_back(q95);
            mins.push_back(lowest);
        }
        out.manifest.normal_q95.push_back(std::move(q95s));
        out.manifest.min_planted_score.push_back(std::move(mins));
    }
    out.manifest.planted_scores_exceed_q95 = all_exceed;
    return out;
}

}  // namespace precursor::sim
