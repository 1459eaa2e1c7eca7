#include "precursor/config.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>

namespace precursor {
namespace {

void reject_unknown(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
        throw InputError(where + ": expected an object");
    }
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (!keys.contains(key)) {
            throw InputError("unknown config key '" + (where.empty() ? key : where + "." + key) + "'");
        }
    }
}

template <typename T>
void read(const Json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InputError("config key '" + where + "." + key + "' has the wrong type");
    }
}

std::string resolve(const std::string& path, const std::string& base) {
    if (path.empty() || base.empty() || std::filesystem::path(path).is_absolute()) return path;
    return (std::filesystem::path(base) / path).lexically_normal().string();
}

}  // namespace

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open config '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("config '" + path + "': " + e.what());
    }
}

RunConfig parse_run_config(const Json& j, const std::string& base_dir) {
    RunConfig cfg;
    reject_unknown(j, "", {"io", "match", "detect", "grouping", "filter", "target", "eval"});
    if (j.contains("io")) {
        const auto& s = j.at("io");
        reject_unknown(s, "io", {"telemetry", "events", "outdir"});
        read(s, "telemetry", cfg.io.telemetry, "io");
        read(s, "events", cfg.io.events, "io");
        read(s, "outdir", cfg.io.outdir, "io");
        cfg.io.telemetry = resolve(cfg.io.telemetry, base_dir);
        cfg.io.events = resolve(cfg.io.events, base_dir);
        cfg.io.outdir = resolve(cfg.io.outdir, base_dir);
    }
    auto& p = cfg.pipeline;
    if (j.contains("match")) {
        const auto& s = j.at("match");
        reject_unknown(s, "match", {"w", "h", "m"});
        read(s, "w", p.match.w, "match");
        read(s, "h", p.match.h, "match");
        read(s, "m", p.match.m, "match");
    }
    p.match.validate();
    if (j.contains("detect")) {
        const auto& s = j.at("detect");
        reject_unknown(s, "detect", {"rank", "quantile", "quantile_overrides", "normal_before", "normal_after"});
        read(s, "rank", p.detect.rank, "detect");
        read(s, "quantile", p.detect.quantile, "detect");
        read(s, "quantile_overrides", p.detect.quantile_overrides, "detect");
        read(s, "normal_before", p.detect.normal_before, "detect");
        read(s, "normal_after", p.detect.normal_after, "detect");
    }
    if (p.detect.rank < 1) throw InputError("detect.rank must be >= 1");
    if (!(p.detect.quantile > 0.0 && p.detect.quantile < 1.0)) throw InputError("detect.quantile must lie in (0, 1)");
    for (const auto& [name, q] : p.detect.quantile_overrides) {
        if (!(q > 0.0 && q < 1.0)) throw InputError("quantile override for '" + name + "' must lie in (0, 1)");
    }
    if (p.detect.normal_before < 0 || p.detect.normal_after < 0) {
        throw InputError("detect.normal_before/normal_after must be >= 0");
    }
    if (j.contains("grouping")) {
        const auto& s = j.at("grouping");
        reject_unknown(s, "grouping", {"measure", "rho"});
        std::string measure = to_string(p.grouping.measure);
        read(s, "measure", measure, "grouping");
        p.grouping.measure = parse_measure(measure);
        read(s, "rho", p.grouping.rho, "grouping");
    }
    if (!(p.grouping.rho > 0.0)) throw InputError("grouping.rho must be > 0");
    if (p.grouping.measure == DependenceMeasure::Pearson && p.grouping.rho > 1.0) {
        throw InputError("grouping.rho must lie in (0, 1] for pearson");
    }
    if (j.contains("filter")) {
        const auto& s = j.at("filter");
        reject_unknown(s, "filter", {"kind", "alpha", "theta", "max_size"});
        std::string kind = to_string(p.search.filter);
        read(s, "kind", kind, "filter");
        p.search.filter = parse_filter(kind);
        read(s, "alpha", p.search.alpha, "filter");
        read(s, "theta", p.search.theta, "filter");
        read(s, "max_size", p.search.max_size, "filter");
    }
    if (!(p.search.alpha > 0.0 && p.search.alpha <= 1.0)) throw InputError("filter.alpha must lie in (0, 1]");
    if (p.search.theta < 0.0) throw InputError("filter.theta must be >= 0");
    if (p.search.max_size < 1 || p.search.max_size > 3) throw InputError("filter.max_size must lie in [1, 3]");
    if (j.contains("target")) {
        const auto& s = j.at("target");
        reject_unknown(s, "target", {"code_prefix"});
        read(s, "code_prefix", p.code_prefix, "target");
    }
    if (j.contains("eval")) {
        const auto& s = j.at("eval");
        reject_unknown(s, "eval", {"tolerance", "lag_depth"});
        read(s, "tolerance", cfg.eval.tolerance, "eval");
        read(s, "lag_depth", cfg.eval.lag_depth, "eval");
    }
    if (cfg.eval.tolerance < 0) throw InputError("eval.tolerance must be >= 0");
    if (cfg.eval.lag_depth < 0) throw InputError("eval.lag_depth must be >= 0");
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    return parse_run_config(read_json_file(path), std::filesystem::path(path).parent_path().string());
}

Json to_json(const RunConfig& cfg) {
    const auto& p = cfg.pipeline;
    return Json{
        {"io", {{"telemetry", cfg.io.telemetry}, {"events", cfg.io.events}, {"outdir", cfg.io.outdir}}},
        {"match", {{"w", p.match.w}, {"h", p.match.h}, {"m", p.match.m}}},
        {"detect",
         {{"rank", p.detect.rank},
          {"quantile", p.detect.quantile},
          {"quantile_overrides", p.detect.quantile_overrides},
          {"normal_before", p.detect.normal_before},
          {"normal_after", p.detect.normal_after}}},
        {"grouping", {{"measure", to_string(p.grouping.measure)}, {"rho", p.grouping.rho}}},
        {"filter",
         {{"kind", to_string(p.search.filter)},
          {"alpha", p.search.alpha},
          {"theta", p.search.theta},
          {"max_size", p.search.max_size}}},
        {"target", {{"code_prefix", p.code_prefix}}},
        {"eval", {{"tolerance", cfg.eval.tolerance}, {"lag_depth", cfg.eval.lag_depth}}},
    };
}

sim::SimConfig parse_sim_config(const Json& j) {
    sim::SimConfig cfg;
    reject_unknown(j, "", {"units", "flights_per_unit", "groups", "planted", "events_per_unit", "units_with_events",
                           "event_code", "seed"});
    read(j, "units", cfg.units, "");
    read(j, "flights_per_unit", cfg.flights_per_unit, "");
    read(j, "events_per_unit", cfg.events_per_unit, "");
    read(j, "units_with_events", cfg.units_with_events, "");
    read(j, "event_code", cfg.event_code, "");
    read(j, "seed", cfg.seed, "");
    if (j.contains("groups")) {
        cfg.groups.clear();
        for (const auto& g : j.at("groups")) {
            reject_unknown(g, "groups[]", {"size", "correlation"});
            sim::GroupSpec spec;
            read(g, "size", spec.size, "groups[]");
            read(g, "correlation", spec.correlation, "groups[]");
            cfg.groups.push_back(spec);
        }
    }
    if (j.contains("planted")) {
        cfg.planted.clear();
        for (const auto& p : j.at("planted")) {
            reject_unknown(p, "planted[]", {"groups", "lead_lo", "lead_hi", "magnitude"});
            sim::PlantedSpec spec;
            read(p, "groups", spec.groups, "planted[]");
            read(p, "lead_lo", spec.lead_lo, "planted[]");
            read(p, "lead_hi", spec.lead_hi, "planted[]");
            read(p, "magnitude", spec.magnitude, "planted[]");
            cfg.planted.push_back(spec);
        }
    }
    cfg.validate();
    return cfg;
}

sim::SimConfig load_sim_config(const std::string& path) { return parse_sim_config(read_json_file(path)); }

Json to_json(const sim::SimConfig& cfg) {
    Json groups = Json::array();
    for (const auto& g : cfg.groups) groups.push_back(Json{{"size", g.size}, {"correlation", g.correlation}});
    Json planted = Json::array();
    for (const auto& p : cfg.planted) {
        planted.push_back(
            Json{{"groups", p.groups}, {"lead_lo", p.lead_lo}, {"lead_hi", p.lead_hi}, {"magnitude", p.magnitude}});
    }
    return Json{{"units", cfg.units},
                {"flights_per_unit", cfg.flights_per_unit},
                {"groups", groups},
                {"planted", planted},
                {"events_per_unit", cfg.events_per_unit},
                {"units_with_events", cfg.units_with_events},
                {"event_code", cfg.event_code},
                {"seed", cfg.seed}};
}

}  // namespace precursor
