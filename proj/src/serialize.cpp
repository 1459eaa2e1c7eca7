#include "precursor/serialize.hpp"

#include <cmath>
#include <limits>

namespace precursor {

Json real_json(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double real_from_json(const Json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw InputError("bad real '" + s + "'");
    }
    return j.get<double>();
}

Json to_json(const ParameterGrouping& g) {
    return Json{{"measure", to_string(g.measure)}, {"rho", g.rho}, {"groups", g.groups}};
}

Json to_json(const SubspaceDetector& det) {
    Json basis = Json::array();
    for (Eigen::Index r = 0; r < det.basis.rows(); ++r) {
        for (Eigen::Index c = 0; c < det.basis.cols(); ++c) basis.push_back(det.basis(r, c));
    }
    Json mean = Json::array();
    for (Eigen::Index i = 0; i < det.mean.size(); ++i) mean.push_back(det.mean[i]);
    Json eig = Json::array();
    for (Eigen::Index i = 0; i < det.eigenvalues.size(); ++i) eig.push_back(det.eigenvalues[i]);
    return Json{{"alarm_id", det.alarm_id()},
                {"group", det.group},
                {"mean", mean},
                {"basis", basis},
                {"rank", det.rank},
                {"q", det.quantile},
                {"threshold", det.threshold ? Json(*det.threshold) : Json(nullptr)},
                {"eigenvalues", eig}};
}

SubspaceDetector detector_from_json(const Json& j) {
    SubspaceDetector det;
    det.group = j.at("group").get<std::vector<std::string>>();
    det.rank = j.at("rank").get<int>();
    det.quantile = j.at("q").get<double>();
    if (!j.at("threshold").is_null()) det.threshold = j.at("threshold").get<double>();
    const auto d = static_cast<Eigen::Index>(det.group.size());
    const auto mean = j.at("mean").get<std::vector<double>>();
    const auto basis = j.at("basis").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(mean.size()) != d || static_cast<Eigen::Index>(basis.size()) != d * det.rank) {
        throw InputError("detector JSON: inconsistent dimensions");
    }
    det.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), d);
    det.basis.resize(d, det.rank);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < det.rank; ++c) det.basis(r, c) = basis[static_cast<std::size_t>(r * det.rank + c)];
    }
    if (j.contains("eigenvalues")) {
        const auto eig = j.at("eigenvalues").get<std::vector<double>>();
        det.eigenvalues = Eigen::Map<const Eigen::VectorXd>(eig.data(), static_cast<Eigen::Index>(eig.size()));
    }
    return det;
}

Json to_json(const MatchCounts& c) {
    return Json{{"K_plus", c.k_plus},   {"K_minus", c.k_minus}, {"S_plus", c.s_plus},
                {"S_minus", c.s_minus}, {"U_plus", c.u_plus},   {"U_minus", c.u_minus},
                {"S_irrelevant", c.s_irrelevant}};
}

Json to_json(const MatchStats& s) {
    Json j = to_json(s.counts);
    j["fa"] = real_json(s.fa);
    j["cf"] = real_json(s.cf);
    j["fa_over_cf"] = real_json(s.fa_over_cf);
    j["p_value"] = real_json(s.p_value);
    return j;
}

Json to_json(const AlarmSeries& a) {
    Json firings = Json::object();
    for (const auto& [unit, ts] : a.firings) firings[unit] = ts;
    return Json{{"alarm_id", a.alarm_id}, {"firings", firings}};
}

Json to_json(const PrecursorSet& p) {
    Json combos = Json::array();
    for (const auto& c : p.combinations) {
        combos.push_back(Json{{"alarm_id", c.composed.alarm_id},
                              {"members", c.members},
                              {"provenance", to_string(c.provenance)},
                              {"stats", to_json(c.stats)}});
    }
    return Json{{"target", p.target},
                {"combinations", combos},
                {"pooled_alarm_id", p.pooled.alarm_id},
                {"pooled_stats", p.pooled_stats ? to_json(*p.pooled_stats) : Json(nullptr)}};
}

Json to_json(const FoldResult& f) {
    Json j{{"held_out_unit", f.held_out_unit}, {"skipped", f.skipped}};
    if (f.skipped) {
        j["skip_reason"] = f.skip_reason;
        return j;
    }
    j["counts"] = to_json(f.counts);
    j["stats"] = f.stats ? to_json(*f.stats) : Json(nullptr);
    j["precursors"] = to_json(f.precursors);
    Json fired = Json::array();
    for (const auto& [unit, ts] : f.held_out_signal.firings) {
        for (Flight t : ts) fired.push_back(t);
    }
    j["held_out_firings"] = fired;
    return j;
}

Json to_json(const CrossValidation& cv) {
    Json folds = Json::array();
    Json skipped = Json::array();
    for (const auto& f : cv.folds) {
        folds.push_back(Json{{"held_out_unit", f.held_out_unit},
                             {"skipped", f.skipped},
                             {"counts", f.skipped ? Json(nullptr) : to_json(f.counts)}});
        if (f.skipped) skipped.push_back(f.held_out_unit);
    }
    Json agg = to_json(cv.aggregate);
    if (cv.aggregate_stats) {
        agg["fa"] = real_json(cv.aggregate_stats->fa);
        agg["cf"] = real_json(cv.aggregate_stats->cf);
        agg["fa_over_cf"] = real_json(cv.aggregate_stats->fa_over_cf);
    } else {
        agg["fa"] = nullptr;
        agg["cf"] = nullptr;
        agg["fa_over_cf"] = nullptr;
    }
    return Json{{"folds", folds}, {"skipped", skipped}, {"aggregate", agg}};
}

Json to_json(const sim::Manifest& m) {
    Json events = Json::array();
    for (const auto& e : m.events) {
        events.push_back(Json{{"unit_id", e.unit_id},
                              {"onset", e.onset},
                              {"planted", e.planted},
                              {"lead", e.lead},
                              {"anomaly_flight", e.anomaly_flight}});
    }
    Json q95 = Json::array(), mins = Json::array();
    for (std::size_t k = 0; k < m.normal_q95.size(); ++k) {
        Json a = Json::array(), b = Json::array();
        for (double v : m.normal_q95[k]) a.push_back(real_json(v));
        for (double v : m.min_planted_score[k]) b.push_back(real_json(v));
        q95.push_back(a);
        mins.push_back(b);
    }
    return Json{{"seed", m.seed},
                {"planted_groups", m.planted_groups},
                {"events", events},
                {"normal_q95", q95},
                {"min_planted_score", mins},
                {"planted_scores_exceed_q95", m.planted_scores_exceed_q95}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace precursor
