#include "precursor/detect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace precursor {
namespace {

constexpr double kDegenerateGap = 1e-10;

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    }
    if (v[best] < 0.0) v = -v;
}

struct EigenPair {
    double value;
    Eigen::VectorXd vector;
};

bool lexicographically_greater(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

}  // namespace

std::string SubspaceDetector::alarm_id() const {
    char q[32];
    std::snprintf(q, sizeof q, "%g", quantile);
    return "pca:" + (group.empty() ? std::string{} : group.front()) + "/r" + std::to_string(rank) + "/q" + q;
}

RowMask select_normal_regime(const TelemetryPanel& panel, std::span<const EventRecord> events, Flight before,
                             Flight after) {
    if (before < 0 || after < 0) {
        throw InputError("normal regime margins must be >= 0");
    }
    const auto own = events_of(events, panel.unit_id());
    RowMask mask(panel.rows(), true);
    for (std::size_t r = 0; r < panel.rows(); ++r) {
        const Flight t = panel.flight(r);
        for (const auto& e : own) {
            if (!(t <= e.onset - before || t >= e.end + after)) {
                mask[r] = false;
                break;
            }
        }
    }
    if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) {
        throw DataError("no normal regime");
    }
    return mask;
}

FleetMask select_normal_regime(std::span<const TelemetryPanel> fleet, std::span<const EventRecord> events,
                               Flight before, Flight after) {
    FleetMask masks;
    bool any = false;
    for (const auto& panel : fleet) {
        try {
            masks.push_back(select_normal_regime(panel, events, before, after));
            any = true;
        } catch (const DataError&) {
            masks.emplace_back(panel.rows(), false);
        }
    }
    if (!any) {
        throw DataError("no normal regime");
    }
    return masks;
}

SubspaceDetector fit_subspace(std::span<const TelemetryPanel> fleet, std::span<const RowMask> masks,
                              const std::vector<std::string>& group, int rank) {
    const auto d = static_cast<Eigen::Index>(group.size());
    if (rank < 1 || rank > d) {
        throw InputError("rank must lie in [1, group size]");
    }
    if (masks.size() != fleet.size()) {
        throw InputError("row masks do not match the fleet");
    }
    std::vector<Eigen::VectorXd> rows;
    for (std::size_t u = 0; u < fleet.size(); ++u) {
        const auto& panel = fleet[u];
        std::vector<std::size_t> cols;
        for (const auto& name : group) cols.push_back(panel.require_column(name));
        for (std::size_t r = 0; r < panel.rows(); ++r) {
            if (!masks[u][r]) continue;
            Eigen::VectorXd x(d);
            bool complete = true;
            for (Eigen::Index k = 0; k < d && complete; ++k) {
                const auto& v = panel.at(r, cols[static_cast<std::size_t>(k)]);
                if (v) {
                    x[k] = *v;
                } else {
                    complete = false;
                }
            }
            if (complete) rows.push_back(std::move(x));
        }
    }
    if (rows.size() < static_cast<std::size_t>(rank) + 1) {
        throw DataError("insufficient normal data");
    }

    const double n = static_cast<double>(rows.size());
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (const auto& x : rows) mean += x;
    mean /= n;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (const auto& x : rows) {
        const Eigen::VectorXd c = x - mean;
        cov.selfadjointView<Eigen::Lower>().rankUpdate(c);
    }
    cov = cov.selfadjointView<Eigen::Lower>();
    cov /= n;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) {
        throw DataError("eigendecomposition failed");
    }
    std::vector<EigenPair> pairs;
    for (Eigen::Index i = 0; i < d; ++i) {
        Eigen::VectorXd v = solver.eigenvectors().col(i);
        fix_sign(v);
        pairs.push_back({std::max(solver.eigenvalues()[i], 0.0), std::move(v)});
    }
    std::sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) { return a.value > b.value; });
    // Near-degenerate runs are ordered by their basis vectors.
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i + 1;
        while (j < pairs.size() && pairs[j - 1].value - pairs[j].value < kDegenerateGap) ++j;
        std::stable_sort(pairs.begin() + static_cast<std::ptrdiff_t>(i), pairs.begin() + static_cast<std::ptrdiff_t>(j),
                         [](const EigenPair& a, const EigenPair& b) { return lexicographically_greater(a.vector, b.vector); });
        i = j;
    }

    SubspaceDetector det;
    det.group = group;
    det.rank = rank;
    det.mean = std::move(mean);
    det.basis.resize(d, rank);
    det.eigenvalues.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        det.eigenvalues[i] = pairs[static_cast<std::size_t>(i)].value;
        if (i < rank) det.basis.col(i) = pairs[static_cast<std::size_t>(i)].vector;
    }
    return det;
}

SubspaceDetector fit_subspace(const TelemetryPanel& panel, const RowMask& rows, const std::vector<std::string>& group,
                              int rank) {
    const std::vector<RowMask> masks{rows};
    return fit_subspace(std::span<const TelemetryPanel>(&panel, 1), masks, group, rank);
}

double reconstruction_error(const SubspaceDetector& det, const Eigen::VectorXd& x) {
    const Eigen::VectorXd c = x - det.mean;
    const Eigen::VectorXd residual = c - det.basis * (det.basis.transpose() * c);
    return residual.squaredNorm();
}

ScoreSeries score_reconstruction(const SubspaceDetector& det, const TelemetryPanel& panel) {
    std::vector<std::size_t> cols;
    for (const auto& name : det.group) cols.push_back(panel.require_column(name));
    ScoreSeries out{panel.unit_id(), panel.flights(), std::vector<Value>(panel.rows())};
    const auto d = static_cast<Eigen::Index>(cols.size());
    Eigen::VectorXd x(d);
    for (std::size_t r = 0; r < panel.rows(); ++r) {
        bool complete = true;
        for (Eigen::Index k = 0; k < d && complete; ++k) {
            const auto& v = panel.at(r, cols[static_cast<std::size_t>(k)]);
            if (v) {
                x[k] = *v;
            } else {
                complete = false;
            }
        }
        if (complete) out.values[r] = reconstruction_error(det, x);
    }
    return out;
}

double fit_threshold(std::span<const Value> scores, double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw InputError("quantile must lie in (0, 1)");
    }
    std::vector<double> xs;
    for (const auto& s : scores) {
        if (s) xs.push_back(*s);
    }
    if (xs.empty()) {
        throw DataError("no non-missing training scores");
    }
    const double n = static_cast<double>(xs.size());
    // The epsilon keeps q*N that is an integer up to rounding from jumping a rank.
    auto k = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
    k = std::clamp<std::size_t>(k, 1, xs.size());
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k - 1), xs.end());
    return xs[k - 1];
}

std::vector<Value> masked_scores(std::span<const ScoreSeries> scores, std::span<const RowMask> masks) {
    std::vector<Value> out;
    for (std::size_t u = 0; u < scores.size(); ++u) {
        for (std::size_t r = 0; r < scores[u].values.size(); ++r) {
            if (masks[u][r]) out.push_back(scores[u].values[r]);
        }
    }
    return out;
}

AlarmSeries binarize(const SubspaceDetector& det, std::span<const ScoreSeries> scores) {
    if (!det.threshold) {
        throw InputError("detector threshold not set");
    }
    AlarmSeries alarm{det.alarm_id(), {}};
    for (const auto& s : scores) {
        auto& fires = alarm.firings[s.unit_id];
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (s.values[i] && *s.values[i] > *det.threshold) fires.push_back(s.flights[i]);
        }
    }
    return alarm;
}

}  // namespace precursor
