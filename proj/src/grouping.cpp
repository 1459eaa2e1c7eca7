#include "precursor/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace precursor {
namespace {

// Rank-based equal-frequency bin index; tied values share the bin of their
// first occurrence.
std::vector<std::size_t> equal_frequency_bins(const std::vector<double>& x, std::size_t bins) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<std::size_t> bin(n);
    std::size_t first_rank = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0 && x[order[k]] != x[order[k - 1]]) first_rank = k;
        bin[order[k]] = first_rank * bins / n;
    }
    return bin;
}

double plugin_mi(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, std::size_t bins) {
    const std::size_t n = a.size();
    std::vector<double> joint(bins * bins, 0.0), pa(bins, 0.0), pb(bins, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        joint[a[i] * bins + b[i]] += 1.0;
        pa[a[i]] += 1.0;
        pb[b[i]] += 1.0;
    }
    const double nn = static_cast<double>(n);
    double mi = 0.0;
    for (std::size_t i = 0; i < bins; ++i) {
        for (std::size_t j = 0; j < bins; ++j) {
            const double c = joint[i * bins + j];
            if (c == 0.0) continue;
            mi += (c / nn) * std::log(c * nn / (pa[i] * pb[j]));
        }
    }
    return std::max(mi, 0.0);
}

std::vector<std::vector<Value>> stacked_columns(std::span<const TelemetryPanel> fleet, std::span<const RowMask> masks) {
    if (fleet.empty()) return {};
    const std::size_t p = fleet.front().cols();
    std::vector<std::vector<Value>> cols(p);
    for (std::size_t u = 0; u < fleet.size(); ++u) {
        const auto& panel = fleet[u];
        if (panel.columns() != fleet.front().columns()) {
            throw InputError("unit '" + panel.unit_id() + "' has a different column set");
        }
        for (std::size_t r = 0; r < panel.rows(); ++r) {
            if (!masks.empty() && !masks[u][r]) continue;
            for (std::size_t c = 0; c < p; ++c) cols[c].push_back(panel.at(r, c));
        }
    }
    return cols;
}

}  // namespace

std::string to_string(DependenceMeasure m) { return m == DependenceMeasure::Pearson ? "pearson" : "mutual_info"; }

DependenceMeasure parse_measure(const std::string& s) {
    if (s == "pearson") return DependenceMeasure::Pearson;
    if (s == "mutual_info") return DependenceMeasure::MutualInfo;
    throw InputError("unknown dependence measure '" + s + "'");
}

std::optional<double> pearson(std::span<const Value> x, std::span<const Value> y) {
    double sx = 0.0, sy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] && y[i]) {
            sx += *x[i];
            sy += *y[i];
            ++n;
        }
    }
    if (n < 2) return std::nullopt;
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] && y[i]) {
            const double dx = *x[i] - mx;
            const double dy = *y[i] - my;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> mutual_information(std::span<const Value> x, std::span<const Value> y) {
    std::vector<double> a, b;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] && y[i]) {
            a.push_back(*x[i]);
            b.push_back(*y[i]);
        }
    }
    if (a.size() < 2) return std::nullopt;
    const auto bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(a.size()))));
    return plugin_mi(equal_frequency_bins(a, bins), equal_frequency_bins(b, bins), bins);
}

DependenceMatrix compute_dependence(std::span<const TelemetryPanel> fleet, DependenceMeasure measure,
                                    std::span<const RowMask> masks) {
    DependenceMatrix dep;
    dep.measure = measure;
    if (fleet.empty()) return dep;
    dep.names = fleet.front().columns();
    const auto cols = stacked_columns(fleet, masks);
    const std::size_t p = cols.size();
    std::size_t rows = cols.empty() ? 0 : cols.front().size();
    if (rows < 2) {
        throw DataError("dependence needs at least 2 rows");
    }
    dep.values.assign(p * p, std::nullopt);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            std::optional<double> v;
            if (measure == DependenceMeasure::Pearson) {
                v = i == j ? std::optional<double>(1.0) : pearson(cols[i], cols[j]);
            } else {
                v = mutual_information(cols[i], cols[j]);
            }
            dep.values[i * p + j] = v;
            dep.values[j * p + i] = v;
        }
    }
    return dep;
}

DependenceMatrix compute_dependence(const TelemetryPanel& panel, DependenceMeasure measure) {
    return compute_dependence(std::span<const TelemetryPanel>(&panel, 1), measure);
}

ParameterGrouping build_groups(const DependenceMatrix& dep, double rho) {
    const std::size_t p = dep.size();
    std::vector<std::size_t> component(p, p);
    std::size_t next = 0;
    for (std::size_t s = 0; s < p; ++s) {
        if (component[s] != p) continue;
        std::vector<std::size_t> stack{s};
        component[s] = next;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < p; ++j) {
                if (component[j] != p || i == j) continue;
                const auto& v = dep.at(i, j);
                if (!v) continue;
                const double strength = dep.measure == DependenceMeasure::Pearson ? std::abs(*v) : *v;
                if (strength >= rho) {
                    component[j] = next;
                    stack.push_back(j);
                }
            }
        }
        ++next;
    }
    ParameterGrouping out{dep.measure, rho, std::vector<std::vector<std::string>>(next)};
    for (std::size_t i = 0; i < p; ++i) out.groups[component[i]].push_back(dep.names[i]);
    for (auto& g : out.groups) std::sort(g.begin(), g.end());
    std::sort(out.groups.begin(), out.groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

}  // namespace precursor
