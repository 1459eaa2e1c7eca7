#pragma once

// Independent reference implementations used only by tests. None of these
// share code paths with the library routines they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "precursor/core.hpp"
#include "precursor/matching.hpp"

namespace oracle {

using precursor::Flight;

enum class Label { True, Irrelevant, False };

/// Labels every flight of [begin, end) by direct interval membership.
inline std::vector<Label> label_flights(Flight begin, Flight end, const std::vector<precursor::EventRecord>& events,
                                        const precursor::MatchParams& p) {
    std::vector<Label> labels;
    for (Flight t = begin; t < end; ++t) {
        Label l = Label::False;
        for (const auto& e : events) {
            if (t >= e.onset - p.h - p.w && t < e.onset - p.h) l = Label::True;
        }
        if (l != Label::True) {
            for (const auto& e : events) {
                if (t >= e.onset - p.h && t < e.end + p.m) l = Label::Irrelevant;
            }
        }
        labels.push_back(l);
    }
    return labels;
}

/// Brute-force counters: per-flight labels, segments found by scanning runs.
inline precursor::MatchCounts brute_force_counts(const std::map<std::string, std::vector<Flight>>& firings,
                                                 const std::vector<precursor::EventRecord>& events,
                                                 const precursor::MatchParams& p,
                                                 const std::map<std::string, precursor::FlightRange>& ranges) {
    precursor::MatchCounts c;
    for (const auto& [unit, range] : ranges) {
        std::vector<precursor::EventRecord> own;
        for (const auto& e : events) {
            if (e.unit_id == unit && e.onset >= range.begin && e.onset < range.end) own.push_back(e);
        }
        const auto labels = label_flights(range.begin, range.end, own, p);
        auto label_at = [&](Flight t) { return labels[static_cast<std::size_t>(t - range.begin)]; };

        std::vector<Flight> fires;
        if (auto it = firings.find(unit); it != firings.end()) fires = it->second;

        for (const auto& e : own) {
            bool nonempty = false, hit = false;
            for (Flight t = std::max(range.begin, e.onset - p.h - p.w); t < std::min(range.end, e.onset - p.h); ++t) {
                nonempty = true;
                if (std::find(fires.begin(), fires.end(), t) != fires.end()) hit = true;
            }
            if (nonempty) {
                ++c.k_plus;
                if (hit) ++c.u_plus;
            }
        }
        // Walk runs of False flights.
        bool in_run = false, run_hit = false;
        for (Flight t = range.begin; t <= range.end; ++t) {
            const bool is_false = t < range.end && label_at(t) == Label::False;
            if (is_false && !in_run) {
                in_run = true;
                run_hit = false;
            }
            if (!is_false && in_run) {
                ++c.k_minus;
                if (run_hit) ++c.u_minus;
                in_run = false;
            }
            if (is_false && std::find(fires.begin(), fires.end(), t) != fires.end()) run_hit = true;
        }
        for (Flight t : fires) {
            switch (label_at(t)) {
                case Label::True: ++c.s_plus; break;
                case Label::Irrelevant: ++c.s_irrelevant; break;
                case Label::False: ++c.s_minus; break;
            }
        }
    }
    return c;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.rbegin(), ev.rend());
    return ev;
}

/// 1/N covariance of row vectors.
inline std::vector<std::vector<double>> covariance(const std::vector<std::vector<double>>& rows) {
    const std::size_t d = rows.front().size();
    std::vector<double> mu(d, 0.0);
    for (const auto& r : rows)
        for (std::size_t k = 0; k < d; ++k) mu[k] += r[k];
    for (auto& m : mu) m /= static_cast<double>(rows.size());
    std::vector<std::vector<double>> c(d, std::vector<double>(d, 0.0));
    for (const auto& r : rows)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) c[i][j] += (r[i] - mu[i]) * (r[j] - mu[j]);
    for (auto& row : c)
        for (auto& v : row) v /= static_cast<double>(rows.size());
    return c;
}

/// Maximum bipartite matching between flags and onsets (|flag - onset| <= tol)
/// by augmenting paths.
inline std::size_t max_matching(const std::vector<Flight>& flags, const std::vector<Flight>& onsets, Flight tol) {
    std::vector<int> owner(onsets.size(), -1);
    std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t f, std::vector<bool>& seen) {
        for (std::size_t e = 0; e < onsets.size(); ++e) {
            if (seen[e] || std::abs(flags[f] - onsets[e]) > tol) continue;
            seen[e] = true;
            if (owner[e] < 0 || augment(static_cast<std::size_t>(owner[e]), seen)) {
                owner[e] = static_cast<int>(f);
                return true;
            }
        }
        return false;
    };
    std::size_t matched = 0;
    for (std::size_t f = 0; f < flags.size(); ++f) {
        std::vector<bool> seen(onsets.size(), false);
        if (augment(f, seen)) ++matched;
    }
    return matched;
}

}  // namespace oracle
