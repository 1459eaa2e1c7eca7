#include "precursor/synth.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "precursor/parallel.hpp"

namespace precursor {
namespace {

std::string join_ids(const std::vector<std::string>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) out += '&';
        out += ids[i];
    }
    return out;
}

// All index subsets of {0..n-1} with sizes 1..max_size, in size then
// lexicographic order.
std::vector<std::vector<std::size_t>> enumerate_subsets(std::size_t n, int max_size) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t k = 1; k <= static_cast<std::size_t>(max_size) && k <= n; ++k) {
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            out.push_back(idx);
            std::size_t pos = k;
            while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
            if (pos == 0) break;
            ++idx[pos - 1];
            for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

bool smaller_member_set(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace

std::string to_string(FilterKind k) { return k == FilterKind::Hard ? "hard" : "soft"; }

FilterKind parse_filter(const std::string& s) {
    if (s == "hard") return FilterKind::Hard;
    if (s == "soft") return FilterKind::Soft;
    throw InputError("unknown filter kind '" + s + "'");
}

AlarmSeries compose_and(std::span<const AlarmSeries> alarms) {
    if (alarms.empty()) {
        throw InputError("compose_and needs at least one alarm");
    }
    std::vector<std::string> ids;
    std::set<std::string> units;
    for (const auto& a : alarms) {
        ids.push_back(a.alarm_id);
        for (const auto& [u, ts] : a.firings) units.insert(u);
    }
    std::sort(ids.begin(), ids.end());
    AlarmSeries out{join_ids(ids), {}};
    for (const auto& u : units) {
        std::vector<Flight> acc;
        bool first = true;
        for (const auto& a : alarms) {
            auto it = a.firings.find(u);
            if (it == a.firings.end()) {
                acc.clear();
                break;
            }
            if (first) {
                acc = it->second;
                first = false;
                continue;
            }
            std::vector<Flight> next;
            std::set_intersection(acc.begin(), acc.end(), it->second.begin(), it->second.end(),
                                  std::back_inserter(next));
            acc = std::move(next);
        }
        out.firings[u] = std::move(acc);
    }
    return out;
}

AlarmSeries pool_or(std::span<const AlarmSeries> alarms, std::string alarm_id) {
    AlarmSeries out{std::move(alarm_id), {}};
    for (const auto& a : alarms) {
        for (const auto& [u, ts] : a.firings) {
            auto& acc = out.firings[u];
            std::vector<Flight> merged;
            std::set_union(acc.begin(), acc.end(), ts.begin(), ts.end(), std::back_inserter(merged));
            acc = std::move(merged);
        }
    }
    return out;
}

AlarmSeries pool_or(const PrecursorSet& pset) {
    std::vector<AlarmSeries> composed;
    for (const auto& c : pset.combinations) composed.push_back(c.composed);
    return pool_or(composed, pset.target.empty() ? "pooled" : "pooled:" + pset.target);
}

PrecursorSet search_combinations(std::span<const AlarmSeries> pool, const PeriodLayout& layout,
                                 const SearchConfig& cfg, std::string target) {
    if (cfg.max_size < 1 || cfg.max_size > 3) {
        throw InputError("max_size must lie in [1, 3]");
    }
    PrecursorSet pset;
    pset.target = std::move(target);

    // Gate elementary alarms first; only gated alarms enter combinations.
    std::vector<std::optional<MatchStats>> single(pool.size());
    parallel_for(pool.size(), cfg.threads, [&](std::size_t i) { single[i] = match_stats(pool[i], layout); });
    std::vector<const AlarmSeries*> gated;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (gate_ttest(*single[i], cfg.alpha)) gated.push_back(&pool[i]);
    }
    std::sort(gated.begin(), gated.end(),
              [](const AlarmSeries* a, const AlarmSeries* b) { return a->alarm_id < b->alarm_id; });

    const auto subsets = enumerate_subsets(gated.size(), cfg.max_size);
    std::vector<std::optional<Combination>> results(subsets.size());
    parallel_for(subsets.size(), cfg.threads, [&](std::size_t s) {
        std::vector<AlarmSeries> members;
        for (std::size_t i : subsets[s]) members.push_back(*gated[i]);
        Combination c;
        for (const auto& m : members) c.members.push_back(m.alarm_id);
        std::sort(c.members.begin(), c.members.end());
        c.composed = compose_and(members);
        c.stats = match_stats(c.composed, layout);
        c.provenance = cfg.filter;
        if (!gate_ttest(c.stats, cfg.alpha)) return;
        const bool pass = cfg.filter == FilterKind::Hard ? hard_filter(c.stats, cfg.theta) : soft_filter(c.stats, cfg.theta);
        if (pass) results[s] = std::move(c);
    });

    // Keep one combination per distinct composed firing set.
    std::map<std::map<std::string, std::vector<Flight>>, std::size_t> best;
    for (std::size_t s = 0; s < results.size(); ++s) {
        if (!results[s]) continue;
        auto [it, inserted] = best.emplace(results[s]->composed.firings, s);
        if (!inserted && smaller_member_set(results[s]->members, results[it->second]->members)) {
            it->second = s;
        }
    }
    for (const auto& [firings, s] : best) pset.combinations.push_back(std::move(*results[s]));
    std::sort(pset.combinations.begin(), pset.combinations.end(), [](const Combination& a, const Combination& b) {
        if (a.stats.fa_over_cf != b.stats.fa_over_cf) return a.stats.fa_over_cf < b.stats.fa_over_cf;
        if (a.stats.cf != b.stats.cf) return a.stats.cf > b.stats.cf;
        return a.composed.alarm_id < b.composed.alarm_id;
    });

    pset.pooled = pool_or(pset);
    // Keep every unit visible in the pooled signal, even without firings.
    for (const auto& ul : layout.units) pset.pooled.firings.try_emplace(ul.unit_id);
    pset.pooled_stats = match_stats(pset.pooled, layout);
    return pset;
}

AlarmSeries apply_precursors(const PrecursorSet& pset, std::span<const AlarmSeries> pool) {
    std::map<std::string, const AlarmSeries*> by_id;
    for (const auto& a : pool) by_id[a.alarm_id] = &a;
    std::vector<AlarmSeries> composed;
    for (const auto& c : pset.combinations) {
        std::vector<AlarmSeries> members;
        for (const auto& id : c.members) {
            auto it = by_id.find(id);
            if (it == by_id.end()) {
                throw InputError("alarm '" + id + "' not available");
            }
            members.push_back(*it->second);
        }
        composed.push_back(compose_and(members));
    }
    AlarmSeries out = pool_or(composed, pset.pooled.alarm_id);
    for (const auto& a : pool) {
        for (const auto& [u, ts] : a.firings) out.firings.try_emplace(u);
    }
    return out;
}

}  // namespace precursor
