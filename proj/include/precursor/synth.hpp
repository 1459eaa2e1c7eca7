#pragma once

#include <span>
#include <string>
#include <vector>

#include "precursor/core.hpp"
#include "precursor/matching.hpp"

namespace precursor {

enum class FilterKind { Hard, Soft };

std::string to_string(FilterKind k);
FilterKind parse_filter(const std::string& s);

struct SearchConfig {
    double alpha = 0.05;
    FilterKind filter = FilterKind::Hard;
    double theta = 2.0;
    int max_size = 2;
    unsigned threads = 1;
};

/// An AND-combination of elementary alarms that passed the selection.
struct Combination {
    std::vector<std::string> members;  // sorted alarm ids
    AlarmSeries composed;
    MatchStats stats;
    FilterKind provenance = FilterKind::Hard;
};

/// Selected combinations for one target and their OR-pooled warning signal.
struct PrecursorSet {
    std::string target;
    std::vector<Combination> combinations;
    AlarmSeries pooled;
    std::optional<MatchStats> pooled_stats;
};

/// Per-unit intersection; id = sorted member ids joined by '&'.
/// Units present in only some members get an empty set.
AlarmSeries compose_and(std::span<const AlarmSeries> alarms);

/// Per-unit union of the composed combination signals.
AlarmSeries pool_or(const PrecursorSet& pset);
AlarmSeries pool_or(std::span<const AlarmSeries> alarms, std::string alarm_id = "pooled");

/// Gates singletons with the t-test, enumerates every combination of 1..max_size
/// gated singletons, re-gates and filters each, drops combinations whose
/// composed firing set duplicates a smaller (then lexicographically smaller)
/// one, and ranks by fa/cf ascending, cf descending, id ascending.
PrecursorSet search_combinations(std::span<const AlarmSeries> pool, const PeriodLayout& layout,
                                 const SearchConfig& cfg, std::string target = {});

/// Rebuilds the composed and pooled signals of `pset` on other alarm data
/// (same alarm ids, e.g. a held-out unit).
AlarmSeries apply_precursors(const PrecursorSet& pset, std::span<const AlarmSeries> pool);

}  // namespace precursor
