#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "precursor/core.hpp"

namespace precursor {

enum class DependenceMeasure { Pearson, MutualInfo };

std::string to_string(DependenceMeasure m);
/// Accepts "pearson" and "mutual_info"; throws InputError otherwise.
DependenceMeasure parse_measure(const std::string& s);

/// Symmetric matrix of pairwise dependence; entries with fewer than two
/// complete pairs are missing.
struct DependenceMatrix {
    DependenceMeasure measure = DependenceMeasure::Pearson;
    std::vector<std::string> names;
    std::vector<std::optional<double>> values;  // row-major names.size()^2

    std::size_t size() const { return names.size(); }
    const std::optional<double>& at(std::size_t i, std::size_t j) const { return values[i * names.size() + j]; }
};

/// Partition of parameters into dependent groups. Members sorted; groups
/// ordered by their smallest member.
struct ParameterGrouping {
    DependenceMeasure measure = DependenceMeasure::Pearson;
    double rho = 0.7;
    std::vector<std::vector<std::string>> groups;
};

/// Pairwise-complete Pearson correlation of two columns; nullopt when fewer
/// than two complete pairs exist or either side has zero variance.
std::optional<double> pearson(std::span<const Value> x, std::span<const Value> y);

/// Plug-in mutual information (nats) over equal-frequency bins, ceil(sqrt(N))
/// bins per variable, computed on pairwise-complete rows.
std::optional<double> mutual_information(std::span<const Value> x, std::span<const Value> y);

/// Dependence over the rows of all units selected by `masks` (all rows when
/// `masks` is empty).
DependenceMatrix compute_dependence(std::span<const TelemetryPanel> fleet, DependenceMeasure measure,
                                    std::span<const RowMask> masks = {});
DependenceMatrix compute_dependence(const TelemetryPanel& panel, DependenceMeasure measure);

/// Connected components of the graph with edges |dep| >= rho (dep >= rho for
/// mutual information). Missing entries are non-edges.
ParameterGrouping build_groups(const DependenceMatrix& dep, double rho);

}  // namespace precursor
