#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "precursor/core.hpp"

namespace precursor {

/// Low-rank linear model of one parameter group fitted on normal-regime rows.
///
/// The anomaly score of an observation x is the squared norm of the part of
/// (x - mean) not explained by the principal directions:
///
///     score(x) = || (I - B B^T)(x - mean) ||^2
///
/// `eigenvalues` holds the full descending spectrum of the 1/N covariance
/// of the training rows, so the mean training score equals the sum of the
/// trailing d - rank eigenvalues.
struct SubspaceDetector {
    std::vector<std::string> group;
    Eigen::VectorXd mean;
    Eigen::MatrixXd basis;  // d x rank, orthonormal columns
    Eigen::VectorXd eigenvalues;
    int rank = 1;
    double quantile = 0.95;
    std::optional<double> threshold;

    std::size_t dimension() const { return group.size(); }
    /// "pca:<first member>" plus rank and quantile, e.g. "pca:EGT_1x/r1/q0.95".
    std::string alarm_id() const;
};

/// Rows of `panel` (one unit) that are far from every event:
/// t <= onset - before or t >= end + after, for every event of the unit.
/// Throws DataError("no normal regime") if nothing is selected.
RowMask select_normal_regime(const TelemetryPanel& panel, std::span<const EventRecord> events, Flight before,
                             Flight after);

/// Fleet form; only the union over all units must be non-empty.
FleetMask select_normal_regime(std::span<const TelemetryPanel> fleet, std::span<const EventRecord> events,
                               Flight before, Flight after);

/// Fits mean and the top-`rank` principal directions on masked rows that are
/// complete in the group's columns. Each basis vector's largest-magnitude
/// entry is made positive.
/// Throws DataError("insufficient normal data") with fewer than rank + 1 rows.
SubspaceDetector fit_subspace(std::span<const TelemetryPanel> fleet, std::span<const RowMask> masks,
                              const std::vector<std::string>& group, int rank);
SubspaceDetector fit_subspace(const TelemetryPanel& panel, const RowMask& rows, const std::vector<std::string>& group,
                              int rank);

/// Squared reconstruction error for a single observation.
double reconstruction_error(const SubspaceDetector& det, const Eigen::VectorXd& x);

/// Per-flight score; missing when any group value is missing.
ScoreSeries score_reconstruction(const SubspaceDetector& det, const TelemetryPanel& panel);

/// Nearest-rank empirical quantile: the ceil(q N)-th smallest non-missing score.
double fit_threshold(std::span<const Value> scores, double q);

/// Training scores gathered over the masked rows of every unit.
std::vector<Value> masked_scores(std::span<const ScoreSeries> scores, std::span<const RowMask> masks);

/// Fires where score > threshold; missing scores never fire.
AlarmSeries binarize(const SubspaceDetector& det, std::span<const ScoreSeries> scores);

}  // namespace precursor
