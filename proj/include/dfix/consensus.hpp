#pragma once

#include <Eigen/Dense>

#include "dfix/graph.hpp"

namespace dfix {

/// Row-stochastic averaging matrix aligned with a communication graph:
/// entry (i, j) is positive exactly when j can send to i (j in O_i).
struct WeightMatrix {
    Eigen::MatrixXd entries;
    double w_min = 0.0;  ///< smallest positive entry

    [[nodiscard]] int size() const { return static_cast<int>(entries.rows()); }
};

/// Metropolis weights on a symmetric graph: w_ij = 1/(1 + max(deg_i, deg_j))
/// for neighbours j != i (degrees without the self-loop), and the diagonal
/// tops each row up to 1. The result is symmetric, hence doubly stochastic.
/// On an m-regular graph every supported entry equals 1/(m+1).
///
/// Throws std::invalid_argument if the graph is not symmetric.
[[nodiscard]] WeightMatrix metropolis_weights(const Graph& g);

/// Checks that `entries` is a valid weight matrix for `g`: nonnegative, rows
/// summing to 1 within 1e-12, and positive entries exactly on the in-edge
/// pattern of g (including the diagonal). Returns the smallest positive
/// entry; throws ValidationError naming the offending row or entry.
double validate_weights(const Eigen::MatrixXd& entries, const Graph& g);

}  // namespace dfix
