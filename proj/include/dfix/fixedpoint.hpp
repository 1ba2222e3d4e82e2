#pragma once

#include <Eigen/Dense>

#include "dfix/problems.hpp"

namespace dfix {

/// A fixed-point reformulation y = My + d of a linear system, carrying the
/// infinity-norm certificate mu = ||M||_inf. The iteration x <- Mx + d
/// contracts toward the solution whenever mu < 1.
struct FixedPointMap {
    Eigen::MatrixXd M;
    Eigen::VectorXd d;
    double mu = 0.0;  ///< max absolute row sum of M

    [[nodiscard]] int size() const { return static_cast<int>(M.rows()); }
};

/// Wraps an arbitrary (M, d) pair, computing the norm certificate.
[[nodiscard]] FixedPointMap make_fixed_point_map(Eigen::MatrixXd M, Eigen::VectorXd d);

/// Jacobi over-relaxation map M = I - alpha D^-1 A, d = alpha D^-1 b with
/// D = diag(A). alpha = 1 recovers plain Jacobi. Throws std::domain_error
/// naming the row if some a_ii is zero; alpha must be nonzero.
[[nodiscard]] FixedPointMap jor_map(const LinearSystem& sys, double alpha);

/// Relaxation parameter theta * 2 / ||D^-1 A||_inf. With theta = 1 this is
/// the largest alpha for which ||M||_inf <= 1, and the worst row reaches 1
/// exactly, so the default backs off slightly to keep the contraction
/// certificate valid. Throws std::domain_error on a zero diagonal entry.
[[nodiscard]] double jor_relaxation(const LinearSystem& sys, double theta = 0.999);

/// Applies x <- Mx + d exactly k times (k = 0 returns x0 unchanged).
[[nodiscard]] Eigen::VectorXd centralized_iterate(const FixedPointMap& map, Eigen::VectorXd x0,
                                                  long k);

/// Per-window contraction factor of the distributed iteration on a fixed
/// graph: tau_1 = 1 - w_min (1 - mu), tau_l = 1 - w_min (1 - tau_{l-1}),
/// returned after delta steps. Lies strictly between mu and 1. Requires
/// mu < 1 and w_min in (0,1) (domain_error otherwise) and delta >= 1.
[[nodiscard]] double contraction_bound(double mu, double w_min, int delta);

}  // namespace dfix
