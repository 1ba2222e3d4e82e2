#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "dfix/point.hpp"

namespace dfix {

/// A square linear system Ay = b together with a direct-solve reference
/// solution. `y_star` satisfies ||A y_star - b||_inf <= 1e-10 for the
/// generated families (their matrices are certified nonsingular).
struct LinearSystem {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd y_star;
    std::string provenance;  ///< short descriptor: "kriging", "sdd", "custom"

    [[nodiscard]] int size() const { return static_cast<int>(A.rows()); }
};

/// Gaussian covariance kernel K(t) = exp(-5 t^2) for a distance t >= 0.
[[nodiscard]] double gaussian_kernel(double t);

/// Samples of a stationary random field with known mean, for prediction.
struct KrigingField {
    std::vector<Point2> positions;            ///< pairwise distinct sites s_i
    std::vector<double> samples;              ///< observed values Z(s_i)
    std::function<double(Point2)> mean;       ///< mu(s); empty means mu == 0
};

/// Simple-kriging covariance system: a_ij = K(||s_i - s_j||), b_i =
/// K(||s_i - target||). The Gaussian kernel makes A symmetric positive
/// definite for pairwise distinct positions. Throws std::invalid_argument
/// on duplicate positions.
[[nodiscard]] LinearSystem make_kriging_system(
    const std::vector<Point2>& positions, Point2 target,
    const std::function<double(double)>& kernel = gaussian_kernel);

/// Kriging predictor mu(target) + sum_i x_i (Z(s_i) - mu(s_i)) where x
/// solves the covariance system for this target.
[[nodiscard]] double kriging_predict(const Eigen::VectorXd& x, const KrigingField& field,
                                     Point2 target);

/// Random symmetric strictly diagonally dominant system: entries of Ahat
/// drawn uniformly from (0,1) row by row, A = (Ahat + Ahat^T)/2 + (n-1) I,
/// then b uniform in (0,1). Strict dominance holds because every
/// off-diagonal entry is below 1. Requires n >= 2.
[[nodiscard]] LinearSystem make_sdd_system(int n, std::mt19937_64& rng);

/// Reads a system from text: first `n`, then the n*n entries of A row by
/// row, then the n entries of b (any whitespace separates tokens).
[[nodiscard]] LinearSystem read_system(std::istream& in);

}  // namespace dfix
