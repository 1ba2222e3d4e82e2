#include "dfix/fixedpoint.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace dfix {

namespace {

void check_diagonal(const LinearSystem& sys) {
    for (int i = 0; i < sys.size(); ++i) {
        if (sys.A(i, i) == 0.0) {
            throw std::domain_error("matrix diagonal entry " + std::to_string(i) +
                                    " is zero; the Jacobi splitting is undefined");
        }
    }
}

}  // namespace

FixedPointMap make_fixed_point_map(Eigen::MatrixXd M, Eigen::VectorXd d) {
    if (M.rows() != M.cols() || M.rows() != d.size()) {
        throw std::invalid_argument("fixed-point map needs a square M matching d");
    }
    FixedPointMap map{std::move(M), std::move(d), 0.0};
    map.mu = map.M.cwiseAbs().rowwise().sum().maxCoeff();
    return map;
}

FixedPointMap jor_map(const LinearSystem& sys, double alpha) {
    if (alpha == 0.0 || std::isnan(alpha)) {
        throw std::invalid_argument("relaxation parameter must be nonzero");
    }
    check_diagonal(sys);
    const Eigen::VectorXd inv_diag = sys.A.diagonal().cwiseInverse();
    Eigen::MatrixXd M = -alpha * (inv_diag.asDiagonal() * sys.A);
    // The diagonal of D^-1 A is 1 by construction; write 1 - alpha directly
    // instead of going through the rounded reciprocal.
    M.diagonal().setConstant(1.0 - alpha);
    const Eigen::VectorXd d = alpha * inv_diag.cwiseProduct(sys.b);
    return make_fixed_point_map(std::move(M), d);
}

double jor_relaxation(const LinearSystem& sys, double theta) {
    if (!(theta > 0.0)) {
        throw std::invalid_argument("safety factor must be positive");
    }
    check_diagonal(sys);
    const Eigen::VectorXd inv_diag = sys.A.diagonal().cwiseInverse();
    const double norm = (inv_diag.asDiagonal() * sys.A).cwiseAbs().rowwise().sum().maxCoeff();
    return theta * 2.0 / norm;
}

Eigen::VectorXd centralized_iterate(const FixedPointMap& map, Eigen::VectorXd x0, long k) {
    if (k < 0) {
        throw std::invalid_argument("iteration count must be nonnegative");
    }
    if (x0.size() != map.size()) {
        throw std::invalid_argument("initial vector length does not match the map");
    }
    Eigen::VectorXd x = std::move(x0);
    Eigen::VectorXd next(x.size());
    for (long step = 0; step < k; ++step) {
        next.noalias() = map.M * x;
        next += map.d;
        x.swap(next);
    }
    return x;
}

double contraction_bound(double mu, double w_min, int delta) {
    if (!(mu >= 0.0) || mu >= 1.0) {
        throw std::domain_error("contraction factor requires mu in [0,1)");
    }
    if (!(w_min > 0.0) || w_min >= 1.0) {
        throw std::domain_error("contraction factor requires w_min in (0,1)");
    }
    if (delta < 1) {
        throw std::invalid_argument("window length must be at least 1");
    }
    double tau = mu;
    for (int l = 0; l < delta; ++l) {
        tau = 1.0 - w_min * (1.0 - tau);
    }
    return tau;
}

}  // namespace dfix
