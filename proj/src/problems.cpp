#include "dfix/problems.hpp"

#include <cmath>
#include <istream>
#include <stdexcept>
#include <string>

#include "dfix/errors.hpp"
#include "dfix/random.hpp"

namespace dfix {

namespace {

/// Direct solve with one step of iterative refinement. Returns an empty
/// vector when the residual stays above 1e-10 (the caller then carries no
/// reference solution rather than a wrong one).
Eigen::VectorXd reference_solution(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd y = lu.solve(b);
    Eigen::VectorXd residual = b - A * y;
    if (residual.lpNorm<Eigen::Infinity>() > 1e-10) {
        y += lu.solve(residual);
        residual = b - A * y;
    }
    if (!y.allFinite() || residual.lpNorm<Eigen::Infinity>() > 1e-10) {
        return {};
    }
    return y;
}

}  // namespace

double gaussian_kernel(double t) {
    if (t < 0.0 || std::isnan(t)) {
        throw std::invalid_argument("kernel argument must be a nonnegative distance");
    }
    return std::exp(-5.0 * t * t);
}

LinearSystem make_kriging_system(const std::vector<Point2>& positions, Point2 target,
                                 const std::function<double(double)>& kernel) {
    const int n = static_cast<int>(positions.size());
    if (n < 1) {
        throw std::invalid_argument("kriging needs at least one position");
    }
    LinearSystem sys;
    sys.A.resize(n, n);
    sys.b.resize(n);
    for (int i = 0; i < n; ++i) {
        sys.A(i, i) = kernel(0.0);
        for (int j = i + 1; j < n; ++j) {
            const double dist = distance(positions[i], positions[j]);
            if (dist == 0.0) {
                throw std::invalid_argument("positions " + std::to_string(i) + " and " +
                                            std::to_string(j) +
                                            " coincide; covariance matrix would be singular");
            }
            sys.A(i, j) = sys.A(j, i) = kernel(dist);
        }
        sys.b(i) = kernel(distance(positions[i], target));
    }
    sys.y_star = reference_solution(sys.A, sys.b);
    sys.provenance = "kriging";
    return sys;
}

double kriging_predict(const Eigen::VectorXd& x, const KrigingField& field, Point2 target) {
    if (static_cast<std::size_t>(x.size()) != field.positions.size() ||
        field.positions.size() != field.samples.size()) {
        throw std::invalid_argument("weights, positions and samples must have equal length");
    }
    const auto mean = [&field](Point2 s) { return field.mean ? field.mean(s) : 0.0; };
    double prediction = mean(target);
    for (int i = 0; i < x.size(); ++i) {
        prediction += x(i) * (field.samples[i] - mean(field.positions[i]));
    }
    return prediction;
}

LinearSystem make_sdd_system(int n, std::mt19937_64& rng) {
    if (n < 2) {
        throw std::invalid_argument("diagonally dominant family needs n >= 2");
    }
    Eigen::MatrixXd hat(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            hat(i, j) = rnd::uniform_open01(rng);
        }
    }
    LinearSystem sys;
    sys.A = 0.5 * (hat + hat.transpose());
    sys.A.diagonal().array() += static_cast<double>(n - 1);
    sys.b.resize(n);
    for (int i = 0; i < n; ++i) {
        sys.b(i) = rnd::uniform_open01(rng);
    }
    sys.y_star = reference_solution(sys.A, sys.b);
    sys.provenance = "sdd";
    return sys;
}

LinearSystem read_system(std::istream& in) {
    int n = 0;
    if (!(in >> n) || n < 1) {
        throw ValidationError("system file must start with a positive dimension");
    }
    LinearSystem sys;
    sys.A.resize(n, n);
    sys.b.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!(in >> sys.A(i, j))) {
                throw ValidationError("system file ended inside matrix row " + std::to_string(i));
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (!(in >> sys.b(i))) {
            throw ValidationError("system file is missing right-hand side entry " +
                                  std::to_string(i));
        }
    }
    sys.y_star = reference_solution(sys.A, sys.b);
    sys.provenance = "custom";
    return sys;
}

}  // namespace dfix
