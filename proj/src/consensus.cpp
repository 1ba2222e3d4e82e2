#include "dfix/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dfix/errors.hpp"

namespace dfix {

WeightMatrix metropolis_weights(const Graph& g) {
    if (!g.is_symmetric()) {
        throw std::invalid_argument("Metropolis weights are defined only for symmetric graphs");
    }
    const int n = g.size();
    WeightMatrix w;
    w.entries = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const int deg_i = g.in_degree(i) - 1;  // self-loop does not count
        for (int j : g.in_neighbors(i)) {
            if (j == i) continue;
            const int deg_j = g.in_degree(j) - 1;
            w.entries(i, j) = 1.0 / (1.0 + std::max(deg_i, deg_j));
        }
        w.entries(i, i) = 1.0 - w.entries.row(i).sum();
    }
    w.w_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (w.entries(i, j) > 0.0) w.w_min = std::min(w.w_min, w.entries(i, j));
        }
    }
    return w;
}

double validate_weights(const Eigen::MatrixXd& entries, const Graph& g) {
    const int n = g.size();
    if (entries.rows() != n || entries.cols() != n) {
        throw ValidationError("weight matrix is " + std::to_string(entries.rows()) + "x" +
                              std::to_string(entries.cols()) + " but the graph has " +
                              std::to_string(n) + " vertices");
    }
    double w_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = entries(i, j);
            const std::string at = "entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
            if (!(v >= 0.0)) {
                throw ValidationError(at + " is negative or non-finite: " + std::to_string(v));
            }
            const bool edge = g.has_edge(j, i);
            if (edge && v == 0.0) {
                throw ValidationError(at + " is zero but vertex " + std::to_string(j) +
                                      " can send to " + std::to_string(i));
            }
            if (!edge && v != 0.0) {
                throw ValidationError(at + " is positive but the graph has no edge " +
                                      std::to_string(j) + " -> " + std::to_string(i));
            }
            if (v > 0.0) w_min = std::min(w_min, v);
        }
        const double row_sum = entries.row(i).sum();
        if (std::abs(row_sum - 1.0) > 1e-12) {
            throw ValidationError("row " + std::to_string(i) + " sums to " +
                                  std::to_string(row_sum) + ", expected 1");
        }
    }
    return w_min;
}

}  // namespace dfix
