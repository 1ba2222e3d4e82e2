#include "dfix/solvers.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>

#include "dfix/errors.hpp"

namespace dfix {

std::string status_name(RunStatus status) {
    switch (status) {
        case RunStatus::Converged: return "converged";
        case RunStatus::MaxIterations: return "max-iterations";
        case RunStatus::Diverged: return "diverged";
    }
    throw std::invalid_argument("unknown run status");
}

namespace {

void check_states(const AgentStates& states, int n) {
    if (states.x.rows() != n || states.x.cols() != n) {
        throw std::invalid_argument("agent states must hold one n-vector per agent");
    }
}

/// Column i of the result: M_i x_i + d_i (each agent's map row applied to
/// its own vector), i.e. the diagonal of M X plus d.
Eigen::VectorXd map_diagonal(const FixedPointMap& map, const Eigen::MatrixXd& x) {
    return (map.M.cwiseProduct(x.transpose())).rowwise().sum() + map.d;
}

/// Per-method state advanced by the shared round driver. The driver owns
/// the residual matrix R = A X - b 1^T (needed for termination anyway) and
/// feeds it back after each round so methods can reuse it.
class MethodEngine {
public:
    virtual ~MethodEngine() = default;
    /// Advances X (and any auxiliary state) by one synchronous round.
    virtual void advance(const Graph& g, const Eigen::SparseMatrix<double>& w_transposed) = 0;
    /// Receives the residual matrix evaluated at the state advance() left.
    virtual void absorb_residual(const Eigen::MatrixXd&) {}
    [[nodiscard]] virtual bool finite() const { return X.allFinite(); }

    Eigen::MatrixXd X;
    Eigen::MatrixXd aux;
};

class DfixEngine final : public MethodEngine {
public:
    DfixEngine(const FixedPointMap& map, const Eigen::MatrixXd& x0) : map_(map) {
        X = x0;
        xhat_.resizeLike(X);
        next_.resizeLike(X);
    }

    void advance(const Graph&, const Eigen::SparseMatrix<double>& w_transposed) override {
        xhat_ = X;
        xhat_.diagonal() = map_diagonal(map_, X);
        next_.noalias() = xhat_ * w_transposed;
        X.swap(next_);
    }

private:
    const FixedPointMap& map_;
    Eigen::MatrixXd xhat_;
    Eigen::MatrixXd next_;
};

class HarnessingEngine final : public MethodEngine {
public:
    HarnessingEngine(const LinearSystem& sys, double eta, const Eigen::MatrixXd& x0)
        : sys_(sys), eta_(eta) {
        X = x0;
        const int n = sys.size();
        aux.resize(n, n);
        grad_prev_.resize(n, n);
        grad_next_.resize(n, n);
        next_.resize(n, n);
        scaled_diag_.resize(n);
    }

    void advance(const Graph&, const Eigen::SparseMatrix<double>& w_transposed) override {
        next_.noalias() = X * w_transposed;
        next_ -= eta_ * aux;
        X.swap(next_);
        // Tracker update completes in absorb_residual once the gradient at
        // the new estimates is available.
        next_.noalias() = aux * w_transposed;
        aux.swap(next_);
        aux -= grad_prev_;
    }

    void absorb_residual(const Eigen::MatrixXd& residual) override {
        // grad f_i at agent i's own vector is 2 A_i^T (A_i x_i - b_i), and
        // A_i x_i - b_i is the i-th diagonal entry of the residual matrix.
        scaled_diag_ = 2.0 * residual.diagonal();
        if (!primed_) {
            grad_prev_.noalias() = sys_.A.transpose() * scaled_diag_.asDiagonal();
            aux = grad_prev_;
            primed_ = true;
            return;
        }
        grad_next_.noalias() = sys_.A.transpose() * scaled_diag_.asDiagonal();
        aux += grad_next_;
        grad_prev_.swap(grad_next_);
    }

    [[nodiscard]] bool finite() const override { return X.allFinite() && aux.allFinite(); }

private:
    const LinearSystem& sys_;
    double eta_;
    Eigen::MatrixXd grad_prev_;
    Eigen::MatrixXd grad_next_;
    Eigen::MatrixXd next_;
    Eigen::VectorXd scaled_diag_;
    bool primed_ = false;
};

class ProjectionEngine final : public MethodEngine {
public:
    ProjectionEngine(const LinearSystem& sys, const Eigen::MatrixXd& x0) : sys_(sys) {
        X = x0;
        const int n = sys.size();
        row_norm2_ = sys.A.rowwise().squaredNorm();
        for (int i = 0; i < n; ++i) {
            if (row_norm2_(i) == 0.0) {
                throw std::domain_error("equation row " + std::to_string(i) +
                                        " is zero; its hyperplane projector is undefined");
            }
        }
        disagreement_.resize(n, n);
        along_row_.resize(n);
    }

    void advance(const Graph& g, const Eigen::SparseMatrix<double>&) override {
        const int n = static_cast<int>(X.rows());
        for (int i = 0; i < n; ++i) {
            const auto& neighbours = g.in_neighbors(i);
            disagreement_.col(i) = static_cast<double>(neighbours.size()) * X.col(i);
            for (int j : neighbours) {
                disagreement_.col(i) -= X.col(j);
            }
        }
        // along_row_(i) = A_i . disagreement_i, the component the projector
        // removes (scaled by the row norm below).
        along_row_ = (sys_.A.cwiseProduct(disagreement_.transpose())).rowwise().sum();
        for (int i = 0; i < n; ++i) {
            const double deg = static_cast<double>(g.in_degree(i));
            X.col(i) -= disagreement_.col(i) / deg;
            X.col(i) += sys_.A.row(i).transpose() * (along_row_(i) / (row_norm2_(i) * deg));
        }
    }

private:
    const LinearSystem& sys_;
    Eigen::VectorXd row_norm2_;
    Eigen::MatrixXd disagreement_;
    Eigen::VectorXd along_row_;
};

/// Shared synchronous-round loop: schedule handling with a fixed-graph fast
/// path, per-round weight construction, cost counters, trace records,
/// termination and divergence detection.
RunTrace drive(Method method, MethodEngine& engine, const LinearSystem& sys,
               const GraphSequence& schedule, const RunOptions& opts) {
    const int n = sys.size();
    check_states(AgentStates{engine.X, {}, 0}, n);

    RunTrace trace;
    trace.method = method;

    const bool fixed = schedule.base() != nullptr && schedule.gamma() == 1.0;
    Graph round_graph = fixed ? *schedule.base() : Graph(n);
    Eigen::SparseMatrix<double> w_transposed;
    std::int64_t round_flops = 0;
    std::int64_t round_traffic = 0;
    const auto prepare_round = [&](const Graph& g) {
        w_transposed = metropolis_weights(g).entries.transpose().sparseView();
        round_flops = flops_per_iteration(method, g, n);
        round_traffic = traffic_per_iteration(g, method);
    };
    if (fixed) prepare_round(round_graph);

    const bool have_reference = sys.y_star.size() == n;
    Eigen::MatrixXd residual(n, n);
    double max_residual = 0.0;
    double error_inf = std::numeric_limits<double>::quiet_NaN();
    const auto measure = [&] {
        residual.noalias() = sys.A * engine.X;
        residual.colwise() -= sys.b;
        max_residual = residual.colwise().norm().maxCoeff();
        if (have_reference) {
            error_inf = (engine.X.colwise() - sys.y_star).cwiseAbs().maxCoeff();
        }
    };
    const auto notify = [&](std::int64_t k) {
        if (opts.observer) opts.observer(AgentStates{engine.X, engine.aux, k});
    };

    measure();
    engine.absorb_residual(residual);
    trace.records.push_back({0, max_residual, error_inf, 0, 0});
    notify(0);
    if (max_residual <= opts.tol) {
        trace.status = RunStatus::Converged;
        return trace;
    }

    std::int64_t cum_flops = 0;
    std::int64_t cum_traffic = 0;
    trace.status = RunStatus::MaxIterations;
    for (std::int64_t k = 0; k < opts.max_iter; ++k) {
        if (!fixed) {
            round_graph = schedule.at(k);
            prepare_round(round_graph);
        }
        engine.advance(round_graph, w_transposed);
        cum_flops += round_flops;
        cum_traffic += round_traffic;
        measure();
        engine.absorb_residual(residual);
        // Residual norms can overflow to inf a round before the states do;
        // either way the run is over and the broken row is not recorded.
        if (!engine.finite() || !std::isfinite(max_residual)) {
            trace.status = RunStatus::Diverged;
            break;
        }
        trace.records.push_back({k + 1, max_residual, error_inf, cum_flops, cum_traffic});
        notify(k + 1);
        if (max_residual <= opts.tol) {
            trace.status = RunStatus::Converged;
            break;
        }
    }
    return trace;
}

void warn(const RunOptions& opts, const std::string& message) {
    if (opts.warn) {
        opts.warn(message);
    } else {
        std::cerr << "warning: " << message << "\n";
    }
}

}  // namespace

AgentStates dfix_step(const AgentStates& states, const FixedPointMap& map, const WeightMatrix& w) {
    const int n = map.size();
    check_states(states, n);
    if (w.size() != n) {
        throw std::invalid_argument("weight matrix size does not match the map");
    }
    Eigen::MatrixXd xhat = states.x;
    xhat.diagonal() = map_diagonal(map, states.x);
    AgentStates next;
    next.x.noalias() = xhat * w.entries.transpose();
    next.aux = states.aux;
    next.k = states.k + 1;
    if (!next.x.allFinite()) {
        throw DivergenceError("non-finite estimate after a distributed fixed-point round");
    }
    return next;
}

RunTrace run_dfix(const LinearSystem& sys, const FixedPointMap& map, const GraphSequence& schedule,
                  const Eigen::MatrixXd& x0, const RunOptions& opts) {
    if (map.size() != sys.size()) {
        throw std::invalid_argument("fixed-point map size does not match the system");
    }
    if (map.mu >= 1.0) {
        warn(opts, "||M||_inf = " + std::to_string(map.mu) +
                       " >= 1: the contraction certificate does not apply and the run may not "
                       "converge");
    }
    DfixEngine engine(map, x0);
    return drive(Method::DfixJor, engine, sys, schedule, opts);
}

RunTrace run_dfix(const LinearSystem& sys, const FixedPointMap& map, const Graph& g,
                  const Eigen::MatrixXd& x0, const RunOptions& opts) {
    return run_dfix(sys, map, GraphSequence::constant(g), x0, opts);
}

double harnessing_step_size(const LinearSystem& sys) {
    const double lipschitz = 2.0 * sys.A.rowwise().squaredNorm().maxCoeff();
    if (lipschitz == 0.0) {
        throw std::domain_error("zero matrix has no usable gradient Lipschitz constant");
    }
    return 1.0 / (3.0 * lipschitz);
}

RunTrace run_harnessing(const LinearSystem& sys, const GraphSequence& schedule,
                        const Eigen::MatrixXd& x0, double eta, const RunOptions& opts) {
    if (!(eta > 0.0)) {
        throw std::invalid_argument("step size must be positive");
    }
    HarnessingEngine engine(sys, eta, x0);
    return drive(Method::Harnessing, engine, sys, schedule, opts);
}

RunTrace run_harnessing(const LinearSystem& sys, const Graph& g, const Eigen::MatrixXd& x0,
                        double eta, const RunOptions& opts) {
    return run_harnessing(sys, GraphSequence::constant(g), x0, eta, opts);
}

RunTrace run_projection(const LinearSystem& sys, const GraphSequence& schedule,
                        const RunOptions& opts) {
    ProjectionEngine engine(sys, default_initialization(sys));
    return drive(Method::Projection, engine, sys, schedule, opts);
}

RunTrace run_projection(const LinearSystem& sys, const Graph& g, const RunOptions& opts) {
    return run_projection(sys, GraphSequence::constant(g), opts);
}

std::pair<bool, double> termination_check(const AgentStates& states, const LinearSystem& sys,
                                          double tol) {
    check_states(states, sys.size());
    Eigen::MatrixXd residual = sys.A * states.x;
    residual.colwise() -= sys.b;
    const double max_residual = residual.colwise().norm().maxCoeff();
    return {max_residual <= tol, max_residual};
}

Eigen::MatrixXd default_initialization(const LinearSystem& sys) {
    const int n = sys.size();
    Eigen::MatrixXd x0 = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        if (sys.A(i, i) == 0.0) {
            throw std::domain_error("matrix diagonal entry " + std::to_string(i) +
                                    " is zero; the shared initialization is undefined");
        }
        x0(i, i) = sys.b(i) / sys.A(i, i);
    }
    return x0;
}

}  // namespace dfix
