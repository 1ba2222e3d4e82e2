#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dfix/consensus.hpp"
#include "dfix/fixedpoint.hpp"
#include "dfix/graph.hpp"
#include "dfix/metrics.hpp"
#include "dfix/problems.hpp"

namespace dfix {

/// Snapshot of one synchronous round: column i of `x` is agent i's current
/// estimate. `aux` holds the per-agent gradient trackers when the method
/// maintains them (Harnessing) and is empty otherwise.
struct AgentStates {
    Eigen::MatrixXd x;
    Eigen::MatrixXd aux;
    std::int64_t k = 0;
};

enum class RunStatus { Converged, MaxIterations, Diverged };

/// Status as it appears in summary CSVs: "converged", "max-iterations",
/// "diverged".
[[nodiscard]] std::string status_name(RunStatus status);

/// One row per recorded round; row 0 is the initial state with zero cost
/// counters. `error_inf` is the worst agent's infinity-norm distance to the
/// reference solution, or NaN when none is known.
struct TraceRecord {
    std::int64_t k = 0;
    double max_residual = 0.0;
    double error_inf = 0.0;
    std::int64_t cum_flops = 0;
    std::int64_t cum_traffic = 0;
};

struct RunTrace {
    Method method = Method::DfixJor;
    RunStatus status = RunStatus::MaxIterations;
    std::vector<TraceRecord> records;

    [[nodiscard]] std::int64_t iterations() const { return records.back().k; }
    [[nodiscard]] const TraceRecord& final_record() const { return records.back(); }
};

struct RunOptions {
    double tol = 1e-4;
    std::int64_t max_iter = 200000;
    /// Invoked on the initial states and again after every completed round;
    /// lets tests watch per-round invariants without storing full histories.
    std::function<void(const AgentStates&)> observer;
    /// Receives warnings (e.g. a map without a contraction certificate);
    /// defaults to stderr when empty.
    std::function<void(const std::string&)> warn;
};

/// One distributed fixed-point round. Each agent i first refreshes its own
/// component through its map row, xhat_ii = M_i x_i + d_i, keeping the other
/// components, then averages the intermediate vectors of its neighbourhood:
/// x_i <- sum_j w_ij xhat_j. Throws DivergenceError when a non-finite value
/// appears.
[[nodiscard]] AgentStates dfix_step(const AgentStates& states, const FixedPointMap& map,
                                    const WeightMatrix& w);

/// Runs the distributed fixed-point method until every agent's residual
/// ||A x_i - b||_2 falls to `tol`, the round budget runs out, or a value
/// turns non-finite. Weights are rebuilt per round from the schedule via
/// metropolis_weights; constant schedules reuse one weight matrix.
[[nodiscard]] RunTrace run_dfix(const LinearSystem& sys, const FixedPointMap& map,
                                const GraphSequence& schedule, const Eigen::MatrixXd& x0,
                                const RunOptions& opts = {});
[[nodiscard]] RunTrace run_dfix(const LinearSystem& sys, const FixedPointMap& map, const Graph& g,
                                const Eigen::MatrixXd& x0, const RunOptions& opts = {});

/// Step size 1 / (3L) with L = max_i 2 ||A_i||_2^2, the Lipschitz constant
/// of the worst local gradient.
[[nodiscard]] double harnessing_step_size(const LinearSystem& sys);

/// Gradient-tracking baseline. Each agent descends along a tracker of the
/// average gradient of the local costs f_i(x) = ||A_i x - b_i||^2:
///   x_i <- sum_j w_ij x_j - eta s_i
///   s_i <- sum_j w_ij s_j + grad f_i(x_i-new) - grad f_i(x_i-old)
/// with s_i initialized to grad f_i(x_i-initial).
[[nodiscard]] RunTrace run_harnessing(const LinearSystem& sys, const GraphSequence& schedule,
                                      const Eigen::MatrixXd& x0, double eta,
                                      const RunOptions& opts = {});
[[nodiscard]] RunTrace run_harnessing(const LinearSystem& sys, const Graph& g,
                                      const Eigen::MatrixXd& x0, double eta,
                                      const RunOptions& opts = {});

/// Alternating-projection baseline. Agent i removes the component of the
/// neighbourhood disagreement that leaves its own hyperplane A_i x = b_i:
///   x_i <- x_i - (1/|O_i|) P_i (|O_i| x_i - sum_{j in O_i} x_j),
/// P_i = I - A_i^T A_i / ||A_i||^2. Starts from default_initialization,
/// which lies on every hyperplane. Throws std::domain_error on a zero row.
[[nodiscard]] RunTrace run_projection(const LinearSystem& sys, const GraphSequence& schedule,
                                      const RunOptions& opts = {});
[[nodiscard]] RunTrace run_projection(const LinearSystem& sys, const Graph& g,
                                      const RunOptions& opts = {});

/// Worst residual over agents, max_i ||A x_i - b||_2, and whether it meets
/// the tolerance.
[[nodiscard]] std::pair<bool, double> termination_check(const AgentStates& states,
                                                        const LinearSystem& sys, double tol);

/// Shared starting point of all methods: x0_ii = b_i / a_ii and zeros
/// elsewhere, which also satisfies every agent's own equation A_i x = b_i.
/// Throws std::domain_error on a zero diagonal entry.
[[nodiscard]] Eigen::MatrixXd default_initialization(const LinearSystem& sys);

}  // namespace dfix
