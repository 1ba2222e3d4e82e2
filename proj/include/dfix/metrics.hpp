#pragma once

#include <cstdint>
#include <string>

#include "dfix/graph.hpp"

namespace dfix {

enum class Method { DfixJor, Harnessing, Projection };

/// Method tag as used in configs and CSV columns:
/// "dfix-jor", "harnessing", "projection".
[[nodiscard]] std::string method_name(Method method);
[[nodiscard]] Method method_from_name(const std::string& name);

/// Scalars moved by one synchronous round when every directed non-loop edge
/// carries a single n-vector. Loops are local reads and transmit nothing.
[[nodiscard]] std::int64_t traffic_per_iteration(const Graph& g);

/// Method-aware round traffic: Harnessing exchanges both its estimate and
/// its gradient tracker, doubling the count; the others send one vector.
[[nodiscard]] std::int64_t traffic_per_iteration(const Graph& g, Method method);

/// Scalar operations of one synchronous round, summed over agents, counting
/// each multiply and each add as one operation. With deg_i the in-degree of
/// agent i including its self-loop, the frozen per-agent counts are
///   dfix-jor:    (2n-1) + 1            local fixed-point component
///                + (2 deg_i + 1) n     neighbourhood combination
///   harnessing:  2 (2 deg_i + 1) n     two neighbourhood combinations
///                + 2 (2n) + 3n         gradient evaluations and steps
///   projection:  (2 deg_i + 1) n       neighbourhood combination
///                + 4n + 2              rank-one projector application
[[nodiscard]] std::int64_t flops_per_iteration(Method method, const Graph& g, int n);

}  // namespace dfix
