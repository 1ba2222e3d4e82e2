#include "dfix/metrics.hpp"

#include <stdexcept>

namespace dfix {

std::string method_name(Method method) {
    switch (method) {
        case Method::DfixJor: return "dfix-jor";
        case Method::Harnessing: return "harnessing";
        case Method::Projection: return "projection";
    }
    throw std::invalid_argument("unknown method tag");
}

Method method_from_name(const std::string& name) {
    if (name == "dfix-jor") return Method::DfixJor;
    if (name == "harnessing") return Method::Harnessing;
    if (name == "projection") return Method::Projection;
    throw std::invalid_argument("unknown method '" + name +
                                "' (expected dfix-jor, harnessing or projection)");
}

std::int64_t traffic_per_iteration(const Graph& g) {
    return g.nonloop_edge_count() * static_cast<std::int64_t>(g.size());
}

std::int64_t traffic_per_iteration(const Graph& g, Method method) {
    const std::int64_t vectors = method == Method::Harnessing ? 2 : 1;
    return vectors * traffic_per_iteration(g);
}

std::int64_t flops_per_iteration(Method method, const Graph& g, int n) {
    const auto nn = static_cast<std::int64_t>(n);
    std::int64_t total = 0;
    for (int i = 0; i < g.size(); ++i) {
        const std::int64_t deg = g.in_degree(i);
        const std::int64_t combine = (2 * deg + 1) * nn;
        switch (method) {
            case Method::DfixJor:
                total += (2 * nn - 1) + 1 + combine;
                break;
            case Method::Harnessing:
                total += 2 * combine + 2 * (2 * nn) + 3 * nn;
                break;
            case Method::Projection:
                total += combine + 4 * nn + 2;
                break;
            default:
                throw std::invalid_argument("unknown method tag");
        }
    }
    return total;
}

}  // namespace dfix
