// Directed communication graphs: generators, connectivity and diameter
// queries, composition, and the time-varying sequence machinery used by the
// distributed solvers.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "dfix/point.hpp"

namespace dfix {

/// Directed graph on vertices 0..n-1 with a self-loop at every vertex.
/// An edge (from, to) means `from` can send a message to `to`. Immutable
/// after construction; cheap to copy at the network sizes used here.
class Graph {
public:
    /// Loops-only graph (no communication).
    explicit Graph(int vertex_count);

    /// Graph with the given directed edges; self-loops are always added.
    /// Throws std::invalid_argument on out-of-range endpoints.
    Graph(int vertex_count, const std::vector<std::pair<int, int>>& edges);

    static Graph complete(int vertex_count);

    /// Builds from a row-major adjacency matrix (entry from*n+to). Loops are
    /// forced on regardless of the input diagonal.
    static Graph from_adjacency(int vertex_count, std::vector<std::uint8_t> adjacency);

    int size() const { return n_; }
    bool has_edge(int from, int to) const { return adj_[static_cast<std::size_t>(from) * n_ + to] != 0; }

    /// In-neighborhood of v (everyone who can send to v), sorted, includes v.
    const std::vector<int>& in_neighbors(int v) const { return in_[v]; }
    int in_degree(int v) const { return static_cast<int>(in_[v].size()); }

    /// Number of directed edges excluding self-loops.
    std::int64_t nonloop_edge_count() const { return nonloop_edges_; }

    bool is_symmetric() const;
    bool is_fully_connected() const;

    const std::vector<std::uint8_t>& adjacency() const { return adj_; }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.adj_ == b.adj_;
    }

private:
    Graph() = default;
    void finalize();

    int n_ = 0;
    std::vector<std::uint8_t> adj_;      // row-major, adj_[from*n + to]
    std::vector<std::vector<int>> in_;   // in-neighbor lists
    std::int64_t nonloop_edges_ = 0;
};

/// Undirected m-regular graph realized as a circulant: vertex i is adjacent
/// to i±1, ..., i±m/2 (mod n). Requires 0 < m < n and m even.
Graph make_regular_graph(int n, int m);

/// Undirected geometric graph: i and j adjacent iff their distance is
/// strictly less than radius. Positions must be pairwise distinct.
Graph make_geometric_graph(const std::vector<Point2>& positions, double radius);

/// True iff a directed path joins every ordered vertex pair.
bool is_strongly_connected(const Graph& g);

/// Largest shortest-directed-path length over ordered pairs of distinct
/// vertices (0 for a single vertex). Throws std::domain_error if g is not
/// strongly connected.
int diameter(const Graph& g);

/// Composition second∘first: edge (j,i) present iff some vertex s has
/// (j,s) in `first` and (s,i) in `second`.
Graph compose(const Graph& second, const Graph& first);

/// m-fold composition of g with itself (m >= 1).
Graph graph_power(const Graph& g, int m);

enum class Connectivity { Full, Strong };

/// Tests the composition of a chronological window [G_k, ..., G_{k+m-1}]
/// for full or strong connectivity. The first hop of a joint path is drawn
/// from the last (most recent) graph of the window.
bool is_jointly_connected(std::span<const Graph> window, Connectivity mode);

/// True iff every complete window [tau0 + k*period, tau0 + (k+1)*period]
/// inside the prefix composes to a strongly connected graph.
bool is_repeatedly_jointly_strongly_connected(std::span<const Graph> prefix, int tau0, int period);

/// Keeps all self-loops and a uniform sample (without replacement) of
/// floor(gamma * |E_u|) of the |E_u| undirected non-loop edges, both
/// directions each. gamma must be in (0,1] and g symmetric; gamma == 1
/// returns g unchanged.
Graph sample_subgraph(const Graph& g, double gamma, std::mt19937_64& rng);

/// Edge-list text format: header "n <count>", then one "from to" pair per
/// line (0-based). Self-loops are implied and never written.
void write_edge_list(const Graph& g, std::ostream& out);
Graph read_edge_list(std::istream& in);

/// Deterministic sequence of graphs indexed by iteration. The graph at
/// index k is a pure function of (seed, k), so sequences can be replayed
/// and shared freely.
class GraphSequence {
public:
    explicit GraphSequence(std::function<Graph(std::int64_t)> generator);

    static GraphSequence constant(Graph g);

    /// G_k = sample_subgraph(base, gamma, rng_k) with rng_k seeded from
    /// (seed, k).
    static GraphSequence edge_sampled(Graph base, double gamma, std::uint64_t seed);

    Graph at(std::int64_t k) const;

    /// Base graph when known (constant or sampled sequences), else nullptr.
    const Graph* base() const { return base_ ? base_.get() : nullptr; }
    double gamma() const { return gamma_; }

private:
    std::function<Graph(std::int64_t)> generator_;
    std::shared_ptr<const Graph> base_;
    double gamma_ = 1.0;
};

}  // namespace dfix
