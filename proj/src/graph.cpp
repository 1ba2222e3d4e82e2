#include "dfix/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dfix/random.hpp"

namespace dfix {

namespace {

void check_vertex_count(int n) {
    if (n < 1) {
        throw std::invalid_argument("graph needs at least one vertex, got " + std::to_string(n));
    }
}

}  // namespace

Graph::Graph(int vertex_count) : n_(vertex_count) {
    check_vertex_count(vertex_count);
    adj_.assign(static_cast<std::size_t>(n_) * n_, 0);
    for (int v = 0; v < n_; ++v) {
        adj_[static_cast<std::size_t>(v) * n_ + v] = 1;
    }
    finalize();
}

Graph::Graph(int vertex_count, const std::vector<std::pair<int, int>>& edges) : n_(vertex_count) {
    check_vertex_count(vertex_count);
    adj_.assign(static_cast<std::size_t>(n_) * n_, 0);
    for (int v = 0; v < n_; ++v) {
        adj_[static_cast<std::size_t>(v) * n_ + v] = 1;
    }
    for (const auto& [from, to] : edges) {
        if (from < 0 || from >= n_ || to < 0 || to >= n_) {
            throw std::invalid_argument("edge (" + std::to_string(from) + "," + std::to_string(to) +
                                        ") out of range for n=" + std::to_string(n_));
        }
        adj_[static_cast<std::size_t>(from) * n_ + to] = 1;
    }
    finalize();
}

Graph Graph::complete(int vertex_count) {
    check_vertex_count(vertex_count);
    Graph g;
    g.n_ = vertex_count;
    g.adj_.assign(static_cast<std::size_t>(vertex_count) * vertex_count, 1);
    g.finalize();
    return g;
}

Graph Graph::from_adjacency(int vertex_count, std::vector<std::uint8_t> adjacency) {
    check_vertex_count(vertex_count);
    if (adjacency.size() != static_cast<std::size_t>(vertex_count) * vertex_count) {
        throw std::invalid_argument("adjacency size does not match vertex count");
    }
    Graph g;
    g.n_ = vertex_count;
    g.adj_ = std::move(adjacency);
    for (auto& cell : g.adj_) {
        cell = cell ? 1 : 0;
    }
    for (int v = 0; v < vertex_count; ++v) {
        g.adj_[static_cast<std::size_t>(v) * vertex_count + v] = 1;
    }
    g.finalize();
    return g;
}

void Graph::finalize() {
    in_.assign(n_, {});
    nonloop_edges_ = 0;
    for (int to = 0; to < n_; ++to) {
        for (int from = 0; from < n_; ++from) {
            if (adj_[static_cast<std::size_t>(from) * n_ + to]) {
                in_[to].push_back(from);
                if (from != to) ++nonloop_edges_;
            }
        }
    }
}

bool Graph::is_symmetric() const {
    for (int a = 0; a < n_; ++a) {
        for (int b = a + 1; b < n_; ++b) {
            if (has_edge(a, b) != has_edge(b, a)) return false;
        }
    }
    return true;
}

bool Graph::is_fully_connected() const {
    return std::all_of(adj_.begin(), adj_.end(), [](std::uint8_t c) { return c != 0; });
}

Graph make_regular_graph(int n, int m) {
    check_vertex_count(n);
    if (m <= 0 || m % 2 != 0) {
        throw std::invalid_argument("regular degree must be positive and even, got " + std::to_string(m));
    }
    if (m >= n) {
        throw std::invalid_argument("regular degree " + std::to_string(m) +
                                    " must be smaller than vertex count " + std::to_string(n));
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(n) * m);
    for (int v = 0; v < n; ++v) {
        for (int off = 1; off <= m / 2; ++off) {
            const int u = (v + off) % n;
            edges.emplace_back(v, u);
            edges.emplace_back(u, v);
        }
    }
    return Graph(n, edges);
}

Graph make_geometric_graph(const std::vector<Point2>& positions, double radius) {
    const int n = static_cast<int>(positions.size());
    check_vertex_count(n);
    if (!(radius > 0.0)) {
        throw std::invalid_argument("geometric graph radius must be positive");
    }
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (positions[a] == positions[b]) {
                throw std::invalid_argument("positions " + std::to_string(a) + " and " +
                                            std::to_string(b) + " coincide");
            }
            if (distance(positions[a], positions[b]) < radius) {
                edges.emplace_back(a, b);
                edges.emplace_back(b, a);
            }
        }
    }
    return Graph(n, edges);
}

namespace {

// Vertices reachable from src by directed edges, following `forward ? from->to : to->from`.
std::vector<char> reachable(const Graph& g, int src, bool forward) {
    const int n = g.size();
    std::vector<char> seen(n, 0);
    std::deque<int> queue{src};
    seen[src] = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int u = 0; u < n; ++u) {
            const bool edge = forward ? g.has_edge(v, u) : g.has_edge(u, v);
            if (edge && !seen[u]) {
                seen[u] = 1;
                queue.push_back(u);
            }
        }
    }
    return seen;
}

}  // namespace

bool is_strongly_connected(const Graph& g) {
    const auto all_seen = [](const std::vector<char>& seen) {
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    };
    return all_seen(reachable(g, 0, true)) && all_seen(reachable(g, 0, false));
}

int diameter(const Graph& g) {
    if (!is_strongly_connected(g)) {
        throw std::domain_error("diameter is only defined for strongly connected graphs");
    }
    const int n = g.size();
    int worst = 0;
    std::vector<int> dist(n);
    std::deque<int> queue;
    for (int src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[src] = 0;
        queue.assign(1, src);
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (int u = 0; u < n; ++u) {
                if (u != v && g.has_edge(v, u) && dist[u] < 0) {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        for (int u = 0; u < n; ++u) {
            if (u != src) worst = std::max(worst, dist[u]);
        }
    }
    return worst;
}

Graph compose(const Graph& second, const Graph& first) {
    if (second.size() != first.size()) {
        throw std::invalid_argument("compose: vertex counts differ");
    }
    const int n = first.size();
    const auto& fa = first.adjacency();
    const auto& sa = second.adjacency();
    std::vector<std::uint8_t> out(static_cast<std::size_t>(n) * n, 0);
    for (int j = 0; j < n; ++j) {
        std::uint8_t* out_row = out.data() + static_cast<std::size_t>(j) * n;
        const std::uint8_t* first_row = fa.data() + static_cast<std::size_t>(j) * n;
        for (int s = 0; s < n; ++s) {
            if (!first_row[s]) continue;
            const std::uint8_t* second_row = sa.data() + static_cast<std::size_t>(s) * n;
            for (int i = 0; i < n; ++i) {
                out_row[i] |= second_row[i];
            }
        }
    }
    return Graph::from_adjacency(n, std::move(out));
}

Graph graph_power(const Graph& g, int m) {
    if (m < 1) {
        throw std::invalid_argument("graph power requires m >= 1, got " + std::to_string(m));
    }
    Graph acc = g;
    for (int i = 1; i < m; ++i) {
        acc = compose(g, acc);
    }
    return acc;
}

bool is_jointly_connected(std::span<const Graph> window, Connectivity mode) {
    if (window.empty()) {
        throw std::invalid_argument("joint connectivity needs a nonempty window");
    }
    const int n = window.front().size();
    for (const Graph& g : window) {
        if (g.size() != n) {
            throw std::invalid_argument("joint connectivity window mixes vertex counts");
        }
    }
    // Fold as G_k ∘ G_{k+1} ∘ ... ∘ G_{k+m-1}: the first hop of any composed
    // path is drawn from the last graph of the window.
    Graph acc = window.front();
    for (std::size_t t = 1; t < window.size(); ++t) {
        acc = compose(acc, window[t]);
    }
    return mode == Connectivity::Full ? acc.is_fully_connected() : is_strongly_connected(acc);
}

bool is_repeatedly_jointly_strongly_connected(std::span<const Graph> prefix, int tau0, int period) {
    if (tau0 < 0 || period < 1) {
        throw std::invalid_argument("window offset must be >= 0 and period >= 1");
    }
    const std::size_t first_end = static_cast<std::size_t>(tau0) + static_cast<std::size_t>(period);
    if (prefix.size() <= first_end) {
        throw std::invalid_argument("prefix too short to cover one window");
    }
    for (std::size_t start = static_cast<std::size_t>(tau0); start + period < prefix.size();
         start += static_cast<std::size_t>(period)) {
        // Window spans indices [start, start + period], both ends included.
        if (!is_jointly_connected(prefix.subspan(start, static_cast<std::size_t>(period) + 1),
                                  Connectivity::Strong)) {
            return false;
        }
    }
    return true;
}

Graph sample_subgraph(const Graph& g, double gamma, std::mt19937_64& rng) {
    if (!(gamma > 0.0) || gamma > 1.0) {
        throw std::invalid_argument("sampling fraction must lie in (0,1]");
    }
    if (!g.is_symmetric()) {
        throw std::invalid_argument("sample_subgraph requires a symmetric graph");
    }
    if (gamma == 1.0) return g;

    const int n = g.size();
    std::vector<std::pair<int, int>> undirected;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (g.has_edge(a, b)) undirected.emplace_back(a, b);
        }
    }
    // The nudge absorbs decimal-fraction representation error (0.3 * 400
    // must keep 120 edges, not 119).
    const auto keep = static_cast<std::size_t>(
        std::floor(gamma * static_cast<double>(undirected.size()) + 1e-9));

    // Partial Fisher-Yates: the first `keep` slots end up holding the sample.
    for (std::size_t i = 0; i < keep; ++i) {
        const std::size_t j = i + rnd::uniform_index(rng, undirected.size() - i);
        std::swap(undirected[i], undirected[j]);
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(2 * keep);
    for (std::size_t i = 0; i < keep; ++i) {
        edges.emplace_back(undirected[i].first, undirected[i].second);
        edges.emplace_back(undirected[i].second, undirected[i].first);
    }
    return Graph(n, edges);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    out << "n " << g.size() << "\n";
    for (int from = 0; from < g.size(); ++from) {
        for (int to = 0; to < g.size(); ++to) {
            if (from != to && g.has_edge(from, to)) {
                out << from << " " << to << "\n";
            }
        }
    }
}

Graph read_edge_list(std::istream& in) {
    std::string tag;
    int n = 0;
    if (!(in >> tag >> n) || tag != "n") {
        throw std::invalid_argument("edge list must start with a 'n <count>' header");
    }
    std::vector<std::pair<int, int>> edges;
    int from, to;
    while (in >> from >> to) {
        edges.emplace_back(from, to);
    }
    return Graph(n, edges);
}

GraphSequence::GraphSequence(std::function<Graph(std::int64_t)> generator)
    : generator_(std::move(generator)) {}

GraphSequence GraphSequence::constant(Graph g) {
    GraphSequence seq([g](std::int64_t) { return g; });
    seq.base_ = std::make_shared<const Graph>(std::move(g));
    return seq;
}

GraphSequence GraphSequence::edge_sampled(Graph base, double gamma, std::uint64_t seed) {
    if (!(gamma > 0.0) || gamma > 1.0) {
        throw std::invalid_argument("sampling fraction must lie in (0,1]");
    }
    auto shared = std::make_shared<const Graph>(std::move(base));
    GraphSequence seq([shared, gamma, seed](std::int64_t k) {
        std::mt19937_64 rng(rnd::derive_seed(seed, static_cast<std::uint64_t>(k)));
        return sample_subgraph(*shared, gamma, rng);
    });
    seq.base_ = shared;
    seq.gamma_ = gamma;
    return seq;
}

Graph GraphSequence::at(std::int64_t k) const {
    return generator_(k);
}

}  // namespace dfix
