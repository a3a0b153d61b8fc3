#include "yamabe/graph.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>

#include "yamabe/rng.hpp"

namespace yamabe {

WeightedGraph::WeightedGraph(int n, std::vector<double> mu, std::vector<Edge> edges)
    : n_(n), mu_(std::move(mu)), edges_(std::move(edges)) {
    if (n_ < 1) throw std::invalid_argument("WeightedGraph: vertex count must be >= 1");
    if (static_cast<int>(mu_.size()) != n_)
        throw std::invalid_argument("WeightedGraph: mu length " + std::to_string(mu_.size()) +
                                    " does not match vertex count " + std::to_string(n_));
    for (int i = 0; i < n_; ++i) {
        double m = mu_[static_cast<std::size_t>(i)];
        if (!(m > 0.0) || !std::isfinite(m))
            throw std::invalid_argument("WeightedGraph: mu must be positive at vertex " +
                                        std::to_string(i));
    }
    std::set<std::pair<int, int>> seen;
    for (auto& e : edges_) {
        if (e.i > e.j) std::swap(e.i, e.j);
        if (e.i < 0 || e.j >= n_)
            throw std::invalid_argument("WeightedGraph: edge (" + std::to_string(e.i) + "," +
                                        std::to_string(e.j) + ") out of range");
        if (e.i == e.j)
            throw std::invalid_argument("WeightedGraph: self-loop at vertex " +
                                        std::to_string(e.i));
        if (!(e.omega > 0.0) || !std::isfinite(e.omega))
            throw std::invalid_argument("WeightedGraph: omega must be positive on edge (" +
                                        std::to_string(e.i) + "," + std::to_string(e.j) + ")");
        if (!seen.insert({e.i, e.j}).second)
            throw std::invalid_argument("WeightedGraph: duplicate edge (" + std::to_string(e.i) +
                                        "," + std::to_string(e.j) + ")");
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return std::pair{a.i, a.j} < std::pair{b.i, b.j};
    });
    adj_.resize(static_cast<std::size_t>(n_));
    for (const auto& e : edges_) {
        adj_[static_cast<std::size_t>(e.i)].push_back({e.j, e.omega});
        adj_[static_cast<std::size_t>(e.j)].push_back({e.i, e.omega});
    }
}

double WeightedGraph::volume() const {
    double v = 0.0;
    for (double m : mu_) v += m;
    return v;
}

bool WeightedGraph::is_connected() const {
    std::vector<char> visited(static_cast<std::size_t>(n_), 0);
    std::vector<int> stack{0};
    visited[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& inc : adj_[static_cast<std::size_t>(v)]) {
            if (!visited[static_cast<std::size_t>(inc.neighbor)]) {
                visited[static_cast<std::size_t>(inc.neighbor)] = 1;
                ++count;
                stack.push_back(inc.neighbor);
            }
        }
    }
    return count == n_;
}

GraphFamily parse_family(const std::string& name) {
    if (name == "path") return GraphFamily::path;
    if (name == "cycle") return GraphFamily::cycle;
    if (name == "complete") return GraphFamily::complete;
    if (name == "star") return GraphFamily::star;
    if (name == "random_connected") return GraphFamily::random_connected;
    throw std::invalid_argument("unknown graph family: " + name);
}

std::string family_name(GraphFamily family) {
    switch (family) {
        case GraphFamily::path: return "path";
        case GraphFamily::cycle: return "cycle";
        case GraphFamily::complete: return "complete";
        case GraphFamily::star: return "star";
        case GraphFamily::random_connected: return "random_connected";
    }
    return "?";
}

WeightPolicy WeightPolicy::uniform(double a, double b) {
    if (!(0.0 < a && a < b))
        throw std::invalid_argument("WeightPolicy: need 0 < a < b");
    return WeightPolicy{false, a, b};
}

WeightedGraph generate(GraphFamily family, int n, std::uint64_t seed,
                       const WeightPolicy& weights) {
    if (n < 1) throw std::invalid_argument("generate: n must be >= 1");
    if (family == GraphFamily::cycle && n < 3)
        throw std::invalid_argument("generate: cycle needs n >= 3");
    if (family == GraphFamily::star && n < 2)
        throw std::invalid_argument("generate: star needs n >= 2");

    std::mt19937_64 rng(seed);
    auto draw_weight = [&]() {
        return weights.unit ? 1.0 : uniform_in(rng, weights.lo, weights.hi);
    };

    std::vector<Edge> edges;
    switch (family) {
        case GraphFamily::path:
            for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 0.0});
            break;
        case GraphFamily::cycle:
            for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 0.0});
            edges.push_back({0, n - 1, 0.0});
            break;
        case GraphFamily::complete:
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) edges.push_back({i, j, 0.0});
            break;
        case GraphFamily::star:
            for (int i = 1; i < n; ++i) edges.push_back({0, i, 0.0});
            break;
        case GraphFamily::random_connected: {
            // Random spanning tree, then extra edges with probability 0.25.
            for (int i = 1; i < n; ++i) {
                int parent = static_cast<int>(rng() % static_cast<std::uint64_t>(i));
                edges.push_back({parent, i, 0.0});
            }
            std::set<std::pair<int, int>> present;
            for (const auto& e : edges) present.insert({e.i, e.j});
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    double coin = uniform_unit(rng);
                    if (!present.count({i, j}) && coin < 0.25) edges.push_back({i, j, 0.0});
                }
            break;
        }
    }
    // Weight draws happen in edge order, after topology, so that the
    // unit/random choice does not perturb the random topology stream.
    for (auto& e : edges) e.omega = draw_weight();

    std::vector<double> mu(static_cast<std::size_t>(n), 1.0);
    if (!weights.unit)
        for (auto& m : mu) m = uniform_in(rng, weights.lo, weights.hi);

    return WeightedGraph(n, std::move(mu), std::move(edges));
}

ProblemInstance::ProblemInstance(WeightedGraph graph_in, VertexFunction h_in,
                                 VertexFunction f_in, double p_in, double alpha_in)
    : graph(std::move(graph_in)),
      h(std::move(h_in)),
      f(std::move(f_in)),
      p(p_in),
      alpha(alpha_in) {
    const int n = graph.vertex_count();
    if (static_cast<int>(h.size()) != n)
        throw std::invalid_argument("ProblemInstance: h length does not match vertex count");
    if (static_cast<int>(f.size()) != n)
        throw std::invalid_argument("ProblemInstance: f length does not match vertex count");
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(h[static_cast<std::size_t>(i)]))
            throw std::invalid_argument("ProblemInstance: h not finite at vertex " +
                                        std::to_string(i));
        if (!(f[static_cast<std::size_t>(i)] > 0.0) ||
            !std::isfinite(f[static_cast<std::size_t>(i)]))
            throw std::invalid_argument("ProblemInstance: f must be positive at vertex " +
                                        std::to_string(i));
    }
    if (!(p > 1.0)) throw std::invalid_argument("ProblemInstance: p must be > 1");
    if (!(alpha >= p)) throw std::invalid_argument("ProblemInstance: alpha < p");
    if (!graph.is_connected())
        throw std::invalid_argument("ProblemInstance: graph must be connected");
}

}  // namespace yamabe
