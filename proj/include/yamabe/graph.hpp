#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace yamabe {

/// Real-valued function on the vertex set, one entry per vertex.
using VertexFunction = std::vector<double>;

/// Undirected weighted edge, stored once per unordered pair with i < j.
struct Edge {
    int i;
    int j;
    double omega;
};

/// Finite weighted graph with a positive vertex measure mu and a positive
/// symmetric edge measure omega. Immutable after construction.
class WeightedGraph {
  public:
    struct Incidence {
        int neighbor;
        double omega;
    };

    // Validates: n >= 1, mu > 0 entrywise, no self-loops, no duplicate
    // edges, omega > 0. Edges given as (j, i) are normalized to i < j.
    WeightedGraph(int n, std::vector<double> mu, std::vector<Edge> edges);

    int vertex_count() const { return n_; }
    double mu(int i) const { return mu_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& vertex_measure() const { return mu_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Incidence>& neighbors(int i) const {
        return adj_[static_cast<std::size_t>(i)];
    }

    /// Vol(G) = sum_i mu_i.
    double volume() const;

    /// True iff every vertex is reachable from vertex 0.
    bool is_connected() const;

  private:
    int n_;
    std::vector<double> mu_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Incidence>> adj_;
};

enum class GraphFamily { path, cycle, complete, star, random_connected };

GraphFamily parse_family(const std::string& name);
std::string family_name(GraphFamily family);

struct WeightPolicy {
    bool unit = true;
    double lo = 0.0;
    double hi = 0.0;

    static WeightPolicy uniform(double a, double b);
};

/// Deterministic graph generator. Random families and random weights are
/// reproducible functions of the seed.
WeightedGraph generate(GraphFamily family, int n, std::uint64_t seed = 0,
                       const WeightPolicy& weights = {});

/// The p-th Yamabe problem data: Delta_p phi + h phi^{p-1} = lambda f phi^{alpha-1}
/// on a connected graph, with f > 0 and alpha >= p > 1.
struct ProblemInstance {
    WeightedGraph graph;
    VertexFunction h;
    VertexFunction f;
    double p;
    double alpha;

    // Validates all invariants; throws std::invalid_argument naming the
    // offending field (and vertex index where applicable).
    ProblemInstance(WeightedGraph graph, VertexFunction h, VertexFunction f,
                    double p, double alpha);
};

}  // namespace yamabe
