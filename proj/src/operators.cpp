#include "yamabe/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace yamabe {

namespace {

void check_length(const WeightedGraph& g, const VertexFunction& u, const char* op) {
    if (static_cast<int>(u.size()) != g.vertex_count())
        throw std::invalid_argument(std::string(op) + ": function length " +
                                    std::to_string(u.size()) + " does not match vertex count " +
                                    std::to_string(g.vertex_count()));
}

void check_p(double p, const char* op) {
    if (!(p > 1.0)) throw std::invalid_argument(std::string(op) + ": p must be > 1");
}

}  // namespace

double signed_power(double t, double p) {
    if (t == 0.0) return 0.0;
    // Computed as |t|^{p-1} sign(t); avoids 0^{negative} when p < 2.
    double m = std::pow(std::abs(t), p - 1.0);
    return t > 0.0 ? m : -m;
}

double integral_v(const WeightedGraph& g, const VertexFunction& u) {
    check_length(g, u, "integral_v");
    double s = 0.0;
    for (int i = 0; i < g.vertex_count(); ++i) s += g.mu(i) * u[static_cast<std::size_t>(i)];
    return s;
}

EdgeFunction edge_gradient_abs(const WeightedGraph& g, const VertexFunction& u) {
    check_length(g, u, "edge_gradient_abs");
    EdgeFunction out;
    out.reserve(g.edge_count());
    for (const auto& e : g.edges())
        out.push_back(std::abs(u[static_cast<std::size_t>(e.j)] -
                               u[static_cast<std::size_t>(e.i)]));
    return out;
}

double dirichlet_energy(const WeightedGraph& g, const VertexFunction& u, double p) {
    check_length(g, u, "dirichlet_energy");
    check_p(p, "dirichlet_energy");
    double s = 0.0;
    for (const auto& e : g.edges()) {
        double d = std::abs(u[static_cast<std::size_t>(e.j)] - u[static_cast<std::size_t>(e.i)]);
        if (d != 0.0) s += e.omega * std::pow(d, p);
    }
    return s;
}

VertexFunction p_laplacian(const WeightedGraph& g, const VertexFunction& u, double p) {
    check_length(g, u, "p_laplacian");
    check_p(p, "p_laplacian");
    VertexFunction out(u.size(), 0.0);
    for (int i = 0; i < g.vertex_count(); ++i) {
        double acc = 0.0;
        for (const auto& inc : g.neighbors(i))
            acc += inc.omega * signed_power(u[static_cast<std::size_t>(inc.neighbor)] -
                                                u[static_cast<std::size_t>(i)],
                                            p);
        out[static_cast<std::size_t>(i)] = acc / g.mu(i);
    }
    return out;
}

double sobolev_norm(const WeightedGraph& g, const VertexFunction& u, double p) {
    check_p(p, "sobolev_norm");
    double vol_term = 0.0;
    for (int i = 0; i < g.vertex_count(); ++i) {
        double a = std::abs(u[static_cast<std::size_t>(i)]);
        if (a != 0.0) vol_term += g.mu(i) * std::pow(a, p);
    }
    return std::pow(dirichlet_energy(g, u, p) + vol_term, 1.0 / p);
}

double p_norm(const WeightedGraph& g, const VertexFunction& u, double q) {
    check_length(g, u, "p_norm");
    if (!(q >= 1.0)) throw std::invalid_argument("p_norm: q must be >= 1");
    double s = 0.0;
    for (int i = 0; i < g.vertex_count(); ++i) {
        double a = std::abs(u[static_cast<std::size_t>(i)]);
        if (a != 0.0) s += g.mu(i) * std::pow(a, q);
    }
    return std::pow(s, 1.0 / q);
}

GreenPairing green_pairing(const WeightedGraph& g, const VertexFunction& u, double p) {
    VertexFunction lap = p_laplacian(g, u, p);
    VertexFunction prod(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) prod[i] = u[i] * lap[i];
    return GreenPairing{integral_v(g, prod), -dirichlet_energy(g, u, p)};
}

}  // namespace yamabe
