#pragma once

#include "yamabe/graph.hpp"

namespace yamabe {

/// Real-valued function on the stored (unordered) edge list.
using EdgeFunction = std::vector<double>;

/// |t|^{p-2} t, continuously extended to 0 at t = 0 (needed for p < 2).
double signed_power(double t, double p);

/// int_V u dmu = sum_i mu_i u_i.
double integral_v(const WeightedGraph& g, const VertexFunction& u);

/// |grad u|_{ij} = |u_j - u_i| per stored edge.
EdgeFunction edge_gradient_abs(const WeightedGraph& g, const VertexFunction& u);

/// int_E |grad u|^p domega, summed once per unordered edge.
double dirichlet_energy(const WeightedGraph& g, const VertexFunction& u, double p);

/// (Delta_p u)_i = (1/mu_i) sum_{j~i} omega_ij |u_j-u_i|^{p-2}(u_j-u_i).
VertexFunction p_laplacian(const WeightedGraph& g, const VertexFunction& u, double p);

/// W^{1,p} norm: (int_E |grad u|^p domega + int_V |u|^p dmu)^{1/p}.
double sobolev_norm(const WeightedGraph& g, const VertexFunction& u, double p);

/// ||u||_q = (sum_i mu_i |u_i|^q)^{1/q}, q >= 1.
double p_norm(const WeightedGraph& g, const VertexFunction& u, double q);

struct GreenPairing {
    double lhs;  // int_V u Delta_p u dmu
    double rhs;  // -int_E |grad u|^p domega
};

/// Both sides of the summation-by-parts identity, evaluated independently.
GreenPairing green_pairing(const WeightedGraph& g, const VertexFunction& u, double p);

}  // namespace yamabe
