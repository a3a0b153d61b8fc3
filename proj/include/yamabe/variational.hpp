#pragma once

#include "yamabe/graph.hpp"

namespace yamabe {

/// The three integrals behind the energy functional
///   I(phi) = (int_E |grad phi|^p domega - int_V h phi^p dmu)
///            * (int_V f phi^alpha dmu)^{-p/alpha}
/// together with I itself and the multiplier lambda_phi.
struct EnergyBreakdown {
    double dirichlet;   // int_E |grad phi|^p domega
    double h_term;      // int_V h phi^p dmu
    double constraint;  // int_V f phi^alpha dmu
    double energy;      // I(phi)
    double lambda;      // -(dirichlet - h_term)/constraint
};

/// Requires phi >= 0 entrywise and phi not identically zero.
EnergyBreakdown energy(const ProblemInstance& inst, const VertexFunction& phi);

double lambda_of(const ProblemInstance& inst, const VertexFunction& phi);

/// dI/dphi_i = -p mu_i (Delta_p phi_i + h_i phi_i^{p-1} - lambda_phi f_i phi_i^{alpha-1})
///             * constraint^{-p/alpha}.
/// Requires phi > 0 strictly when p < 2 or alpha < 2; zeros allowed otherwise.
VertexFunction energy_gradient(const ProblemInstance& inst, const VertexFunction& phi);

/// Defect of the equation at each vertex:
///   r_i = Delta_p phi_i + h_i phi_i^{p-1} - lambda f_i phi_i^{alpha-1}.
/// Requires phi > 0 entrywise.
VertexFunction residual(const ProblemInstance& inst, const VertexFunction& phi, double lambda);

/// The universal lower bound C = ((-h)_m ^ 0) f_M^{-p/alpha} Vol(G)^{1-p/alpha},
/// with I(phi) >= C for every admissible phi.
double lower_bound(const ProblemInstance& inst);

struct HolderCheck {
    double lhs;  // ||phi||_p^p
    double rhs;  // ||phi||_alpha^p * Vol(G)^{1-p/alpha}
};

/// Both sides of the Hoelder bound ||phi||_p^p <= ||phi||_alpha^p Vol^{1-p/alpha}.
HolderCheck holder_check(const WeightedGraph& g, const VertexFunction& phi, double p,
                         double alpha);

}  // namespace yamabe
