#pragma once

#include "yamabe/graph.hpp"

namespace yamabe {

enum class OracleMethod { grid_1d, eigen_2x2, eigen_dense, finite_difference };

struct OracleReport {
    double beta_oracle = 0.0;
    double lambda_oracle = 0.0;
    VertexFunction phi_oracle;  // strictly positive, constraint-normalized
    OracleMethod method = OracleMethod::grid_1d;
    double gap = 0.0;  // |beta_solver - beta_oracle|, filled by the caller
};

/// Exhaustive minimization of I over phi = (1, t) for a two-vertex instance.
/// Log-spaced grid with adaptive range doubling, then 3 local refinements;
/// beta_oracle accurate to about 1e-8 absolute.
OracleReport grid_search_two_vertex(const ProblemInstance& inst, int resolution = 20000);

/// Linear case p = alpha = 2: minimal generalized Rayleigh quotient of
/// (Dirichlet - int h phi^2) over int f phi^2, solved densely (characteristic
/// polynomial for n <= 3, shifted inverse power iteration for n <= 12).
OracleReport linear_eigen_oracle(const ProblemInstance& inst);

/// Central finite differences of the energy, step s_i = step * max(1, |phi_i|),
/// shrunk where phi - s e_i would leave the admissible cone.
VertexFunction finite_difference_gradient(const ProblemInstance& inst,
                                          const VertexFunction& phi, double step = 1e-6);

}  // namespace yamabe
