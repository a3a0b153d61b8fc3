#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "yamabe/graph.hpp"

namespace yamabe {

enum class InitPolicy { constant, random_positive, user_supplied };

struct SolverConfig {
    int max_iters = 100000;
    // Convergence threshold on ||residual||_inf relative to ||lambda f phi^{alpha-1}||_inf.
    double grad_tol = 1e-9;
    double step_init = 1.0;
    double armijo_c = 1e-4;
    double backtrack_factor = 0.5;
    double floor_eps = 1e-14;  // positivity floor for the projection
    int restarts = 3;          // total starts; start 0 is the constant function
    std::uint64_t seed = 0;
    InitPolicy init_policy = InitPolicy::constant;
    VertexFunction initial_phi;  // used when init_policy == user_supplied
    bool record_trace = false;
    // Called with every accepted iterate (normalized); for diagnostics only.
    std::function<void(int iteration, const VertexFunction& phi)> observer;
};

struct TracePoint {
    int iteration;
    double energy;
    double residual_inf;
};

struct SolveResult {
    VertexFunction phi;  // strictly positive, int_V f phi^alpha dmu = 1
    double lambda = 0.0;
    double beta = 0.0;  // final energy I(phi)
    double residual_inf = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<TracePoint> trace;
    // Converged restarts reached beta values more than 1e-6 apart
    // (possible distinct minimizers; reported, not an error).
    bool restarts_disagree = false;
};

/// Rescale phi so that int_V f phi^alpha dmu = 1. Energy is unchanged.
VertexFunction normalize(const ProblemInstance& inst, const VertexFunction& phi);

/// One projected-gradient step at the given step size:
/// normalize(max(phi - step * grad I, floor_eps)). Returns the new iterate
/// and its energy.
std::pair<VertexFunction, double> descend_step(const ProblemInstance& inst,
                                               const VertexFunction& phi, double step,
                                               double floor_eps = 1e-14);

/// Minimize I over {phi > 0, int_V f phi^alpha dmu = 1} by projected gradient
/// descent with Armijo backtracking; best result over all restarts.
SolveResult solve(const ProblemInstance& inst, const SolverConfig& cfg = {});

}  // namespace yamabe
