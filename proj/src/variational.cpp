#include "yamabe/variational.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "yamabe/operators.hpp"

namespace yamabe {

namespace {

void check_admissible(const ProblemInstance& inst, const VertexFunction& phi, const char* op) {
    if (static_cast<int>(phi.size()) != inst.graph.vertex_count())
        throw std::invalid_argument(std::string(op) + ": phi length mismatch");
    bool all_zero = true;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (!(phi[i] >= 0.0))
            throw std::domain_error(std::string(op) + ": phi must be nonnegative, vertex " +
                                    std::to_string(i));
        if (phi[i] != 0.0) all_zero = false;
    }
    if (all_zero)
        throw std::domain_error(std::string(op) + ": phi must not be identically zero");
}

void check_strictly_positive(const VertexFunction& phi, const char* op) {
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (!(phi[i] > 0.0))
            throw std::domain_error(std::string(op) + ": phi must be strictly positive, vertex " +
                                    std::to_string(i));
}

}  // namespace

EnergyBreakdown energy(const ProblemInstance& inst, const VertexFunction& phi) {
    check_admissible(inst, phi, "energy");
    const auto& g = inst.graph;
    double dirichlet = dirichlet_energy(g, phi, inst.p);
    double h_term = 0.0;
    double constraint = 0.0;
    for (int i = 0; i < g.vertex_count(); ++i) {
        auto k = static_cast<std::size_t>(i);
        double pp = phi[k] == 0.0 ? 0.0 : std::pow(phi[k], inst.p);
        double pa = phi[k] == 0.0 ? 0.0 : std::pow(phi[k], inst.alpha);
        h_term += g.mu(i) * inst.h[k] * pp;
        constraint += g.mu(i) * inst.f[k] * pa;
    }
    double numerator = dirichlet - h_term;
    EnergyBreakdown bd;
    bd.dirichlet = dirichlet;
    bd.h_term = h_term;
    bd.constraint = constraint;
    bd.energy = numerator * std::pow(constraint, -inst.p / inst.alpha);
    bd.lambda = -numerator / constraint;
    return bd;
}

double lambda_of(const ProblemInstance& inst, const VertexFunction& phi) {
    return energy(inst, phi).lambda;
}

VertexFunction energy_gradient(const ProblemInstance& inst, const VertexFunction& phi) {
    check_admissible(inst, phi, "energy_gradient");
    if (inst.p < 2.0 || inst.alpha < 2.0) check_strictly_positive(phi, "energy_gradient");

    EnergyBreakdown bd = energy(inst, phi);
    VertexFunction lap = p_laplacian(inst.graph, phi, inst.p);
    double prefactor = inst.p * std::pow(bd.constraint, -inst.p / inst.alpha);

    VertexFunction grad(phi.size());
    for (int i = 0; i < inst.graph.vertex_count(); ++i) {
        auto k = static_cast<std::size_t>(i);
        double pow_p1 = phi[k] == 0.0 ? 0.0 : std::pow(phi[k], inst.p - 1.0);
        double pow_a1 = phi[k] == 0.0 ? 0.0 : std::pow(phi[k], inst.alpha - 1.0);
        double eq = lap[k] + inst.h[k] * pow_p1 - bd.lambda * inst.f[k] * pow_a1;
        grad[k] = -prefactor * inst.graph.mu(i) * eq;
    }
    return grad;
}

VertexFunction residual(const ProblemInstance& inst, const VertexFunction& phi, double lambda) {
    if (static_cast<int>(phi.size()) != inst.graph.vertex_count())
        throw std::invalid_argument("residual: phi length mismatch");
    check_strictly_positive(phi, "residual");
    VertexFunction lap = p_laplacian(inst.graph, phi, inst.p);
    VertexFunction r(phi.size());
    for (std::size_t k = 0; k < phi.size(); ++k)
        r[k] = lap[k] + inst.h[k] * std::pow(phi[k], inst.p - 1.0) -
               lambda * inst.f[k] * std::pow(phi[k], inst.alpha - 1.0);
    return r;
}

double lower_bound(const ProblemInstance& inst) {
    double h_max = inst.h[0];
    double f_min = inst.f[0];
    for (std::size_t k = 1; k < inst.h.size(); ++k) {
        h_max = std::max(h_max, inst.h[k]);
        f_min = std::min(f_min, inst.f[k]);
    }
    // integral f phi^alpha = 1 only bounds integral phi^alpha by 1/f_min,
    // so the Hoelder constant must use the minimum of f.
    double coeff = std::min(-h_max, 0.0);
    double ratio = inst.p / inst.alpha;
    return coeff * std::pow(f_min, -ratio) * std::pow(inst.graph.volume(), 1.0 - ratio);
}

HolderCheck holder_check(const WeightedGraph& g, const VertexFunction& phi, double p,
                         double alpha) {
    if (!(p >= 1.0) || !(alpha >= p))
        throw std::invalid_argument("holder_check: need alpha >= p >= 1");
    double lhs = std::pow(p_norm(g, phi, p), p);
    double rhs = std::pow(p_norm(g, phi, alpha), p) * std::pow(g.volume(), 1.0 - p / alpha);
    return HolderCheck{lhs, rhs};
}

}  // namespace yamabe
