#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "support/random_instances.hpp"
#include "yamabe/operators.hpp"
#include "yamabe/solver.hpp"
#include "yamabe/variational.hpp"

using namespace yamabe;

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt5 = std::sqrt(5.0);

ProblemInstance k2_instance(VertexFunction h, VertexFunction f, double p, double alpha) {
    return ProblemInstance(WeightedGraph(2, {1.0, 1.0}, {{0, 1, 1.0}}), std::move(h),
                           std::move(f), p, alpha);
}

double constraint_of(const ProblemInstance& inst, const VertexFunction& phi) {
    return energy(inst, phi).constraint;
}

}  // namespace

TEST_CASE("normalize") {
    ProblemInstance inst = k2_instance({0.0, 0.0}, {1.0, 1.0}, 2.0, 2.0);
    VertexFunction out = normalize(inst, {1.0, 1.0});
    CHECK(out[0] == doctest::Approx(1.0 / kSqrt2).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(1.0 / kSqrt2).epsilon(1e-15));
    CHECK(std::abs(constraint_of(inst, out) - 1.0) <= 1e-14);

    // Idempotent on already-normalized input.
    VertexFunction again = normalize(inst, out);
    CHECK(std::abs(again[0] - out[0]) <= 1e-15);
    CHECK(std::abs(again[1] - out[1]) <= 1e-15);

    // Energy is unchanged.
    ProblemInstance gen = k2_instance({0.7, -0.3}, {1.0, 2.0}, 2.5, 4.0);
    VertexFunction phi{0.4, 1.9};
    CHECK(std::abs(energy(gen, normalize(gen, phi)).energy - energy(gen, phi).energy) <= 1e-12);

    CHECK_THROWS_AS(normalize(inst, {0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(normalize(inst, {-1.0, 1.0}), std::domain_error);
}

TEST_CASE("descend_step") {
    // At a critical point the step is a fixed point.
    ProblemInstance flat = k2_instance({0.0, 0.0}, {1.0, 1.0}, 2.0, 3.0);
    VertexFunction phi = normalize(flat, {1.0, 1.0});
    auto [next, e_next] = descend_step(flat, phi, 0.5);
    CHECK(std::abs(next[0] - phi[0]) <= 1e-14);
    CHECK(std::abs(next[1] - phi[1]) <= 1e-14);
    CHECK(e_next == doctest::Approx(energy(flat, phi).energy));

    // An accepted step decreases the energy away from a critical point.
    ProblemInstance gold = k2_instance({1.0, 0.0}, {1.0, 1.0}, 2.0, 2.0);
    VertexFunction start = normalize(gold, {1.0, 1.0});
    auto [moved, e_moved] = descend_step(gold, start, 0.1);
    CHECK(e_moved < energy(gold, start).energy);
}

TEST_CASE("solve: golden 2x2 eigenproblem") {
    ProblemInstance gold = k2_instance({1.0, 0.0}, {1.0, 1.0}, 2.0, 2.0);
    SolveResult res = solve(gold);
    REQUIRE(res.converged);
    double beta_exact = (1.0 - kSqrt5) / 2.0;
    CHECK(res.beta == doctest::Approx(beta_exact).epsilon(1e-9));
    CHECK(res.lambda == doctest::Approx(-beta_exact).epsilon(1e-9));
    // phi proportional to (1, (sqrt 5 - 1)/2).
    CHECK(res.phi[1] / res.phi[0] == doctest::Approx((kSqrt5 - 1.0) / 2.0).epsilon(1e-7));
    CHECK(std::abs(constraint_of(gold, res.phi) - 1.0) <= 1e-12);
    CHECK(std::abs(res.lambda + res.beta) <= 1e-10);
}

TEST_CASE("solve: constant minimizer equality case") {
    // K2, h=1, f=1, p=2, alpha=4: beta = -sqrt(2), minimizer constant.
    ProblemInstance inst = k2_instance({1.0, 1.0}, {1.0, 1.0}, 2.0, 4.0);
    SolveResult res = solve(inst);
    REQUIRE(res.converged);
    CHECK(res.beta == doctest::Approx(-kSqrt2).epsilon(1e-10));
    CHECK(res.phi[0] == doctest::Approx(res.phi[1]).epsilon(1e-8));
    CHECK(res.beta >= lower_bound(inst) - 1e-9);
}

TEST_CASE("solve: degenerate single vertex") {
    ProblemInstance one(WeightedGraph(1, {2.0}, {}), {0.7}, {1.3}, 2.0, 3.0);
    SolveResult res = solve(one);
    REQUIRE(res.converged);
    CHECK(res.phi[0] > 0.0);
    CHECK(std::abs(constraint_of(one, res.phi) - 1.0) <= 1e-12);
}

TEST_CASE("solve postconditions on random instances") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 2 + static_cast<int>(rng() % 12);
        double p = 1.5 + 0.5 * static_cast<double>(trial % 4);
        double alpha = p + static_cast<double>(trial % 3);
        auto sign = static_cast<testing::HSign>(trial % 3);
        ProblemInstance inst = testing::random_instance(rng, n, p, alpha, sign);
        SolverConfig cfg;
        cfg.seed = 100 + static_cast<std::uint64_t>(trial);
        SolveResult res = solve(inst, cfg);
        REQUIRE(res.converged);
        for (double x : res.phi) CHECK(x > cfg.floor_eps);
        CHECK(std::abs(constraint_of(inst, res.phi) - 1.0) <= 1e-12);
        CHECK(std::abs(res.lambda + res.beta) <= 1e-10 * (1.0 + std::abs(res.beta)));
        CHECK(res.beta >= lower_bound(inst) - 1e-9);

        // Residual verification independently recomputed.
        VertexFunction r = residual(inst, res.phi, res.lambda);
        double rinf = 0.0, scale = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            rinf = std::max(rinf, std::abs(r[k]));
            scale = std::max(scale, std::abs(res.lambda * inst.f[k] *
                                             std::pow(res.phi[k], inst.alpha - 1.0)));
        }
        CHECK(rinf <= cfg.grad_tol * (1.0 + scale));
    }
}

TEST_CASE("solve: monotone energy trace") {
    std::mt19937_64 rng(67);
    ProblemInstance inst = testing::random_instance(rng, 10, 2.5, 4.0);
    SolverConfig cfg;
    cfg.record_trace = true;
    SolveResult res = solve(inst, cfg);
    REQUIRE(res.converged);
    REQUIRE(res.trace.size() >= 2);
    for (std::size_t k = 1; k < res.trace.size(); ++k)
        CHECK(res.trace[k].energy <= res.trace[k - 1].energy + 1e-15);
}

TEST_CASE("solve: determinism under fixed seed") {
    std::mt19937_64 rng(71);
    ProblemInstance inst = testing::random_instance(rng, 9, 3.0, 4.5);
    SolverConfig cfg;
    cfg.seed = 12345;
    SolveResult a = solve(inst, cfg);
    SolveResult b = solve(inst, cfg);
    CHECK(a.beta == b.beta);
    CHECK(a.lambda == b.lambda);
    CHECK(a.residual_inf == b.residual_inf);
    CHECK(a.iterations == b.iterations);
    REQUIRE(a.phi.size() == b.phi.size());
    for (std::size_t k = 0; k < a.phi.size(); ++k) CHECK(a.phi[k] == b.phi[k]);
}

TEST_CASE("solve: minimizing-sequence boundedness along the trace") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 4; ++trial) {
        int n = 3 + static_cast<int>(rng() % 10);
        double p = 2.0 + 0.5 * static_cast<double>(trial);
        ProblemInstance inst = testing::random_instance(rng, n, p, p + 1.5);

        double h_max_abs = 0.0, f_min = inst.f[0];
        for (std::size_t k = 0; k < inst.h.size(); ++k) {
            h_max_abs = std::max(h_max_abs, std::abs(inst.h[k]));
            f_min = std::min(f_min, inst.f[k]);
        }
        double ratio = p / inst.alpha;
        double vol_term = (1.0 + h_max_abs) * std::pow(inst.graph.volume(), 1.0 - ratio) *
                          std::pow(f_min, -ratio);

        double beta0 = 0.0;
        bool first = true;
        double worst = -1e300;
        SolverConfig cfg;
        cfg.observer = [&](int, const VertexFunction& phi) {
            if (first) {
                beta0 = energy(inst, phi).energy;
                first = false;
            }
            double w = std::pow(sobolev_norm(inst.graph, phi, p), p);
            worst = std::max(worst, w - (1.0 + beta0 + vol_term));
        };
        SolveResult res = solve(inst, cfg);
        REQUIRE(res.converged);
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("solve: user-supplied initialization and restart bookkeeping") {
    ProblemInstance inst = k2_instance({1.0, 0.0}, {1.0, 1.0}, 2.0, 2.0);
    SolverConfig cfg;
    cfg.init_policy = InitPolicy::user_supplied;
    cfg.initial_phi = {2.0, 0.1};
    SolveResult res = solve(inst, cfg);
    REQUIRE(res.converged);
    CHECK(res.beta == doctest::Approx((1.0 - kSqrt5) / 2.0).epsilon(1e-9));
    CHECK_FALSE(res.restarts_disagree);

    cfg.initial_phi = {2.0};
    CHECK_THROWS_AS(solve(inst, cfg), std::invalid_argument);
}

TEST_CASE("solve: config validation") {
    ProblemInstance inst = k2_instance({0.0, 0.0}, {1.0, 1.0}, 2.0, 2.0);
    SolverConfig cfg;
    cfg.restarts = 0;
    CHECK_THROWS_AS(solve(inst, cfg), std::invalid_argument);
    cfg = SolverConfig{};
    cfg.armijo_c = 1.0;
    CHECK_THROWS_AS(solve(inst, cfg), std::invalid_argument);
    cfg = SolverConfig{};
    cfg.backtrack_factor = 0.0;
    CHECK_THROWS_AS(solve(inst, cfg), std::invalid_argument);
}

TEST_CASE("solve: alpha = p nonlinear eigenproblem path") {
    std::mt19937_64 rng(79);
    ProblemInstance inst = testing::random_instance(rng, 6, 3.0, 3.0);
    SolveResult res = solve(inst);
    REQUIRE(res.converged);
    // lambda is invariant under rescaling of the solution when alpha = p.
    VertexFunction scaled = res.phi;
    for (double& x : scaled) x *= 4.0;
    CHECK(lambda_of(inst, scaled) == doctest::Approx(res.lambda).epsilon(1e-10));
}
