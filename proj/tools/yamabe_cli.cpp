// Command-line front end for the graph Yamabe solver.
//
// Subcommands: solve, gen, verify, sweep, gradcheck. All output is JSON or
// CSV; all randomness flows from --seed. Exit codes: 0 success, 1 invalid
// input, 2 non-convergence.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "yamabe/graph.hpp"
#include "yamabe/instance_io.hpp"
#include "yamabe/operators.hpp"
#include "yamabe/oracles.hpp"
#include "yamabe/rng.hpp"
#include "yamabe/solver.hpp"
#include "yamabe/variational.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

using nlohmann::ordered_json;

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

yamabe::WeightPolicy parse_weights(const std::string& spec) {
    if (spec == "unit") return {};
    if (spec.rfind("uniform:", 0) == 0) {
        double a = 0.0, b = 0.0;
        if (std::sscanf(spec.c_str() + 8, "%lf,%lf", &a, &b) != 2)
            throw std::invalid_argument("bad weight spec: " + spec);
        return yamabe::WeightPolicy::uniform(a, b);
    }
    throw std::invalid_argument("bad weight spec (want unit or uniform:a,b): " + spec);
}

// Vertex-function spec: "const:v" or "uniform:a,b" (seeded draw).
yamabe::VertexFunction parse_vertex_spec(const std::string& spec, int n, std::mt19937_64& rng) {
    if (spec.rfind("const:", 0) == 0) {
        double v = 0.0;
        if (std::sscanf(spec.c_str() + 6, "%lf", &v) != 1)
            throw std::invalid_argument("bad vertex spec: " + spec);
        return yamabe::VertexFunction(static_cast<std::size_t>(n), v);
    }
    if (spec.rfind("uniform:", 0) == 0) {
        double a = 0.0, b = 0.0;
        if (std::sscanf(spec.c_str() + 8, "%lf,%lf", &a, &b) != 2)
            throw std::invalid_argument("bad vertex spec: " + spec);
        yamabe::VertexFunction out(static_cast<std::size_t>(n));
        for (double& x : out) x = yamabe::uniform_in(rng, a, b);
        return out;
    }
    throw std::invalid_argument("bad vertex spec (want const:v or uniform:a,b): " + spec);
}

ordered_json config_json(const yamabe::SolverConfig& cfg) {
    ordered_json j;
    j["seed"] = cfg.seed;
    j["max_iters"] = cfg.max_iters;
    j["grad_tol"] = cfg.grad_tol;
    j["step_init"] = cfg.step_init;
    j["armijo_c"] = cfg.armijo_c;
    j["backtrack_factor"] = cfg.backtrack_factor;
    j["floor_eps"] = cfg.floor_eps;
    j["restarts"] = cfg.restarts;
    return j;
}

ordered_json result_json(const yamabe::ProblemInstance& inst, const yamabe::SolveResult& res) {
    ordered_json j;
    j["converged"] = res.converged;
    j["beta"] = res.beta;
    j["lambda"] = res.lambda;
    j["residual_inf"] = res.residual_inf;
    j["iterations"] = res.iterations;
    yamabe::VertexFunction falpha(res.phi.size());
    for (std::size_t k = 0; k < res.phi.size(); ++k)
        falpha[k] = inst.f[k] * std::pow(res.phi[k], inst.alpha);
    j["constraint"] = yamabe::integral_v(inst.graph, falpha);
    j["restarts_disagree"] = res.restarts_disagree;
    j["phi"] = res.phi;
    return j;
}

int cmd_solve(const std::string& path, const yamabe::SolverConfig& cfg, bool trace,
              const std::string& solution_out) {
    auto t0 = std::chrono::steady_clock::now();
    yamabe::ProblemInstance inst = yamabe::read_instance(path);
    yamabe::SolverConfig run_cfg = cfg;
    run_cfg.record_trace = trace;
    yamabe::SolveResult res = yamabe::solve(inst, run_cfg);
    auto t1 = std::chrono::steady_clock::now();

    ordered_json rec;
    rec["artifact_version"] = kVersion;
    rec["command"] = "solve";
    rec["instance"] = path;
    rec["config"] = config_json(run_cfg);
    rec["result"] = result_json(inst, res);
    if (trace) {
        auto tr = ordered_json::array();
        for (const auto& pt : res.trace) tr.push_back({pt.iteration, pt.energy, pt.residual_inf});
        rec["trace"] = std::move(tr);
    }
    rec["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0).count();
    std::cout << rec.dump(2) << '\n';

    if (!solution_out.empty())
        yamabe::write_solution({res.phi, res.lambda}, solution_out);
    return res.converged ? 0 : 2;
}

int cmd_verify(const std::string& instance_path, const std::string& solution_path, double tol) {
    yamabe::ProblemInstance inst = yamabe::read_instance(instance_path);
    yamabe::Solution sol = yamabe::read_solution(solution_path);
    if (static_cast<int>(sol.phi.size()) != inst.graph.vertex_count())
        throw std::invalid_argument("solution phi length does not match instance");

    bool positive = true;
    for (double x : sol.phi)
        if (!(x > 0.0)) positive = false;

    ordered_json rec;
    rec["artifact_version"] = kVersion;
    rec["command"] = "verify";
    rec["instance"] = instance_path;
    rec["solution"] = solution_path;
    rec["tol"] = tol;
    rec["positive"] = positive;

    bool pass = positive;
    if (positive) {
        yamabe::VertexFunction r = yamabe::residual(inst, sol.phi, sol.lambda);
        double rinf = 0.0, scale = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            rinf = std::max(rinf, std::abs(r[k]));
            scale = std::max(scale, std::abs(sol.lambda * inst.f[k] *
                                             std::pow(sol.phi[k], inst.alpha - 1.0)));
        }
        yamabe::VertexFunction falpha(sol.phi.size());
        for (std::size_t k = 0; k < sol.phi.size(); ++k)
            falpha[k] = inst.f[k] * std::pow(sol.phi[k], inst.alpha);
        rec["residual"] = r;
        rec["residual_inf"] = rinf;
        rec["constraint"] = yamabe::integral_v(inst.graph, falpha);
        pass = rinf <= tol * (1.0 + scale);
    }
    rec["pass"] = pass;
    std::cout << rec.dump(2) << '\n';
    return pass ? 0 : 2;
}

struct GenSpec {
    yamabe::GraphFamily family;
    int n;
};

GenSpec parse_gen_spec(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("bad generator spec (want family:n): " + spec);
    GenSpec out{yamabe::parse_family(spec.substr(0, colon)), std::stoi(spec.substr(colon + 1))};
    return out;
}

int cmd_sweep(const std::string& gen_spec, std::uint64_t gen_seed, const std::string& weights,
              const std::vector<double>& p_list, const std::vector<double>& alpha_list,
              const std::string& h_spec, const std::string& f_spec, std::uint64_t seed,
              const std::string& out_csv) {
    for (double p : p_list)
        for (double a : alpha_list)
            if (!(a >= p) || !(p > 1.0))
                throw std::invalid_argument("sweep: pair (p=" + fmt17(p) + ", alpha=" + fmt17(a) +
                                            ") violates alpha >= p > 1");

    GenSpec gs = parse_gen_spec(gen_spec);
    yamabe::WeightedGraph graph =
        yamabe::generate(gs.family, gs.n, gen_seed, parse_weights(weights));
    std::mt19937_64 rng(seed);
    yamabe::VertexFunction h = parse_vertex_spec(h_spec, gs.n, rng);
    yamabe::VertexFunction f = parse_vertex_spec(f_spec, gs.n, rng);

    std::ofstream out(out_csv);
    if (!out) throw std::runtime_error("cannot write file: " + out_csv);
    out << "instance,p,alpha,beta,lambda,residual_inf,iterations,converged\n";
    for (double p : p_list)
        for (double a : alpha_list) {
            yamabe::ProblemInstance inst(graph, h, f, p, a);
            yamabe::SolverConfig cfg;
            cfg.seed = seed;
            yamabe::SolveResult res = yamabe::solve(inst, cfg);
            out << gen_spec << ',' << fmt17(p) << ',' << fmt17(a) << ',' << fmt17(res.beta) << ','
                << fmt17(res.lambda) << ',' << fmt17(res.residual_inf) << ',' << res.iterations
                << ',' << (res.converged ? "true" : "false") << '\n';
        }
    return 0;
}

int cmd_gradcheck(const std::string& path, int trials, std::uint64_t seed) {
    yamabe::ProblemInstance inst = yamabe::read_instance(path);
    ordered_json rec;
    rec["artifact_version"] = kVersion;
    rec["command"] = "gradcheck";
    rec["instance"] = path;
    rec["trials"] = trials;
    if (trials == 0) {
        rec["note"] = "no trials";
        rec["pass"] = true;
        std::cout << rec.dump(2) << '\n';
        return 0;
    }
    std::mt19937_64 rng(seed);
    const auto n = static_cast<std::size_t>(inst.graph.vertex_count());
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        yamabe::VertexFunction phi(n);
        for (double& x : phi) x = yamabe::uniform_in(rng, 0.5, 1.5);
        yamabe::VertexFunction g = yamabe::energy_gradient(inst, phi);
        yamabe::VertexFunction fd = yamabe::finite_difference_gradient(inst, phi, 1e-6);
        double diff = 0.0, mag = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            diff = std::max(diff, std::abs(g[k] - fd[k]));
            mag = std::max(mag, std::abs(fd[k]));
        }
        worst = std::max(worst, diff / (1e-30 + mag));
    }
    bool pass = worst <= 1e-4;
    rec["max_relative_error"] = worst;
    rec["pass"] = pass;
    std::cout << rec.dump(2) << '\n';
    return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"positive solutions of the p-th Yamabe equation on finite weighted graphs"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "minimize the energy and report (phi, lambda)");
    std::string solve_path, solution_out;
    yamabe::SolverConfig cfg;
    bool trace = false;
    solve_cmd->add_option("instance", solve_path, "instance JSON file")->required();
    solve_cmd->add_option("--seed", cfg.seed, "RNG seed for random restarts");
    solve_cmd->add_option("--max-iters", cfg.max_iters, "iteration cap per restart");
    solve_cmd->add_option("--tol", cfg.grad_tol, "relative residual tolerance");
    solve_cmd->add_option("--restarts", cfg.restarts, "number of starts (first is constant)");
    solve_cmd->add_flag("--trace", trace, "include the iteration trace in the record");
    solve_cmd->add_option("-o,--solution", solution_out, "also write {phi, lambda} to this file");

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate an instance file");
    std::string family, weights = "unit", h_spec = "const:0", f_spec = "const:1", gen_out;
    int gen_n = 0;
    std::uint64_t gen_seed = 0;
    double gen_p = 2.0, gen_alpha = 2.0;
    gen_cmd->set_help_flag("--help", "print help");  // frees --h for the function spec
    gen_cmd->add_option("family", family, "path|cycle|complete|star|random_connected")->required();
    gen_cmd->add_option("n", gen_n, "vertex count")->required();
    gen_cmd->add_option("--seed", gen_seed, "RNG seed");
    gen_cmd->add_option("--weights", weights, "unit or uniform:a,b");
    gen_cmd->add_option("--p", gen_p, "exponent p > 1");
    gen_cmd->add_option("--alpha", gen_alpha, "exponent alpha >= p");
    gen_cmd->add_option("--h", h_spec, "h spec: const:v or uniform:a,b");
    gen_cmd->add_option("--f", f_spec, "f spec: const:v or uniform:a,b (must stay positive)");
    gen_cmd->add_option("-o,--output", gen_out, "output file")->required();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "re-check a claimed solution");
    std::string verify_inst, verify_sol;
    double verify_tol = 1e-8;
    verify_cmd->add_option("instance", verify_inst, "instance JSON file")->required();
    verify_cmd->add_option("solution", verify_sol, "solution JSON file")->required();
    verify_cmd->add_option("--tol", verify_tol, "relative residual tolerance");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "solve across a (p, alpha) grid, write CSV");
    std::string sweep_gen, sweep_weights = "unit", sweep_h = "const:0", sweep_f = "const:1",
                sweep_out;
    std::vector<double> p_list, alpha_list;
    std::uint64_t sweep_seed = 0, sweep_gen_seed = 0;
    sweep_cmd->set_help_flag("--help", "print help");
    sweep_cmd->add_option("--gen", sweep_gen, "generator spec family:n")->required();
    sweep_cmd->add_option("--gen-seed", sweep_gen_seed, "graph generator seed");
    sweep_cmd->add_option("--weights", sweep_weights, "unit or uniform:a,b");
    sweep_cmd->add_option("--p", p_list, "p values")->delimiter(',');
    sweep_cmd->add_option("--alpha", alpha_list, "alpha values")->delimiter(',');
    sweep_cmd->add_option("--h", sweep_h, "h spec");
    sweep_cmd->add_option("--f", sweep_f, "f spec");
    sweep_cmd->add_option("--seed", sweep_seed, "solver / h,f draw seed");
    sweep_cmd->add_option("-o,--output", sweep_out, "output CSV")->required();

    // gradcheck
    auto* grad_cmd = app.add_subcommand("gradcheck", "finite-difference check of the gradient");
    std::string grad_path;
    int grad_trials = 20;
    std::uint64_t grad_seed = 0;
    grad_cmd->add_option("instance", grad_path, "instance JSON file")->required();
    grad_cmd->add_option("--trials", grad_trials, "number of random test points");
    grad_cmd->add_option("--seed", grad_seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return cmd_solve(solve_path, cfg, trace, solution_out);
        if (gen_cmd->parsed()) {
            std::mt19937_64 rng(gen_seed + 0x9e3779b97f4a7c15ULL);
            yamabe::WeightedGraph graph =
                yamabe::generate(yamabe::parse_family(family), gen_n, gen_seed,
                                 parse_weights(weights));
            yamabe::VertexFunction h = parse_vertex_spec(h_spec, gen_n, rng);
            yamabe::VertexFunction f = parse_vertex_spec(f_spec, gen_n, rng);
            yamabe::ProblemInstance inst(std::move(graph), std::move(h), std::move(f), gen_p,
                                         gen_alpha);
            yamabe::write_instance(inst, gen_out);
            return 0;
        }
        if (verify_cmd->parsed()) return cmd_verify(verify_inst, verify_sol, verify_tol);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_gen, sweep_gen_seed, sweep_weights, p_list, alpha_list,
                             sweep_h, sweep_f, sweep_seed, sweep_out);
        if (grad_cmd->parsed()) return cmd_gradcheck(grad_path, grad_trials, grad_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
