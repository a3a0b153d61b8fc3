#include "yamabe/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "yamabe/solver.hpp"
#include "yamabe/variational.hpp"

namespace yamabe {

namespace {

using Matrix = std::vector<std::vector<double>>;

// Solve M x = b by Gaussian elimination with partial pivoting (tiny n).
std::vector<double> lu_solve(Matrix m, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        double d = m[col][col];
        if (d == 0.0) d = 1e-300;  // shift landed on an eigenvalue; keep going
        for (std::size_t r = col + 1; r < n; ++r) {
            double factor = m[r][col] / d;
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= m[r][c] * x[c];
        double d = m[r][r];
        if (d == 0.0) d = 1e-300;
        x[r] = s / d;
    }
    return x;
}

double rayleigh(const Matrix& c, const std::vector<double>& v) {
    const std::size_t n = v.size();
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += c[i][j] * v[j];
        num += v[i] * row;
    }
    return num;
}

void normalize_euclid(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    for (double& x : v) x /= s;
}

double eig_residual(const Matrix& c, const std::vector<double>& v, double rho) {
    const std::size_t n = v.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += c[i][j] * v[j];
        worst = std::max(worst, std::abs(row - rho * v[i]));
    }
    return worst;
}

// Smallest eigenvalue of a symmetric n<=3 matrix by its characteristic polynomial.
double char_poly_min_eig(const Matrix& c) {
    const std::size_t n = c.size();
    if (n == 1) return c[0][0];
    if (n == 2) {
        double tr = c[0][0] + c[1][1];
        double det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
        double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
        return (tr - disc) / 2.0;
    }
    // n == 3: trigonometric solution, all roots real by symmetry.
    double p1 = c[0][1] * c[0][1] + c[0][2] * c[0][2] + c[1][2] * c[1][2];
    if (p1 == 0.0) return std::min({c[0][0], c[1][1], c[2][2]});
    double q = (c[0][0] + c[1][1] + c[2][2]) / 3.0;
    double p2 = (c[0][0] - q) * (c[0][0] - q) + (c[1][1] - q) * (c[1][1] - q) +
                (c[2][2] - q) * (c[2][2] - q) + 2.0 * p1;
    double pp = std::sqrt(p2 / 6.0);
    Matrix b(3, std::vector<double>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                (c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                 (i == j ? q : 0.0)) /
                pp;
    double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                  b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                  b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    double r = std::clamp(detb / 2.0, -1.0, 1.0);
    double theta = std::acos(r) / 3.0;
    // cos(theta + 2pi/3) gives the smallest of the three roots.
    return q + 2.0 * pp * std::cos(theta + 2.0 * M_PI / 3.0);
}

// Smallest eigenpair of symmetric C: all-ones start, power iteration on the
// nonnegative shifted matrix gI - C, then shifted inverse power iteration.
std::pair<double, std::vector<double>> smallest_eigenpair(const Matrix& c) {
    const std::size_t n = c.size();
    std::vector<double> v(n, 1.0);
    normalize_euclid(v);

    double scale = 0.0;
    double gersh_lo = 0.0, gersh_hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) off += std::abs(c[i][j]);
        scale = std::max(scale, std::abs(c[i][i]) + off);
        double lo = c[i][i] - off, hi = c[i][i] + off;
        if (i == 0) {
            gersh_lo = lo;
            gersh_hi = hi;
        } else {
            gersh_lo = std::min(gersh_lo, lo);
            gersh_hi = std::max(gersh_hi, hi);
        }
    }
    if (scale == 0.0) scale = 1.0;

    double rho;
    if (n <= 3) {
        rho = char_poly_min_eig(c);
    } else {
        // Perron vector of gI - C is the minimal eigenvector of C and is
        // reachable from a positive start on a connected graph.
        double g = gersh_hi + 1.0;
        for (int it = 0; it < 2000; ++it) {
            std::vector<double> w(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    row += (i == j ? g - c[i][j] : -c[i][j]) * v[j];
                w[i] = row;
            }
            normalize_euclid(w);
            v = std::move(w);
        }
        rho = rayleigh(c, v);
    }

    // Inverse power iteration polish, tolerance 1e-13 relative.
    double shift = rho - 1e-6 * scale;
    const double tol = 1e-13 * scale;
    for (int it = 0; it < 10000; ++it) {
        Matrix m = c;
        for (std::size_t i = 0; i < n; ++i) m[i][i] -= shift;
        std::vector<double> w = lu_solve(std::move(m), v);
        normalize_euclid(w);
        v = std::move(w);
        rho = rayleigh(c, v);
        if (eig_residual(c, v, rho) <= tol) break;
        shift = rho - 1e-10 * scale;
    }
    return {rho, std::move(v)};
}

}  // namespace

OracleReport grid_search_two_vertex(const ProblemInstance& inst, int resolution) {
    if (inst.graph.vertex_count() != 2 || inst.graph.edge_count() != 1)
        throw std::invalid_argument("grid_search_two_vertex: need n = 2 with a single edge");
    if (resolution < 10) throw std::invalid_argument("grid_search_two_vertex: resolution too small");

    auto value_at = [&](double t) { return energy(inst, VertexFunction{1.0, t}).energy; };

    double lo = 1e-4, hi = 1e4;
    std::vector<double> ts(static_cast<std::size_t>(resolution));
    std::vector<double> vals(static_cast<std::size_t>(resolution));
    std::size_t best = 0;

    auto scan = [&](double a, double b) {
        double la = std::log(a), lb = std::log(b);
        for (std::size_t k = 0; k < ts.size(); ++k) {
            double frac = static_cast<double>(k) / static_cast<double>(ts.size() - 1);
            ts[k] = std::exp(la + (lb - la) * frac);
            vals[k] = value_at(ts[k]);
        }
        best = 0;
        for (std::size_t k = 1; k < ts.size(); ++k)
            if (vals[k] < vals[best]) best = k;
    };

    scan(lo, hi);
    // Widen until the boundary values exceed the interior minimum.
    for (int attempt = 0; attempt < 40 && (best == 0 || best + 1 == ts.size()); ++attempt) {
        if (best == 0) lo /= 16.0;
        if (best + 1 == ts.size()) hi *= 16.0;
        scan(lo, hi);
    }
    for (int round = 0; round < 3; ++round) {
        double a = ts[best > 0 ? best - 1 : 0];
        double b = ts[best + 1 < ts.size() ? best + 1 : ts.size() - 1];
        scan(a, b);
    }

    VertexFunction phi = normalize(inst, VertexFunction{1.0, ts[best]});
    EnergyBreakdown bd = energy(inst, phi);
    OracleReport rep;
    rep.beta_oracle = bd.energy;
    rep.lambda_oracle = bd.lambda;
    rep.phi_oracle = std::move(phi);
    rep.method = OracleMethod::grid_1d;
    return rep;
}

OracleReport linear_eigen_oracle(const ProblemInstance& inst) {
    if (inst.p != 2.0 || inst.alpha != 2.0)
        throw std::invalid_argument("linear_eigen_oracle: requires p = 2 and alpha = 2");
    const int n = inst.graph.vertex_count();
    if (n > 12) throw std::invalid_argument("linear_eigen_oracle: n must be <= 12");

    const auto un = static_cast<std::size_t>(n);
    // A = graph Laplacian quadratic form minus diag(mu h); B = diag(mu f).
    Matrix a(un, std::vector<double>(un, 0.0));
    for (const auto& e : inst.graph.edges()) {
        auto i = static_cast<std::size_t>(e.i), j = static_cast<std::size_t>(e.j);
        a[i][i] += e.omega;
        a[j][j] += e.omega;
        a[i][j] -= e.omega;
        a[j][i] -= e.omega;
    }
    std::vector<double> d(un);
    for (int i = 0; i < n; ++i) {
        auto k = static_cast<std::size_t>(i);
        a[k][k] -= inst.graph.mu(i) * inst.h[k];
        d[k] = inst.graph.mu(i) * inst.f[k];
    }
    Matrix c(un, std::vector<double>(un));
    for (std::size_t i = 0; i < un; ++i)
        for (std::size_t j = 0; j < un; ++j) c[i][j] = a[i][j] / std::sqrt(d[i] * d[j]);

    auto [beta, v] = smallest_eigenpair(c);

    double sum = 0.0;
    for (double x : v) sum += x;
    if (sum < 0.0)
        for (double& x : v) x = -x;
    for (std::size_t k = 0; k < un; ++k)
        if (!(v[k] > 0.0))
            throw std::runtime_error("linear_eigen_oracle: eigenvector not strictly positive");

    VertexFunction phi(un);
    for (std::size_t k = 0; k < un; ++k) phi[k] = v[k] / std::sqrt(d[k]);
    phi = normalize(inst, phi);

    // Internal consistency: A phi = beta B phi in original coordinates.
    double worst = 0.0, mag = 0.0;
    for (std::size_t i = 0; i < un; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < un; ++j) row += a[i][j] * phi[j];
        worst = std::max(worst, std::abs(row - beta * d[i] * phi[i]));
        mag = std::max(mag, std::abs(row));
    }
    if (worst > 1e-10 * (1.0 + mag))
        throw std::runtime_error("linear_eigen_oracle: eigenpair residual check failed");

    OracleReport rep;
    rep.beta_oracle = beta;
    rep.lambda_oracle = -beta;
    rep.phi_oracle = std::move(phi);
    rep.method = n <= 2 ? OracleMethod::eigen_2x2 : OracleMethod::eigen_dense;
    return rep;
}

VertexFunction finite_difference_gradient(const ProblemInstance& inst,
                                          const VertexFunction& phi, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("finite_difference_gradient: step must be > 0");
    for (std::size_t k = 0; k < phi.size(); ++k)
        if (!(phi[k] > 0.0))
            throw std::domain_error("finite_difference_gradient: phi must be positive, vertex " +
                                    std::to_string(k));

    VertexFunction fd(phi.size());
    VertexFunction work = phi;
    for (std::size_t k = 0; k < phi.size(); ++k) {
        double s = step * std::max(1.0, std::abs(phi[k]));
        int shrinks = 0;
        while (phi[k] - s <= 0.0) {
            s /= 2.0;
            if (++shrinks > 40)
                throw std::domain_error(
                    "finite_difference_gradient: cannot keep perturbation admissible at vertex " +
                    std::to_string(k));
        }
        work[k] = phi[k] + s;
        double up = energy(inst, work).energy;
        work[k] = phi[k] - s;
        double down = energy(inst, work).energy;
        work[k] = phi[k];
        fd[k] = (up - down) / (2.0 * s);
    }
    return fd;
}

}  // namespace yamabe
