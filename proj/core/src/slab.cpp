#include "meissner/slab.hpp"

#include <algorithm>
#include <cmath>

namespace meissner {

double superheating_closed_form() { return std::sqrt(5.0 / 18.0); }
double critical_field_closed_form() { return 1.0 / std::sqrt(2.0); }

double slab_a0_from_b(double b) {
    double b_max = superheating_closed_form();
    if (b < 0.0 || b > b_max + 1e-9)
        fail(ErrorKind::AboveThreshold, "no screened slab branch for b = " + std::to_string(b));
    if (b == 0.0) return 0.0;
    b = std::min(b, b_max);
    auto wall_field = [](double a0) { return a0 * std::sqrt(1.0 - 0.5 * a0 * a0); };
    double lo = 0.0, hi = kInvSqrt3;
    // wall_field is strictly increasing on [0, 1/sqrt(3)]
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (wall_field(mid) < b)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-16) break;
    }
    return 0.5 * (lo + hi);
}

void SlabProblem::fill_defaults() {
    if (L <= 0.0) L = 15.0 * lambda;
    if (n <= 0) n = std::max(600, static_cast<int>(40.0 * L / lambda));
}

SlabSolution solve_limit_ode(const SlabProblem& problem_in) {
    SlabProblem p = problem_in;
    p.fill_defaults();
    require(p.b >= 0.0, ErrorKind::InvalidSpec, "b must be nonnegative");

    SlabSolution sol;
    sol.a0 = slab_a0_from_b(p.b);
    double h = p.L / p.n;
    sol.x.resize(p.n + 1);
    sol.f.resize(p.n + 1);
    sol.a.resize(p.n + 1);
    sol.fp.resize(p.n + 1);
    sol.ap.resize(p.n + 1);

    // closed-form quadrature of the first integral:
    //   a(x) = sqrt(2) sin(2 atan(t0 exp(-x/lambda))), t0 = tan(asin(a0/sqrt 2)/2)
    double theta0 = std::asin(sol.a0 / std::sqrt(2.0));
    double t0 = std::tan(0.5 * theta0);
    double worst = 0.0;
    for (int i = 0; i <= p.n; ++i) {
        double x = i * h;
        double tau = t0 * std::exp(-x / p.lambda);
        double a = std::sqrt(2.0) * 2.0 * tau / (1.0 + tau * tau);
        double ap = -(a / p.lambda) * std::sqrt(std::max(0.0, 1.0 - 0.5 * a * a));
        double f = std::sqrt(std::max(0.0, 1.0 - a * a));
        double fp = f > 1e-14 ? -a * ap / f : 0.0;
        sol.x[i] = x;
        sol.a[i] = a;
        sol.ap[i] = ap;
        sol.f[i] = f;
        sol.fp[i] = fp;
        double first_int = 0.5 * p.lambda * p.lambda * ap * ap - 0.5 * a * a + 0.25 * a * a * a * a;
        worst = std::max(worst, std::abs(first_int));
    }
    sol.first_integral_residual = worst;
    sol.margin_wall = sol.f[0] * sol.f[0] - sol.a[0] * sol.a[0] - 1.0 / 3.0;
    return sol;
}

namespace {

// In-place solve of a block-tridiagonal system with 2x2 blocks.
// lower[i] x_{i-1} + diag[i] x_i + upper[i] x_{i+1} = rhs_i
struct Block {
    double m[2][2] = {{0, 0}, {0, 0}};
};

void block_thomas(std::vector<Block>& lower, std::vector<Block>& diag, std::vector<Block>& upper,
                  std::vector<std::array<double, 2>>& rhs) {
    std::size_t n = diag.size();
    auto inv2 = [](const Block& b) {
        double det = b.m[0][0] * b.m[1][1] - b.m[0][1] * b.m[1][0];
        require(std::abs(det) > 1e-300, ErrorKind::SolverFailure, "singular block");
        Block inv;
        inv.m[0][0] = b.m[1][1] / det;
        inv.m[0][1] = -b.m[0][1] / det;
        inv.m[1][0] = -b.m[1][0] / det;
        inv.m[1][1] = b.m[0][0] / det;
        return inv;
    };
    auto mul = [](const Block& a, const Block& b) {
        Block c;
        for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s)
                c.m[r][s] = a.m[r][0] * b.m[0][s] + a.m[r][1] * b.m[1][s];
        return c;
    };
    auto mulv = [](const Block& a, const std::array<double, 2>& v) {
        return std::array<double, 2>{a.m[0][0] * v[0] + a.m[0][1] * v[1],
                                     a.m[1][0] * v[0] + a.m[1][1] * v[1]};
    };
    // forward elimination
    for (std::size_t i = 1; i < n; ++i) {
        Block dinv = inv2(diag[i - 1]);
        Block w = mul(lower[i], dinv);
        Block wu = mul(w, upper[i - 1]);
        for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s) diag[i].m[r][s] -= wu.m[r][s];
        auto wr = mulv(w, rhs[i - 1]);
        rhs[i][0] -= wr[0];
        rhs[i][1] -= wr[1];
    }
    // back substitution
    std::vector<std::array<double, 2>> x(n);
    x[n - 1] = mulv(inv2(diag[n - 1]), rhs[n - 1]);
    for (std::size_t ii = n - 1; ii-- > 0;) {
        auto ux = mulv(upper[ii], x[ii + 1]);
        std::array<double, 2> r{rhs[ii][0] - ux[0], rhs[ii][1] - ux[1]};
        x[ii] = mulv(inv2(diag[ii]), r);
    }
    rhs = x;
}

}  // namespace

SlabSolution solve_full_ode(const SlabProblem& problem_in) {
    SlabProblem p = problem_in;
    p.fill_defaults();
    require(std::isfinite(p.kappa) && p.kappa > 0.0, ErrorKind::InvalidSpec,
            "full slab system needs finite kappa");
    require(p.b >= 0.0, ErrorKind::InvalidSpec, "b must be nonnegative");

    int n = p.n;
    double h = p.L / n, h2 = h * h;
    double eps = (p.lambda / p.kappa) * (p.lambda / p.kappa);
    double lam2 = p.lambda * p.lambda;

    std::vector<double> f(n + 1, 1.0), a(n + 1, 0.0);
    // warm start from the limiting profile when it exists
    if (p.b <= superheating_closed_form()) {
        SlabProblem lim = p;
        lim.kappa = std::numeric_limits<double>::infinity();
        SlabSolution ls = solve_limit_ode(lim);
        f = ls.f;
        a = ls.a;
    } else {
        for (int i = 0; i <= n; ++i) a[i] = p.b * std::exp(-i * h / p.lambda);
    }

    auto residual = [&](const std::vector<double>& fv, const std::vector<double>& av,
                        std::vector<double>& Rf, std::vector<double>& Ra) {
        for (int i = 0; i <= n; ++i) {
            double lap_f, lap_a;
            if (i == 0) {
                lap_f = 2.0 * (fv[1] - fv[0]) / h2;
                lap_a = (2.0 * av[1] - 2.0 * av[0] + 2.0 * h * p.b / p.lambda) / h2;
            } else if (i == n) {
                lap_f = 2.0 * (fv[n - 1] - fv[n]) / h2;
                lap_a = 0.0;  // Dirichlet row below
            } else {
                lap_f = (fv[i + 1] - 2.0 * fv[i] + fv[i - 1]) / h2;
                lap_a = (av[i + 1] - 2.0 * av[i] + av[i - 1]) / h2;
            }
            Rf[i] = -eps * lap_f - (1.0 - fv[i] * fv[i] - av[i] * av[i]) * fv[i];
            Ra[i] = (i == n) ? av[n] : lam2 * lap_a - fv[i] * fv[i] * av[i];
        }
    };

    std::vector<double> Rf(n + 1), Ra(n + 1);
    auto norm_of = [&](const std::vector<double>& u, const std::vector<double>& v) {
        double s = 0.0;
        for (int i = 0; i <= n; ++i) s += u[i] * u[i] + v[i] * v[i];
        return std::sqrt(s / (2.0 * (n + 1)));  // rms, grid-size independent
    };

    residual(f, a, Rf, Ra);
    double res = norm_of(Rf, Ra);
    double res0 = std::max(res, 1e-30);
    // round-off floor of the stiff second-difference terms
    double floor_rms =
        50.0 * std::numeric_limits<double>::epsilon() * ((lam2 + eps) / h2 + 1.0);
    double tol = std::max(1e-13 * res0, floor_rms);
    SlabSolution sol;

    std::vector<Block> lower(n + 1), diag(n + 1), upper(n + 1);
    std::vector<std::array<double, 2>> rhs(n + 1);

    for (int it = 0; it < 80 && res > tol; ++it) {
        for (int i = 0; i <= n; ++i) {
            lower[i] = Block{};
            diag[i] = Block{};
            upper[i] = Block{};
            double c_f = (i == 0 || i == n) ? 2.0 : 1.0;  // mirror ghosts double the neighbor
            // d Rf / d f
            diag[i].m[0][0] = eps * 2.0 / h2 - (1.0 - 3.0 * f[i] * f[i] - a[i] * a[i]);
            if (i > 0) lower[i].m[0][0] = -eps * (i == n ? 2.0 : 1.0) / h2;
            if (i < n) upper[i].m[0][0] = -eps * c_f / h2;
            // d Rf / d a
            diag[i].m[0][1] = 2.0 * a[i] * f[i];
            if (i == n) {
                diag[i].m[1][1] = 1.0;  // a(L) = 0
            } else {
                // d Ra / d a and d Ra / d f
                diag[i].m[1][1] = -lam2 * 2.0 / h2 - f[i] * f[i];
                if (i > 0) lower[i].m[1][1] = lam2 / h2;
                if (i < n) upper[i].m[1][1] = lam2 * (i == 0 ? 2.0 : 1.0) / h2;
                diag[i].m[1][0] = -2.0 * f[i] * a[i];
            }
            rhs[i] = {-Rf[i], -Ra[i]};
        }
        block_thomas(lower, diag, upper, rhs);

        double step = 1.0;
        std::vector<double> fn(n + 1), an(n + 1), Rf2(n + 1), Ra2(n + 1);
        bool accepted = false;
        for (int half = 0; half < 25; ++half) {
            for (int i = 0; i <= n; ++i) {
                fn[i] = f[i] + step * rhs[i][0];
                an[i] = a[i] + step * rhs[i][1];
            }
            double fmin = *std::min_element(fn.begin(), fn.end());
            if (fmin > 0.05) {
                residual(fn, an, Rf2, Ra2);
                double res2 = norm_of(Rf2, Ra2);
                if (res2 < res) {
                    f = fn;
                    a = an;
                    Rf = Rf2;
                    Ra = Ra2;
                    res = res2;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        sol.newton_iterations = it + 1;
        if (!accepted) break;  // line search exhausted; accept if near the floor
    }
    if (res > std::max(50.0 * tol, 1e-10 * (res0 + 1.0)))
        fail(ErrorKind::SolverFailure, "slab newton did not converge, rms residual " +
                                           std::to_string(res));

    sol.x.resize(n + 1);
    sol.f = f;
    sol.a = a;
    sol.fp.resize(n + 1);
    sol.ap.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        sol.x[i] = i * h;
        if (i == 0) {
            sol.fp[i] = 0.0;
            sol.ap[i] = -p.b / p.lambda;
        } else if (i == n) {
            sol.fp[i] = 0.0;
            sol.ap[i] = (3.0 * a[n] - 4.0 * a[n - 1] + a[n - 2]) / (2.0 * h);
        } else {
            sol.fp[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
            sol.ap[i] = (a[i + 1] - a[i - 1]) / (2.0 * h);
        }
    }
    sol.a0 = std::abs(a[0]);
    sol.margin_wall = f[0] * f[0] - a[0] * a[0] - 1.0 / 3.0;
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
        double fi = 0.5 * lam2 * sol.ap[i] * sol.ap[i] - 0.5 * a[i] * a[i] +
                    0.25 * a[i] * a[i] * a[i] * a[i];
        worst = std::max(worst, std::abs(fi));
    }
    sol.first_integral_residual = worst;  // diagnostic only at finite kappa
    return sol;
}

double slab_energy(const SlabSolution& sol, double lambda, double kappa, double b) {
    double eps = std::isfinite(kappa) ? (lambda / kappa) * (lambda / kappa) : 0.0;
    double sum = 0.0;
    std::size_t n = sol.x.size();
    for (std::size_t i = 0; i < n; ++i) {
        double fv = sol.f[i], av = sol.a[i];
        double one_minus_f2 = 1.0 - fv * fv;
        double dens = eps * sol.fp[i] * sol.fp[i] + fv * fv * av * av +
                      0.5 * one_minus_f2 * one_minus_f2;
        double field = lambda * sol.ap[i] + b;  // extension is the constant -b
        dens += field * field;
        double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        sum += w * dens;
    }
    return sum * (sol.x[1] - sol.x[0]);
}

}  // namespace meissner
