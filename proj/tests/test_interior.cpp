#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "meissner/interior.hpp"
#include "meissner/slab.hpp"
#include "test_util.hpp"

using namespace meissner;

namespace {

bool edge_is_dirichlet(const StaggeredGrid& g, int comp, const std::array<int, 3>& es, int i,
                       int j, int k) {
    std::array<int, 3> c{i, j, k};
    for (int a = 0; a < 3; ++a) {
        if (a == comp || !g.wall(a)) continue;
        if (c[a] == 0 || c[a] == es[a] - 1) return true;
    }
    return false;
}

// L2 over free edges of (curl_dual A - H / lambda); the Dirichlet rows carry
// the one-sided Neumann mismatch by construction and are excluded.
double equivalence_residual(const MeissnerStateFA& fa, const VectorField& H, double lambda) {
    VectorField cd = curl_dual(fa.A);
    const auto& g = fa.A.grid();
    double sum = 0.0, scale = 0.0;
    for (int d = 0; d < 3; ++d) {
        auto es = cd.shape(d);
        for (int i = 0; i < es[0]; ++i)
            for (int j = 0; j < es[1]; ++j)
                for (int k = 0; k < es[2]; ++k) {
                    if (edge_is_dirichlet(g, d, es, i, j, k)) continue;
                    double r = cd.at(d, i, j, k) - H.at(d, i, j, k) / lambda;
                    double w = g.cell_volume();
                    sum += w * r * r;
                    double hv = H.at(d, i, j, k) / lambda;
                    scale += w * hv * hv;
                }
    }
    return std::sqrt(sum) / std::max(std::sqrt(scale), 1e-30);
}

// Relative L2 over interior faces of lambda^2 curl(curl_dual A) + f^2 A.
double second_equation_residual(const MeissnerStateFA& fa, double lambda) {
    const auto& g = fa.A.grid();
    VectorField cd = curl_dual(fa.A);
    VectorField cc = curl(cd);
    VectorField F2 = face_average_of_squared(fa.f);
    double sum = 0.0, scale = 0.0;
    for (int d = 0; d < 3; ++d) {
        auto fs = cc.shape(d);
        for (int i = 0; i < fs[0]; ++i)
            for (int j = 0; j < fs[1]; ++j)
                for (int k = 0; k < fs[2]; ++k) {
                    // skip faces whose curl stencil touches a Dirichlet edge
                    bool interior = true;
                    std::array<int, 3> c{i, j, k};
                    for (int a = 0; a < 3; ++a) {
                        if (!g.wall(a)) continue;
                        if (a == d && (c[a] == 0 || c[a] == fs[a] - 1)) interior = false;
                        if (a != d && (c[a] == 0 || c[a] == fs[a] - 1)) interior = false;
                    }
                    if (!interior) continue;
                    double term = lambda * lambda * cc.at(d, i, j, k) +
                                  F2.at(d, i, j, k) * fa.A.at(d, i, j, k);
                    double ref = F2.at(d, i, j, k) * fa.A.at(d, i, j, k);
                    sum += term * term;
                    scale += ref * ref;
                }
    }
    return std::sqrt(sum) / std::max(std::sqrt(scale), 1e-30);
}

}  // namespace

TEST_CASE("linear maxwell: zero rhs gives zero") {
    auto g = box_grid(6, 6, 10, 1.0, 1.0, 1.0);
    ScalarField a(g, Placement::Node, 1.0);
    VectorField rhs(g, Placement::Edge);
    VectorField u = solve_linear_maxwell(a, rhs);
    CHECK(sup_norm(u) == 0.0);

    ScalarField bad(g, Placement::Node, -1.0);
    CHECK_THROWS_AS(solve_linear_maxwell(bad, rhs), Error);
}

TEST_CASE("linear maxwell: constant-coefficient manufactured solution converges at order 2") {
    auto run = [&](int n) {
        auto g = box_grid(n, n, n, 2.0 * M_PI, 2.0 * M_PI, M_PI, BoundaryKind::Periodic,
                          BoundaryKind::Periodic, BoundaryKind::Wall);
        double hx = g.spacing(0), hy = g.spacing(1), hz = g.spacing(2);
        ScalarField a(g, Placement::Node, 2.0);
        // u = curl(0,0, sin x sin y sin z): divergence-free, u_T = 0 on walls,
        // curl(a curl u) + u = (3a + 1) u
        auto ux = [](double x, double y, double z) {
            return std::sin(x) * std::cos(y) * std::sin(z);
        };
        auto uy = [](double x, double y, double z) {
            return -std::cos(x) * std::sin(y) * std::sin(z);
        };
        VectorField rhs(g, Placement::Edge);
        auto ex = rhs.shape(0);
        for (int i = 0; i < ex[0]; ++i)
            for (int j = 0; j < ex[1]; ++j)
                for (int k = 0; k < ex[2]; ++k)
                    rhs.at(0, i, j, k) = 7.0 * ux((i + 0.5) * hx, j * hy, k * hz);
        auto ey = rhs.shape(1);
        for (int i = 0; i < ey[0]; ++i)
            for (int j = 0; j < ey[1]; ++j)
                for (int k = 0; k < ey[2]; ++k)
                    rhs.at(1, i, j, k) = 7.0 * uy(i * hx, (j + 0.5) * hy, k * hz);
        VectorField u = solve_linear_maxwell(a, rhs, 1e-12);
        double err_sq = 0.0;
        for (int i = 0; i < ex[0]; ++i)
            for (int j = 0; j < ex[1]; ++j)
                for (int k = 0; k < ex[2]; ++k) {
                    double e = u.at(0, i, j, k) - ux((i + 0.5) * hx, j * hy, k * hz);
                    err_sq += e * e * g.cell_volume();
                }
        return std::sqrt(err_sq);
    };
    double e12 = run(12), e24 = run(24);
    double slope = std::log2(e12 / e24);
    CHECK(slope > 1.8);
    CHECK(slope < 2.3);
}

TEST_CASE("linear maxwell: variable-coefficient slab profile matches the two-point ODE") {
    // a(z) = 2 + cos z, u = sin(z) e_y on [0, pi]:
    // curl(a curl u) + u = (3 sin z + sin 2z) e_y
    auto run = [&](int n) {
        auto g = box_grid(4, 4, n, 1.0, 1.0, M_PI);
        double hz = g.spacing(2);
        ScalarField a(g, Placement::Node);
        auto ns = a.shape();
        for (int i = 0; i < ns[0]; ++i)
            for (int j = 0; j < ns[1]; ++j)
                for (int k = 0; k < ns[2]; ++k) a.at(i, j, k) = 2.0 + std::cos(k * hz);
        VectorField rhs(g, Placement::Edge);
        auto ey = rhs.shape(1);
        for (int i = 0; i < ey[0]; ++i)
            for (int j = 0; j < ey[1]; ++j)
                for (int k = 0; k < ey[2]; ++k)
                    rhs.at(1, i, j, k) = 3.0 * std::sin(k * hz) + std::sin(2.0 * k * hz);
        VectorField u = solve_linear_maxwell(a, rhs, 1e-12);
        double worst = 0.0;
        for (int k = 0; k < ey[2]; ++k)
            worst = std::max(worst, std::abs(u.at(1, 0, 0, k) - std::sin(k * hz)));
        return worst;
    };
    double e40 = run(40), e80 = run(80);
    CHECK(e40 < 2e-3);
    double slope = std::log2(e40 / e80);
    CHECK(slope > 1.6);
    CHECK(slope < 2.4);
}

TEST_CASE("limit system: zero datum solves to zero") {
    auto g = slab_box(200, 1.0);
    GLParameters params;
    params.lambda = 0.1;
    params.kappa = std::numeric_limits<double>::infinity();
    auto data = BoundaryData::slab_uniform(g, 0.0, 0.0);
    auto state = solve_limit_H(params, data, g);
    CHECK(sup_norm(state.H) <= 1e-14);
    CHECK(state.report.converged);
}

TEST_CASE("limit system on the slab reproduces the first-integral oracle") {
    GLParameters params;
    params.lambda = 0.1;
    params.kappa = std::numeric_limits<double>::infinity();
    double L = 1.2;
    int n = 2400;
    auto g = slab_box(n, L);
    auto data = BoundaryData::slab_uniform(g, -0.5, 0.0);
    auto state = solve_limit_H(params, data, g);
    REQUIRE(state.report.converged);

    MeissnerStateFA fa = recover_A(state);
    CHECK(state.report.sup_A == doctest::Approx(0.54120).epsilon(2e-3));
    CHECK(state.f.at(0, 0, 0) == doctest::Approx(0.84090).epsilon(2e-3));

    // profile against the oracle at matched points
    SlabProblem op;
    op.lambda = params.lambda;
    op.b = 0.5;
    op.L = L;
    op.n = 2 * n;
    auto oracle = solve_limit_ode(op);
    double worst_a = 0.0, worst_f = 0.0;
    for (int k = 0; k < n; ++k) {
        double a_face = std::abs(fa.A.at(0, 0, 0, k));
        worst_a = std::max(worst_a, std::abs(a_face - oracle.a[2 * k + 1]));
    }
    for (int k = 0; k <= n; ++k)
        worst_f = std::max(worst_f, std::abs(state.f.at(0, 0, k) - oracle.f[2 * k]));
    CHECK(worst_a <= 2e-3);
    CHECK(worst_f <= 2e-3);

    // structural diagnostics
    CHECK(interior_divergence(state.H) <= 1e-10);
    CHECK(state.report.curl_bound <= kCurlCap + 1e-6);
    CHECK(equivalence_residual(fa, state.H, params.lambda) <= 1e-7);
}

TEST_CASE("limit system margin approaches zero at the superheating datum") {
    GLParameters params;
    params.lambda = 0.05;
    params.kappa = std::numeric_limits<double>::infinity();
    auto g = slab_box(1500, 0.75);
    double prev = 1.0;
    for (double b : {0.30, 0.45, 0.52}) {
        auto data = BoundaryData::slab_uniform(g, -b, 0.0);
        auto state = solve_limit_H(params, data, g);
        double margin_exact = 1.0 - 2.0 * slab_a0_from_b(b) * slab_a0_from_b(b) - 1.0 / 3.0;
        CHECK(state.report.margin == doctest::Approx(margin_exact).epsilon(5e-3));
        CHECK(state.report.margin < prev);
        prev = state.report.margin;
    }
    // beyond the threshold the iterates leave the F-domain
    auto bad = BoundaryData::slab_uniform(g, -0.56, 0.0);
    bool threw = false;
    try {
        solve_limit_H(params, bad, g);
    } catch (const Error& e) {
        threw = true;
        CHECK((e.kind() == ErrorKind::OutOfDomain || e.kind() == ErrorKind::SolverFailure));
    }
    CHECK(threw);
}

TEST_CASE("full system: zero datum is the Meissner vacuum") {
    auto g = slab_box(200, 1.0);
    GLParameters params;
    params.lambda = 0.1;
    params.kappa = 50.0;
    auto data = BoundaryData::slab_uniform(g, 0.0, 0.0);
    auto state = solve_full_FH(params, data, g);
    CHECK(sup_norm(state.H) <= 1e-12);
    for (double v : state.f.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("full system on the slab matches the collocation oracle") {
    GLParameters params;
    params.lambda = 0.1;
    params.kappa = 50.0;
    double L = 1.2;
    int n = 2400;
    auto g = slab_box(n, L);
    auto data = BoundaryData::slab_uniform(g, -0.3, 0.0);
    auto state = solve_full_FH(params, data, g);
    REQUIRE(state.report.converged);

    SlabProblem op;
    op.lambda = params.lambda;
    op.kappa = params.kappa;
    op.b = 0.3;
    op.L = L;
    op.n = 2 * n;
    auto oracle = solve_full_ode(op);

    MeissnerStateFA fa = recover_A(state);
    double worst_f = 0.0, worst_a = 0.0;
    for (int k = 0; k <= n; ++k)
        worst_f = std::max(worst_f, std::abs(state.f.at(0, 0, k) - oracle.f[2 * k]));
    for (int k = 0; k < n; ++k)
        worst_a = std::max(worst_a, std::abs(std::abs(fa.A.at(0, 0, 0, k)) - oracle.a[2 * k + 1]));
    CHECK(worst_f <= 2e-3);
    CHECK(worst_a <= 2e-3);

    // maximum principle and the Proposition 4.3 range
    for (double v : state.f.values()) {
        CHECK(v <= 1.0 + 1e-9);
        CHECK(v >= kInvSqrt3 - 1e-6);
    }
    CHECK(interior_divergence(state.H) <= 1e-10);

    // equivalence of the two formulations on the recovered state
    CHECK(equivalence_residual(fa, state.H, params.lambda) <= 1e-7);
    CHECK(second_equation_residual(fa, params.lambda) <= 1e-7);

    // nu . A = 0 on the walls (faces on the boundary planes)
    auto fs = fa.A.shape(2);
    for (int i = 0; i < fs[0]; ++i)
        for (int j = 0; j < fs[1]; ++j) {
            CHECK(std::abs(fa.A.at(2, i, j, 0)) <= 1e-10);
            CHECK(std::abs(fa.A.at(2, i, j, fs[2] - 1)) <= 1e-10);
        }

    // slab-symmetric trace vanishes identically and has zero mean
    auto trace = interior_dtn(state, DtnKind::Pi);
    CHECK(trace.l2 <= 1e-10);
    CHECK(std::abs(trace.mean) <= 1e-12);
}

TEST_CASE("general 3D path agrees with the degenerate path on slab data") {
    GLParameters params;
    params.lambda = 0.1;
    params.kappa = 20.0;
    int n = 48;
    double L = 1.0;
    auto g_deg = slab_box(n, L);
    auto g_box = box_grid(4, 4, n, 0.4, 0.4, L);
    auto data_deg = BoundaryData::slab_uniform(g_deg, -0.3, 0.0);
    auto data_box = BoundaryData::slab_uniform(g_box, -0.3, 0.0);
    SolveOptions opts;
    opts.tol = 1e-11;
    auto s1 = solve_full_FH(params, data_deg, g_deg, nullptr, opts);
    auto s2 = solve_full_FH(params, data_box, g_box, nullptr, opts);
    double worst = 0.0;
    for (int k = 0; k <= n; ++k)
        worst = std::max(worst, std::abs(s1.f.at(0, 0, k) - s2.f.at(2, 2, k)));
    CHECK(worst <= 1e-7);
    // lateral uniformity of the 3D solve
    auto ns = s2.f.shape();
    double lateral = 0.0;
    for (int i = 0; i < ns[0]; ++i)
        for (int j = 0; j < ns[1]; ++j)
            for (int k = 0; k < ns[2]; ++k)
                lateral = std::max(lateral, std::abs(s2.f.at(i, j, k) - s2.f.at(0, 0, k)));
    CHECK(lateral <= 1e-8);
    CHECK(interior_divergence(s2.H) <= 1e-10);
}

TEST_CASE("generic boundary data: limiting solve and zero-mean Gamma trace") {
    int n = 24;
    auto g = box_grid(8, 8, n, 1.0, 1.0, 0.8);
    // surface-gradient datum from a smooth periodic potential
    auto ns = g.shape(Placement::Node);
    std::vector<double> psi_lo(static_cast<std::size_t>(ns[0]) * ns[1]);
    std::vector<double> psi_hi(psi_lo.size(), 0.0);
    for (int i = 0; i < ns[0]; ++i)
        for (int j = 0; j < ns[1]; ++j)
            psi_lo[static_cast<std::size_t>(i) * ns[1] + j] =
                0.02 * std::sin(2.0 * M_PI * i / g.cells(0)) *
                std::cos(2.0 * M_PI * j / g.cells(1));
    auto data = BoundaryData::from_surface_potential(g, psi_lo, psi_hi);
    CHECK(data.nu_curl_sup() <= 1e-12);

    GLParameters params;
    params.lambda = 0.15;
    params.kappa = std::numeric_limits<double>::infinity();
    auto state = solve_limit_H(params, data, g);
    REQUIRE(state.report.converged);
    auto trace = interior_dtn(state, DtnKind::Gamma);
    CHECK(trace.l2 > 1e-8);  // genuinely nonzero trace
    CHECK(std::abs(trace.mean) <= 1e-9 * std::max(trace.l2, 1.0));
}

TEST_CASE("pointwise uniqueness identity: the (4.6) integrand is nonnegative on K-bar pairs") {
    testutil::Rng rng(41);
    // 5-point Gauss-Legendre on [0,1]
    const double gx[5] = {0.04691007703066800, 0.23076534494715845, 0.5, 0.76923465505284155,
                          0.95308992296933200};
    const double gw[5] = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                          0.23931433524968324, 0.11846344252809454};
    for (int trial = 0; trial < 300; ++trial) {
        auto sample = [&]() {
            double f = rng.uniform(std::sqrt(1.0 / 3.0) + 1e-3, 1.2);
            double amax = std::sqrt(f * f - 1.0 / 3.0) * rng.uniform(0.0, 1.0);
            double th = rng.uniform(0.0, 2.0 * M_PI);
            return std::pair<double, Vec3>(f, Vec3{amax * std::cos(th), amax * std::sin(th), 0.0});
        };
        auto [f0, A0] = sample();
        auto [f1, A1] = sample();
        double gpert = f1 - f0;
        Vec3 B{A1[0] - A0[0], A1[1] - A0[1], A1[2] - A0[2]};
        double integral = 0.0;
        for (int q = 0; q < 5; ++q) {
            double t = gx[q];
            double ft = f0 + t * gpert;
            Vec3 At{A0[0] + t * B[0], A0[1] + t * B[1], A0[2] + t * B[2]};
            Vec3 w{ft * B[0] + 2.0 * gpert * At[0], ft * B[1] + 2.0 * gpert * At[1],
                   ft * B[2] + 2.0 * gpert * At[2]};
            double term = norm2(w) + (3.0 * ft * ft - 3.0 * norm2(At) - 1.0) * gpert * gpert;
            integral += gw[q] * term;
        }
        CHECK(integral >= -1e-12);
    }
}

TEST_CASE("residual history is strictly decreasing") {
    auto g = slab_box(600, 1.0);
    GLParameters params;
    params.lambda = 0.1;
    params.kappa = 50.0;
    auto data = BoundaryData::slab_uniform(g, -0.3, 0.0);
    auto state = solve_full_FH(params, data, g);
    const auto& hist = state.report.residual_history;
    REQUIRE(hist.size() >= 2);
    for (std::size_t i = 1; i < hist.size(); ++i) CHECK(hist[i] < hist[i - 1]);
}
