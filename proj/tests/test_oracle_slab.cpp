#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "meissner/slab.hpp"
#include "test_util.hpp"

using namespace meissner;

namespace {

// Brute-force maximization oracle for the superheating value.
double brute_force_superheating() {
    double best = 0.0;
    int n = 1000000;
    for (int i = 0; i <= n; ++i) {
        double a0 = kInvSqrt3 * i / n;
        best = std::max(best, a0 * std::sqrt(1.0 - 0.5 * a0 * a0));
    }
    return best;
}

// Bisection oracle for a0 at a given wall field.
double bisect_a0(double b) {
    double lo = 0.0, hi = kInvSqrt3;
    for (int it = 0; it < 120; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid * std::sqrt(1.0 - 0.5 * mid * mid) < b)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("closed-form superheating value") {
    double hs = superheating_closed_form();
    CHECK(hs == doctest::Approx(0.5270462767).epsilon(1e-9));
    CHECK(std::abs(hs - brute_force_superheating()) <= 1e-9);
    // H_C consistency: sqrt(5/18) * 3/sqrt(5) = 1/sqrt(2)
    CHECK(hs * 3.0 / std::sqrt(5.0) == doctest::Approx(critical_field_closed_form()).epsilon(1e-12));
    CHECK(critical_field_closed_form() == doctest::Approx(0.7071068).epsilon(1e-7));
}

TEST_CASE("limit slab: zero datum") {
    SlabProblem p;
    p.lambda = 0.1;
    p.b = 0.0;
    auto sol = solve_limit_ode(p);
    for (std::size_t i = 0; i < sol.x.size(); ++i) {
        CHECK(std::abs(sol.a[i]) <= 1e-15);
        CHECK(sol.f[i] == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("limit slab: frozen a0 at b = 0.5 and threshold wall state") {
    SlabProblem p;
    p.lambda = 0.1;
    p.b = 0.5;
    auto sol = solve_limit_ode(p);
    double expected = bisect_a0(0.5);
    CHECK(expected == doctest::Approx(0.54120).epsilon(1e-4));
    CHECK(sol.a0 == doctest::Approx(expected).epsilon(1e-10));
    CHECK(sol.f[0] == doctest::Approx(std::sqrt(1.0 - expected * expected)).epsilon(1e-10));
    CHECK(sol.f[0] == doctest::Approx(0.84090).epsilon(1e-4));
    CHECK(sol.first_integral_residual <= 1e-10);

    // threshold: a0 = 1/sqrt(3), f(0) = sqrt(2/3), wall margin 0
    SlabProblem pt = p;
    pt.b = superheating_closed_form();
    auto st = solve_limit_ode(pt);
    CHECK(st.a0 == doctest::Approx(kInvSqrt3).epsilon(1e-9));
    CHECK(st.f[0] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-9));
    CHECK(std::abs(st.margin_wall) <= 1e-9);

    CHECK_THROWS_AS(solve_limit_ode([&] {
                        SlabProblem q = p;
                        q.b = superheating_closed_form() + 1e-3;
                        return q;
                    }()),
                    Error);
}

TEST_CASE("limit slab properties: monotonicity, first integral, truncation") {
    SlabProblem p;
    p.lambda = 0.07;
    p.b = 0.4;
    auto sol = solve_limit_ode(p);
    for (std::size_t i = 1; i < sol.x.size(); ++i) {
        CHECK(std::abs(sol.a[i]) <= std::abs(sol.a[i - 1]) + 1e-14);
        CHECK(sol.f[i] >= sol.f[i - 1] - 1e-14);
    }
    CHECK(sol.first_integral_residual <= 1e-8);

    // doubling the truncation length leaves a0 unchanged
    SlabProblem p2 = p;
    p2.L = 2.0 * 15.0 * p.lambda;
    auto sol2 = solve_limit_ode(p2);
    CHECK(std::abs(sol2.a0 - sol.a0) < 1e-9);

    // b -> a0 strictly increasing
    double prev = -1.0;
    for (double b = 0.0; b <= superheating_closed_form(); b += 0.05) {
        double a0 = slab_a0_from_b(b);
        CHECK(a0 > prev);
        prev = a0;
    }
}

TEST_CASE("full slab: zero datum is the Meissner vacuum") {
    SlabProblem p;
    p.lambda = 0.1;
    p.kappa = 50.0;
    p.b = 0.0;
    auto sol = solve_full_ode(p);
    for (std::size_t i = 0; i < sol.x.size(); ++i) {
        CHECK(sol.f[i] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(sol.a[i]) <= 1e-12);
    }
}

TEST_CASE("full slab at b = 0.3: self-consistency under refinement") {
    SlabProblem p;
    p.lambda = 0.1;
    p.kappa = 50.0;
    p.b = 0.3;
    p.L = 1.2;
    p.n = 3000;
    auto sol = solve_full_ode(p);
    CHECK(sol.f[0] > kInvSqrt3);
    CHECK(sol.f[0] < 1.0);
    for (double fv : sol.f) {
        CHECK(fv <= 1.0 + 1e-9);
        CHECK(fv >= kInvSqrt3 - 1e-6);
    }
    // Neumann ends
    CHECK(std::abs(sol.f[1] - sol.f[0]) / (sol.x[1] - sol.x[0]) <= 0.3);

    SlabProblem p2 = p;
    p2.n = 6000;
    auto sol2 = solve_full_ode(p2);
    double worst = 0.0;
    for (int i = 0; i <= p.n; ++i)
        worst = std::max(worst, std::abs(sol.f[i] - sol2.f[2 * i]));
    CHECK(worst <= 1e-5);  // second order: factor-4 error drop keeps them close

    // kappa -> infinity approaches the limit profile monotonically in error
    SlabProblem lim = p;
    lim.kappa = std::numeric_limits<double>::infinity();
    auto ls = solve_limit_ode(lim);
    double prev_err = 1e9;
    for (double kap : {50.0, 100.0, 200.0}) {
        SlabProblem pk = p;
        pk.kappa = kap;
        auto sk = solve_full_ode(pk);
        double err = std::abs(sk.f[0] - ls.f[0]);
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("slab energy quadrature is finite and positive") {
    SlabProblem p;
    p.lambda = 0.1;
    p.kappa = 50.0;
    p.b = 0.3;
    auto sol = solve_full_ode(p);
    double e = slab_energy(sol, p.lambda, p.kappa, p.b);
    CHECK(e > 0.0);
    CHECK(std::isfinite(e));
}
