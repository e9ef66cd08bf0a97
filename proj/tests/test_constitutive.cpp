#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "meissner/constitutive.hpp"
#include "test_util.hpp"

using namespace meissner;

namespace {

// Independent oracle: plain bisection on v - v^3 = t over [0, 1/sqrt(3)],
// no shared code with the implementation path.
double bisect_cubic(double t) {
    double lo = 0.0, hi = kInvSqrt3;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double r = (1.0 - mid * mid) * mid;
        if (r < t)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("cubic inversion endpoints and frozen interior value") {
    CHECK(invert_cubic(0.0) == 0.0);
    CHECK(invert_cubic(kCurlCap) == doctest::Approx(kInvSqrt3).epsilon(1e-14));

    // oracle value for t = 0.1: bisection gives 0.101030... (three-digit
    // reference 0.10103)
    double expected = bisect_cubic(0.1);
    CHECK(expected == doctest::Approx(0.10103).epsilon(1e-4));
    CHECK(invert_cubic(0.1) == doctest::Approx(expected).epsilon(1e-12));

    // clamping slack right at the endpoint
    CHECK_NOTHROW(invert_cubic(kCurlCap + 0.5e-12));
    CHECK_THROWS_AS(invert_cubic(-1e-6), Error);
    CHECK_THROWS_AS(invert_cubic(kCurlCap + 1e-6), Error);
    try {
        invert_cubic(kCurlCap + 1e-6);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OutOfDomain);
    }
}

TEST_CASE("cubic inversion residual over 1000 random points") {
    testutil::Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        double t = rng.uniform(0.0, kCurlCap);
        double v = invert_cubic(t);
        CHECK(std::abs((1.0 - v * v) * v - t) <= 1e-12);
        CHECK(v >= 0.0);
        CHECK(v <= kInvSqrt3 + 1e-15);
    }
}

TEST_CASE("F endpoints, frozen value and monotonicity") {
    CHECK(F_of(0.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(F_of(4.0 / 27.0) == doctest::Approx(1.5).epsilon(1e-12));

    double expected = bisect_cubic(0.1) / 0.1;  // 1.01030...
    CHECK(F_of(0.01) == doctest::Approx(expected).epsilon(1e-11));
    CHECK(F_of(0.01) == doctest::Approx(1.01030).epsilon(1e-4));

    double prev = F_of(0.0);
    int n = 1000;
    for (int i = 1; i <= n; ++i) {
        double s = (4.0 / 27.0) * i / n;
        double cur = F_of(s);
        CHECK(cur >= prev - 1e-12);
        prev = cur;
    }
    CHECK_THROWS_AS(F_of(4.0 / 27.0 + 1e-6), Error);
}

TEST_CASE("G density examples") {
    auto zero = g_density_and_grad(1.0, {0, 0, 0});
    CHECK(zero.G == 0.0);
    CHECK(zero.Gf == 0.0);
    CHECK(zero.GA[0] == 0.0);

    auto normal = g_density_and_grad(0.0, {0, 0, 0});
    CHECK(normal.G == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal.Gf == 0.0);

    auto mid = g_density_and_grad(0.8, {0.3, 0.0, 0.0});
    CHECK(mid.G == doctest::Approx(0.12240).epsilon(1e-12));
    CHECK(mid.Gf == doctest::Approx(-0.43200).epsilon(1e-12));
    CHECK(mid.GA[0] == doctest::Approx(0.38400).epsilon(1e-12));
    CHECK(mid.GA[1] == 0.0);
}

TEST_CASE("G gradient agrees with finite differences") {
    testutil::Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        double f = rng.uniform(-1.5, 1.5);
        Vec3 A{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        auto d = g_density_and_grad(f, A);
        double h = 1e-6;
        double fd_f = (g_density_and_grad(f + h, A).G - g_density_and_grad(f - h, A).G) / (2 * h);
        CHECK(d.Gf == doctest::Approx(fd_f).epsilon(1e-6));
        for (int c = 0; c < 3; ++c) {
            Vec3 Ap = A, Am = A;
            Ap[c] += h;
            Am[c] -= h;
            double fd = (g_density_and_grad(f, Ap).G - g_density_and_grad(f, Am).G) / (2 * h);
            CHECK(d.GA[c] == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("second variation examples") {
    CHECK(second_variation_form(1.0, {0, 0, 0}, 1.0, {0, 0, 0}) ==
          doctest::Approx(4.0).epsilon(1e-14));

    // pure field perturbation: 2 f^2 |B|^2
    testutil::Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        double f = rng.uniform(-1, 1);
        Vec3 A{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Vec3 B{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        double val = second_variation_form(f, A, 0.0, B);
        CHECK(val == doctest::Approx(2.0 * f * f * norm2(B)).epsilon(1e-12));
        CHECK(val >= 0.0);
    }

    // degenerate direction on the K-bar boundary
    double f = 0.9;
    double target = f * f - 1.0 / 3.0;
    Vec3 A{std::sqrt(target), 0.0, 0.0};
    double gpert = 0.37;
    Vec3 B{-2.0 * gpert * A[0] / f, -2.0 * gpert * A[1] / f, -2.0 * gpert * A[2] / f};
    CHECK(second_variation_form(f, A, gpert, B) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("second variation matches central second difference of G") {
    testutil::Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        double f = rng.uniform(-1.2, 1.2);
        Vec3 A{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        double g = rng.uniform(-1, 1);
        Vec3 B{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        double exact = second_variation_form(f, A, g, B);
        double h = 1e-4;
        auto G_at = [&](double t) {
            Vec3 At{A[0] + t * B[0], A[1] + t * B[1], A[2] + t * B[2]};
            return g_density_and_grad(f + t * g, At).G;
        };
        double fd = (G_at(h) - 2.0 * G_at(0.0) + G_at(-h)) / (h * h);
        double scale = std::max(1.0, std::abs(exact));
        CHECK(std::abs(exact - fd) / scale <= 1e-6);
    }
}

TEST_CASE("positivity of the second variation on K_delta") {
    testutil::Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        double delta = rng.uniform(0.01, 0.3);
        // sample f, A with pointwise margin strictly above delta
        double f = rng.uniform(std::sqrt(1.0 / 3.0 + delta) + 0.01, 1.2);
        double a_max = std::sqrt(f * f - 1.0 / 3.0 - delta) * 0.95;
        double a_len = rng.uniform(0.0, a_max);
        double th = rng.uniform(0.0, 6.283185307), ph = rng.uniform(0.0, 3.14159265);
        Vec3 A{a_len * std::sin(ph) * std::cos(th), a_len * std::sin(ph) * std::sin(th),
               a_len * std::cos(ph)};
        REQUIRE(pointwise_margin(f, norm2(A)) > delta);
        double g = rng.uniform(-1, 1);
        Vec3 B{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        CHECK(second_variation_form(f, A, g, B) >= 6.0 * delta * g * g - 1e-12);
    }
}

TEST_CASE("segments between K_delta states stay in K_delta") {
    testutil::Rng rng(19);
    for (int trial = 0; trial < 200; ++trial) {
        double delta = rng.uniform(0.01, 0.25);
        auto sample = [&]() {
            double f = rng.uniform(std::sqrt(1.0 / 3.0 + delta) + 0.01, 1.3);
            double a_max = std::sqrt(f * f - 1.0 / 3.0 - delta) * 0.98;
            double a_len = rng.uniform(0.0, a_max);
            double th = rng.uniform(0.0, 6.283185307);
            Vec3 A{a_len * std::cos(th), a_len * std::sin(th), 0.0};
            return std::pair<double, Vec3>(f, A);
        };
        auto [f0, A0] = sample();
        auto [f1, A1] = sample();
        REQUIRE(pointwise_margin(f0, norm2(A0)) > delta);
        REQUIRE(pointwise_margin(f1, norm2(A1)) > delta);
        for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            double ft = (1 - t) * f0 + t * f1;
            Vec3 At{(1 - t) * A0[0] + t * A1[0], (1 - t) * A0[1] + t * A1[1],
                    (1 - t) * A0[2] + t * A1[2]};
            CHECK(pointwise_margin(ft, norm2(At)) >= delta - 1e-12);
        }
    }
}

TEST_CASE("parameter validation") {
    GLParameters p;
    p.lambda = 0.1;
    p.kappa = 50.0;
    p.mu = 0.3;
    CHECK_NOTHROW(p.validate());
    CHECK(p.in_estimate_regime());

    p.kappa = std::numeric_limits<double>::infinity();
    CHECK_NOTHROW(p.validate());
    CHECK(!p.kappa_finite());

    p.lambda = -1.0;
    CHECK_THROWS_AS(p.validate(), Error);

    GLParameters q;
    q.lambda = 2.0;
    q.kappa = 1.5;  // below max{1, lambda}
    CHECK(!q.in_estimate_regime());
}
