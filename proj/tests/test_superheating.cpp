#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "meissner/slab.hpp"
#include "meissner/superheating.hpp"
#include "test_util.hpp"

using namespace meissner;

TEST_CASE("corrector cutoff is a C2 step") {
    CHECK(corrector_cutoff(0.0) == 1.0);
    CHECK(corrector_cutoff(1.0) == 1.0);
    CHECK(corrector_cutoff(2.0) == 0.0);
    CHECK(corrector_cutoff(5.0) == 0.0);
    CHECK(corrector_cutoff(1.5) == doctest::Approx(0.5).epsilon(1e-12));
    double prev = 1.0;
    for (double t = 1.0; t <= 2.0; t += 0.01) {
        double v = corrector_cutoff(t);
        CHECK(v <= prev + 1e-14);
        prev = v;
    }
}

TEST_CASE("upper bound: half-line closed form, homogeneity, threshold domination") {
    double lambda = 0.1;
    auto g = slab_box(1500, 1.5);
    auto data = BoundaryData::slab_uniform(g, -1.0, 0.0);
    double bound = mu_upper_bound(lambda, data, g);
    // closed form: c = lambda b^2 Area, ||B||_L1 = b Area, bound = 1/(lambda^2 b)
    double area = g.spacing(0) * g.spacing(1);
    (void)area;
    CHECK(bound == doctest::Approx(100.0).epsilon(2e-2));

    auto data2 = data.scaled(2.0);
    double bound2 = mu_upper_bound(lambda, data2, g);
    CHECK(bound2 == doctest::Approx(0.5 * bound).epsilon(1e-12));

    auto zero = BoundaryData::slab_uniform(g, 0.0, 0.0);
    CHECK_THROWS_AS(mu_upper_bound(lambda, zero, g), Error);
}

TEST_CASE("limit continuation on a coarse slab finds the superheating value") {
    GLParameters p;
    p.lambda = 0.1;
    p.kappa = std::numeric_limits<double>::infinity();
    auto g = slab_box(1000, 1.5);
    auto data = BoundaryData::slab_uniform(g, -1.0, 0.0);
    ContinuationSchedule sched;
    sched.mu_start = 0.35;
    sched.mu_step = 0.02;
    sched.margin_tol = 1e-3;
    sched.mu_tol = 1e-4;
    auto res = continue_mu(SystemKind::Limit, p, data, sched, g);

    CHECK(res.mu_star == doctest::Approx(superheating_closed_form()).epsilon(5e-3));
    CHECK(res.bracket[1] - res.bracket[0] <= sched.mu_tol + 1e-15);
    CHECK(res.mu_star >= res.bracket[0]);
    CHECK(res.mu_star <= res.bracket[1]);
    CHECK(std::abs(res.last_margin) <= 2.0 * sched.margin_tol);
    CHECK(res.mu_star <= res.upper_bound);
    // both detectors agree within the bracket tolerance
    CHECK(std::abs(res.mu_star_supA - res.mu_star) <= 5.0 * sched.mu_tol + 2e-3);
    // margin is positive along the accepted trajectory
    for (const auto& row : res.trajectory) {
        CHECK(row.margin > 0.0);
        CHECK(row.curl_bound <= kCurlCap + 1e-6);
    }
}

TEST_CASE("continuation error cases") {
    GLParameters p;
    p.lambda = 0.1;
    p.kappa = std::numeric_limits<double>::infinity();
    auto g = slab_box(300, 1.0);
    ContinuationSchedule sched;
    sched.mu_start = 0.1;
    sched.mu_step = 0.1;
    sched.mu_tol = 1e-3;
    sched.margin_tol = 1e-3;
    sched.max_steps = 12;

    SUBCASE("zero datum raises UnboundedThreshold after max_steps") {
        auto zero = BoundaryData::slab_uniform(g, 0.0, 0.0);
        try {
            continue_mu(SystemKind::Limit, p, zero, sched, g);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::UnboundedThreshold);
        }
    }

    SUBCASE("starting past the threshold raises NeverEntersK") {
        auto data = BoundaryData::slab_uniform(g, -1.0, 0.0);
        ContinuationSchedule s2 = sched;
        s2.mu_start = 0.7;  // beyond sqrt(5/18)
        try {
            continue_mu(SystemKind::Limit, p, data, s2, g);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NeverEntersK);
        }
    }

    SUBCASE("bounded walk without crossing raises BudgetExceeded") {
        auto data = BoundaryData::slab_uniform(g, -0.01, 0.0);
        ContinuationSchedule s3 = sched;
        s3.mu_start = 0.01;
        s3.mu_step = 0.01;
        s3.max_steps = 3;
        try {
            continue_mu(SystemKind::Limit, p, data, s3, g);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::BudgetExceeded);
        }
    }
}

TEST_CASE("continuity in mu: halving the step roughly halves the state jump") {
    GLParameters p;
    p.lambda = 0.1;
    p.kappa = std::numeric_limits<double>::infinity();
    auto g = slab_box(600, 1.2);
    auto data = BoundaryData::slab_uniform(g, -1.0, 0.0);
    auto at_mu = [&](double mu) {
        GLParameters q = p;
        q.mu = mu;
        return solve_limit_H(q, data.scaled(mu), g);
    };
    double mu0 = 0.30, d = 0.04;
    auto s0 = at_mu(mu0);
    auto s1 = at_mu(mu0 + d);
    auto s2 = at_mu(mu0 + 0.5 * d);
    double j_full = diff_norm(s1.H, s0.H, NormKind::L2);
    double j_half = diff_norm(s2.H, s0.H, NormKind::L2);
    double ratio = j_full / j_half;
    CHECK(ratio > 2.0 / 3.0);
    CHECK(ratio < 6.0);
}

TEST_CASE("boundary corrector: exactness cases and Neumann wall condition") {
    auto g = slab_box(800, 1.2);
    GLParameters p;
    p.lambda = 0.1;
    p.kappa = std::numeric_limits<double>::infinity();
    auto data = BoundaryData::slab_uniform(g, -0.3, 0.0);
    auto lim = solve_limit_H(p, data, g);

    SUBCASE("zero normal derivative means no correction") {
        ScalarField flat(g, Placement::Node, 0.9);
        ScalarField out = boundary_corrector(flat, 32.0);
        for (std::size_t i = 0; i < out.size(); ++i)
            CHECK(out.values()[i] == doctest::Approx(0.9).epsilon(1e-14));
    }

    SUBCASE("correction vanishes beyond 2/kappa and kills the wall derivative") {
        double kappa = 64.0;
        ScalarField fc = boundary_corrector(lim.f, kappa);
        double h = g.spacing(2);
        int n = g.cells(2);
        for (int k = 0; k <= n; ++k) {
            double dist = std::min(k * h, (n - k) * h);
            if (dist > 2.0 / kappa + h)
                CHECK(fc.at(0, 0, k) == doctest::Approx(lim.f.at(0, 0, k)).epsilon(1e-14));
        }
        double d_wall =
            (-3.0 * fc.at(0, 0, 0) + 4.0 * fc.at(0, 0, 1) - fc.at(0, 0, 2)) / (2.0 * h);
        CHECK(std::abs(d_wall) <= 1e-8);
        double d_wall_hi =
            (-3.0 * fc.at(0, 0, n) + 4.0 * fc.at(0, 0, n - 1) - fc.at(0, 0, n - 2)) / (2.0 * h);
        CHECK(std::abs(d_wall_hi) <= 1e-8);
    }

    SUBCASE("corrector difference decays like kappa^(-3/2)") {
        std::vector<double> kappas{16, 32, 64, 128};
        std::vector<double> norms;
        for (double kap : kappas) {
            ScalarField fc = boundary_corrector(lim.f, kap);
            norms.push_back(diff_norm(fc, lim.f, NormKind::L2));
        }
        double slope = loglog_slope(kappas, norms);
        CHECK(slope > -1.7);
        CHECK(slope < -1.3);
    }
}

TEST_CASE("coarse kappa sweep shows the expected rate ordering") {
    double lambda = 0.1;
    auto g = slab_box(1200, 1.2);
    auto data = BoundaryData::slab_uniform(g, -0.3, 0.0);
    auto fit = kappa_sweep(lambda, data, g, {16.0, 32.0, 64.0});
    // L2 differences shrink, H2 differences grow
    CHECK(fit.slope_l2 < -1.0);
    CHECK(fit.slope_h2 > 0.0);
    CHECK(fit.sup_diffs.back() < fit.sup_diffs.front());
}
