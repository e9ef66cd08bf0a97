#include "meissner/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "meissner/exterior.hpp"
#include "meissner/io.hpp"
#include "meissner/plot.hpp"
#include "meissner/superheating.hpp"

namespace meissner::acceptance {

namespace {

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next() {
        std::uint64_t x = state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state = x;
        return x * 0x2545f4914f6cdd1dull;
    }
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
};

struct Context {
    Options opts;
    // shared heavy results
    SuperheatingResult c2;
    SuperheatingResult c3;
    RateFit sweep;
    MeissnerStateFH sweep_limit;      // kappa-sweep limiting state
    LambdaSweepResult lsweep;
    MeissnerStateFH c9_state;
    MeissnerStateFH c12_state;
    bool have_c2 = false, have_c3 = false, have_sweep = false, have_lsweep = false;
    bool have_c9 = false, have_c12 = false;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

ResultsTable continuation_table(const SuperheatingResult& res) {
    ResultsTable t({"mu", "margin", "curl_bound", "energy", "iterations"});
    for (const auto& r : res.trajectory)
        t.add_row({r.mu, r.margin, r.curl_bound, r.energy, static_cast<double>(r.iterations)});
    return t;
}

void save(Context& ctx, const std::string& name, const std::string& content) {
    if (!ctx.opts.write_artifacts) return;
    std::filesystem::create_directories(ctx.opts.out_dir);
    write_text_file(ctx.opts.out_dir + "/" + name, content);
}

// ---------------------------------------------------------------- criteria

CriterionResult c1_constitutive(Context& ctx) {
    CriterionResult r{1, "constitutive-law", false, "", 0.0};
    Rng rng(ctx.opts.seed + 1);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double t = rng.uniform(0.0, kCurlCap);
        double v = invert_cubic(t);
        worst = std::max(worst, std::abs((1.0 - v * v) * v - t));
    }
    double e0 = std::abs(F_of(0.0) - 1.0);
    double e1 = std::abs(F_of(4.0 / 27.0) - 1.5);
    r.pass = worst <= 1e-12 && e0 <= 1e-12 && e1 <= 1e-12;
    r.detail = fmt("residual %.2e, |F(0)-1| %.1e, |F(4/27)-3/2| %.1e", worst, e0, e1);
    return r;
}

CriterionResult c2_superheating_value(Context& ctx) {
    CriterionResult r{2, "superheating-value", false, "", 0.0};
    GLParameters p;
    p.lambda = 0.02;
    p.kappa = std::numeric_limits<double>::infinity();
    auto grid = slab_box(1250, 0.5);
    auto data = BoundaryData::slab_uniform(grid, -1.0, 0.0);
    ContinuationSchedule sched;
    sched.mu_start = 0.40;
    sched.mu_step = 0.02;
    sched.margin_tol = 1e-4;
    sched.mu_tol = 1e-5;
    ctx.c2 = continue_mu(SystemKind::Limit, p, data, sched, grid);
    ctx.have_c2 = true;
    double err = std::abs(ctx.c2.mu_star - 0.527046);
    r.pass = err <= 1e-3;
    r.detail = fmt("mu* = %.6f, |mu* - 0.527046| = %.2e", ctx.c2.mu_star, err);
    ResultsTable t = continuation_table(ctx.c2);
    t.set_provenance("acceptance-c2", "");
    save(ctx, "c2_continuation.csv", t.to_csv());
    PlotSpec ps;
    ps.x_column = "mu";
    ps.y_columns = {"margin"};
    ps.marker_x = ctx.c2.mu_star;
    ps.title = "limit continuation margin";
    save(ctx, "c2_margin.svg", emit_plot(t, ps));
    return r;
}

CriterionResult c3_threshold_margin(Context& ctx) {
    CriterionResult r{3, "threshold-characterization", false, "", 0.0};
    GLParameters p;
    p.lambda = 0.1;
    p.kappa = 50.0;
    auto grid = slab_box(3000, 1.5);
    auto data = BoundaryData::slab_uniform(grid, -1.0, 0.0);
    ContinuationSchedule sched;
    sched.mu_start = 0.35;
    sched.mu_step = 0.02;
    sched.margin_tol = 1e-4;
    sched.mu_tol = 1e-5;
    ctx.c3 = continue_mu(SystemKind::Full, p, data, sched, grid);
    ctx.have_c3 = true;
    r.pass = std::abs(ctx.c3.last_margin) <= 5e-3;
    r.detail = fmt("mu* = %.6f, |margin at mu*| = %.2e", ctx.c3.mu_star,
                   std::abs(ctx.c3.last_margin));
    ResultsTable t = continuation_table(ctx.c3);
    save(ctx, "c3_continuation.csv", t.to_csv());
    return r;
}

void ensure_sweep(Context& ctx) {
    if (ctx.have_sweep) return;
    double lambda = 0.1;
    auto grid = slab_box(6000, 1.2);
    auto data = BoundaryData::slab_uniform(grid, -0.3, 0.0);
    ctx.sweep = kappa_sweep(lambda, data, grid, {16.0, 32.0, 64.0, 128.0});
    GLParameters lp;
    lp.lambda = lambda;
    lp.kappa = std::numeric_limits<double>::infinity();
    ctx.sweep_limit = solve_limit_H(lp, data, grid);
    ctx.have_sweep = true;

    ResultsTable t({"kappa", "l2_f", "l2_A", "l2_H", "h1_f", "h1_A", "h1_H", "h2_f", "h2_A",
                    "h2_H"});
    for (std::size_t i = 0; i < ctx.sweep.kappas.size(); ++i) {
        std::vector<double> row{ctx.sweep.kappas[i]};
        for (double v : ctx.sweep.norms[i]) row.push_back(v);
        t.add_row(row);
    }
    save(ctx, "c4_sweep.csv", t.to_csv());
    PlotSpec ps;
    ps.x_column = "kappa";
    ps.y_columns = {"l2_f", "l2_A"};
    ps.log_x = ps.log_y = true;
    ps.guide_slope = -1.5;
    ps.title = "kappa rates";
    save(ctx, "c4_rates.svg", emit_plot(t, ps));
}

CriterionResult c4_rates(Context& ctx) {
    CriterionResult r{4, "kappa-convergence-rates", false, "", 0.0};
    ensure_sweep(ctx);
    const auto& s = ctx.sweep;
    r.pass = s.slope_l2 >= -1.7 && s.slope_l2 <= -1.3 && s.slope_h1 >= -0.7 &&
             s.slope_h1 <= -0.3 && s.slope_h2 >= 0.3 && s.slope_h2 <= 0.7;
    r.detail = fmt("slopes L2 %.3f, H1 %.3f, H2 %.3f", s.slope_l2, s.slope_h1, s.slope_h2);
    return r;
}

CriterionResult c5_uniform(Context& ctx) {
    CriterionResult r{5, "uniform-convergence", false, "", 0.0};
    ensure_sweep(ctx);
    double first = ctx.sweep.sup_diffs.front(), last = ctx.sweep.sup_diffs.back();
    r.pass = last < first && last <= 1e-2;
    r.detail = fmt("sup diff: kappa=16 %.3e, kappa=128 %.3e", first, last);
    return r;
}

CriterionResult c6_corrector(Context& ctx) {
    CriterionResult r{6, "boundary-corrector-rate", false, "", 0.0};
    ensure_sweep(ctx);
    const ScalarField& f_inf = ctx.sweep_limit.f;
    std::vector<double> kappas{16, 32, 64, 128}, norms;
    double worst_neumann = 0.0;
    const auto& g = f_inf.grid();
    double h = g.spacing(2);
    int n = g.cells(2);
    for (double kap : kappas) {
        ScalarField fc = boundary_corrector(f_inf, kap);
        norms.push_back(diff_norm(fc, f_inf, NormKind::L2));
        double lo = (-3.0 * fc.at(0, 0, 0) + 4.0 * fc.at(0, 0, 1) - fc.at(0, 0, 2)) / (2.0 * h);
        double hi =
            (-3.0 * fc.at(0, 0, n) + 4.0 * fc.at(0, 0, n - 1) - fc.at(0, 0, n - 2)) / (2.0 * h);
        worst_neumann = std::max({worst_neumann, std::abs(lo), std::abs(hi)});
    }
    double slope = loglog_slope(kappas, norms);
    r.pass = slope >= -1.7 && slope <= -1.3 && worst_neumann <= 1e-8;
    r.detail = fmt("corrector slope %.3f, wall derivative %.2e", slope, worst_neumann);
    return r;
}

CriterionResult c7_lambda_limit(Context& ctx) {
    CriterionResult r{7, "lambda-to-zero-and-liminf", false, "", 0.0};
    // fixed-thickness slab with the datum on both walls: the finite-thickness
    // correction supplies the genuine lambda-dependence of (4.38)
    auto grid = slab_box(6400, 0.8);
    auto data = BoundaryData::slab_uniform(grid, -1.0, -1.0);
    ContinuationSchedule sched;
    sched.mu_start = 0.45;
    sched.mu_step = 0.01;
    sched.margin_tol = 1e-4;
    sched.mu_tol = 5e-6;
    ctx.lsweep = lambda_sweep(data, grid, {0.2, 0.1, 0.05}, sched, 200.0);
    ctx.have_lsweep = true;

    bool decreasing = true;
    for (std::size_t i = 1; i < ctx.lsweep.rows.size(); ++i)
        decreasing = decreasing && ctx.lsweep.rows[i].error < ctx.lsweep.rows[i - 1].error;
    double final_err = ctx.lsweep.rows.back().error;
    double mu_lim = ctx.lsweep.rows.back().mu_star;
    double mu_kap = ctx.lsweep.mu_star_full_kappa;
    bool liminf_ok = mu_kap >= mu_lim - 0.01;
    r.pass = decreasing && final_err <= 0.02 && liminf_ok;
    r.detail = fmt("errors %.2e/%.2e", ctx.lsweep.rows[0].error, ctx.lsweep.rows[1].error) +
               fmt("/%.2e; mu*(k=200)-mu* = %+.2e", final_err, mu_kap - mu_lim);

    ResultsTable t({"lambda", "mu_star", "error"});
    for (const auto& row : ctx.lsweep.rows) t.add_row({row.lambda, row.mu_star, row.error});
    save(ctx, "c7_lambda.csv", t.to_csv());
    return r;
}

CriterionResult c8_safeguards(Context& ctx) {
    CriterionResult r{8, "bound-and-constraint-safeguards", false, "", 0.0};
    // The (1.10) cap is a limiting-system estimate; near the finite-kappa
    // threshold lambda|curl H| = f^2|A| exceeds sqrt(4/27) by O(lambda/kappa)
    // through the Neumann boundary lift of f.  Limit states are held to the
    // cap; finite-kappa states to their own constraint, K-bar membership.
    double worst_limit_curl = 0.0;
    double worst_full_margin = std::numeric_limits<double>::infinity();
    double worst_full_curl = 0.0;
    bool bounds_ok = true;
    auto scan = [&](const SuperheatingResult& res, bool limit_system, double margin_tol) {
        for (const auto& row : res.trajectory) {
            if (limit_system)
                worst_limit_curl = std::max(worst_limit_curl, row.curl_bound);
            else {
                worst_full_margin = std::min(worst_full_margin, row.margin);
                worst_full_curl = std::max(worst_full_curl, row.curl_bound);
            }
        }
        (void)margin_tol;
        if (res.upper_bound > 0.0) bounds_ok = bounds_ok && res.mu_star <= res.upper_bound;
    };
    scan(ctx.c2, true, 1e-4);
    scan(ctx.c3, false, 1e-4);
    for (const auto& d : ctx.lsweep.details) scan(d, true, 1e-4);
    scan(ctx.lsweep.full_kappa_detail, false, 1e-4);
    bool limit_ok = worst_limit_curl <= kCurlCap + 1e-6;
    bool full_ok = worst_full_margin >= 0.0;  // accepted states stay in K-bar
    r.pass = limit_ok && full_ok && bounds_ok;
    r.detail = fmt("limit max lambda|curlH| %.9f (cap %.9f), ", worst_limit_curl, kCurlCap) +
               fmt("full min margin %+.1e / max lambda|curlH| %.4f, ", worst_full_margin,
                   worst_full_curl) +
               std::string("mu* <= bound: ") + (bounds_ok ? "yes" : "NO");
    return r;
}

CriterionResult c9_uniqueness(Context& ctx) {
    CriterionResult r{9, "uniqueness-in-K", false, "", 0.0};
    GLParameters p;
    p.lambda = 0.1;
    p.kappa = 50.0;
    int n = 1500;
    auto grid = slab_box(n, 1.2);
    auto data = BoundaryData::slab_uniform(grid, -0.3, 0.0);
    Rng rng(ctx.opts.seed + 9);
    std::vector<MeissnerStateFH> states;
    for (int trial = 0; trial < 5; ++trial) {
        // random admissible K-initialization: smooth modes around the vacuum
        MeissnerStateFH init;
        init.f = ScalarField(grid, Placement::Node, 1.0);
        init.H = VectorField(grid, Placement::Edge);
        double a1 = rng.uniform(-0.05, 0.05), a2 = rng.uniform(-0.05, 0.05);
        double b1 = rng.uniform(0.7, 1.3), b2 = rng.uniform(-0.3, 0.3);
        for (int k = 0; k <= n; ++k) {
            double z = static_cast<double>(k) / n;
            init.f.at(0, 0, k) = 1.0 + a1 * std::sin(M_PI * z) + a2 * std::sin(2.0 * M_PI * z);
            double screen = -0.3 * std::exp(-z * 1.2 / 0.1);
            init.H.at(1, 0, 0, k) = screen * (b1 + b2 * std::sin(M_PI * z));
        }
        states.push_back(solve_full_FH(p, data, grid, &init));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            double num = diff_norm(states[i].f, states[j].f, NormKind::L2) +
                         diff_norm(states[i].H, states[j].H, NormKind::L2);
            double den = field_norm(states[i].f, NormKind::L2) +
                         field_norm(states[i].H, NormKind::L2);
            worst = std::max(worst, num / den);
        }
    ctx.c9_state = states.front();
    ctx.have_c9 = true;
    r.pass = worst <= 1e-8;
    r.detail = fmt("pairwise relative L2 spread %.2e over 5 random starts", worst);
    return r;
}

CriterionResult c10_stability(Context& ctx) {
    CriterionResult r{10, "local-stability", false, "", 0.0};
    if (!ctx.have_c9) {
        r.detail = "prerequisite state missing";
        return r;
    }
    const auto& state = ctx.c9_state;
    if (state.report.margin <= 0.05) {
        r.detail = fmt("margin %.3f too small for the check", state.report.margin);
        return r;
    }
    MeissnerStateFA fa = recover_A(state);
    double e0 = stability_energy(state.f, fa.A, state.data, state.params);
    const auto& g = state.f.grid();
    Rng rng(ctx.opts.seed + 10);
    double worst_drop = std::numeric_limits<double>::infinity();
    int nz = g.cells(2);
    for (int trial = 0; trial < 100; ++trial) {
        ScalarField f = state.f;
        VectorField A = fa.A;
        auto ns = f.shape();
        for (int k = 0; k < ns[2]; ++k) f.at(0, 0, k) += rng.uniform(-0.01, 0.01);
        // discrete Neumann tangency of the density perturbation
        f.at(0, 0, 0) = f.at(0, 0, 1);
        f.at(0, 0, ns[2] - 1) = f.at(0, 0, ns[2] - 2);
        for (int d = 0; d < 3; ++d) {
            auto fs = A.shape(d);
            for (int k = 0; k < fs[2]; ++k) A.at(d, 0, 0, k) += rng.uniform(-0.01, 0.01);
            // admissible class: perturbations vanish in the far-wall layer
            A.at(d, 0, 0, fs[2] - 1) = fa.A.at(d, 0, 0, fs[2] - 1);
        }
        A.at(2, 0, 0, nz) = fa.A.at(2, 0, 0, nz);
        double e = stability_energy(f, A, state.data, state.params);
        worst_drop = std::min(worst_drop, e - e0);
    }
    r.pass = worst_drop >= -1e-12;
    r.detail = fmt("min energy increment over 100 perturbations = %+.3e", worst_drop);
    return r;
}

CriterionResult c11_discrete_calculus(Context& ctx) {
    CriterionResult r{11, "discrete-calculus", false, "", 0.0};
    Rng rng(ctx.opts.seed + 11);
    auto g1 = box_grid(6, 5, 7, 1.1, 0.9, 1.3, BoundaryKind::Periodic, BoundaryKind::Wall,
                       BoundaryKind::Wall);
    auto g2 = box_grid(5, 6, 4, 1.0, 1.2, 0.7, BoundaryKind::Wall, BoundaryKind::Wall,
                       BoundaryKind::Wall);
    double worst_complex = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto& g = trial % 2 ? g1 : g2;
        ScalarField u(g, Placement::Node);
        for (auto& v : u.values()) v = rng.uniform(-1, 1);
        worst_complex = std::max(worst_complex, sup_norm(curl(grad(u))));
        VectorField e(g, Placement::Edge);
        for (int d = 0; d < 3; ++d)
            for (auto& v : e.comp(d)) v = rng.uniform(-1, 1);
        worst_complex = std::max(worst_complex, field_norm(divergence(curl(e)), NormKind::Sup));
    }

    VectorField A(g2, Placement::Edge);
    for (int d = 0; d < 3; ++d)
        for (auto& v : A.comp(d)) v = rng.uniform(-1, 1);
    auto hd = hodge_decompose(A, 1e-13);
    VectorField gp = grad(hd.potential);
    double ortho = 0.0, rec = 0.0;
    double vol = g2.cell_volume();
    for (int d = 0; d < 3; ++d)
        for (std::size_t m = 0; m < A.comp(d).size(); ++m) {
            ortho += vol * gp.comp(d)[m] * hd.solenoidal.comp(d)[m];
            rec = std::max(rec, std::abs(A.comp(d)[m] - gp.comp(d)[m] - hd.solenoidal.comp(d)[m]));
        }

    // second-order operator convergence on periodic grids
    auto grad_err = [&](int n) {
        auto g = box_grid(n, n, n, 2.0 * M_PI, 2.0 * M_PI, 2.0 * M_PI, BoundaryKind::Periodic,
                          BoundaryKind::Periodic, BoundaryKind::Periodic);
        double h = g.spacing(0);
        ScalarField u(g, Placement::Node);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    u.at(i, j, k) = std::sin(i * h) * std::cos(2.0 * j * h) * std::sin(k * h);
        VectorField gu = grad(u);
        double err = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double exact =
                        std::cos((i + 0.5) * h) * std::cos(2.0 * j * h) * std::sin(k * h);
                    double e = gu.at(0, i, j, k) - exact;
                    err += e * e * g.cell_volume();
                }
        return std::sqrt(err);
    };
    double slope = std::log2(grad_err(16) / grad_err(32));

    r.pass = worst_complex <= 1e-13 && std::abs(ortho) <= 1e-10 && rec <= 1e-10 &&
             slope >= 1.8 && slope <= 2.2;
    r.detail = fmt("complex %.1e, hodge ortho %.1e / rec %.1e, ", worst_complex, std::abs(ortho),
                   rec) +
               fmt("operator slope %.3f", slope);
    return r;
}

CriterionResult c12_oracle_equivalence(Context& ctx) {
    CriterionResult r{12, "slab-box-vs-1d-oracle", false, "", 0.0};
    GLParameters p;
    p.lambda = 0.1;
    p.kappa = 50.0;
    // short domain so the 64-cell box resolves the profile; the far-wall
    // tangential trace comes from the oracle so both discretize the same BVP
    double L = 0.2;
    int nz = 64;
    SlabProblem op;
    op.lambda = p.lambda;
    op.kappa = p.kappa;
    op.b = 0.3;
    op.L = L;
    op.n = 2 * nz;  // oracle nodes at every node and face of the box column
    auto oracle = solve_full_ode(op);

    auto grid = box_grid(16, 16, nz, 0.4, 0.4, L);
    auto data = BoundaryData::slab_uniform(grid, -0.3, p.lambda * oracle.ap.back());
    SolveOptions opts;
    opts.tol = 1e-10;
    ctx.c12_state = solve_full_FH(p, data, grid, nullptr, opts);
    ctx.have_c12 = true;

    MeissnerStateFA fa = recover_A(ctx.c12_state);
    double worst_f = 0.0, worst_a = 0.0;
    auto ns = ctx.c12_state.f.shape();
    for (int i = 0; i < ns[0]; ++i)
        for (int j = 0; j < ns[1]; ++j)
            for (int k = 0; k <= nz; ++k)
                worst_f = std::max(
                    worst_f, std::abs(ctx.c12_state.f.at(i, j, k) - oracle.f[2 * k]));
    auto fs = fa.A.shape(0);
    for (int i = 0; i < fs[0]; ++i)
        for (int j = 0; j < fs[1]; ++j)
            for (int k = 0; k < nz; ++k)
                worst_a = std::max(
                    worst_a, std::abs(std::abs(fa.A.at(0, i, j, k)) - oracle.a[2 * k + 1]));
    double div = interior_divergence(ctx.c12_state.H);
    r.pass = worst_f <= 2e-3 && worst_a <= 2e-3 && div <= 1e-10;
    r.detail = fmt("max |df| %.2e, max |da| %.2e, div %.1e", worst_f, worst_a, div);

    std::ostringstream fcsv;
    write_field_csv(fcsv, ctx.c12_state.f);
    save(ctx, "c12_f.csv", fcsv.str());
    save(ctx, "c12_state.json", state_sidecar_json(ctx.c12_state));
    return r;
}

CriterionResult c13_equivalence(Context& ctx) {
    CriterionResult r{13, "formulation-equivalence", false, "", 0.0};
    double worst_first = 0.0, worst_second = 0.0;
    auto check = [&](const MeissnerStateFH& st) {
        MeissnerStateFA fa = recover_A(st);
        auto res = formulation_residuals(fa, st.H, st.params.lambda);
        worst_first = std::max(worst_first, res.curl_identity);
        worst_second = std::max(worst_second, res.second_equation);
    };
    check(ctx.c3.last_state);
    if (ctx.have_c12) check(ctx.c12_state);
    if (ctx.have_c9) check(ctx.c9_state);
    r.pass = worst_first <= 1e-8 && worst_second <= 1e-7;
    r.detail = fmt("curl identity %.2e, second equation %.2e", worst_first, worst_second);
    return r;
}

CriterionResult c14_exterior(Context& ctx) {
    CriterionResult r{14, "exterior-spectral-exactness", false, "", 0.0};
    Rng rng(ctx.opts.seed + 14);
    bool ok = true;
    std::ostringstream detail;

    // Sigma ratios through the sampled-transform path
    int l_max = 8;
    SphereQuadrature q(l_max);
    SphericalHarmonicCoeffs v(l_max);
    for (int l = 1; l <= l_max; ++l)
        for (int m = -l; m <= l; ++m) v.at(SphBasis::GradS, l, m) = rng.uniform(0.2, 1.0);
    std::vector<double> vt(q.n_points()), vp(q.n_points());
    for (int it = 0; it < q.n_theta(); ++it)
        for (int ip = 0; ip < q.n_phi(); ++ip) {
            double a = 0.0, b = 0.0;
            for (int l = 1; l <= l_max; ++l)
                for (int m = -l; m <= l; ++m) {
                    auto s = sph_harmonic(l, m, q.theta[it], q.phi[ip]);
                    a += v.at(SphBasis::GradS, l, m) * s.dY_dtheta;
                    b += v.at(SphBasis::GradS, l, m) * s.dY_dphi_over_sin;
                }
            std::size_t idx = static_cast<std::size_t>(it) * q.n_phi() + ip;
            vt[idx] = a;
            vp[idx] = b;
        }
    std::vector<double> gc, cc;
    sph_analyze_tangential(q, vt, vp, l_max, gc, cc);
    SphericalHarmonicCoeffs sampled(l_max);
    sampled.grad_s = gc;
    auto sig = sigma_dtn(sampled);
    double worst_sigma = 0.0;
    for (int l = 1; l <= l_max; ++l)
        for (int m = -l; m <= l; ++m)
            worst_sigma = std::max(worst_sigma,
                                   std::abs(sig.at(SphBasis::Y, l, m) +
                                            (l + 1.0) * v.at(SphBasis::GradS, l, m)));
    ok = ok && worst_sigma <= 1e-10;
    detail << fmt("sigma %.1e", worst_sigma);

    // flux of phi_mu
    SphericalHarmonicCoeffs zero(4);
    auto phi_mu = solve_exterior_scalar(zero, 0.7, 1.0);
    double flux_err = std::abs(phi_mu.flux_through(2.0) - 0.7);
    ok = ok && flux_err <= 1e-10;
    detail << fmt(", flux %.1e", flux_err);

    // zero-flux decay slope
    SphericalHarmonicCoeffs v1(4);
    v1.at(SphBasis::GradS, 1, 0) = 1.0;
    auto phi0 = solve_exterior_scalar(v1, 0.0, 1.0);
    std::vector<double> radii{2, 4, 8, 16}, vals;
    for (double rr : radii) vals.push_back(phi0.shell_l2(rr));
    double slope = loglog_slope(radii, vals);
    ok = ok && std::abs(slope + 2.0) <= 0.05;
    detail << fmt(", decay slope %.3f", slope);

    // curl identity on a shell by fourth-order differences
    SphericalHarmonicCoeffs vcross(4);
    vcross.at(SphBasis::Cross, 1, 0) = 1.0;
    vcross.at(SphBasis::Cross, 2, 1) = -0.5 / 2.0;
    ExteriorScalarSolution src;
    src.coeffs = SphericalHarmonicCoeffs(4, 1.0);
    src.coeffs.at(SphBasis::Y, 1, 0) = 1.0;
    src.coeffs.at(SphBasis::Y, 2, 1) = -0.5;
    auto u = solve_exterior_curl_source(src, vcross, 1.0);
    double hfd = 3e-3;
    auto fieldf = [&](const Vec3& x) {
        double rr = std::sqrt(norm2(x));
        return u.evaluate(rr, std::acos(x[2] / rr), std::atan2(x[1], x[0]));
    };
    double worst_curl = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        double theta = rng.uniform(0.6, M_PI - 0.6);
        double phi = rng.uniform(0.0, 2.0 * M_PI);
        double rr = 2.0;
        Vec3 x{rr * std::sin(theta) * std::cos(phi), rr * std::sin(theta) * std::sin(phi),
               rr * std::cos(theta)};
        auto dcomp = [&](int comp, int axis) {
            Vec3 xp = x, xm = x, xpp = x, xmm = x;
            xp[axis] += hfd;
            xm[axis] -= hfd;
            xpp[axis] += 2 * hfd;
            xmm[axis] -= 2 * hfd;
            return (-fieldf(xpp)[comp] + 8.0 * fieldf(xp)[comp] - 8.0 * fieldf(xm)[comp] +
                    fieldf(xmm)[comp]) /
                   (12.0 * hfd);
        };
        Vec3 lhs{dcomp(2, 1) - dcomp(1, 2), dcomp(0, 2) - dcomp(2, 0), dcomp(1, 0) - dcomp(0, 1)};
        Vec3 rhs = src.gradient(rr, theta, phi);
        for (int d = 0; d < 3; ++d) worst_curl = std::max(worst_curl, std::abs(lhs[d] - rhs[d]));
    }
    ok = ok && worst_curl <= 1e-10;
    detail << fmt(", curl id %.1e", worst_curl);

    // engineered (5.9) violation is detected
    bool caught = false;
    try {
        SphericalHarmonicCoeffs vbad(4);
        vbad.at(SphBasis::Cross, 1, 0) = -1.0;
        solve_exterior_curl_source(src, vbad, 1.0);
    } catch (const Error& e) {
        caught = e.kind() == ErrorKind::Incompatible;
    }
    ok = ok && caught;
    detail << (caught ? ", incompatibility detected" : ", VIOLATION MISSED");

    std::ostringstream coeffs;
    write_coeffs_csv(coeffs, sig);
    save(ctx, "c14_sigma.csv", coeffs.str());
    r.pass = ok;
    r.detail = detail.str();
    return r;
}

CriterionResult c15_determinism(Context& ctx) {
    CriterionResult r{15, "determinism", false, "", 0.0};
    // replay the CSV-emitting paths with the fixed seed: continuation body,
    // oracle profile, sigma table
    GLParameters p;
    p.lambda = 0.05;
    p.kappa = std::numeric_limits<double>::infinity();
    auto grid = slab_box(500, 0.75);
    auto data = BoundaryData::slab_uniform(grid, -1.0, 0.0);
    ContinuationSchedule sched;
    sched.mu_start = 0.45;
    sched.mu_step = 0.02;
    sched.margin_tol = 1e-3;
    sched.mu_tol = 1e-4;
    auto run_body = [&] {
        auto res = continue_mu(SystemKind::Limit, p, data, sched, grid);
        return continuation_table(res).body_csv();
    };
    std::string b1 = run_body(), b2 = run_body();

    SlabProblem op;
    op.lambda = 0.1;
    op.b = 0.5;
    auto prof = [&] {
        std::ostringstream os;
        auto sol = solve_limit_ode(op);
        write_slab_profile_csv(os, sol);
        return os.str();
    };
    std::string p1 = prof(), p2 = prof();

    auto sig_body = [&] {
        SphericalHarmonicCoeffs v(6);
        Rng rng(ctx.opts.seed + 15);
        for (int l = 1; l <= 6; ++l)
            for (int m = -l; m <= l; ++m) v.at(SphBasis::GradS, l, m) = rng.uniform(-1, 1);
        std::ostringstream os;
        write_coeffs_csv(os, sigma_dtn(v));
        return os.str();
    };
    std::string s1 = sig_body(), s2 = sig_body();

    r.pass = b1 == b2 && p1 == p2 && s1 == s2;
    r.detail = r.pass ? "continuation, oracle and sigma CSV bodies byte-identical"
                      : "re-emitted CSV bodies differ";
    save(ctx, "c15_body_a.csv", b1);
    save(ctx, "c15_body_b.csv", b2);
    return r;
}

}  // namespace

std::vector<CriterionResult> run_all(const Options& options) {
    Context ctx;
    ctx.opts = options;
    std::vector<CriterionResult (*)(Context&)> criteria{
        c1_constitutive, c2_superheating_value, c3_threshold_margin, c4_rates,
        c5_uniform,      c6_corrector,          c7_lambda_limit,     c8_safeguards,
        c9_uniqueness,   c10_stability,         c11_discrete_calculus, c12_oracle_equivalence,
        c13_equivalence, c14_exterior,          c15_determinism};
    std::vector<CriterionResult> results;
    for (auto* fn : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = fn(ctx);
        } catch (const std::exception& e) {
            r.id = static_cast<int>(results.size()) + 1;
            r.name = "criterion";
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (options.verbose) {
            std::printf("[%2d] %s  %-32s %s  (%.1fs)\n", r.id, r.pass ? "PASS" : "FAIL",
                        r.name.c_str(), r.detail.c_str(), r.seconds);
            std::fflush(stdout);
        }
        results.push_back(std::move(r));
    }
    if (options.verbose) {
        int passed = 0;
        for (const auto& r : results) passed += r.pass ? 1 : 0;
        std::printf("acceptance: %d/%d criteria passed\n", passed,
                    static_cast<int>(results.size()));
    }
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

}  // namespace meissner::acceptance
