#include "meissner/superheating.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "block_tridiag.hpp"
#include "meissner/slab.hpp"

namespace meissner {

double corrector_cutoff(double t) {
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    double s = t - 1.0;
    return 1.0 - (10.0 * s * s * s - 15.0 * s * s * s * s + 6.0 * s * s * s * s * s);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, ErrorKind::InvalidSpec,
            "slope fit needs matched samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, ErrorKind::NonPositiveLogData,
                "log-log fit needs positive data");
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double n = static_cast<double>(x.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

MeissnerStateFH solve_at(SystemKind system, const GLParameters& base, const BoundaryData& data,
                         double mu, const StaggeredGrid& grid, const MeissnerStateFH* warm) {
    GLParameters p = base;
    p.mu = mu;
    BoundaryData scaled = data.scaled(mu);
    if (system == SystemKind::Limit) {
        p.kappa = std::numeric_limits<double>::infinity();
        return solve_limit_H(p, scaled, grid, warm);
    }
    return solve_full_FH(p, scaled, grid, warm);
}

ContinuationRow row_of(const MeissnerStateFH& state, double mu) {
    ContinuationRow r;
    r.mu = mu;
    r.margin = state.report.margin;
    r.curl_bound = state.report.curl_bound;
    r.sup_A = state.report.sup_A;
    r.energy = stability_energy(state.f, recover_A(state).A, state.data, state.params);
    r.iterations = state.report.iterations;
    return r;
}

}  // namespace

double mu_upper_bound(double lambda, const BoundaryData& data, const StaggeredGrid& grid) {
    require(!data.is_zero(), ErrorKind::ZeroDatum, "upper bound needs a nonzero datum");
    double lam2 = lambda * lambda;
    // minimizer of J[H] = int lambda^2 |curl H|^2 + |H|^2 over H_T = B_T
    VectorField H(grid, Placement::Edge);
    data.impose(H);
    if (grid.slab_degenerate()) {
        // one tridiagonal screening solve per tangential component
        int n = grid.cells(2);
        double h = grid.spacing(2), h2 = h * h;
        for (int t : {0, 1}) {
            std::vector<double> lo(n + 1, 0.0), di(n + 1, 1.0), up(n + 1, 0.0), rhs(n + 1, 0.0);
            for (int k = 1; k < n; ++k) {
                lo[k] = -lam2 / h2;
                di[k] = 2.0 * lam2 / h2 + 1.0;
                up[k] = -lam2 / h2;
            }
            rhs[0] = H.at(t, 0, 0, 0);
            rhs[n] = H.at(t, 0, 0, H.shape(t)[2] - 1);
            detail::thomas(lo, di, up, rhs);
            for (int k = 0; k <= n; ++k) H.at(t, 0, 0, k) = rhs[k];
        }
    } else {
        VectorField c = curl(H);
        VectorField r = curl_dual(c);
        for (int d = 0; d < 3; ++d)
            for (std::size_t m = 0; m < r.comp(d).size(); ++m)
                r.comp(d)[m] = -(lam2 * r.comp(d)[m] + H.comp(d)[m]);
        ScalarField coef(grid, Placement::Node, lam2);
        VectorField delta = solve_linear_maxwell(coef, r, 1e-12);
        for (int d = 0; d < 3; ++d)
            for (std::size_t m = 0; m < H.comp(d).size(); ++m) H.comp(d)[m] += delta.comp(d)[m];
    }

    double vol = grid.cell_volume();
    double J = 0.0;
    VectorField ch = curl(H);
    for (int d = 0; d < 3; ++d) {
        for (double v : ch.comp(d)) J += lam2 * v * v * vol;
        for (double v : H.comp(d)) J += v * v * vol;
    }
    require(J > 0.0, ErrorKind::ZeroDatum, "degenerate quadratic form");
    return lambda * data.l1_norm() / (std::min(lam2, 1.0) * J);
}

SuperheatingResult continue_mu(SystemKind system, const GLParameters& base_params,
                               const BoundaryData& base_data, const ContinuationSchedule& schedule,
                               const StaggeredGrid& grid) {
    schedule.validate();
    bool zero_datum = base_data.is_zero();

    SuperheatingResult out;
    if (!zero_datum) out.upper_bound = mu_upper_bound(base_params.lambda, base_data, grid);

    double good_mu = 0.0;
    MeissnerStateFH good_state;
    bool have_good = false;
    int solves = 0;

    auto classify = [&](double mu, const MeissnerStateFH* warm, bool& ok, MeissnerStateFH& state) {
        ++solves;
        try {
            state = solve_at(system, base_params, base_data, mu, grid, warm);
            ok = state.report.margin > schedule.margin_tol;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::OutOfDomain || e.kind() == ErrorKind::SolverFailure ||
                e.kind() == ErrorKind::OutOfK) {
                ok = false;
                return false;  // no state produced
            }
            throw;
        }
        return true;
    };

    // upward walk
    double mu = schedule.mu_start;
    double bad_mu = -1.0;
    for (int step = 0; step < schedule.max_steps; ++step) {
        bool ok = false;
        MeissnerStateFH state;
        bool solved = classify(mu, have_good ? &good_state : nullptr, ok, state);
        if (solved && ok) {
            out.trajectory.push_back(row_of(state, mu));
            if (schedule.keep_states) out.states_kept.push_back(state);
            good_mu = mu;
            good_state = state;
            have_good = true;
            mu += schedule.mu_step;
            continue;
        }
        if (solved && !ok && state.report.margin <= 0.0 && !have_good)
            fail(ErrorKind::NeverEntersK, "margin nonpositive at mu_start");
        if (!have_good && !solved)
            fail(ErrorKind::NeverEntersK, "no solution at mu_start");
        bad_mu = mu;
        break;
    }
    if (bad_mu < 0.0) {
        if (zero_datum)
            fail(ErrorKind::UnboundedThreshold,
                 "zero datum: threshold unbounded, max_steps exhausted");
        fail(ErrorKind::BudgetExceeded, "no margin crossing within max_steps");
    }

    // bisection on [good_mu, bad_mu]
    while (bad_mu - good_mu > schedule.mu_tol && solves < 4 * schedule.max_steps) {
        double mid = 0.5 * (good_mu + bad_mu);
        bool ok = false;
        MeissnerStateFH state;
        bool solved = classify(mid, have_good ? &good_state : nullptr, ok, state);
        if (solved && ok) {
            out.trajectory.push_back(row_of(state, mid));
            if (schedule.keep_states) out.states_kept.push_back(state);
            good_mu = mid;
            good_state = state;
        } else {
            bad_mu = mid;
        }
    }

    out.bracket = {good_mu, bad_mu};
    out.mu_star = 0.5 * (good_mu + bad_mu);
    require(have_good, ErrorKind::NeverEntersK, "continuation kept no admissible state");
    out.last_state = good_state;
    out.last_margin = good_state.report.margin;

    // |A|-based detector of (4.37): crossing of sup|A|^2 through
    // 1/3 - margin_tol/2, interpolated along the trajectory
    double thresh_sq = 1.0 / 3.0 - 0.5 * schedule.margin_tol;
    out.mu_star_supA = out.mu_star;
    for (std::size_t i = 0; i + 1 < out.trajectory.size(); ++i) {
        double a0 = out.trajectory[i].sup_A * out.trajectory[i].sup_A;
        double a1 = out.trajectory[i + 1].sup_A * out.trajectory[i + 1].sup_A;
        if (a0 < thresh_sq && a1 >= thresh_sq) {
            double w = (thresh_sq - a0) / (a1 - a0);
            out.mu_star_supA = out.trajectory[i].mu +
                               w * (out.trajectory[i + 1].mu - out.trajectory[i].mu);
        }
    }
    if (!out.trajectory.empty() &&
        out.trajectory.back().sup_A * out.trajectory.back().sup_A < thresh_sq) {
        // extrapolate the last accepted point to the bracket edge
        out.mu_star_supA = out.mu_star;
    }
    std::sort(out.trajectory.begin(), out.trajectory.end(),
              [](const ContinuationRow& a, const ContinuationRow& b) { return a.mu < b.mu; });
    return out;
}

RateFit kappa_sweep(double lambda, const BoundaryData& data, const StaggeredGrid& grid,
                    const std::vector<double>& kappas) {
    require(!kappas.empty(), ErrorKind::InvalidSpec, "kappa list must not be empty");
    for (std::size_t i = 1; i < kappas.size(); ++i)
        require(kappas[i] > kappas[i - 1], ErrorKind::InvalidSpec, "kappas must increase");
    for (double k : kappas)
        require(k >= std::max(1.0, lambda), ErrorKind::InvalidSpec,
                "kappa must be >= max(1, lambda)");

    GLParameters lp;
    lp.lambda = lambda;
    lp.kappa = std::numeric_limits<double>::infinity();
    MeissnerStateFH lim = solve_limit_H(lp, data, grid);
    MeissnerStateFA fa_inf = recover_A(lim);
    ScalarField f_inf = lim.f;
    VectorField A_inf = fa_inf.A;
    VectorField H_inf = lim.H;

    RateFit fit;
    fit.kappas = kappas;
    MeissnerStateFH warm;
    bool have_warm = false;
    std::vector<double> comb_l2, comb_h1, comb_h2;
    for (double kappa : kappas) {
        GLParameters p;
        p.lambda = lambda;
        p.kappa = kappa;
        MeissnerStateFH st = solve_full_FH(p, data, grid, have_warm ? &warm : nullptr);
        require(st.report.margin > 0.0, ErrorKind::OutOfK, "sweep state left K");
        warm = st;
        have_warm = true;
        MeissnerStateFA fa = recover_A(st);
        std::array<double, 9> row{};
        row[0] = diff_norm(st.f, f_inf, NormKind::L2);
        row[1] = diff_norm(fa.A, A_inf, NormKind::L2);
        row[2] = diff_norm(st.H, H_inf, NormKind::L2);
        row[3] = diff_norm(st.f, f_inf, NormKind::H1);
        row[4] = diff_norm(fa.A, A_inf, NormKind::H1);
        row[5] = diff_norm(st.H, H_inf, NormKind::H1);
        row[6] = diff_norm(st.f, f_inf, NormKind::H2);
        row[7] = diff_norm(fa.A, A_inf, NormKind::H2);
        row[8] = diff_norm(st.H, H_inf, NormKind::H2);
        fit.norms.push_back(row);
        fit.sup_diffs.push_back(diff_norm(st.f, f_inf, NormKind::Sup) +
                                diff_norm(fa.A, A_inf, NormKind::Sup));
        comb_l2.push_back(row[0] + row[1]);
        comb_h1.push_back(row[3] + row[4]);
        comb_h2.push_back(row[6] + row[7]);
    }
    fit.slope_l2 = loglog_slope(kappas, comb_l2);
    fit.slope_h1 = loglog_slope(kappas, comb_h1);
    fit.slope_h2 = loglog_slope(kappas, comb_h2);
    return fit;
}

ScalarField boundary_corrector(const ScalarField& f_inf, double kappa) {
    require(f_inf.placement() == Placement::Node, ErrorKind::PlacementMismatch,
            "corrector acts on the nodal density");
    require(kappa >= 1.0, ErrorKind::InvalidSpec, "corrector needs kappa >= 1");
    const auto& g = f_inf.grid();
    require(g.wall_axis_count() >= 1, ErrorKind::InvalidSpec, "corrector needs a wall");
    ScalarField out = f_inf;
    auto ns = f_inf.shape();

    // inward-normal derivative at the nearest wall point of each node column;
    // one-sided second-order stencil
    auto inward_deriv = [&](int axis, bool lo_side, std::array<int, 3> c) {
        double h = g.spacing(axis);
        auto fetch = [&](int m) {
            std::array<int, 3> q = c;
            q[axis] = lo_side ? m : ns[axis] - 1 - m;
            return f_inf.at(q[0], q[1], q[2]);
        };
        return (-3.0 * fetch(0) + 4.0 * fetch(1) - fetch(2)) / (2.0 * h);
    };

    for (int i = 0; i < ns[0]; ++i)
        for (int j = 0; j < ns[1]; ++j)
            for (int k = 0; k < ns[2]; ++k) {
                std::array<int, 3> c{i, j, k};
                double best = std::numeric_limits<double>::infinity();
                int axis = -1;
                bool lo = true;
                for (int a = 0; a < 3; ++a) {
                    if (!g.wall(a)) continue;
                    double dlo = c[a] * g.spacing(a);
                    double dhi = (ns[a] - 1 - c[a]) * g.spacing(a);
                    if (dlo < best) {
                        best = dlo;
                        axis = a;
                        lo = true;
                    }
                    if (dhi < best) {
                        best = dhi;
                        axis = a;
                        lo = false;
                    }
                }
                if (axis < 0) continue;
                double chi = corrector_cutoff(kappa * best);
                if (chi == 0.0) continue;
                double gder = inward_deriv(axis, lo, c);
                out.at(i, j, k) = f_inf.at(i, j, k) - chi * best * gder;
            }
    return out;
}

LambdaSweepResult lambda_sweep(const BoundaryData& data, const StaggeredGrid& grid,
                               const std::vector<double>& lambdas,
                               const ContinuationSchedule& schedule, double kappa_check,
                               int jobs) {
    require(!lambdas.empty(), ErrorKind::InvalidSpec, "lambda list must not be empty");
    for (std::size_t i = 1; i < lambdas.size(); ++i)
        require(lambdas[i] < lambdas[i - 1], ErrorKind::InvalidSpec, "lambdas must decrease");
    double b_sup = data.sup_norm();
    require(b_sup > 0.0, ErrorKind::ZeroDatum, "lambda sweep needs a nonzero datum");
    double target = superheating_closed_form() / b_sup;

    auto run_one = [&](double lambda) {
        GLParameters p;
        p.lambda = lambda;
        p.kappa = std::numeric_limits<double>::infinity();
        return continue_mu(SystemKind::Limit, p, data, schedule, grid);
    };

    LambdaSweepResult out;
    out.kappa_check = kappa_check;
    if (jobs > 1) {
        std::vector<std::future<SuperheatingResult>> futs;
        for (double l : lambdas)
            futs.push_back(std::async(std::launch::async, run_one, l));
        for (auto& f : futs) out.details.push_back(f.get());
    } else {
        for (double l : lambdas) out.details.push_back(run_one(l));
    }
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        LambdaSweepRow row;
        row.lambda = lambdas[i];
        row.mu_star = out.details[i].mu_star;
        row.error = std::abs(row.mu_star - target);
        out.rows.push_back(row);
    }

    if (kappa_check > 0.0) {
        GLParameters p;
        p.lambda = lambdas.back();
        p.kappa = kappa_check;
        out.full_kappa_detail = continue_mu(SystemKind::Full, p, data, schedule, grid);
        out.mu_star_full_kappa = out.full_kappa_detail.mu_star;
    }
    return out;
}

}  // namespace meissner
