#pragma once

#include <optional>

#include "meissner/interior.hpp"

namespace meissner {

enum class SystemKind { Full, Limit };

struct ContinuationSchedule {
    double mu_start = 0.02;
    double mu_step = 0.02;
    double margin_tol = 1e-3;  // threshold on the convexity margin
    double mu_tol = 1e-4;      // final bracket width
    int max_steps = 200;
    bool keep_states = false;

    void validate() const {
        require(mu_step > 0.0 && mu_tol > 0.0 && margin_tol > 0.0, ErrorKind::InvalidSpec,
                "schedule entries must be positive");
        require(mu_tol < mu_step, ErrorKind::InvalidSpec, "mu_tol must be below mu_step");
        require(margin_tol <= 1e-2, ErrorKind::InvalidSpec, "margin_tol must be <= 1e-2");
    }
};

struct ContinuationRow {
    double mu = 0.0;
    double margin = 0.0;
    double curl_bound = 0.0;
    double sup_A = 0.0;
    double energy = 0.0;
    int iterations = 0;
};

struct SuperheatingResult {
    double mu_star = 0.0;
    std::array<double, 2> bracket{0.0, 0.0};
    std::vector<ContinuationRow> trajectory;  // accepted states, increasing mu
    double upper_bound = 0.0;                 // from the quadratic-form bound
    double mu_star_supA = 0.0;                // |A|-based detector (limit system)
    double last_margin = 0.0;
    std::vector<MeissnerStateFH> states_kept;
    MeissnerStateFH last_state;
};

struct RateFit {
    std::vector<double> kappas;
    // rows follow the kappa list: norms of (f_k - f_inf, A_k - A_inf, H_k - H_inf)
    std::vector<std::array<double, 9>> norms;  // l2 f,A,H | h1 f,A,H | h2 f,A,H
    std::vector<double> sup_diffs;             // sup-norm of f and A differences combined
    double slope_l2 = 0.0;                     // fitted on the combined f+A L2 difference
    double slope_h1 = 0.0;
    double slope_h2 = 0.0;
};

// Walks mu upward with warm starts; on margin crossing or solver failure
// bisects the last bracket down to mu_tol.  mu_star is the bracket midpoint.
SuperheatingResult continue_mu(SystemKind system, const GLParameters& base_params,
                               const BoundaryData& base_data, const ContinuationSchedule& schedule,
                               const StaggeredGrid& grid);

// Quadratic-form upper bound: lambda ||B_T||_L1 / (min{lambda^2,1} c(B_T)),
// c(B_T) = inf of int lambda^2|curl H|^2 + |H|^2 over H_T = B_T.
double mu_upper_bound(double lambda, const BoundaryData& data, const StaggeredGrid& grid);

// Full-system solutions across the kappa list against the limiting solution.
RateFit kappa_sweep(double lambda, const BoundaryData& data, const StaggeredGrid& grid,
                    const std::vector<double>& kappas);

// Boundary-layer corrector: f_hat = f_inf - chi(kappa d) d (inward derivative
// of f_inf at the nearest wall); satisfies the discrete Neumann condition.
ScalarField boundary_corrector(const ScalarField& f_inf, double kappa);

struct LambdaSweepRow {
    double lambda = 0.0;
    double mu_star = 0.0;
    double error = 0.0;  // |mu_star - sqrt(5/18)/||B_T|||
};

struct LambdaSweepResult {
    std::vector<LambdaSweepRow> rows;
    std::vector<SuperheatingResult> details;  // one continuation per lambda
    SuperheatingResult full_kappa_detail;
    double mu_star_full_kappa = 0.0;  // finite-kappa threshold at the last lambda
    double kappa_check = 0.0;
};

// Limiting-system thresholds across decreasing lambdas, plus the finite-kappa
// threshold at the smallest lambda when kappa_check > 0.
LambdaSweepResult lambda_sweep(const BoundaryData& data, const StaggeredGrid& grid,
                               const std::vector<double>& lambdas,
                               const ContinuationSchedule& schedule, double kappa_check = 0.0,
                               int jobs = 1);

// C2 quintic smoothstep: 1 on [0,1], 0 on [2,inf).
double corrector_cutoff(double t);

// Unweighted least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace meissner
