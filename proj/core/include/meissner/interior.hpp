#pragma once

#include "meissner/boundary.hpp"
#include "meissner/constitutive.hpp"
#include "meissner/energy.hpp"
#include "meissner/operators.hpp"

namespace meissner {

struct SolveOptions {
    double tol = 1e-9;        // relative rms residual target
    int max_newton = 60;
    int max_backtracks = 20;  // residual-monotone halving
    bool require_K = false;   // reject converged states with margin <= 0
    double inner_tol = 1e-2;  // inexact-Newton forcing factor for inner solves
    double f_floor = 0.1;     // positivity safeguard in the line search
    int max_gs_sweeps = 8;    // coupled linearization sweeps (general grids)
};

struct SolveReport {
    int iterations = 0;
    std::vector<double> residual_history;  // rms residuals of accepted iterates
    double final_residual = 0.0;
    double margin = 0.0;      // min f^2 - |A|^2 - 1/3 of the converged state
    double curl_bound = 0.0;  // lambda sup |curl H|
    double sup_A = 0.0;       // sup |A| over faces
    bool converged = false;
    long linear_iterations = 0;
};

struct MeissnerStateFH {
    ScalarField f;   // NODE
    VectorField H;   // EDGE
    GLParameters params;
    BoundaryData data;
    SolveReport report;
};

struct MeissnerStateFA {
    ScalarField f;   // NODE
    VectorField A;   // FACE
    GLParameters params;
    BoundaryData data;
    double margin = 0.0;
    bool converged = false;
};

// Linear Maxwell solve: curl(a curl u) + u = rhs with u_T = 0 on walls;
// a > 0 given at nodes, averaged onto faces.  Divergence-free rhs yields a
// divergence-free u (the identity term carries div u = div rhs).
VectorField solve_linear_maxwell(const ScalarField& a, const VectorField& rhs,
                                 double rel_tol = 1e-12);

// Limiting H-system: lambda^2 curl(F(lambda^2|curl H|^2) curl H) + H = 0 with
// H_T = data.  Quasi-Newton with the longitudinal stiffness dv/dt as the face
// coefficient (exact Newton on slab-symmetric states), CG inner solves.
MeissnerStateFH solve_limit_H(const GLParameters& params, const BoundaryData& data,
                              const StaggeredGrid& grid, const MeissnerStateFH* init = nullptr,
                              const SolveOptions& opts = {});

// Finite-kappa coupled system (f, H).  Degenerate lateral boxes use a direct
// block-tridiagonal Newton; general boxes a segregated Gauss-Seidel Newton.
MeissnerStateFH solve_full_FH(const GLParameters& params, const BoundaryData& data,
                              const StaggeredGrid& grid, const MeissnerStateFH* init = nullptr,
                              const SolveOptions& opts = {});

// A = -lambda f^-2 curl H on faces (finite kappa), or
// A = -lambda F(lambda^2|curl H|^2) curl H (limit states).
MeissnerStateFA recover_A(const MeissnerStateFH& state);

// f_infty = sqrt(1 - |A|^2) at nodes.
ScalarField limit_density(const VectorField& A);

enum class DtnKind { Gamma, Pi };

struct NormalTrace {
    int wall_axis = -1;
    std::array<int, 2> shape{0, 0};    // transverse cells
    std::vector<double> lo, hi;        // nu . H on each wall plane (outward)
    double mean = 0.0;                 // area-weighted boundary integral
    double l2 = 0.0;
};

// nu . H on the wall planes of a single-wall-axis box; integrates to zero
// whenever the interior-node divergence of H vanishes.
NormalTrace interior_dtn(const MeissnerStateFH& state, DtnKind which);
NormalTrace normal_trace(const VectorField& H);

// |curl H| magnitude per face (other components averaged in) and its sup.
double curl_sup(const VectorField& H);

// Relative interior-node divergence of an edge field.
double interior_divergence(const VectorField& H);

// Equivalence diagnostics of a recovered state: the curl identity
// curl A = H / lambda over free edges (relative L2) and the second equation
// lambda^2 curl^2 A + f^2 A over interior faces (relative L2).  Dirichlet
// rows carry the one-sided Neumann mismatch by construction and are skipped.
struct FormulationResiduals {
    double curl_identity = 0.0;
    double second_equation = 0.0;
};

FormulationResiduals formulation_residuals(const MeissnerStateFA& fa, const VectorField& H,
                                           double lambda);

}  // namespace meissner
