#pragma once

#include <functional>

#include "meissner/fields.hpp"

namespace meissner {

enum class DiffKind { Grad, Curl, Div };
enum class NormKind { L2, H1, H2, Sup };

// Primal complex: GRAD: NODE -> EDGE, CURL: EDGE -> FACE, DIV: FACE -> CELL.
// curl(grad) = 0 and div(curl) = 0 hold to round-off by construction.
VectorField grad(const ScalarField& u);
VectorField curl(const VectorField& e);
ScalarField divergence(const VectorField& f);

// Adjoints under the uniform cell-volume pairing.  curl_dual is the exact
// transpose of curl (FACE -> EDGE); div_dual of -grad (EDGE -> NODE);
// grad_dual of -div (CELL -> FACE, zero-Dirichlet ghost outside walls).
VectorField curl_dual(const VectorField& f);
ScalarField div_dual(const VectorField& e);
VectorField grad_dual(const ScalarField& p);

struct DiffResultScalar {
    ScalarField scalar;
};

// Placement-checked dispatcher used by the CLI; library code calls the typed
// functions above directly.
VectorField apply_diff_to_scalar(DiffKind kind, const ScalarField& u);
VectorField apply_diff_vector(DiffKind kind, const VectorField& v);

// Quadrature weight of one storage point (trapezoid on wall node-aligned
// axes, plain product rule elsewhere).
double quad_weight(const StaggeredGrid& g, const std::array<int, 3>& shape, Placement p, int comp,
                   int i, int j, int k);

double integrate(const ScalarField& u);
double field_norm(const ScalarField& u, NormKind kind);
double field_norm(const VectorField& u, NormKind kind);
double sup_norm(const VectorField& u);

// Pointwise difference norms for convergence tables; fields must share grid
// and placement.
double diff_norm(const ScalarField& a, const ScalarField& b, NormKind kind);
double diff_norm(const VectorField& a, const VectorField& b, NormKind kind);

// f^2 averaged to faces (4-point; all contributing nodes always exist).
VectorField face_average_of_squared(const ScalarField& f);

// |A|^2 at nodes by arithmetic averaging of adjacent squared components.
// `wall_extrapolate` switches boundary nodes to one-sided quadratic
// extrapolation (unbiased diagnostics); the plain average is the adjoint of
// the face interpolation and is what solvers and the energy use.
ScalarField vector_sq_to_nodes(const VectorField& A, bool wall_extrapolate = false);

struct HodgeResult {
    ScalarField potential;   // p, zero on wall boundaries
    VectorField solenoidal;  // B with discrete div B = 0
    int iterations = 0;
};

// L2 splitting A = grad p + B; EDGE fields pair with node potentials, FACE
// fields with cell potentials.
HodgeResult hodge_decompose(const VectorField& A, double tol = 1e-12, int max_iter = 0);

// Empirical div-curl-gradient ratio ||u||_H1 / (||div u|| + ||curl u|| +
// ||nu.u||_bdry + eps).  Reported only, never asserted against paper values.
double divcurl_probe(const VectorField& u);

// Plain conjugate gradient on flat vectors; unpreconditioned so that
// operator-invariant subspaces (discrete div-free fields) are preserved.
struct CgResult {
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

CgResult conjugate_gradient(const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply,
                            const std::vector<double>& rhs, std::vector<double>& x, double rel_tol,
                            int max_iter);

}  // namespace meissner
