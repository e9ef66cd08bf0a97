#pragma once

#include "meissner/boundary.hpp"
#include "meissner/constitutive.hpp"
#include "meissner/operators.hpp"

namespace meissner {

struct EnergyBreakdown {
    double gradient_term = 0.0;  // (lambda/kappa)^2 int |grad f|^2
    double g_term = 0.0;         // int G(f, A)
    double field_term = 0.0;     // int |lambda curl A - B|^2
    double total = 0.0;
};

// Convexity margin of a sampled state: min over nodes of f^2 - |A|^2 - 1/3.
// Uses wall-extrapolated |A|^2 so the wall minimum is unbiased.
ConvexityMargin convexity_margin(const ScalarField& f, const VectorField& A, double delta);

// Quadrature of the three energy terms; B_ext is the caller's extension of
// the boundary datum as an EDGE field, paired against lambda curl A.
EnergyBreakdown omega_energy(const ScalarField& f, const VectorField& A,
                             const VectorField& B_ext, const GLParameters& params);

// Discretely critical energy used by the stability checks.  The extension is
// the constant tangential field matching the lo-wall trace; the field term
// runs over free edges only, so the recovered solution of the H-system is an
// exact critical point for perturbations vanishing in the far-wall layer.
double stability_energy(const ScalarField& f, const VectorField& A, const BoundaryData& data,
                        const GLParameters& params);

// Weighted node Laplacian: (1/w_n) d/df of the gradient term, the exact
// discrete counterpart of the Neumann Laplacian in the f-equation.
ScalarField weighted_laplacian(const ScalarField& f);

}  // namespace meissner
