#pragma once

#include <vector>

#include "meissner/constitutive.hpp"

namespace meissner {

// Half-space superheating value sqrt(5/18) and the thermodynamic critical
// field 1/sqrt(2) it is compared against.
double superheating_closed_form();
double critical_field_closed_form();

// Largest a0 admissible on the screened branch solves b = a0 sqrt(1 - a0^2/2)
// for a0 in [0, 1/sqrt(3)].
double slab_a0_from_b(double b);

struct SlabProblem {
    double lambda = 0.1;
    double kappa = std::numeric_limits<double>::infinity();
    double b = 0.0;  // applied tangential field magnitude at x = 0
    double L = 0.0;  // truncation length; defaults to 15 lambda
    int n = 0;       // collocation points; defaults to max(600, 40 L/lambda)

    void fill_defaults();
};

struct SlabSolution {
    std::vector<double> x, f, a, fp, ap;
    double a0 = 0.0;
    double margin_wall = 0.0;            // f(0)^2 - a(0)^2 - 1/3
    double first_integral_residual = 0.0;
    int newton_iterations = 0;
};

// Limiting slab profile: lambda^2 a'' = (1 - a^2) a, lambda a'(0) = -b,
// decay at the truncated end.  a0 comes from the first integral; the profile
// is its exact quadrature, so the first integral is conserved to round-off.
SlabSolution solve_limit_ode(const SlabProblem& problem);

// Finite-kappa slab pair: -(lambda/kappa)^2 f'' = (1 - f^2 - a^2) f,
// lambda^2 a'' = f^2 a, f'(0) = f'(L) = 0, lambda a'(0) = -b, a(L) = 0.
// Centered collocation with damped Newton on the coupled block system.
SlabSolution solve_full_ode(const SlabProblem& problem);

// Trapezoid quadrature of the slab energy density per unit wall area with
// the constant tangential extension -b.
double slab_energy(const SlabSolution& sol, double lambda, double kappa, double b);

}  // namespace meissner
