#pragma once

#include "meissner/spherical.hpp"

namespace meissner {

enum class SphBasis { Y, GradS, Cross };

// Spectral coefficients of fields on the exterior of a sphere, expressed in
// the pointwise angular bases Y (scalar / normal), grad_S Y (tangential
// gradient) and r-hat x grad_S Y (toroidal tangential).
struct SphericalHarmonicCoeffs {
    int l_max = 0;
    double sphere_radius = 1.0;
    std::vector<double> y, grad_s, cross;  // each (l_max + 1)^2, real basis

    explicit SphericalHarmonicCoeffs(int l_max_in = 0, double radius = 1.0)
        : l_max(l_max_in), sphere_radius(radius) {
        y.assign(sph_count(l_max), 0.0);
        grad_s.assign(sph_count(l_max), 0.0);
        cross.assign(sph_count(l_max), 0.0);
    }

    double& at(SphBasis b, int l, int m) {
        auto& v = b == SphBasis::Y ? y : (b == SphBasis::GradS ? grad_s : cross);
        return v[sph_index(l, m)];
    }
    double at(SphBasis b, int l, int m) const {
        const auto& v = b == SphBasis::Y ? y : (b == SphBasis::GradS ? grad_s : cross);
        return v[sph_index(l, m)];
    }
    bool has_cross(double tol = 1e-14) const;
    bool has_grad(double tol = 1e-14) const;
};

// Exterior harmonic potential phi = sum c_lm r^{-(l+1)} Y_lm with prescribed
// tangential gradient trace and flux through the sphere.
struct ExteriorScalarSolution {
    SphericalHarmonicCoeffs coeffs;  // Y-basis radial coefficients c_lm
    double flux = 0.0;

    double evaluate(double r, double theta, double phi) const;
    Vec3 gradient(double r, double theta, double phi) const;  // cartesian
    // area-weighted flux through the sphere of radius r (quadrature)
    double flux_through(double r) const;
    // L2 over angles of phi on the shell of radius r
    double shell_l2(double r) const;
};

struct ExteriorVectorSolution {
    SphericalHarmonicCoeffs gradient_part;  // psi coefficients, Y basis
    SphericalHarmonicCoeffs toroidal_part;  // tau coefficients (profile tau r^{-(l+1)})

    Vec3 evaluate(double r, double theta, double phi) const;  // cartesian
};

// (5.4)/(6.29): phi with (grad phi)_T = v at r = R and prescribed flux.
ExteriorScalarSolution solve_exterior_scalar(const SphericalHarmonicCoeffs& v, double flux_mu,
                                             double R);

// (E.6): Sigma(v) = nu . W(v)+ with W the decaying zero-flux extension;
// mode-diagonal with ratio -(l+1) in the pointwise bases.
SphericalHarmonicCoeffs sigma_dtn(const SphericalHarmonicCoeffs& v);

// (E.4): u = grad psi with nu . u = g at r = R; g must have zero mean.
ExteriorVectorSolution solve_exterior_gradient_normal(const SphericalHarmonicCoeffs& g, double R);

// (5.10)/(6.31): u with curl u = grad phi0, div u = 0, u_T = v_data, zero
// flux and decay.  The toroidal trace is forced mode-by-mode; a mismatch in
// the CROSS data is exactly the failure of condition (5.9).
ExteriorVectorSolution solve_exterior_curl_source(const ExteriorScalarSolution& phi0,
                                                  const SphericalHarmonicCoeffs& v_data, double R,
                                                  double compat_tol = 1e-10);

// L2 of (interior - exterior) over matching samples with the given weights.
double comparability_residual(const std::vector<double>& interior_normal,
                              const std::vector<double>& exterior_normal,
                              const std::vector<double>& weights);

// Normal-trace samples of a Y-basis coefficient set on the sphere quadrature.
std::vector<double> evaluate_normal_on_quadrature(const SphericalHarmonicCoeffs& c,
                                                  const SphereQuadrature& q);

}  // namespace meissner
