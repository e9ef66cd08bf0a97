#pragma once

#include <array>
#include <cmath>
#include <limits>

#include "meissner/errors.hpp"

namespace meissner {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm2(const Vec3& a) { return dot(a, a); }

// Domain endpoints of the cubic law t = (1 - v^2) v.
inline constexpr double kInvSqrt3 = 0.57735026918962576451;   // 1/sqrt(3), max |A|
inline constexpr double kCurlCap = 0.38490017945975050967;    // sqrt(4/27), max t
inline constexpr double kEndpointSlack = 1e-12;

struct GLParameters {
    double lambda = 0.1;
    double kappa = std::numeric_limits<double>::infinity();  // INFINITY selects the limit system
    double mu = 1.0;

    bool kappa_finite() const { return std::isfinite(kappa); }
    void validate() const;
    // Theorem 3.6 / Proposition 4.7 estimates are stated for kappa >= max{1, lambda}.
    bool in_estimate_regime() const { return kappa_finite() && kappa >= std::max(1.0, lambda); }
};

struct ConstitutivePoint {
    double t = 0.0;        // scaled curl magnitude, in [0, sqrt(4/27)]
    double v = 0.0;        // field magnitude, in [0, 1/sqrt(3)]
    double f_value = 1.0;  // F(t^2) = v/t, F(0) = 1
};

// Unique v in [0, 1/sqrt(3)] with (1 - v^2) v = t.  Safeguarded Newton with a
// bisection fallback; residual below 1e-14.  Values within 1e-12 of the
// endpoint are clamped, anything farther out signals a (1.10) violation.
double invert_cubic(double t);

// F(s) with s = t^2 in [0, 4/27]; F(0) = 1, F(4/27) = 3/2, nondecreasing.
double F_of(double s);

ConstitutivePoint constitutive_point(double t);

// d v / d t = 1 / (1 - 3 v^2); the longitudinal stiffness of the cubic law.
// Diverges at the endpoint, so callers cap it.
double cubic_slope(double v);

struct GDensity {
    double G = 0.0;
    double Gf = 0.0;
    Vec3 GA{0.0, 0.0, 0.0};
};

// G(f,A) = |fA|^2 + (1 - f^2)^2 / 2 with its first variation.
GDensity g_density_and_grad(double f, const Vec3& A);

// <G''(f,A),(g,B)> = 2|fB + 2gA|^2 + 6 g^2 (f^2 - |A|^2 - 1/3).
double second_variation_form(double f, const Vec3& A, double g, const Vec3& B);

struct ConvexityMargin {
    double margin = 0.0;  // min over samples of f^2 - |A|^2 - 1/3
    double delta = 0.0;

    bool in_K() const { return margin > 0.0; }
    bool in_K_bar() const { return margin >= 0.0; }
    bool in_K_delta() const { return margin > delta; }
};

inline double pointwise_margin(double f, double A_sq) { return f * f - A_sq - 1.0 / 3.0; }

}  // namespace meissner
