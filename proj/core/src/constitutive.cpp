#include "meissner/constitutive.hpp"

#include <algorithm>

namespace meissner {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::OutOfDomain: return "OutOfDomain";
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::PlacementMismatch: return "PlacementMismatch";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::SolverFailure: return "SolverFailure";
        case ErrorKind::NonPositiveCoefficient: return "NonPositiveCoefficient";
        case ErrorKind::NotConverged: return "NotConverged";
        case ErrorKind::OutOfK: return "OutOfK";
        case ErrorKind::NeverEntersK: return "NeverEntersK";
        case ErrorKind::UnboundedThreshold: return "UnboundedThreshold";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::ZeroDatum: return "ZeroDatum";
        case ErrorKind::NonGradientData: return "NonGradientData";
        case ErrorKind::NonzeroMean: return "NonzeroMean";
        case ErrorKind::NonzeroFlux: return "NonzeroFlux";
        case ErrorKind::Incompatible: return "Incompatible";
        case ErrorKind::SamplingMismatch: return "SamplingMismatch";
        case ErrorKind::AboveThreshold: return "AboveThreshold";
        case ErrorKind::MissingColumn: return "MissingColumn";
        case ErrorKind::NonPositiveLogData: return "NonPositiveLogData";
        case ErrorKind::ConfigInvalid: return "ConfigInvalid";
        case ErrorKind::IoFailure: return "IoFailure";
    }
    return "Error";
}

void GLParameters::validate() const {
    require(lambda > 0.0, ErrorKind::InvalidSpec, "lambda must be positive");
    require(kappa > 0.0, ErrorKind::InvalidSpec, "kappa must be positive or infinite");
    require(mu >= 0.0, ErrorKind::InvalidSpec, "mu must be nonnegative");
}

double invert_cubic(double t) {
    if (t < 0.0 || t > kCurlCap + kEndpointSlack)
        fail(ErrorKind::OutOfDomain, "cubic inversion requested at t = " + std::to_string(t));
    t = std::clamp(t, 0.0, kCurlCap);
    if (t == 0.0) return 0.0;
    if (t == kCurlCap) return kInvSqrt3;

    double lo = 0.0, hi = kInvSqrt3;
    double v = t;  // v = t + O(t^3) near zero
    for (int it = 0; it < 100; ++it) {
        double r = (1.0 - v * v) * v - t;
        if (std::abs(r) <= 1e-14) break;
        if (r > 0.0) hi = v; else lo = v;
        double dr = 1.0 - 3.0 * v * v;
        double step = (dr > 1e-300) ? r / dr : 0.0;
        double vn = v - step;
        if (!(vn > lo && vn < hi)) vn = 0.5 * (lo + hi);  // bisection fallback
        v = vn;
    }
    return std::clamp(v, 0.0, kInvSqrt3);
}

double F_of(double s) {
    if (s < 0.0 || s > kCurlCap * kCurlCap + kEndpointSlack)
        fail(ErrorKind::OutOfDomain, "F requested at s = " + std::to_string(s));
    double t = std::sqrt(std::max(s, 0.0));
    if (t < 1e-14) {
        // F(t^2) = 1 + t^2 + 3 t^4 + O(t^6), keeps F exact and smooth at zero
        return 1.0 + s;
    }
    return invert_cubic(t) / t;
}

ConstitutivePoint constitutive_point(double t) {
    ConstitutivePoint p;
    p.t = std::clamp(t, 0.0, kCurlCap);
    p.v = invert_cubic(t);
    p.f_value = (p.t > 1e-14) ? p.v / p.t : 1.0 + p.t * p.t;
    return p;
}

double cubic_slope(double v) {
    double d = 1.0 - 3.0 * v * v;
    if (d < 1e-300) return std::numeric_limits<double>::infinity();
    return 1.0 / d;
}

GDensity g_density_and_grad(double f, const Vec3& A) {
    GDensity out;
    double a2 = norm2(A);
    double one_minus_f2 = 1.0 - f * f;
    out.G = f * f * a2 + 0.5 * one_minus_f2 * one_minus_f2;
    out.Gf = 2.0 * (f * f + a2 - 1.0) * f;
    out.GA = {2.0 * f * f * A[0], 2.0 * f * f * A[1], 2.0 * f * f * A[2]};
    return out;
}

double second_variation_form(double f, const Vec3& A, double g, const Vec3& B) {
    Vec3 w{f * B[0] + 2.0 * g * A[0], f * B[1] + 2.0 * g * A[1], f * B[2] + 2.0 * g * A[2]};
    return 2.0 * norm2(w) + 6.0 * g * g * (f * f - norm2(A) - 1.0 / 3.0);
}

}  // namespace meissner
