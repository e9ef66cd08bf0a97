#include "meissner/exterior.hpp"

#include <cmath>

namespace meissner {

namespace {

Vec3 unit_vectors(double theta, double phi, Vec3& that, Vec3& phat) {
    double st = std::sin(theta), ct = std::cos(theta);
    double sp = std::sin(phi), cp = std::cos(phi);
    that = {ct * cp, ct * sp, -st};
    phat = {-sp, cp, 0.0};
    return {st * cp, st * sp, ct};
}

}  // namespace

bool SphericalHarmonicCoeffs::has_cross(double tol) const {
    for (double v : cross)
        if (std::abs(v) > tol) return true;
    return false;
}

bool SphericalHarmonicCoeffs::has_grad(double tol) const {
    for (double v : grad_s)
        if (std::abs(v) > tol) return true;
    return false;
}

double ExteriorScalarSolution::evaluate(double r, double theta, double phi) const {
    double sum = 0.0;
    for (int l = 0; l <= coeffs.l_max; ++l) {
        double radial = std::pow(r, -(l + 1.0));
        for (int m = -l; m <= l; ++m) {
            double c = coeffs.at(SphBasis::Y, l, m);
            if (c == 0.0) continue;
            sum += c * radial * sph_harmonic(l, m, theta, phi).Y;
        }
    }
    return sum;
}

Vec3 ExteriorScalarSolution::gradient(double r, double theta, double phi) const {
    Vec3 that, phat;
    Vec3 rhat = unit_vectors(theta, phi, that, phat);
    Vec3 out{0, 0, 0};
    for (int l = 0; l <= coeffs.l_max; ++l) {
        double radial = std::pow(r, -(l + 2.0));
        for (int m = -l; m <= l; ++m) {
            double c = coeffs.at(SphBasis::Y, l, m);
            if (c == 0.0) continue;
            auto s = sph_harmonic(l, m, theta, phi);
            double fr = -(l + 1.0) * c * radial * s.Y;
            double ft = c * radial * s.dY_dtheta;
            double fp = c * radial * s.dY_dphi_over_sin;
            for (int d = 0; d < 3; ++d)
                out[d] += fr * rhat[d] + ft * that[d] + fp * phat[d];
        }
    }
    return out;
}

double ExteriorScalarSolution::flux_through(double r) const {
    SphereQuadrature q(std::max(coeffs.l_max, 2));
    double total = 0.0;
    for (int it = 0; it < q.n_theta(); ++it)
        for (int ip = 0; ip < q.n_phi(); ++ip) {
            Vec3 that, phat;
            Vec3 rhat = unit_vectors(q.theta[it], q.phi[ip], that, phat);
            Vec3 gr = gradient(r, q.theta[it], q.phi[ip]);
            total += q.weight(it, ip) * r * r * dot(gr, rhat);
        }
    return total;
}

double ExteriorScalarSolution::shell_l2(double r) const {
    SphereQuadrature q(std::max(coeffs.l_max, 2));
    double total = 0.0;
    for (int it = 0; it < q.n_theta(); ++it)
        for (int ip = 0; ip < q.n_phi(); ++ip) {
            double v = evaluate(r, q.theta[it], q.phi[ip]);
            total += q.weight(it, ip) * v * v;
        }
    return std::sqrt(total);
}

Vec3 ExteriorVectorSolution::evaluate(double r, double theta, double phi) const {
    Vec3 that, phat;
    Vec3 rhat = unit_vectors(theta, phi, that, phat);
    Vec3 out{0, 0, 0};
    for (int l = 0; l <= gradient_part.l_max; ++l) {
        double radial = std::pow(r, -(l + 2.0));
        for (int m = -l; m <= l; ++m) {
            double c = gradient_part.at(SphBasis::Y, l, m);
            if (c == 0.0) continue;
            auto s = sph_harmonic(l, m, theta, phi);
            double fr = -(l + 1.0) * c * radial * s.Y;
            double ft = c * radial * s.dY_dtheta;
            double fp = c * radial * s.dY_dphi_over_sin;
            for (int d = 0; d < 3; ++d)
                out[d] += fr * rhat[d] + ft * that[d] + fp * phat[d];
        }
    }
    for (int l = 1; l <= toroidal_part.l_max; ++l) {
        double radial = std::pow(r, -(l + 1.0));
        for (int m = -l; m <= l; ++m) {
            double tau = toroidal_part.at(SphBasis::Y, l, m);
            if (tau == 0.0) continue;
            auto s = sph_harmonic(l, m, theta, phi);
            // r-hat x grad_S Y = -(1/sin) dY/dph th-hat + dY/dth ph-hat
            double ft = -tau * radial * s.dY_dphi_over_sin;
            double fp = tau * radial * s.dY_dtheta;
            for (int d = 0; d < 3; ++d) out[d] += ft * that[d] + fp * phat[d];
        }
    }
    return out;
}

ExteriorScalarSolution solve_exterior_scalar(const SphericalHarmonicCoeffs& v, double flux_mu,
                                             double R) {
    require(!v.has_cross(), ErrorKind::NonGradientData,
            "tangential datum of a gradient field carries no toroidal content");
    require(R > 0.0, ErrorKind::InvalidSpec, "radius must be positive");
    ExteriorScalarSolution out;
    out.coeffs = SphericalHarmonicCoeffs(v.l_max, R);
    out.flux = flux_mu;
    // (grad phi)_T at r = R is c R^{-(l+2)} grad_S Y, so c = v R^{l+2}
    for (int l = 1; l <= v.l_max; ++l)
        for (int m = -l; m <= l; ++m)
            out.coeffs.at(SphBasis::Y, l, m) =
                v.at(SphBasis::GradS, l, m) * std::pow(R, l + 2.0);
    // flux lives in the monopole: phi_00 = c0 / r Y_00, flux = -c0 sqrt(4 pi)
    out.coeffs.at(SphBasis::Y, 0, 0) = -flux_mu / std::sqrt(4.0 * M_PI);
    return out;
}

SphericalHarmonicCoeffs sigma_dtn(const SphericalHarmonicCoeffs& v) {
    require(!v.has_cross(), ErrorKind::NonGradientData,
            "Sigma acts on gradient-type tangential data");
    SphericalHarmonicCoeffs out(v.l_max, v.sphere_radius);
    for (int l = 1; l <= v.l_max; ++l)
        for (int m = -l; m <= l; ++m)
            out.at(SphBasis::Y, l, m) = -(l + 1.0) * v.at(SphBasis::GradS, l, m);
    return out;
}

ExteriorVectorSolution solve_exterior_gradient_normal(const SphericalHarmonicCoeffs& g,
                                                      double R) {
    require(std::abs(g.at(SphBasis::Y, 0, 0)) <= 1e-12, ErrorKind::NonzeroMean,
            "decaying gradient fields carry no net flux");
    ExteriorVectorSolution out;
    out.gradient_part = SphericalHarmonicCoeffs(g.l_max, R);
    out.toroidal_part = SphericalHarmonicCoeffs(g.l_max, R);
    // d_r psi = -(l+1) c R^{-(l+2)} = g  =>  c = -g R^{l+2} / (l+1)
    for (int l = 1; l <= g.l_max; ++l)
        for (int m = -l; m <= l; ++m)
            out.gradient_part.at(SphBasis::Y, l, m) =
                -g.at(SphBasis::Y, l, m) * std::pow(R, l + 2.0) / (l + 1.0);
    return out;
}

ExteriorVectorSolution solve_exterior_curl_source(const ExteriorScalarSolution& phi0,
                                                  const SphericalHarmonicCoeffs& v_data, double R,
                                                  double compat_tol) {
    require(std::abs(phi0.flux) <= 1e-12, ErrorKind::NonzeroFlux,
            "curl u = grad phi is solvable only at zero flux");
    int l_max = std::max(phi0.coeffs.l_max, v_data.l_max);
    ExteriorVectorSolution out;
    out.gradient_part = SphericalHarmonicCoeffs(l_max, R);
    out.toroidal_part = SphericalHarmonicCoeffs(l_max, R);
    for (int l = 1; l <= l_max; ++l)
        for (int m = -l; m <= l; ++m) {
            double c = l <= phi0.coeffs.l_max ? phi0.coeffs.at(SphBasis::Y, l, m) : 0.0;
            // curl[(c/l) r^{-(l+1)} rhat x grad_S Y] = grad(c r^{-(l+1)} Y):
            // the radial part is l(l+1)(tau/r^{l+2}) Y with tau = c/l, the
            // angular part (d_r + 1/r applied to the profile) matches grad_S.
            double tau = c / l;
            out.toroidal_part.at(SphBasis::Y, l, m) = tau;
            // the toroidal trace at R is fixed; the CROSS data must agree
            double trace = tau * std::pow(R, -(l + 1.0));
            double want = l <= v_data.l_max ? v_data.at(SphBasis::Cross, l, m) : 0.0;
            if (std::abs(trace - want) > compat_tol)
                fail(ErrorKind::Incompatible,
                     "tangential datum conflicts with the curl source at mode (" +
                         std::to_string(l) + "," + std::to_string(m) + ")");
            // the gradient part matches the GRAD_S data freely
            double vg = l <= v_data.l_max ? v_data.at(SphBasis::GradS, l, m) : 0.0;
            out.gradient_part.at(SphBasis::Y, l, m) = vg * std::pow(R, l + 2.0);
        }
    return out;
}

double comparability_residual(const std::vector<double>& interior_normal,
                              const std::vector<double>& exterior_normal,
                              const std::vector<double>& weights) {
    require(interior_normal.size() == exterior_normal.size() &&
                interior_normal.size() == weights.size(),
            ErrorKind::SamplingMismatch, "trace sample counts differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        double d = interior_normal[i] - exterior_normal[i];
        sum += weights[i] * d * d;
    }
    return std::sqrt(sum);
}

std::vector<double> evaluate_normal_on_quadrature(const SphericalHarmonicCoeffs& c,
                                                  const SphereQuadrature& q) {
    std::vector<double> out(q.n_points(), 0.0);
    for (int it = 0; it < q.n_theta(); ++it)
        for (int ip = 0; ip < q.n_phi(); ++ip) {
            double v = 0.0;
            for (int l = 0; l <= c.l_max; ++l)
                for (int m = -l; m <= l; ++m) {
                    double cv = c.at(SphBasis::Y, l, m);
                    if (cv == 0.0) continue;
                    v += cv * sph_harmonic(l, m, q.theta[it], q.phi[ip]).Y;
                }
            out[static_cast<std::size_t>(it) * q.n_phi() + ip] = v;
        }
    return out;
}

}  // namespace meissner
