#include "meissner/spherical.hpp"

#include <cmath>

namespace meissner {

namespace {

// Associated Legendre P_l^m(x) without the Condon-Shortley phase.
double legendre_p(int l, int m, double x) {
    // P_m^m = (2m-1)!! (1-x^2)^{m/2}
    double somx2 = std::sqrt(std::max(0.0, 1.0 - x * x));
    double pmm = 1.0;
    for (int i = 1; i <= m; ++i) pmm *= (2.0 * i - 1.0) * somx2;
    if (l == m) return pmm;
    double pmmp1 = x * (2.0 * m + 1.0) * pmm;
    if (l == m + 1) return pmmp1;
    double plm = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        plm = (x * (2.0 * ll - 1.0) * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
        pmm = pmmp1;
        pmmp1 = plm;
    }
    return plm;
}

void legendre_pair(int l, int m, double x, double& P, double& dP_dtheta_factor) {
    P = legendre_p(l, m, x);
    double plm1 = (l > m) ? legendre_p(l - 1, m, x) : 0.0;
    // (1-x^2) dP/dx = (l+m) P_{l-1}^m - l x P_l^m
    dP_dtheta_factor = (l + m) * plm1 - l * x * P;  // equals sin^2(th) dP/dx
}

double norm_lm(int l, int m) {
    double v = (2.0 * l + 1.0) / (4.0 * M_PI);
    for (int i = l - m + 1; i <= l + m; ++i) v /= i;
    return std::sqrt(v);
}

}  // namespace

SphSample sph_harmonic(int l, int m, double theta, double phi) {
    require(l >= 0 && std::abs(m) <= l, ErrorKind::InvalidSpec, "invalid (l, m)");
    int ma = std::abs(m);
    double x = std::cos(theta);
    double s = std::sin(theta);
    double P, dfac;
    legendre_pair(l, ma, x, P, dfac);
    double N = norm_lm(l, ma) * (m == 0 ? 1.0 : std::sqrt(2.0));
    double ang, dang;  // azimuthal factor and its phi-derivative
    if (m > 0) {
        ang = std::cos(ma * phi);
        dang = -ma * std::sin(ma * phi);
    } else if (m < 0) {
        ang = std::sin(ma * phi);
        dang = ma * std::cos(ma * phi);
    } else {
        ang = 1.0;
        dang = 0.0;
    }
    SphSample out;
    out.Y = N * P * ang;
    // dP/dtheta = -sin th dP/dx = -dfac / sin th
    double dP_dtheta = (s > 1e-14) ? -dfac / s : 0.0;
    out.dY_dtheta = N * dP_dtheta * ang;
    // (1/sin th) dY/dphi: P_l^m carries sin^m th, finite for m >= 1
    if (ma >= 1 && s > 1e-14)
        out.dY_dphi_over_sin = N * (P / s) * dang;
    else
        out.dY_dphi_over_sin = 0.0;
    return out;
}

GaussLegendre gauss_legendre(int n) {
    GaussLegendre out;
    out.nodes.resize(n);
    out.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton from the Chebyshev estimate
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int l = 2; l <= n; ++l) {
                double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int l = 2; l <= n; ++l) {
            double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        out.nodes[i] = x;
        out.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return out;
}

SphereQuadrature::SphereQuadrature(int l_max_in) : l_max(l_max_in) {
    int nt = l_max + 2;       // Gauss exactness up to degree 2 nt - 1 >= 2 l_max
    int np = 2 * l_max + 2;   // uniform longitudes, exact through order 2 l_max
    auto gl = gauss_legendre(nt);
    theta.resize(nt);
    w_theta.resize(nt);
    for (int i = 0; i < nt; ++i) {
        theta[i] = std::acos(gl.nodes[i]);
        w_theta[i] = gl.weights[i];
    }
    phi.resize(np);
    for (int j = 0; j < np; ++j) phi[j] = 2.0 * M_PI * j / np;
    w_phi = 2.0 * M_PI / np;
}

std::vector<double> sph_analyze_scalar(const SphereQuadrature& q,
                                       const std::vector<double>& values, int l_max) {
    require(values.size() == q.n_points(), ErrorKind::SamplingMismatch,
            "sample count does not match quadrature");
    std::vector<double> coeffs(sph_count(l_max), 0.0);
    for (int it = 0; it < q.n_theta(); ++it)
        for (int ip = 0; ip < q.n_phi(); ++ip) {
            double v = values[static_cast<std::size_t>(it) * q.n_phi() + ip];
            double w = q.weight(it, ip);
            for (int l = 0; l <= l_max; ++l)
                for (int m = -l; m <= l; ++m)
                    coeffs[sph_index(l, m)] += w * v * sph_harmonic(l, m, q.theta[it], q.phi[ip]).Y;
        }
    return coeffs;
}

void sph_analyze_tangential(const SphereQuadrature& q, const std::vector<double>& v_theta,
                            const std::vector<double>& v_phi, int l_max,
                            std::vector<double>& grad_coeffs, std::vector<double>& cross_coeffs) {
    require(v_theta.size() == q.n_points() && v_phi.size() == q.n_points(),
            ErrorKind::SamplingMismatch, "sample count does not match quadrature");
    grad_coeffs.assign(sph_count(l_max), 0.0);
    cross_coeffs.assign(sph_count(l_max), 0.0);
    for (int it = 0; it < q.n_theta(); ++it)
        for (int ip = 0; ip < q.n_phi(); ++ip) {
            std::size_t idx = static_cast<std::size_t>(it) * q.n_phi() + ip;
            double w = q.weight(it, ip);
            for (int l = 1; l <= l_max; ++l) {
                double inv_norm = 1.0 / (l * (l + 1.0));
                for (int m = -l; m <= l; ++m) {
                    auto s = sph_harmonic(l, m, q.theta[it], q.phi[ip]);
                    // grad_S Y = dY/dth th-hat + (1/sin) dY/dph ph-hat
                    // r-hat x grad_S Y = -(1/sin) dY/dph th-hat + dY/dth ph-hat
                    double g_dot = v_theta[idx] * s.dY_dtheta + v_phi[idx] * s.dY_dphi_over_sin;
                    double c_dot = -v_theta[idx] * s.dY_dphi_over_sin + v_phi[idx] * s.dY_dtheta;
                    grad_coeffs[sph_index(l, m)] += w * g_dot * inv_norm;
                    cross_coeffs[sph_index(l, m)] += w * c_dot * inv_norm;
                }
            }
        }
}

}  // namespace meissner
