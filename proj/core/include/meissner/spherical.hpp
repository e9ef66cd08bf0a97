#pragma once

#include <vector>

#include "meissner/constitutive.hpp"

namespace meissner {

// Real spherical harmonics on the unit sphere: Y_{l,0} = N P_l(cos th),
// Y_{l,m>0} = sqrt(2) N P_l^m cos(m ph), Y_{l,m<0} = sqrt(2) N P_l^|m| sin(|m| ph),
// orthonormal with respect to the surface measure.
struct SphSample {
    double Y = 0.0;
    double dY_dtheta = 0.0;
    double dY_dphi_over_sin = 0.0;  // (1/sin th) dY/dph
};

SphSample sph_harmonic(int l, int m, double theta, double phi);

inline int sph_index(int l, int m) { return l * (l + 1) + m; }
inline int sph_count(int l_max) { return (l_max + 1) * (l_max + 1); }

struct GaussLegendre {
    std::vector<double> nodes;    // in (-1, 1)
    std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n);

// Product quadrature exact for the retained band: Gauss-Legendre in cos(th)
// times uniform longitudes.
struct SphereQuadrature {
    int l_max = 0;
    std::vector<double> theta, phi;  // n_theta and n_phi samples
    std::vector<double> w_theta;     // Gauss weights (sum 2)
    double w_phi = 0.0;              // 2 pi / n_phi

    explicit SphereQuadrature(int l_max);
    int n_theta() const { return static_cast<int>(theta.size()); }
    int n_phi() const { return static_cast<int>(phi.size()); }
    std::size_t n_points() const { return theta.size() * phi.size(); }
    double weight(int it, int ip) const {
        (void)ip;
        return w_theta[it] * w_phi;
    }
};

// Forward scalar transform: coefficients of a pointwise sampled function.
std::vector<double> sph_analyze_scalar(const SphereQuadrature& q,
                                       const std::vector<double>& values, int l_max);

// Forward tangential transform onto the grad_S and r-hat x grad_S bases
// (each mode carries norm l(l+1) on the sphere).
void sph_analyze_tangential(const SphereQuadrature& q, const std::vector<double>& v_theta,
                            const std::vector<double>& v_phi, int l_max,
                            std::vector<double>& grad_coeffs, std::vector<double>& cross_coeffs);

}  // namespace meissner
