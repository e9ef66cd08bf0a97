#include "meissner/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace meissner {

namespace {

// Shape of the boundary layer of tangential edges for component `t` on the
// wall plane: the edge-t shape with the wall axis collapsed.
std::array<int, 2> layer_shape(const StaggeredGrid& g, int wall, int t) {
    auto s = g.shape(Placement::Edge, t);
    std::array<int, 2> out{};
    int m = 0;
    for (int a = 0; a < 3; ++a)
        if (a != wall) out[m++] = s[a];
    return out;
}

std::size_t layer_index(const std::array<int, 2>& ls, int u, int v) {
    return static_cast<std::size_t>(u) * ls[1] + v;
}

}  // namespace

std::array<int, 2> BoundaryData::tangential_axes() const {
    std::array<int, 2> t{};
    int m = 0;
    for (int a = 0; a < 3; ++a)
        if (a != wall_axis_) t[m++] = a;
    return t;
}

void BoundaryData::allocate() {
    auto t = tangential_axes();
    for (int side = 0; side < 2; ++side)
        for (int m = 0; m < 2; ++m) {
            auto ls = layer_shape(grid_, wall_axis_, t[m]);
            layers_[side][m].assign(static_cast<std::size_t>(ls[0]) * ls[1], 0.0);
        }
}

BoundaryData BoundaryData::slab_uniform(const StaggeredGrid& grid, double value_lo,
                                        double value_hi, int tangential_axis) {
    BoundaryData out;
    out.grid_ = grid;
    out.wall_axis_ = grid.single_wall_axis();
    require(out.wall_axis_ >= 0, ErrorKind::InvalidSpec,
            "boundary data needs exactly one wall axis");
    require(tangential_axis != out.wall_axis_, ErrorKind::InvalidSpec,
            "tangential axis must differ from the wall axis");
    out.allocate();
    auto t = out.tangential_axes();
    int m = t[0] == tangential_axis ? 0 : 1;
    std::fill(out.layers_[0][m].begin(), out.layers_[0][m].end(), value_lo);
    std::fill(out.layers_[1][m].begin(), out.layers_[1][m].end(), value_hi);
    require(out.nu_curl_sup() <= 1e-12, ErrorKind::InvalidSpec,
            "tangential datum violates the surface-curl compatibility condition");
    return out;
}

BoundaryData BoundaryData::from_surface_potential(const StaggeredGrid& grid,
                                                  const std::vector<double>& psi_lo,
                                                  const std::vector<double>& psi_hi) {
    BoundaryData out;
    out.grid_ = grid;
    out.wall_axis_ = grid.single_wall_axis();
    require(out.wall_axis_ >= 0, ErrorKind::InvalidSpec,
            "boundary data needs exactly one wall axis");
    out.allocate();
    auto t = out.tangential_axes();
    // node layer on the wall plane
    auto ns = grid.shape(Placement::Node);
    std::array<int, 2> nls{};
    int m = 0;
    for (int a = 0; a < 3; ++a)
        if (a != out.wall_axis_) nls[m++] = ns[a];
    std::size_t n_nodes = static_cast<std::size_t>(nls[0]) * nls[1];
    require(psi_lo.size() == n_nodes && psi_hi.size() == n_nodes, ErrorKind::InvalidSpec,
            "surface potential size mismatch");
    for (int side = 0; side < 2; ++side) {
        const auto& psi = side == 0 ? psi_lo : psi_hi;
        for (int mm = 0; mm < 2; ++mm) {
            int axis = t[mm];
            int u_axis = t[0], v_axis = t[1];
            auto ls = layer_shape(grid, out.wall_axis_, axis);
            double inv_h = 1.0 / grid.spacing(axis);
            for (int u = 0; u < ls[0]; ++u)
                for (int v = 0; v < ls[1]; ++v) {
                    // edge along `axis` from node (u,v) to the next node
                    int cu = u, cv = v;
                    int du = 0, dv = 0;
                    if (axis == u_axis) du = 1; else dv = 1;
                    int nu = cu + du, nv = cv + dv;
                    int n_u = nls[0], n_v = nls[1];
                    if (grid.periodic(u_axis)) nu %= n_u;
                    if (grid.periodic(v_axis)) nv %= n_v;
                    double lo = psi[layer_index(nls, cu, cv)];
                    double hi = psi[layer_index(nls, nu, nv)];
                    out.layers_[side][mm][layer_index(ls, u, v)] = (hi - lo) * inv_h;
                }
        }
    }
    require(out.nu_curl_sup() <= 1e-12, ErrorKind::InvalidSpec,
            "tangential datum violates the surface-curl compatibility condition");
    return out;
}

bool BoundaryData::is_zero() const {
    for (auto& side : layers_)
        for (auto& l : side)
            for (double v : l)
                if (v != 0.0) return false;
    return true;
}

double BoundaryData::sup_norm() const {
    double m = 0.0;
    for (auto& side : layers_)
        for (auto& l : side)
            for (double v : l) m = std::max(m, std::abs(v));
    return m;
}

double BoundaryData::l1_norm() const {
    auto t = tangential_axes();
    double dS = grid_.spacing(t[0]) * grid_.spacing(t[1]);
    double sum = 0.0;
    for (auto& side : layers_)
        for (auto& l : side)
            for (double v : l) sum += std::abs(v) * dS;
    return sum;
}

BoundaryData BoundaryData::scaled(double factor) const {
    BoundaryData out = *this;
    for (auto& side : out.layers_)
        for (auto& l : side)
            for (double& v : l) v *= factor;
    return out;
}

const std::vector<double>& BoundaryData::layer(int side, int taxis) const {
    return layers_[side][taxis];
}
std::vector<double>& BoundaryData::layer(int side, int taxis) { return layers_[side][taxis]; }

void BoundaryData::impose(VectorField& H) const {
    check_same_grid(H.grid(), grid_, "BoundaryData::impose");
    require(H.placement() == Placement::Edge, ErrorKind::PlacementMismatch,
            "boundary data imposes on EDGE fields");
    int w = wall_axis_;
    auto t = tangential_axes();
    for (int m = 0; m < 2; ++m) {
        int axis = t[m];
        auto es = H.shape(axis);
        auto ls = layer_shape(grid_, w, axis);
        for (int side = 0; side < 2; ++side) {
            int wall_index = side == 0 ? 0 : es[w] - 1;
            for (int u = 0; u < ls[0]; ++u)
                for (int v = 0; v < ls[1]; ++v) {
                    std::array<int, 3> c{};
                    int mm = 0;
                    for (int a = 0; a < 3; ++a) {
                        if (a == w)
                            c[a] = wall_index;
                        else
                            c[a] = (mm++ == 0) ? u : v;
                    }
                    H.at(axis, c[0], c[1], c[2]) = layers_[side][m][layer_index(ls, u, v)];
                }
        }
    }
}

void BoundaryData::impose_zero(VectorField& H) const {
    BoundaryData zero = scaled(0.0);
    zero.impose(H);
}

double BoundaryData::nu_curl_sup() const {
    // discrete curl of the tangential layer evaluated on the wall-normal
    // faces of the boundary plane
    auto t = tangential_axes();
    int u_axis = t[0], v_axis = t[1];
    double hu = grid_.spacing(u_axis), hv = grid_.spacing(v_axis);
    auto ls_u = layer_shape(grid_, wall_axis_, u_axis);  // edges along u
    auto ls_v = layer_shape(grid_, wall_axis_, v_axis);  // edges along v
    double m = 0.0;
    for (int side = 0; side < 2; ++side) {
        const auto& Eu = layers_[side][0];
        const auto& Ev = layers_[side][1];
        // faces of the wall plane are indexed by (cell_u, cell_v)
        int ncu = grid_.cells(u_axis), ncv = grid_.cells(v_axis);
        for (int cu = 0; cu < ncu; ++cu)
            for (int cv = 0; cv < ncv; ++cv) {
                int cu1 = cu + 1, cv1 = cv + 1;
                if (grid_.periodic(u_axis)) cu1 %= ls_v[0];
                if (grid_.periodic(v_axis)) cv1 %= ls_u[1];
                // d_u E_v - d_v E_u
                double duEv = (Ev[layer_index(ls_v, cu1, cv)] - Ev[layer_index(ls_v, cu, cv)]) / hu;
                double dvEu = (Eu[layer_index(ls_u, cu, cv1)] - Eu[layer_index(ls_u, cu, cv)]) / hv;
                m = std::max(m, std::abs(duEv - dvEu));
            }
    }
    return m;
}

}  // namespace meissner
