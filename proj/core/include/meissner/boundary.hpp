#pragma once

#include "meissner/fields.hpp"

namespace meissner {

// Tangential boundary trace for the H-systems on a box with a single WALL
// axis: per side (lo/hi) and tangential component, the values imposed on the
// boundary-tangential edges.  Construction checks the discrete form of the
// compatibility condition nu . curl(B_T) = 0.
class BoundaryData {
  public:
    BoundaryData() = default;

    static BoundaryData slab_uniform(const StaggeredGrid& grid, double value_lo, double value_hi,
                                     int tangential_axis = 1);

    // B_T = surface gradient of node potentials psi(i,j) on each wall plane;
    // satisfies the compatibility condition exactly.
    static BoundaryData from_surface_potential(const StaggeredGrid& grid,
                                               const std::vector<double>& psi_lo,
                                               const std::vector<double>& psi_hi);

    const StaggeredGrid& grid() const { return grid_; }
    int wall_axis() const { return wall_axis_; }

    bool is_zero() const;
    double sup_norm() const;
    double l1_norm() const;  // surface integral of the componentwise magnitude

    BoundaryData scaled(double factor) const;

    // Overwrite the boundary-tangential edges of an EDGE field.
    void impose(VectorField& H) const;
    // Zero the boundary-tangential edges (homogeneous version of impose).
    void impose_zero(VectorField& H) const;

    // Max |discrete nu . curl B_T| over both wall planes.
    double nu_curl_sup() const;

    // Value array for one side and tangential axis, flattened with the edge
    // layer's natural (transverse-major) ordering.
    const std::vector<double>& layer(int side, int taxis) const;
    std::vector<double>& layer(int side, int taxis);

    std::array<int, 2> tangential_axes() const;

  private:
    void allocate();

    StaggeredGrid grid_{};
    int wall_axis_ = -1;
    // layers_[side][taxis] with side 0 = lo wall, 1 = hi wall; taxis indexes
    // the two tangential axes in increasing order.
    std::array<std::array<std::vector<double>, 2>, 2> layers_{};
};

}  // namespace meissner
