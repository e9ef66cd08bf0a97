#pragma once

#include <vector>

#include "meissner/grid.hpp"

namespace meissner {

class ScalarField {
  public:
    ScalarField() = default;
    ScalarField(const StaggeredGrid& grid, Placement placement, double fill = 0.0);

    const StaggeredGrid& grid() const { return grid_; }
    Placement placement() const { return placement_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double& at(int i, int j, int k) { return values_[grid_.index(shape_, i, j, k)]; }
    double at(int i, int j, int k) const { return values_[grid_.index(shape_, i, j, k)]; }
    const std::array<int, 3>& shape() const { return shape_; }

    std::size_t size() const { return values_.size(); }

  private:
    StaggeredGrid grid_{};
    Placement placement_ = Placement::Node;
    std::array<int, 3> shape_{1, 1, 1};
    std::vector<double> values_;
};

class VectorField {
  public:
    VectorField() = default;
    VectorField(const StaggeredGrid& grid, Placement placement, double fill = 0.0);

    const StaggeredGrid& grid() const { return grid_; }
    Placement placement() const { return placement_; }

    const std::vector<double>& comp(int d) const { return comps_[d]; }
    std::vector<double>& comp(int d) { return comps_[d]; }

    double& at(int d, int i, int j, int k) { return comps_[d][grid_.index(shapes_[d], i, j, k)]; }
    double at(int d, int i, int j, int k) const {
        return comps_[d][grid_.index(shapes_[d], i, j, k)];
    }
    const std::array<int, 3>& shape(int d) const { return shapes_[d]; }

    int n_comps() const { return n_comps_; }
    std::size_t size() const;

  private:
    StaggeredGrid grid_{};
    Placement placement_ = Placement::Face;
    int n_comps_ = 0;
    std::array<std::array<int, 3>, 3> shapes_{};
    std::array<std::vector<double>, 3> comps_;
};

void check_same_grid(const StaggeredGrid& a, const StaggeredGrid& b, const char* what);

}  // namespace meissner
