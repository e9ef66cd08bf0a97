#include "meissner/fields.hpp"

namespace meissner {

ScalarField::ScalarField(const StaggeredGrid& grid, Placement placement, double fill)
    : grid_(grid), placement_(placement) {
    require(placement == Placement::Node || placement == Placement::Cell,
            ErrorKind::PlacementMismatch, "scalar fields live at NODE or CELL");
    shape_ = grid.shape(placement);
    values_.assign(grid.count(placement), fill);
}

VectorField::VectorField(const StaggeredGrid& grid, Placement placement, double fill)
    : grid_(grid), placement_(placement) {
    require(placement == Placement::Edge || placement == Placement::Face,
            ErrorKind::PlacementMismatch, "vector fields live at EDGE or FACE");
    n_comps_ = grid.dims() == 1 ? 1 : 3;
    for (int d = 0; d < n_comps_; ++d) {
        shapes_[d] = grid.shape(placement, d);
        comps_[d].assign(grid.count(placement, d), fill);
    }
}

std::size_t VectorField::size() const {
    std::size_t n = 0;
    for (int d = 0; d < n_comps_; ++d) n += comps_[d].size();
    return n;
}

void check_same_grid(const StaggeredGrid& a, const StaggeredGrid& b, const char* what) {
    require(a == b, ErrorKind::GridMismatch, what);
}

}  // namespace meissner
