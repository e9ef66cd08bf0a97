#include "meissner/grid.hpp"

namespace meissner {

const char* to_string(Placement p) {
    switch (p) {
        case Placement::Node: return "NODE";
        case Placement::Edge: return "EDGE";
        case Placement::Face: return "FACE";
        case Placement::Cell: return "CELL";
    }
    return "?";
}

const char* to_string(BoundaryKind k) {
    return k == BoundaryKind::Wall ? "WALL" : "PERIODIC";
}

StaggeredGrid::StaggeredGrid(const GridSpec& spec) : spec_(spec) {
    require(spec.dims == 1 || spec.dims == 3, ErrorKind::InvalidSpec, "dims must be 1 or 3");
    for (int a = 0; a < spec.dims; ++a) {
        require(spec.spacing[a] > 0.0, ErrorKind::InvalidSpec,
                "spacing must be positive on axis " + std::to_string(a));
        int min_cells = spec.boundary[a] == BoundaryKind::Wall ? 2 : 1;
        require(spec.extents[a] >= min_cells, ErrorKind::InvalidSpec,
                "extents must be >= " + std::to_string(min_cells) + " on axis " +
                    std::to_string(a));
    }
    if (spec.dims == 1) {
        spec_.extents[1] = spec_.extents[2] = 1;
        spec_.spacing[1] = spec_.spacing[2] = 1.0;
        spec_.boundary[1] = spec_.boundary[2] = BoundaryKind::Periodic;
    }
}

std::array<int, 3> StaggeredGrid::shape(Placement p, int comp) const {
    std::array<int, 3> s{1, 1, 1};
    switch (p) {
        case Placement::Node:
            for (int a = 0; a < 3; ++a) s[a] = nodes(a);
            return s;
        case Placement::Cell:
            for (int a = 0; a < 3; ++a) s[a] = cells(a);
            return s;
        case Placement::Edge:
            // aligned with `comp`: cell count along comp, node counts across
            require(comp >= 0 && comp < 3, ErrorKind::PlacementMismatch, "edge needs component");
            for (int a = 0; a < 3; ++a) s[a] = (a == comp) ? cells(a) : nodes(a);
            return s;
        case Placement::Face:
            // normal along `comp`: node count along comp, cell counts across
            require(comp >= 0 && comp < 3, ErrorKind::PlacementMismatch, "face needs component");
            for (int a = 0; a < 3; ++a) s[a] = (a == comp) ? nodes(a) : cells(a);
            return s;
    }
    return s;
}

std::size_t StaggeredGrid::count(Placement p, int comp) const {
    auto s = shape(p, comp);
    return static_cast<std::size_t>(s[0]) * s[1] * s[2];
}

bool StaggeredGrid::wrap(int axis, int n_pts, int& c) const {
    if (periodic(axis)) {
        c = ((c % n_pts) + n_pts) % n_pts;
        return true;
    }
    return c >= 0 && c < n_pts;
}

double StaggeredGrid::volume() const {
    double v = 1.0;
    for (int a = 0; a < dims(); ++a) v *= length(a);
    return v;
}

bool StaggeredGrid::slab_degenerate() const {
    return dims() == 3 && cells(0) == 1 && cells(1) == 1 && periodic(0) && periodic(1) &&
           wall(2);
}

int StaggeredGrid::wall_axis_count() const {
    int n = 0;
    for (int a = 0; a < dims(); ++a)
        if (wall(a)) ++n;
    return n;
}

int StaggeredGrid::single_wall_axis() const {
    int found = -1;
    for (int a = 0; a < dims(); ++a) {
        if (wall(a)) {
            if (found >= 0) return -1;
            found = a;
        }
    }
    return found;
}

bool StaggeredGrid::operator==(const StaggeredGrid& other) const {
    if (spec_.dims != other.spec_.dims) return false;
    for (int a = 0; a < 3; ++a) {
        if (spec_.extents[a] != other.spec_.extents[a]) return false;
        if (spec_.spacing[a] != other.spec_.spacing[a]) return false;
        if (spec_.boundary[a] != other.spec_.boundary[a]) return false;
    }
    return true;
}

StaggeredGrid build_grid(const GridSpec& spec) { return StaggeredGrid(spec); }

StaggeredGrid build_grid_1d(int n, double L) {
    GridSpec spec;
    spec.dims = 1;
    spec.extents = {n, 1, 1};
    spec.spacing = {L / n, 1.0, 1.0};
    spec.boundary = {BoundaryKind::Wall, BoundaryKind::Periodic, BoundaryKind::Periodic};
    return StaggeredGrid(spec);
}

StaggeredGrid slab_box(int n, double L, double aspect) {
    GridSpec spec;
    spec.dims = 3;
    double h = L / n;
    spec.extents = {1, 1, n};
    spec.spacing = {aspect * h, aspect * h, h};
    spec.boundary = {BoundaryKind::Periodic, BoundaryKind::Periodic, BoundaryKind::Wall};
    return StaggeredGrid(spec);
}

StaggeredGrid box_grid(int nx, int ny, int nz, double Lx, double Ly, double Lz, BoundaryKind bx,
                       BoundaryKind by, BoundaryKind bz) {
    GridSpec spec;
    spec.dims = 3;
    spec.extents = {nx, ny, nz};
    spec.spacing = {Lx / nx, Ly / ny, Lz / nz};
    spec.boundary = {bx, by, bz};
    return StaggeredGrid(spec);
}

}  // namespace meissner
