#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "meissner/errors.hpp"

namespace meissner {

enum class BoundaryKind { Wall, Periodic };

// Where a degree of freedom lives relative to the cell complex.  On a 3D grid
// the NODE/EDGE/FACE/CELL placements realize an exact discrete de Rham
// complex; a 1D grid keeps NODE/CELL plus the degenerate EDGE(0)/FACE(0).
enum class Placement : std::uint8_t { Node, Edge, Face, Cell };

const char* to_string(Placement p);
const char* to_string(BoundaryKind k);

struct GridSpec {
    int dims = 3;
    std::array<int, 3> extents{1, 1, 1};           // cell counts per axis
    std::array<double, 3> spacing{1.0, 1.0, 1.0};  // positive
    std::array<BoundaryKind, 3> boundary{BoundaryKind::Wall, BoundaryKind::Wall,
                                         BoundaryKind::Wall};
};

class StaggeredGrid {
  public:
    StaggeredGrid() = default;
    explicit StaggeredGrid(const GridSpec& spec);

    int dims() const { return spec_.dims; }
    int cells(int axis) const { return spec_.extents[axis]; }
    double spacing(int axis) const { return spec_.spacing[axis]; }
    double length(int axis) const { return spec_.extents[axis] * spec_.spacing[axis]; }
    BoundaryKind boundary(int axis) const { return spec_.boundary[axis]; }
    bool wall(int axis) const { return spec_.boundary[axis] == BoundaryKind::Wall; }
    bool periodic(int axis) const { return spec_.boundary[axis] == BoundaryKind::Periodic; }

    // Point counts per axis: node-aligned axes carry n+1 planes on walls and n
    // on periodic axes; cell-aligned axes always carry n.
    int nodes(int axis) const { return wall(axis) ? spec_.extents[axis] + 1 : spec_.extents[axis]; }

    // Storage counts per axis for a scalar placement or one vector component.
    // `comp` is the component axis for Edge/Face placements.
    std::array<int, 3> shape(Placement p, int comp = -1) const;
    std::size_t count(Placement p, int comp = -1) const;

    std::size_t index(const std::array<int, 3>& shape, int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * shape[1] + j) * shape[2] + k;
    }

    // Wraps a coordinate on a periodic axis; returns false when it falls
    // outside a wall axis' range [0, n_pts).
    bool wrap(int axis, int n_pts, int& c) const;

    double volume() const;
    double cell_volume() const { return spec_.spacing[0] * spec_.spacing[1] * spec_.spacing[2]; }

    // Degenerate lateral box: 1x1xN with periodic x,y and a wall z axis.  All
    // slab physics lives on these grids; solvers use a direct path there.
    bool slab_degenerate() const;
    int wall_axis_count() const;
    int single_wall_axis() const;  // the unique wall axis, or -1

    bool operator==(const StaggeredGrid& other) const;
    bool operator!=(const StaggeredGrid& other) const { return !(*this == other); }

    const GridSpec& spec() const { return spec_; }

  private:
    GridSpec spec_{};
};

StaggeredGrid build_grid(const GridSpec& spec);

// 1D slab [0, L] with n cells.
StaggeredGrid build_grid_1d(int n, double L);

// 1x1xN periodic-lateral box of height L; hx = hy = aspect * (L / n).
StaggeredGrid slab_box(int n, double L, double aspect = 1.0);

StaggeredGrid box_grid(int nx, int ny, int nz, double Lx, double Ly, double Lz,
                       BoundaryKind bx = BoundaryKind::Periodic,
                       BoundaryKind by = BoundaryKind::Periodic,
                       BoundaryKind bz = BoundaryKind::Wall);

}  // namespace meissner
