#pragma once

// Uniform cell-centered 2D rectangular mesh. Cells are indexed row-major
// (idx = j*nx + i). Faces are split by orientation: x-faces have normal
// (+1, 0) and sit between columns, y-faces have normal (0, +1). Normals
// always point from the lower-index cell to the higher-index cell.

#include <cmath>
#include <vector>

#include "mds/common.hpp"

namespace mds {

struct Grid {
    int nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0;
    double dx = 0.0, dy = 0.0;
    int dim = 2;  // only 2D is implemented; kept as data for future line wells

    int num_cells() const { return nx * ny; }
    double cell_volume() const { return dx * dy; }

    int cell_index(int i, int j) const { return j * nx + i; }
    int cell_i(int idx) const { return idx % nx; }
    int cell_j(int idx) const { return idx / nx; }

    Vec2 cell_center(int idx) const {
        return {(cell_i(idx) + 0.5) * dx, (cell_j(idx) + 0.5) * dy};
    }

    // x-faces: i in [0, nx], j in [0, ny). Boundary faces are i = 0 and i = nx.
    int num_xfaces() const { return (nx + 1) * ny; }
    int xface(int i, int j) const { return j * (nx + 1) + i; }
    double xface_area() const { return dy; }

    // y-faces: i in [0, nx), j in [0, ny]. Boundary faces are j = 0 and j = ny.
    int num_yfaces() const { return nx * (ny + 1); }
    int yface(int i, int j) const { return j * nx + i; }
    double yface_area() const { return dx; }
};

// Scalar quantity attached to cells (one value per cell, row-major).
using CellField = std::vector<double>;

// Face-normal scalars (e.g. volumetric fluxes), oriented low-index to
// high-index cell.
struct FaceField {
    std::vector<double> x;  // sized num_xfaces()
    std::vector<double> y;  // sized num_yfaces()
};

inline FaceField make_face_field(const Grid& g) {
    return {std::vector<double>(g.num_xfaces(), 0.0),
            std::vector<double>(g.num_yfaces(), 0.0)};
}

Grid build_grid(int nx, int ny, double lx, double ly);

// Index of the half-open cell box containing x; points on the upper domain
// boundary map to the last cell of that axis. Throws if x is outside the
// closed domain.
int cell_of_point(const Grid& g, Vec2 x);

}  // namespace mds
