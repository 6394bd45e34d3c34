#include "mds/grid.hpp"

#include <algorithm>

namespace mds {

Grid build_grid(int nx, int ny, double lx, double ly) {
    require(nx >= 2 && ny >= 2, "grid: cell counts must be >= 2 per axis");
    require(lx > 0.0 && ly > 0.0, "grid: domain extents must be positive");
    Grid g;
    g.nx = nx;
    g.ny = ny;
    g.lx = lx;
    g.ly = ly;
    g.dx = lx / nx;
    g.dy = ly / ny;
    return g;
}

int cell_of_point(const Grid& g, Vec2 x) {
    require(x.x >= 0.0 && x.x <= g.lx && x.y >= 0.0 && x.y <= g.ly,
            "cell_of_point: point outside domain");
    int i = std::min(static_cast<int>(x.x / g.dx), g.nx - 1);
    int j = std::min(static_cast<int>(x.y / g.dy), g.ny - 1);
    return g.cell_index(i, j);
}

}  // namespace mds
