#include "mds/io.hpp"

#include <fstream>
#include <sstream>

namespace mds {

namespace {
void emit(std::ostream& os, const CellField& f) {
    for (double v : f) os << v << '\n';
}
}  // namespace

std::string fields_vtk(const Grid& g, const SimState& st) {
    std::ostringstream os;
    os.precision(17);
    os << "# vtk DataFile Version 3.0\n"
       << "miscible displacement snapshot t=" << st.time << "\n"
       << "ASCII\n"
       << "DATASET STRUCTURED_POINTS\n"
       << "DIMENSIONS " << g.nx << ' ' << g.ny << " 1\n"
       << "ORIGIN " << 0.5 * g.dx << ' ' << 0.5 * g.dy << " 0\n"
       << "SPACING " << g.dx << ' ' << g.dy << " 1\n"
       << "POINT_DATA " << g.num_cells() << '\n';
    os << "SCALARS concentration double 1\nLOOKUP_TABLE default\n";
    emit(os, st.c);
    os << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    emit(os, st.p);
    os << "VECTORS velocity double\n";
    for (const auto& v : st.u_cell) os << v.x << ' ' << v.y << " 0\n";
    return os.str();
}

std::string fields_csv(const Grid& g, const SimState& st) {
    std::ostringstream os;
    os.precision(17);
    os << "i,j,x,y,c,p,ux,uy\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            int idx = g.cell_index(i, j);
            Vec2 x = g.cell_center(idx);
            os << i << ',' << j << ',' << x.x << ',' << x.y << ',' << st.c[idx]
               << ',' << st.p[idx] << ',' << st.u_cell[idx].x << ','
               << st.u_cell[idx].y << '\n';
        }
    return os.str();
}

void write_fields(const Grid& g, const SimState& st, const std::string& base_path) {
    {
        std::ofstream out(base_path + ".vtk");
        if (!out) fail("io: cannot write '" + base_path + ".vtk'");
        out << fields_vtk(g, st);
    }
    {
        std::ofstream out(base_path + ".csv");
        if (!out) fail("io: cannot write '" + base_path + ".csv'");
        out << fields_csv(g, st);
    }
}

}  // namespace mds
