#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mds/config.hpp"
#include "mds/io.hpp"

using namespace mds;

namespace {

std::string minimal_config() {
    return R"([grid]
nx = 8
ny = 8
[time]
T = 0.1
dt = 0.01
)";
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("minimal config picks up defaults") {
    SimConfig cfg = parse_config(minimal_config());
    CHECK(cfg.nx == 8);
    CHECK(cfg.ny == 8);
    CHECK(cfg.lx == 1.0);
    CHECK(cfg.final_time == 0.1);
    CHECK(cfg.fluid.mu0 == 1.0);
    CHECK(cfg.fluid.M == 1.0);
    CHECK(cfg.wells.atoms.empty());
    CHECK(cfg.output_cadence == 0);
}

TEST_CASE("hypothesis violations are named") {
    SUBCASE("nonpositive mobility ratio") {
        std::string t = minimal_config() + "[fluid]\nM = 0\n";
        CHECK_THROWS_WITH_AS(parse_config(t), doctest::Contains("(2.4)"),
                             std::invalid_argument);
    }
    SUBCASE("zero transverse dispersion") {
        std::string t = minimal_config() + "[dispersion]\ndt = 0\n";
        CHECK_THROWS_WITH_AS(parse_config(t), doctest::Contains("(2.5)"),
                             std::invalid_argument);
    }
    SUBCASE("initial concentration out of range") {
        std::string t = minimal_config() + "[init]\nc0 = const:1.5\n";
        CHECK_THROWS_WITH_AS(parse_config(t), doctest::Contains("(2.7)"),
                             std::invalid_argument);
    }
    SUBCASE("nonpositive final time") {
        std::string t = "[grid]\nnx = 8\nny = 8\n[time]\nT = -1\ndt = 0.01\n";
        CHECK_THROWS_WITH_AS(parse_config(t), doctest::Contains("(2.1)"),
                             std::invalid_argument);
    }
}

TEST_CASE("well lines parse roles, rates and schedules") {
    std::string t = minimal_config() + R"([wells]
epsilon = 0.25
well = 0.25 0.25 1.0 inject rate=0:1,0.05:2 chat=1
well = 0.75 0.75 1.0 produce rate=1
)";
    SimConfig cfg = parse_config(t);
    REQUIRE(cfg.wells.atoms.size() == 2);
    const WellAtom& a = cfg.wells.atoms[0];
    CHECK(a.role == WellRole::inject);
    CHECK(a.pos.x == 0.25);
    CHECK(a.rate.at(0.0) == 1.0);
    CHECK(a.rate.at(0.06) == 2.0);
    CHECK(a.c_hat.at(0.0) == 1.0);
    CHECK(cfg.wells.atoms[1].role == WellRole::produce);
    CHECK(cfg.wells.epsilon == 0.25);
}

TEST_CASE("all presets parse and validate") {
    for (const std::string& name : preset_names()) {
        SimConfig cfg = preset_config(name);
        CHECK_NOTHROW(validate_config(cfg));
    }
    CHECK_THROWS(preset_config("no-such-preset"));
}

TEST_CASE("field specs evaluate per cell") {
    Grid g = build_grid(2, 2, 1.0, 1.0);
    CellField cb = evaluate_field_spec({"checkerboard", {1.0, 4.0}}, g);
    CHECK(cb[g.cell_index(0, 0)] == 1.0);
    CHECK(cb[g.cell_index(1, 0)] == 4.0);
    CHECK(cb[g.cell_index(0, 1)] == 4.0);
    CellField bx = evaluate_field_spec({"box", {0.0, 0.0, 0.5, 0.5, 7.0, 2.0}}, g);
    CHECK(bx[g.cell_index(0, 0)] == 7.0);
    CHECK(bx[g.cell_index(1, 1)] == 2.0);
}

TEST_CASE("snapshot cadence covers start, interior multiples, and the end") {
    SimConfig cfg = preset_config("equilibrium");
    cfg.dt = cfg.final_time / 12.0;
    cfg.output_cadence = 5;
    RunResult rr = run_simulation(cfg);
    std::vector<int> got;
    for (const auto& [n, st] : rr.snapshots) got.push_back(n);
    CHECK(got == std::vector<int>{0, 5, 10, 12});
}

TEST_CASE("field output is byte-stable and round-trips the values") {
    SimConfig cfg = preset_config("quarter-five-spot-16");
    cfg.final_time = 2 * cfg.dt;
    RunResult rr = run_simulation(cfg);

    std::string csv1 = fields_csv(rr.grid, rr.final_state);
    std::string csv2 = fields_csv(rr.grid, rr.final_state);
    CHECK(csv1 == csv2);
    CHECK(csv1.rfind("i,j,x,y,c,p,ux,uy\n", 0) == 0);

    std::string vtk = fields_vtk(rr.grid, rr.final_state);
    CHECK(vtk.rfind("# vtk DataFile Version", 0) == 0);
    CHECK(vtk.find("STRUCTURED_POINTS") != std::string::npos);

    // written files reproduce the in-memory strings byte for byte
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "mds_io_test";
    fs::create_directories(dir);
    std::string base = (dir / "snap").string();
    write_fields(rr.grid, rr.final_state, base);
    CHECK(slurp(base + ".csv") == csv1);
    CHECK(slurp(base + ".vtk") == vtk);

    // values round-trip at full precision: re-read c from the csv
    std::istringstream in(csv1);
    std::string header;
    std::getline(in, header);
    int i, j;
    char comma;
    double x, y, c, p, ux, uy;
    int row = 0;
    while (in >> i >> comma >> j >> comma >> x >> comma >> y >> comma >> c >>
           comma >> p >> comma >> ux >> comma >> uy) {
        int idx = rr.grid.cell_index(i, j);
        CHECK(c == rr.final_state.c[idx]);
        CHECK(p == rr.final_state.p[idx]);
        ++row;
    }
    CHECK(row == rr.grid.num_cells());
    fs::remove_all(dir);
}
