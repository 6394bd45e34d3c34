#include <doctest.h>

#include <cmath>

#include "mds/wells.hpp"

using namespace mds;

namespace {

double discrete_mass(const Grid& g, const CellField& f) {
    double s = 0.0;
    for (double v : f) s += v * g.cell_volume();
    return s;
}

WellSet simple_pair(double eps = 0.0, double inj_weight = 1.0,
                    double prod_weight = 1.0) {
    WellSet w;
    w.epsilon = eps;
    WellAtom inj{{0.1, 0.1}, inj_weight, WellRole::inject, Schedule(1.0), Schedule(1.0)};
    WellAtom prod{{0.9, 0.9}, prod_weight, WellRole::produce, Schedule(1.0), Schedule(0.0)};
    w.atoms = {inj, prod};
    return w;
}

}  // namespace

TEST_CASE("atomic deposition") {
    Grid g = build_grid(2, 2, 1.0, 1.0);
    CellField d = regularize_atom(g, {0.25, 0.25}, 1.0, 0.0);
    CHECK(d[0] == doctest::Approx(4.0));  // weight / cell volume
    CHECK(d[1] == 0.0);
    CHECK(d[2] == 0.0);
    CHECK(d[3] == 0.0);
}

TEST_CASE("mollified atom mass is exact") {
    Grid g = build_grid(10, 10, 1.0, 1.0);
    CellField d = regularize_atom(g, {0.4, 0.6}, 1.0, 0.3);
    CHECK(std::abs(discrete_mass(g, d) - 1.0) <= 1e-14);
    for (double v : d) CHECK(v >= 0.0);
}

TEST_CASE("measure mass is additive over atoms") {
    Grid g = build_grid(8, 8, 1.0, 1.0);
    WellSet w;
    w.epsilon = 0.25;
    w.atoms.push_back({{0.3, 0.3}, 2.0, WellRole::inject, Schedule(1.0), Schedule(1.0)});
    w.atoms.push_back({{0.7, 0.7}, 3.0, WellRole::produce, Schedule(1.0), Schedule(0.0)});
    CellField nu = regularize_measure(w, g);
    CHECK(std::abs(discrete_mass(g, nu) - 5.0) <= 1e-13);
}

TEST_CASE("atom outside domain is rejected") {
    Grid g = build_grid(4, 4, 1.0, 1.0);
    CHECK_THROWS(regularize_atom(g, {1.5, 0.5}, 1.0, 0.0));
}

TEST_CASE("L1 norm equals nu(Omega) for every epsilon") {
    Grid g = build_grid(16, 16, 1.0, 1.0);
    for (double eps : {0.0, 0.125, 0.25, 0.5}) {
        WellSet w = simple_pair(eps, 1.5, 2.5);
        CellField nu = regularize_measure(w, g);
        CHECK(std::abs(discrete_mass(g, nu) - w.total_mass()) <= 1e-13);
        for (double v : nu) CHECK(v >= 0.0);
    }
}

TEST_CASE("weak-* convergence against a smooth test function") {
    Grid g = build_grid(64, 64, 1.0, 1.0);
    Vec2 pos{0.4375, 0.5625};  // on the cell-center lattice
    auto phi = [](Vec2 x) { return std::cos(x.x) * std::exp(x.y); };
    double exact = phi(pos);
    double prev = 1e300;
    for (double eps : {0.25, 0.125, 0.0625, 0.03125}) {
        CellField d = regularize_atom(g, pos, 1.0, eps);
        double s = 0.0;
        for (int i = 0; i < g.num_cells(); ++i)
            s += d[i] * phi(g.cell_center(i)) * g.cell_volume();
        double err = std::abs(s - exact);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("corrected_rates") {
    Grid g = build_grid(4, 4, 1.0, 1.0);
    WellSet w = simple_pair(0.3);
    CellField nu = regularize_measure(w, g);
    const int n = g.num_cells();

    SUBCASE("already compatible") {
        CellField a(n, 1.0), b(n, 1.0);
        CorrectedRates cr = corrected_rates(a, b, nu, g.cell_volume());
        CHECK(cr.lambda == doctest::Approx(1.0).epsilon(1e-14));
        for (int i = 0; i < n; ++i) CHECK(cr.a_eff[i] == doctest::Approx(1.0));
    }
    SUBCASE("constant rescale") {
        CellField a(n, 2.0), b(n, 1.0);
        CorrectedRates cr = corrected_rates(a, b, nu, g.cell_volume());
        for (int i = 0; i < n; ++i)
            CHECK(cr.a_eff[i] == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("spatially varying, brute-force quadrature oracle") {
        CellField a(n), b(n);
        for (int i = 0; i < n; ++i) {
            Vec2 x = g.cell_center(i);
            a[i] = 1.0 + x.x;
            b[i] = 2.0 - x.y;
        }
        CorrectedRates cr = corrected_rates(a, b, nu, g.cell_volume());
        double ia = 0.0, ib = 0.0;
        for (int i = 0; i < n; ++i) {
            ia += cr.a_eff[i] * nu[i] * g.cell_volume();
            ib += cr.b_eff[i] * nu[i] * g.cell_volume();
        }
        CHECK(std::abs(ia - ib) <= 1e-14 * std::max(1.0, std::abs(ib)));
        for (int i = 0; i < n; ++i) CHECK(cr.a_eff[i] >= 0.0);
    }
    SUBCASE("production without injection is invalid") {
        CellField a(n, 0.0), b(n, 1.0);
        CHECK_THROWS(corrected_rates(a, b, nu, g.cell_volume()));
    }
}

TEST_CASE("source_fields") {
    Grid g = build_grid(8, 8, 1.0, 1.0);

    SUBCASE("no wells") {
        WellSet w;
        RegularizedWells rw = regularize_wells(w, g);
        SourceFields s = source_fields(w, rw, g, 0.0);
        for (double v : s.qI) CHECK(v == 0.0);
        for (double v : s.qP) CHECK(v == 0.0);
    }
    SUBCASE("symmetric pair") {
        WellSet w = simple_pair(0.0);
        RegularizedWells rw = regularize_wells(w, g);
        SourceFields s = source_fields(w, rw, g, 0.0);
        CHECK(discrete_mass(g, s.qI) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(discrete_mass(g, s.qP) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("unbalanced pair: lambda = 2 rescale") {
        WellSet w = simple_pair(0.0, 1.0, 2.0);
        RegularizedWells rw = regularize_wells(w, g);
        SourceFields s = source_fields(w, rw, g, 0.0);
        CHECK(s.lambda == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(discrete_mass(g, s.qI) == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(discrete_mass(g, s.qP) == doctest::Approx(2.0).epsilon(1e-13));
    }
    SUBCASE("discrete compatibility to machine precision, all epsilon") {
        for (double eps : {0.0, 0.25, 0.5}) {
            WellSet w = simple_pair(eps, 1.3, 0.7);
            RegularizedWells rw = regularize_wells(w, g);
            SourceFields s = source_fields(w, rw, g, 0.0);
            CHECK(std::abs(discrete_mass(g, s.qI) - discrete_mass(g, s.qP)) <= 1e-14);
        }
    }
    SUBCASE("corrected rates bounded uniformly in epsilon") {
        for (double eps : {0.0, 0.125, 0.25, 0.5}) {
            WellSet w = simple_pair(eps);
            RegularizedWells rw = regularize_wells(w, g);
            SourceFields s = source_fields(w, rw, g, 0.0);
            CHECK(s.a_max >= 0.0);
            CHECK(s.a_max <= 10.0);
            CHECK(s.b_max <= 10.0);
        }
    }
}

TEST_CASE("schedules are piecewise constant in time") {
    Schedule s;
    s.table = {{0.0, 1.0}, {0.5, 2.0}, {1.0, 0.5}};
    CHECK(s.at(0.0) == 1.0);
    CHECK(s.at(0.49) == 1.0);
    CHECK(s.at(0.5) == 2.0);
    CHECK(s.at(2.0) == 0.5);
    CHECK(s.max_value() == 2.0);
}
