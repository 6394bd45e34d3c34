#include <doctest.h>

#include <cmath>
#include <random>

#include "mds/fields.hpp"

using namespace mds;

namespace {

double quad_form(const SymTensor2& d, Vec2 xi) {
    return d.xx * xi.x * xi.x + 2.0 * d.xy * xi.x * xi.y + d.yy * xi.y * xi.y;
}

double frob(const SymTensor2& d) {
    return std::sqrt(d.xx * d.xx + 2.0 * d.xy * d.xy + d.yy * d.yy);
}

SymTensor2 mul(const SymTensor2& a, const SymTensor2& b) {
    return {a.xx * b.xx + a.xy * b.xy, a.xx * b.xy + a.xy * b.yy,
            a.xy * b.xy + a.yy * b.yy};
}

}  // namespace

TEST_CASE("Koval viscosity") {
    FluidModel fm;
    fm.mu0 = 2.0;
    fm.M = 16.0;
    CHECK(viscosity(0.0, fm) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(viscosity(1.0, fm) == doctest::Approx(0.125).epsilon(1e-14));
    FluidModel unit;
    unit.mu0 = 1.0;
    unit.M = 1.0;
    CHECK(viscosity(0.5, unit) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("viscosity is decreasing in c when M > 1") {
    FluidModel fm;
    fm.M = 8.0;
    for (int i = 0; i < 100; ++i) {
        double c1 = i / 100.0, c2 = (i + 1) / 100.0;
        CHECK(viscosity(c1, fm) >= viscosity(c2, fm));
    }
}

TEST_CASE("linear density mixing") {
    FluidModel fm;
    fm.rho0 = 1000.0;
    fm.rho1 = 800.0;
    CHECK(density(0.0, fm) == 1000.0);
    CHECK(density(1.0, fm) == 800.0);
    CHECK(density(0.5, fm) == doctest::Approx(900.0));
}

TEST_CASE("dispersion tensor direct evaluation") {
    DispersionModel m{0.1, 1.0, 0.01};
    SymTensor2 d0 = dispersion_tensor(1.0, {0.0, 0.0}, m);
    CHECK(d0.xx == doctest::Approx(0.1));
    CHECK(d0.yy == doctest::Approx(0.1));
    CHECK(d0.xy == 0.0);

    SymTensor2 d1 = dispersion_tensor(1.0, {1.0, 0.0}, m);
    CHECK(d1.xx == doctest::Approx(1.1));
    CHECK(d1.yy == doctest::Approx(0.11));
    CHECK(d1.xy == doctest::Approx(0.0));

    DispersionModel iso{1.0, 1.0, 1.0};
    SymTensor2 d2 = dispersion_tensor(2.0, {3.0, 4.0}, iso);
    CHECK(d2.xx == doctest::Approx(12.0));
    CHECK(d2.yy == doctest::Approx(12.0));
    CHECK(d2.xy == doctest::Approx(0.0));
}

TEST_CASE("truncated tensor") {
    DispersionModel m{0.1, 1.0, 0.01};
    SymTensor2 a = dispersion_tensor(1.0, {2.0, 0.0}, m);
    SymTensor2 b = dispersion_tensor_truncated(1.0, {2.0, 0.0}, 5.0, m);
    CHECK(a.xx == b.xx);  // bitwise below the cap
    CHECK(a.xy == b.xy);
    CHECK(a.yy == b.yy);

    SymTensor2 capped = dispersion_tensor_truncated(1.0, {10.0, 0.0}, 5.0, m);
    CHECK(capped.xx == doctest::Approx(5.1));
    CHECK(capped.yy == doctest::Approx(0.15));

    SymTensor2 z = dispersion_tensor_truncated(1.0, {0.0, 0.0}, 3.0, m);
    CHECK(z.xx == doctest::Approx(0.1));
}

TEST_CASE("tensor_sqrt") {
    SymTensor2 r1 = tensor_sqrt({4.0, 0.0, 9.0});
    CHECK(r1.xx == doctest::Approx(2.0));
    CHECK(r1.yy == doctest::Approx(3.0));
    SymTensor2 r2 = tensor_sqrt({1.0, 0.0, 1.0});
    CHECK(r2.xx == doctest::Approx(1.0));
    CHECK(r2.xy == doctest::Approx(0.0));

    CHECK_THROWS(tensor_sqrt({1.0, 2.0, 1.0}));   // indefinite
    CHECK_THROWS(tensor_sqrt({-1.0, 0.0, 1.0}));

    // random SPD samples built from an eigen-decomposition oracle
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ang(0.0, 6.283), ev(0.01, 10.0);
    for (int t = 0; t < 200; ++t) {
        double th = ang(rng), l1 = ev(rng), l2 = ev(rng);
        double c = std::cos(th), s = std::sin(th);
        SymTensor2 d{c * c * l1 + s * s * l2, c * s * (l1 - l2),
                     s * s * l1 + c * c * l2};
        SymTensor2 r = tensor_sqrt(d);
        SymTensor2 rr = mul(r, r);
        double scale = frob(d);
        CHECK(std::abs(rr.xx - d.xx) <= 1e-12 * scale);
        CHECK(std::abs(rr.xy - d.xy) <= 1e-12 * scale);
        CHECK(std::abs(rr.yy - d.yy) <= 1e-12 * scale);
    }
}

TEST_CASE("sqrt growth bound |D^{1/2}(zeta)| <= Lambda^{1/2}(1+|zeta|^{1/2})") {
    DispersionModel m{0.1, 1.0, 0.01};
    double lam = dispersion_lambda(1.0, m);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int t = 0; t < 1000; ++t) {
        Vec2 z{u(rng), u(rng)};
        SymTensor2 r = tensor_sqrt(dispersion_tensor(1.0, z, m));
        double speed = std::hypot(z.x, z.y);
        CHECK(frob(r) <= std::sqrt(lam) * (1.0 + std::sqrt(speed)) * (1.0 + 1e-12));
    }
}

TEST_CASE("ellipticity sampling") {
    DispersionModel m{0.3, 2.0, 0.05};
    double phi_star = 0.5;
    double alpha = dispersion_alpha(phi_star, m);
    double lam = dispersion_lambda(phi_star, m);
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> uz(-50.0, 50.0), ux(-1.0, 1.0);
    std::uniform_real_distribution<double> uphi(phi_star, 1.0 / phi_star);
    for (int t = 0; t < 10000; ++t) {
        Vec2 z{uz(rng), uz(rng)};
        Vec2 xi{ux(rng), ux(rng)};
        double phi = uphi(rng);
        double speed = std::hypot(z.x, z.y);
        double nxi = dot(xi, xi);
        SymTensor2 d = dispersion_tensor(phi, z, m);
        double q = quad_form(d, xi);
        CHECK(q >= alpha * (1.0 + speed) * nxi * (1.0 - 1e-12) - 1e-300);
        CHECK(q <= lam * (1.0 + speed) * nxi * (1.0 + 1e-12) + 1e-300);
        SymTensor2 dk = dispersion_tensor_truncated(phi, z, 3.0, m);
        CHECK(quad_form(dk, xi) >= alpha * nxi * (1.0 - 1e-12) - 1e-300);
    }
}

TEST_CASE("E(u) is a rank-1 orthogonal projection") {
    // Recover E from the tensor with dm = 0, dl = 1, dt = 0: D = |u| E.
    DispersionModel m{0.0, 1.0, 0.0};
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int t = 0; t < 500; ++t) {
        Vec2 v{u(rng), u(rng)};
        double speed = std::hypot(v.x, v.y);
        if (speed < 1e-8) continue;
        SymTensor2 d = dispersion_tensor(1.0, v, m);
        SymTensor2 e{d.xx / speed, d.xy / speed, d.yy / speed};
        SymTensor2 ee = mul(e, e);
        CHECK(std::abs(ee.xx - e.xx) <= 1e-12);
        CHECK(std::abs(ee.xy - e.xy) <= 1e-12);
        CHECK(std::abs(e.xx + e.yy - 1.0) <= 1e-12);  // trace 1
        CHECK(std::abs(e.xx * v.x + e.xy * v.y - v.x) <= 1e-12 * speed);  // E u = u
        CHECK(std::abs(e.xy * v.x + e.yy * v.y - v.y) <= 1e-12 * speed);
    }
}

TEST_CASE("continuity at the origin") {
    DispersionModel m{0.1, 1.0, 0.01};
    double lam = dispersion_lambda(1.0, m);
    SymTensor2 d0 = dispersion_tensor(1.0, {0.0, 0.0}, m);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-1e-8, 1e-8);
    for (int t = 0; t < 1000; ++t) {
        Vec2 v{u(rng), u(rng)};
        SymTensor2 d = dispersion_tensor(1.0, v, m);
        SymTensor2 diff{d.xx - d0.xx, d.xy - d0.xy, d.yy - d0.yy};
        // spectral norm of the symmetric 2x2 difference
        double mean = 0.5 * (diff.xx + diff.yy);
        double rad = std::hypot(0.5 * (diff.xx - diff.yy), diff.xy);
        double opnorm = std::max(std::abs(mean + rad), std::abs(mean - rad));
        // absolute slack covers roundoff in d - d0 (entries are O(dm))
        CHECK(opnorm <= lam * std::hypot(v.x, v.y) + 1e-15);
    }
}

TEST_CASE("truncation consistency: D_k -> D uniformly on compact sets") {
    DispersionModel m{0.1, 1.0, 0.01};
    double prev = 1e300;
    for (double k : {1.0, 2.0, 4.0, 8.0}) {
        double sup = 0.0;
        for (int i = -8; i <= 8; ++i)
            for (int j = -8; j <= 8; ++j) {
                Vec2 v{i * 0.9, j * 0.9};  // compact set |u| <= ~10
                SymTensor2 a = dispersion_tensor(1.0, v, m);
                SymTensor2 b = dispersion_tensor_truncated(1.0, v, k, m);
                sup = std::max(sup, frob({a.xx - b.xx, a.xy - b.xy, a.yy - b.yy}));
            }
        CHECK(sup <= prev);
        prev = sup;
    }
    // once k covers the set, the gap is identically zero
    for (int i = -8; i <= 8; ++i)
        for (int j = -8; j <= 8; ++j) {
            Vec2 v{i * 0.9, j * 0.9};
            SymTensor2 a = dispersion_tensor(1.0, v, m);
            SymTensor2 b = dispersion_tensor_truncated(1.0, v, 20.0, m);
            CHECK(a.xx == b.xx);
        }
}

TEST_CASE("coefficient bounds validation") {
    CoefficientFields cf{{0.5, 0.5}, {1.0, 1.0}, {1.0, 1.0}};
    CHECK_NOTHROW(validate_coefficients(cf, 0.5, 0.5));
    CoefficientFields bad_phi{{0.05}, {1.0}, {1.0}};
    CHECK_THROWS(validate_coefficients(bad_phi, 0.5, 0.5));
    CoefficientFields bad_k{{0.5}, {100.0}, {1.0}};
    CHECK_THROWS(validate_coefficients(bad_k, 0.5, 0.5));
}
