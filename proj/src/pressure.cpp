#include "mds/pressure.hpp"

#include <cmath>

namespace mds {

namespace {
// Harmonic mean of the two half-cell mobilities times face area over distance.
double trans(double lam_l, double lam_r, double area, double dist) {
    if (lam_l <= 0.0 || lam_r <= 0.0) return 0.0;
    return area / (0.5 * dist / lam_l + 0.5 * dist / lam_r);
}
}  // namespace

FaceCoefficients face_coefficients(const Grid& g, const CoefficientFields& cf,
                                   const FluidModel& fm, const CellField& c) {
    FaceCoefficients fc{make_face_field(g), make_face_field(g)};
    const bool with_gravity = fm.gravity.x != 0.0 || fm.gravity.y != 0.0;

    std::vector<double> inv_mu(g.num_cells());
    for (int i = 0; i < g.num_cells(); ++i) inv_mu[i] = 1.0 / viscosity(c[i], fm);

    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            int l = g.cell_index(i - 1, j);
            int r = g.cell_index(i, j);
            int f = g.xface(i, j);
            double t = trans(cf.kx[l] * inv_mu[l], cf.kx[r] * inv_mu[r],
                             g.xface_area(), g.dx);
            fc.trans.x[f] = t;
            if (with_gravity) {
                double rho_f = 0.5 * (density(c[l], fm) + density(c[r], fm));
                fc.grav.x[f] = t * rho_f * fm.gravity.x * g.dx;
            }
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            int l = g.cell_index(i, j - 1);
            int r = g.cell_index(i, j);
            int f = g.yface(i, j);
            double t = trans(cf.ky[l] * inv_mu[l], cf.ky[r] * inv_mu[r],
                             g.yface_area(), g.dy);
            fc.trans.y[f] = t;
            if (with_gravity) {
                double rho_f = 0.5 * (density(c[l], fm) + density(c[r], fm));
                fc.grav.y[f] = t * rho_f * fm.gravity.y * g.dy;
            }
        }
    }
    return fc;
}

PressureSystem assemble_pressure(const Grid& g, const CoefficientFields& cf,
                                 const FluidModel& fm, const CellField& c,
                                 const CellField& source) {
    const int n = g.num_cells();
    const double vol = g.cell_volume();
    PressureSystem sys;
    sys.coeffs = face_coefficients(g, cf, fm, c);
    sys.rhs.assign(n, 0.0);
    for (int i = 0; i < n; ++i) sys.rhs[i] = source[i] * vol;

    MatrixBuilder mb(n);
    for (int i = 0; i < n; ++i) mb.add(i, i, 0.0);  // keep diagonal present

    auto couple = [&](int l, int r, double t, double grav) {
        mb.add(l, l, t);
        mb.add(l, r, -t);
        mb.add(r, r, t);
        mb.add(r, l, -t);
        // Directed gravity flux G (low to high cell) leaves l and enters r.
        sys.rhs[l] -= grav;
        sys.rhs[r] += grav;
    };

    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            int f = g.xface(i, j);
            couple(g.cell_index(i - 1, j), g.cell_index(i, j),
                   sys.coeffs.trans.x[f], sys.coeffs.grav.x[f]);
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            int f = g.yface(i, j);
            couple(g.cell_index(i, j - 1), g.cell_index(i, j),
                   sys.coeffs.trans.y[f], sys.coeffs.grav.y[f]);
        }

    sys.matrix = mb.build();
    return sys;
}

CellField solve_pressure(const PressureSystem& sys, double tol, int maxit) {
    SolveResult res = solve_cg(sys.matrix, sys.rhs, tol, maxit, true);
    if (!res.converged)
        fail("pressure: CG failed to converge, residual " +
             std::to_string(res.rel_residual));
    return res.x;
}

FaceField darcy_flux(const Grid& g, const FaceCoefficients& fc,
                     const CellField& p) {
    FaceField u = make_face_field(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            int f = g.xface(i, j);
            int l = g.cell_index(i - 1, j);
            int r = g.cell_index(i, j);
            u.x[f] = -fc.trans.x[f] * (p[r] - p[l]) + fc.grav.x[f];
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            int f = g.yface(i, j);
            int l = g.cell_index(i, j - 1);
            int r = g.cell_index(i, j);
            u.y[f] = -fc.trans.y[f] * (p[r] - p[l]) + fc.grav.y[f];
        }
    return u;
}

std::vector<Vec2> cell_velocity(const Grid& g, const FaceField& u) {
    std::vector<Vec2> v(g.num_cells());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            int idx = g.cell_index(i, j);
            double fx = 0.5 * (u.x[g.xface(i, j)] + u.x[g.xface(i + 1, j)]);
            double fy = 0.5 * (u.y[g.yface(i, j)] + u.y[g.yface(i, j + 1)]);
            v[idx] = {fx / g.xface_area(), fy / g.yface_area()};
        }
    return v;
}

}  // namespace mds
