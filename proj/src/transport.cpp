#include "mds/transport.hpp"

#include <algorithm>
#include <cmath>

namespace mds {

namespace {

SymTensor2 cell_tensor(double phi, Vec2 u, const DispersionModel& dm) {
    if (std::isinf(dm.trunc_k)) return dispersion_tensor(phi, u, dm);
    return dispersion_tensor_truncated(phi, u, dm.trunc_k, dm);
}

// Cell-centered gradient of a cell field, central in the interior and
// one-sided at the boundary.
void cell_gradients(const Grid& g, const CellField& c, std::vector<Vec2>& grad) {
    grad.assign(g.num_cells(), Vec2{});
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            int idx = g.cell_index(i, j);
            double gx, gy;
            if (i == 0)
                gx = (c[g.cell_index(1, j)] - c[idx]) / g.dx;
            else if (i == g.nx - 1)
                gx = (c[idx] - c[g.cell_index(i - 1, j)]) / g.dx;
            else
                gx = (c[g.cell_index(i + 1, j)] - c[g.cell_index(i - 1, j)]) /
                     (2.0 * g.dx);
            if (j == 0)
                gy = (c[g.cell_index(i, 1)] - c[idx]) / g.dy;
            else if (j == g.ny - 1)
                gy = (c[idx] - c[g.cell_index(i, j - 1)]) / g.dy;
            else
                gy = (c[g.cell_index(i, j + 1)] - c[g.cell_index(i, j - 1)]) /
                     (2.0 * g.dy);
            grad[idx] = {gx, gy};
        }
}

}  // namespace

TransportSystem assemble_transport(const Grid& g, const CoefficientFields& cf,
                                   const DispersionModel& dm,
                                   const CellField& c_old, const FaceField& u,
                                   const std::vector<Vec2>& u_cell,
                                   const CellField& qI, const CellField& qP,
                                   const CellField& chat_qI, double dt,
                                   const CellField* extra_source, bool upwind) {
    require(dt > 0.0, "transport: dt must be positive");
    const int n = g.num_cells();
    const double vol = g.cell_volume();

    std::vector<SymTensor2> d(n);
    for (int i = 0; i < n; ++i) d[i] = cell_tensor(cf.phi[i], u_cell[i], dm);

    std::vector<Vec2> grad;
    cell_gradients(g, c_old, grad);

    TransportSystem sys;
    sys.disp_trans = make_face_field(g);
    sys.cross_flux = make_face_field(g);
    sys.rhs.assign(n, 0.0);
    MatrixBuilder mb(n);

    for (int i = 0; i < n; ++i) {
        double acc = cf.phi[i] * vol / dt;
        mb.add(i, i, acc + qP[i] * vol);  // sink b nu c implicit
        sys.rhs[i] = acc * c_old[i] + chat_qI[i] * vol;
        if (extra_source) sys.rhs[i] += (*extra_source)[i] * vol;
    }

    // Raw explicit cross-diffusion fluxes (directed low to high cell).
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            int f = g.xface(i, j);
            int l = g.cell_index(i - 1, j);
            int r = g.cell_index(i, j);
            double dxy = 0.5 * (d[l].xy + d[r].xy);
            double gt = 0.5 * (grad[l].y + grad[r].y);
            sys.cross_flux.x[f] = -dxy * gt * g.xface_area();
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            int f = g.yface(i, j);
            int l = g.cell_index(i, j - 1);
            int r = g.cell_index(i, j);
            double dxy = 0.5 * (d[l].xy + d[r].xy);
            double gt = 0.5 * (grad[l].x + grad[r].x);
            sys.cross_flux.y[f] = -dxy * gt * g.yface_area();
        }

    // Limit the explicit fluxes so they cannot push any cell outside [0,1]
    // in a single step; the limiter is face-symmetric so mass is conserved.
    std::vector<double> demand(n, 0.0);
    auto add_demand = [&](int l, int r, double fc) {
        demand[l] += std::abs(fc);
        demand[r] += std::abs(fc);
    };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            add_demand(g.cell_index(i - 1, j), g.cell_index(i, j),
                       sys.cross_flux.x[g.xface(i, j)]);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            add_demand(g.cell_index(i, j - 1), g.cell_index(i, j),
                       sys.cross_flux.y[g.yface(i, j)]);
    std::vector<double> factor(n, 1.0);
    for (int i = 0; i < n; ++i) {
        double ci = clamp01(c_old[i]);
        double allowed = cf.phi[i] * vol / dt * std::min(ci, 1.0 - ci);
        if (demand[i] > allowed) factor[i] = allowed / demand[i];
    }

    auto apply_cross = [&](int l, int r, double& fc) {
        fc *= std::min(factor[l], factor[r]);
        sys.rhs[l] -= fc;
        sys.rhs[r] += fc;
    };

    // Face loop: implicit convection + normal dispersion, explicit cross.
    auto face = [&](int l, int r, double flux, double dnn, double area,
                    double dist, double& td_out, double& fc) {
        double td = dnn * area / dist;
        td_out = td;
        mb.add(l, l, td);
        mb.add(l, r, -td);
        mb.add(r, r, td);
        mb.add(r, l, -td);
        if (upwind) {
            double up = std::max(flux, 0.0);
            double dn = std::min(flux, 0.0);
            mb.add(l, l, up);
            mb.add(l, r, dn);
            mb.add(r, l, -up);
            mb.add(r, r, -dn);
        } else {  // centered averaging, test hook
            mb.add(l, l, 0.5 * flux);
            mb.add(l, r, 0.5 * flux);
            mb.add(r, l, -0.5 * flux);
            mb.add(r, r, -0.5 * flux);
        }
        apply_cross(l, r, fc);
    };

    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            int f = g.xface(i, j);
            int l = g.cell_index(i - 1, j);
            int r = g.cell_index(i, j);
            face(l, r, u.x[f], 0.5 * (d[l].xx + d[r].xx), g.xface_area(), g.dx,
                 sys.disp_trans.x[f], sys.cross_flux.x[f]);
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            int f = g.yface(i, j);
            int l = g.cell_index(i, j - 1);
            int r = g.cell_index(i, j);
            face(l, r, u.y[f], 0.5 * (d[l].yy + d[r].yy), g.yface_area(), g.dy,
                 sys.disp_trans.y[f], sys.cross_flux.y[f]);
        }

    sys.matrix = mb.build();
    return sys;
}

SimState init_state(const Grid& g, const CoefficientFields& cf,
                    const FluidModel& fm, const CellField& c0,
                    const WellSet& wells, const RegularizedWells& rw,
                    const StepControls& ctl) {
    for (double v : c0)
        require(v >= 0.0 && v <= 1.0, "(2.7) initial concentration out of [0,1]");
    SimState st;
    st.time = 0.0;
    st.c = c0;
    SourceFields s = source_fields(wells, rw, g, 0.0);
    CellField src(g.num_cells());
    for (int i = 0; i < g.num_cells(); ++i) src[i] = s.qI[i] - s.qP[i];
    PressureSystem sys = assemble_pressure(g, cf, fm, st.c, src);
    st.p = solve_pressure(sys, ctl.pressure_tol, ctl.max_iterations);
    st.flux = darcy_flux(g, sys.coeffs, st.p);
    st.u_cell = cell_velocity(g, st.flux);
    return st;
}

StepResult step(const SimState& state, double dt, const Grid& g,
                const CoefficientFields& cf, const FluidModel& fm,
                const DispersionModel& dm, const WellSet& wells,
                const RegularizedWells& rw, const StepControls& ctl) {
    const int n = g.num_cells();
    const double vol = g.cell_volume();
    const double t_new = state.time + dt;

    SourceFields s = source_fields(wells, rw, g, t_new);
    CellField src(n);
    double compat = 0.0;
    for (int i = 0; i < n; ++i) {
        src[i] = s.qI[i] - s.qP[i];
        compat += src[i] * vol;
    }

    SimState next = state;
    CellField c_guess = state.c;
    TransportSystem tsys;
    int picard_iters = 0;

    for (int it = 0; it < std::max(1, ctl.picard_max); ++it) {
        PressureSystem psys = assemble_pressure(g, cf, fm, c_guess, src);
        next.p = solve_pressure(psys, ctl.pressure_tol, ctl.max_iterations);
        next.flux = darcy_flux(g, psys.coeffs, next.p);
        next.u_cell = cell_velocity(g, next.flux);

        tsys = assemble_transport(g, cf, dm, state.c, next.flux, next.u_cell,
                                  s.qI, s.qP, s.chat_qI, dt, nullptr, ctl.upwind);
        SolveResult res = solve_bicgstab(tsys.matrix, tsys.rhs,
                                         ctl.transport_tol, ctl.max_iterations,
                                         &state.c);
        if (!res.converged)
            fail("transport: BiCGStab failed to converge, residual " +
                 std::to_string(res.rel_residual));
        next.c = res.x;
        picard_iters = it + 1;

        if (ctl.picard_max <= 1) break;
        double dc = 0.0;
        for (int i = 0; i < n; ++i)
            dc = std::max(dc, std::abs(next.c[i] - c_guess[i]));
        c_guess = next.c;
        if (dc <= ctl.picard_tol) break;
        if (it == ctl.picard_max - 1)
            fail("transport: Picard coupling loop did not converge within " +
                 std::to_string(ctl.picard_max) + " iterations");
    }

    StepRecord rec;
    rec.time = t_new;
    rec.dt = dt;
    rec.compat_residual = std::abs(compat);
    rec.lambda = s.lambda;
    rec.a_max = s.a_max;
    rec.b_max = s.b_max;
    rec.picard_iterations = picard_iters;

    rec.min_c = *std::min_element(next.c.begin(), next.c.end());
    rec.max_c = *std::max_element(next.c.begin(), next.c.end());
    if (rec.min_c < -ctl.max_principle_tol || rec.max_c > 1.0 + ctl.max_principle_tol)
        fail("transport: maximum principle violated, c range [" +
             std::to_string(rec.min_c) + ", " + std::to_string(rec.max_c) + "]");

    // Discrete mass balance (pre-clamp):
    //   sum Phi (c_new - c_old) vol = dt (sum chat a nu vol - sum c_new b nu vol)
    double lhs = 0.0, inj = 0.0, prod = 0.0, pore = 0.0;
    for (int i = 0; i < n; ++i) {
        lhs += cf.phi[i] * (next.c[i] - state.c[i]) * vol;
        inj += s.chat_qI[i] * vol;
        prod += next.c[i] * s.qP[i] * vol;
        pore += cf.phi[i] * vol;
    }
    rec.mass_residual_rel = std::abs(lhs - dt * (inj - prod)) / pore;
    next.injected_mass = state.injected_mass + dt * inj;
    next.produced_mass = state.produced_mass + dt * prod;

    // Discrete dispersion bilinear form: normal two-point part (implicit,
    // new concentration) plus the limited explicit cross work.
    double work = 0.0, dhalf = 0.0, dtderiv = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            int f = g.xface(i, j);
            double delta = next.c[g.cell_index(i, j)] - next.c[g.cell_index(i - 1, j)];
            double nn = tsys.disp_trans.x[f] * delta * delta;
            dhalf += nn;
            work += nn - tsys.cross_flux.x[f] * delta;
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            int f = g.yface(i, j);
            double delta = next.c[g.cell_index(i, j)] - next.c[g.cell_index(i, j - 1)];
            double nn = tsys.disp_trans.y[f] * delta * delta;
            dhalf += nn;
            work += nn - tsys.cross_flux.y[f] * delta;
        }
    rec.dispersion_work = work;
    rec.dhalf_grad_sq = dhalf;

    for (int i = 0; i < n; ++i) {
        double q = cf.phi[i] * (next.c[i] - state.c[i]) / dt;
        dtderiv += q * q * vol;
        next.c[i] = clamp01(next.c[i]);
    }
    rec.dt_deriv_l2 = std::sqrt(dtderiv);

    double e = 0.0, vmax = 0.0;
    for (int i = 0; i < n; ++i) {
        e += cf.phi[i] * next.c[i] * next.c[i] * vol;
        vmax = std::max(vmax, std::hypot(next.u_cell[i].x, next.u_cell[i].y));
    }
    rec.energy_l2 = e;
    rec.max_abs_velocity = vmax;

    next.time = t_new;
    return {std::move(next), rec};
}

}  // namespace mds
