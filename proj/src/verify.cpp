#include "mds/verify.hpp"

#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <sstream>

namespace mds {

double l2_diff(const Grid& g, const CellField& a, const CellField& b) {
    double s = 0.0;
    for (int i = 0; i < g.num_cells(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s * g.cell_volume());
}

InvariantReport audit_run(const RunResult& rr, const SimConfig& cfg) {
    InvariantReport rep;
    rep.steps = rr.records;
    rep.nu_mass = cfg.wells.total_mass();

    const double vol = rr.grid.cell_volume();
    for (int i = 0; i < rr.grid.num_cells(); ++i)
        rep.energy_initial += 0.5 * rr.coeffs.phi[i] * rr.initial.c[i] *
                              rr.initial.c[i] * vol;
    for (const auto& r : rr.records) {
        rep.a_sup = std::max(rep.a_sup, r.a_max);
        rep.b_sup = std::max(rep.b_sup, r.b_max);
    }

    InvariantCheck maxp{"max_principle", 0.0, cfg.controls.max_principle_tol, true};
    InvariantCheck mass{"mass_balance", 0.0, 10.0 * cfg.controls.transport_tol, true};
    InvariantCheck compat{"compatibility", 0.0, 1e-13, true};
    InvariantCheck energy{"energy_estimate",
                          -std::numeric_limits<double>::infinity(), 1e-8, true};
    InvariantCheck dhalf{"dhalf_gradient_bound",
                         -std::numeric_limits<double>::infinity(), 1e-8, true};
    InvariantCheck dtd{"time_derivative_finite", 0.0,
                       std::numeric_limits<double>::infinity(), true};

    double disp_accum = 0.0, dhalf_accum = 0.0;
    for (const auto& r : rr.records) {
        maxp.worst = std::max({maxp.worst, -r.min_c, r.max_c - 1.0});
        mass.worst = std::max(mass.worst, r.mass_residual_rel);
        compat.worst = std::max(compat.worst, r.compat_residual);

        disp_accum += r.dt * r.dispersion_work;
        dhalf_accum += r.dt * r.dhalf_grad_sq;
        // Energy bound from data constants only (Prop. 3.2 shape):
        //   1/2 ||sqrt(Phi) c(s)||^2 + sum dt (D grad c, grad c)
        //   <= 1/2 ||sqrt(Phi) c0||^2 + (sup a + sup b) nu(Omega) s.
        double rhs = rep.energy_initial +
                     (rep.a_sup + rep.b_sup) * rep.nu_mass * r.time;
        double lhs = 0.5 * r.energy_l2 + disp_accum;
        double denom = std::max(rhs, 1e-300);
        energy.worst = std::max(energy.worst, (lhs - rhs) / denom);
        dhalf.worst = std::max(dhalf.worst, (dhalf_accum - rhs) / denom);
        dtd.worst = std::max(dtd.worst, r.dt_deriv_l2);
    }
    maxp.pass = maxp.worst <= maxp.tolerance;
    mass.pass = mass.worst <= mass.tolerance;
    compat.pass = compat.worst <= compat.tolerance;
    energy.pass = energy.worst <= energy.tolerance;
    dhalf.pass = dhalf.worst <= dhalf.tolerance;
    dtd.pass = std::isfinite(dtd.worst);

    rep.checks = {maxp, mass, compat, energy, dhalf, dtd};
    return rep;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

double run_error_pressure(int n) {
    Grid g = build_grid(n, n, 1.0, 1.0);
    CoefficientFields cf{CellField(g.num_cells(), 1.0),
                         CellField(g.num_cells(), 1.0),
                         CellField(g.num_cells(), 1.0)};
    FluidModel fm;  // mu = 1, no gravity
    CellField c(g.num_cells(), 0.0);
    CellField src(g.num_cells());
    for (int i = 0; i < g.num_cells(); ++i) {
        Vec2 x = g.cell_center(i);
        src[i] = 2.0 * kPi * kPi * std::cos(kPi * x.x) * std::cos(kPi * x.y);
    }
    PressureSystem sys = assemble_pressure(g, cf, fm, c, src);
    CellField p = solve_pressure(sys, 1e-13, 100000);

    CellField pex(g.num_cells());
    double mean = 0.0;
    for (int i = 0; i < g.num_cells(); ++i) {
        Vec2 x = g.cell_center(i);
        pex[i] = std::cos(kPi * x.x) * std::cos(kPi * x.y);
        mean += pex[i];
    }
    mean /= g.num_cells();
    for (double& v : pex) v -= mean;
    return l2_diff(g, p, pex);
}

// Manufactured transport problem: divergence-free stream-function velocity
// with u.n = 0, near-isotropic D ~ phi dm I, and exact solution
//   c(x,y,t) = 0.5 + 0.25 cos(pi x) cos(pi y) e^{-t}.
struct TransportMms {
    double dm = 0.05;

    static double exact(Vec2 x, double t) {
        return 0.5 + 0.25 * std::cos(kPi * x.x) * std::cos(kPi * x.y) * std::exp(-t);
    }
    double source(Vec2 x, double t) const {
        double cc = std::cos(kPi * x.x) * std::cos(kPi * x.y) * std::exp(-t);
        double dtc = -0.25 * cc;
        double lap = -0.5 * kPi * kPi * cc;
        double sx = std::sin(kPi * x.x), sy = std::sin(kPi * x.y);
        double cx = std::cos(kPi * x.x), cy = std::cos(kPi * x.y);
        double ugradc = -0.25 * kPi * std::exp(-t) *
                        (sx * cy * sx * cy - cx * sy * cx * sy);
        return dtc - dm * lap + ugradc;
    }
    // Exact face-integrated fluxes from the stream function
    // psi = sin(pi x) sin(pi y) / pi, so the discrete field is exactly
    // divergence-free and vanishes on the boundary.
    static double psi(double x, double y) {
        return std::sin(kPi * x) * std::sin(kPi * y) / kPi;
    }
    static FaceField fluxes(const Grid& g) {
        FaceField u = make_face_field(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i)
                u.x[g.xface(i, j)] =
                    psi(i * g.dx, (j + 1) * g.dy) - psi(i * g.dx, j * g.dy);
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                u.y[g.yface(i, j)] =
                    psi(i * g.dx, j * g.dy) - psi((i + 1) * g.dx, j * g.dy);
        return u;
    }

    CellField solve(const Grid& g, double final_time, double dt_step) const {
        CoefficientFields cf{CellField(g.num_cells(), 1.0),
                             CellField(g.num_cells(), 1.0),
                             CellField(g.num_cells(), 1.0)};
        DispersionModel dmod;
        dmod.dm = dm;
        dmod.dl = 1e-12;  // keeps D effectively isotropic
        dmod.dt = 1e-12;
        FaceField u = fluxes(g);
        std::vector<Vec2> uc = cell_velocity(g, u);
        CellField zero(g.num_cells(), 0.0);
        CellField c(g.num_cells());
        for (int i = 0; i < g.num_cells(); ++i)
            c[i] = exact(g.cell_center(i), 0.0);
        double t = 0.0;
        while (t < final_time - 1e-12) {
            double dt = std::min(dt_step, final_time - t);
            CellField s(g.num_cells());
            for (int i = 0; i < g.num_cells(); ++i)
                s[i] = source(g.cell_center(i), t + dt);
            TransportSystem sys = assemble_transport(g, cf, dmod, c, u, uc,
                                                     zero, zero, zero, dt, &s);
            SolveResult res = solve_bicgstab(sys.matrix, sys.rhs, 1e-12, 100000, &c);
            if (!res.converged) fail("mms transport solve failed to converge");
            c = res.x;
            t += dt;
        }
        return c;
    }
};

std::vector<double> observed_orders(const std::vector<double>& errs,
                                    double ratio = 2.0) {
    std::vector<double> orders;
    for (size_t i = 0; i + 1 < errs.size(); ++i)
        orders.push_back(std::log(errs[i] / errs[i + 1]) / std::log(ratio));
    return orders;
}

template <typename F>
std::vector<RunResult> run_many(const std::vector<SimConfig>& cfgs, int jobs) {
    std::vector<RunResult> out(cfgs.size());
    if (jobs <= 1) {
        for (size_t i = 0; i < cfgs.size(); ++i) out[i] = run_simulation(cfgs[i]);
        return out;
    }
    std::vector<std::future<RunResult>> futs;
    for (const auto& c : cfgs)
        futs.push_back(std::async(std::launch::async,
                                  [&c] { return run_simulation(c); }));
    for (size_t i = 0; i < cfgs.size(); ++i) out[i] = futs[i].get();
    return out;
}

}  // namespace

SweepReport manufactured_convergence(const std::string& case_id,
                                     const std::vector<int>& grid_levels) {
    SweepReport rep;
    if (case_id == "pressure") {
        require(grid_levels.size() >= 3, "convergence: need >= 3 grid levels");
        rep.parameter = "h";
        for (int n : grid_levels) {
            rep.values.push_back(1.0 / n);
            rep.diff_norms.push_back(run_error_pressure(n));
        }
        rep.orders = observed_orders(rep.diff_norms);
        rep.pass = true;
        for (double o : rep.orders) rep.pass = rep.pass && o >= 1.9;
    } else if (case_id == "transport-space") {
        require(grid_levels.size() >= 3, "convergence: need >= 3 grid levels");
        rep.parameter = "h";
        TransportMms mms;
        const double final_time = 0.1;
        for (int n : grid_levels) {
            Grid g = build_grid(n, n, 1.0, 1.0);
            CellField c = mms.solve(g, final_time, final_time / (2.0 * n));
            CellField cex(g.num_cells());
            for (int i = 0; i < g.num_cells(); ++i)
                cex[i] = TransportMms::exact(g.cell_center(i), final_time);
            rep.values.push_back(1.0 / n);
            rep.diff_norms.push_back(l2_diff(g, c, cex));
        }
        rep.orders = observed_orders(rep.diff_norms);
        rep.pass = true;
        for (double o : rep.orders) rep.pass = rep.pass && o >= 0.9;
    } else if (case_id == "transport-time") {
        rep.parameter = "dt";
        TransportMms mms;
        const double final_time = 0.2;
        int n = grid_levels.empty() ? 32 : grid_levels.front();
        Grid g = build_grid(n, n, 1.0, 1.0);
        std::vector<CellField> sols;
        int halvings = 4;
        for (int l = 0; l < halvings; ++l) {
            double dt = final_time / (5 << l);
            rep.values.push_back(dt);
            sols.push_back(mms.solve(g, final_time, dt));
        }
        // Richardson: difference of consecutive-dt solutions on a fixed grid.
        std::vector<double> diffs;
        for (size_t i = 0; i + 1 < sols.size(); ++i)
            diffs.push_back(l2_diff(g, sols[i], sols[i + 1]));
        rep.diff_norms = diffs;
        rep.orders = observed_orders(diffs);
        rep.pass = true;
        for (double o : rep.orders) rep.pass = rep.pass && o >= 0.9;
    } else {
        fail("manufactured_convergence: unknown case '" + case_id + "'");
    }
    return rep;
}

SweepReport regularization_sweep(const SimConfig& cfg,
                                 const std::vector<double>& eps_list,
                                 double far_field_radius, int jobs) {
    require(eps_list.size() >= 3, "eps sweep: need >= 3 values");
    Grid g = build_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
    double h = std::max(g.dx, g.dy);
    for (double e : eps_list)
        require(e == 0.0 || e >= 2.0 * h,
                "eps sweep: epsilon under-resolved on the grid (need >= 2h or 0)");
    if (far_field_radius < 0.0) far_field_radius = 4.0 * h;

    SweepReport rep;
    rep.parameter = "eps";
    rep.values = eps_list;

    std::vector<SimConfig> cfgs;
    for (double e : eps_list) {
        SimConfig c = cfg;
        c.wells.epsilon = e;
        cfgs.push_back(c);
    }
    std::vector<RunResult> runs = run_many<RunResult>(cfgs, jobs);

    // Far-field mask: faces whose both cells are farther than r0 from every
    // atom (near-well pressure is singular in the atomic limit).
    auto far = [&](int cell) {
        Vec2 x = g.cell_center(cell);
        for (const auto& a : cfg.wells.atoms) {
            double d = std::hypot(x.x - a.pos.x, x.y - a.pos.y);
            if (d <= far_field_radius) return false;
        }
        return true;
    };

    auto grad_diff = [&](const CellField& pa, const CellField& pb) {
        double s = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i) {
                int l = g.cell_index(i - 1, j), r = g.cell_index(i, j);
                if (!far(l) || !far(r)) continue;
                double da = (pa[r] - pa[l]) / g.dx - (pb[r] - pb[l]) / g.dx;
                s += da * da * g.xface_area() * g.dx;
            }
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                int l = g.cell_index(i, j - 1), r = g.cell_index(i, j);
                if (!far(l) || !far(r)) continue;
                double da = (pa[r] - pa[l]) / g.dy - (pb[r] - pb[l]) / g.dy;
                s += da * da * g.yface_area() * g.dy;
            }
        return std::sqrt(s);
    };

    for (size_t i = 0; i + 1 < runs.size(); ++i) {
        rep.diff_norms.push_back(
            l2_diff(g, runs[i].final_state.c, runs[i + 1].final_state.c));
        rep.grad_diff_norms.push_back(
            grad_diff(runs[i].final_state.p, runs[i + 1].final_state.p));
    }

    bool all_zero = true, decreasing = true;
    for (size_t i = 0; i < rep.diff_norms.size(); ++i) {
        all_zero = all_zero && rep.diff_norms[i] == 0.0 &&
                   rep.grad_diff_norms[i] == 0.0;
        if (i > 0)
            decreasing = decreasing &&
                         rep.diff_norms[i] < rep.diff_norms[i - 1] &&
                         rep.grad_diff_norms[i] < rep.grad_diff_norms[i - 1];
    }
    rep.pass = all_zero || decreasing;
    return rep;
}

SweepReport truncation_sweep(const SimConfig& cfg,
                             const std::vector<double>& k_list, int jobs) {
    require(k_list.size() >= 2, "k sweep: need >= 2 truncation levels");
    SweepReport rep;
    rep.parameter = "k";
    rep.values = k_list;

    SimConfig base = cfg;
    base.dispersion.trunc_k = std::numeric_limits<double>::infinity();
    RunResult ref = run_simulation(base);
    double vmax = 0.0;
    for (const auto& r : ref.records) vmax = std::max(vmax, r.max_abs_velocity);

    std::vector<SimConfig> cfgs;
    for (double k : k_list) {
        SimConfig c = cfg;
        c.dispersion.trunc_k = k;
        cfgs.push_back(c);
    }
    std::vector<RunResult> runs = run_many<RunResult>(cfgs, jobs);

    for (const auto& r : runs)
        rep.diff_norms.push_back(l2_diff(ref.grid, r.final_state.c, ref.final_state.c));

    rep.pass = true;
    for (size_t i = 0; i < k_list.size(); ++i) {
        if (i > 0 && rep.diff_norms[i] > rep.diff_norms[i - 1] * (1.0 + 1e-12))
            rep.pass = false;
        if (k_list[i] >= vmax && rep.diff_norms[i] != 0.0) rep.pass = false;
    }
    return rep;
}

std::string invariant_report_csv(const InvariantReport& rep) {
    std::ostringstream os;
    os.precision(17);
    os << "step,time,dt,min_c,max_c,mass_residual_rel,compat_residual,lambda,"
          "energy_l2,dispersion_work,dhalf_grad_sq,dt_deriv_l2,"
          "picard_iterations,max_abs_velocity\n";
    int n = 0;
    for (const auto& r : rep.steps) {
        os << n++ << ',' << r.time << ',' << r.dt << ',' << r.min_c << ','
           << r.max_c << ',' << r.mass_residual_rel << ',' << r.compat_residual
           << ',' << r.lambda << ',' << r.energy_l2 << ',' << r.dispersion_work
           << ',' << r.dhalf_grad_sq << ',' << r.dt_deriv_l2 << ','
           << r.picard_iterations << ',' << r.max_abs_velocity << '\n';
    }
    os << "\ncheck,worst,tolerance,pass\n";
    for (const auto& c : rep.checks)
        os << c.name << ',' << c.worst << ',' << c.tolerance << ','
           << (c.pass ? "pass" : "fail") << '\n';
    return os.str();
}

std::string sweep_report_csv(const SweepReport& rep) {
    std::ostringstream os;
    os.precision(17);
    os << "parameter,value,diff_norm,grad_diff_norm,order\n";
    for (size_t i = 0; i < rep.values.size(); ++i) {
        os << rep.parameter << ',' << rep.values[i] << ',';
        if (i < rep.diff_norms.size()) os << rep.diff_norms[i];
        os << ',';
        if (i < rep.grad_diff_norms.size()) os << rep.grad_diff_norms[i];
        os << ',';
        if (i < rep.orders.size()) os << rep.orders[i];
        os << '\n';
    }
    os << "\nresult," << (rep.pass ? "pass" : "fail") << '\n';
    return os.str();
}

}  // namespace mds
