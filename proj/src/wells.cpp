#include "mds/wells.hpp"

#include <algorithm>
#include <cmath>

namespace mds {

namespace {
double hat(double r) { return std::max(0.0, 1.0 - std::abs(r)); }
}  // namespace

CellField regularize_atom(const Grid& g, Vec2 pos, double weight, double eps) {
    require(weight > 0.0, "wells: atom weights must be positive");
    require(eps >= 0.0, "wells: mollification radius must be >= 0");
    require(pos.x >= 0.0 && pos.x <= g.lx && pos.y >= 0.0 && pos.y <= g.ly,
            "wells: atom outside domain");
    const int n = g.num_cells();
    const double vol = g.cell_volume();
    CellField dens(n, 0.0);
    if (eps > 0.0) {
        double raw_mass = 0.0;
        for (int idx = 0; idx < n; ++idx) {
            Vec2 xc = g.cell_center(idx);
            double v = hat((xc.x - pos.x) / eps) * hat((xc.y - pos.y) / eps);
            dens[idx] = v;
            raw_mass += v * vol;
        }
        if (raw_mass > 0.0) {
            double scale = weight / raw_mass;
            for (double& v : dens) v *= scale;
            return dens;
        }
        // Kernel support missed every cell center; fall through to deposition.
        std::fill(dens.begin(), dens.end(), 0.0);
    }
    dens[cell_of_point(g, pos)] = weight / vol;
    return dens;
}

RegularizedWells regularize_wells(const WellSet& w, const Grid& g) {
    RegularizedWells rw;
    rw.nu.assign(g.num_cells(), 0.0);
    for (const auto& atom : w.atoms) {
        rw.atom_density.push_back(
            regularize_atom(g, atom.pos, atom.weight, w.epsilon));
        const CellField& d = rw.atom_density.back();
        for (int i = 0; i < g.num_cells(); ++i) rw.nu[i] += d[i];
    }
    return rw;
}

CellField regularize_measure(const WellSet& w, const Grid& g) {
    return regularize_wells(w, g).nu;
}

CorrectedRates corrected_rates(const CellField& a, const CellField& b,
                               const CellField& nu, double cell_volume) {
    double ia = 0.0, ib = 0.0;
    for (size_t i = 0; i < nu.size(); ++i) {
        ia += a[i] * nu[i] * cell_volume;
        ib += b[i] * nu[i] * cell_volume;
    }
    CorrectedRates cr{a, b, 1.0};
    if (ia > 0.0) {
        cr.lambda = ib / ia;
        for (double& v : cr.a_eff) v *= cr.lambda;
    } else if (ib > 0.0) {
        fail("wells: production is active but discrete injection integral is zero");
    }
    return cr;
}

SourceFields source_fields(const WellSet& w, const RegularizedWells& rw,
                           const Grid& g, double t) {
    const int n = g.num_cells();
    const double vol = g.cell_volume();
    SourceFields s;
    s.qI.assign(n, 0.0);
    s.qP.assign(n, 0.0);
    s.chat_qI.assign(n, 0.0);

    double ia = 0.0, ib = 0.0;
    for (size_t k = 0; k < w.atoms.size(); ++k) {
        const auto& atom = w.atoms[k];
        const CellField& d = rw.atom_density[k];
        double r = atom.rate.at(t);
        require(r >= 0.0, "(2.9) well rates must be nonnegative");
        if (atom.role == WellRole::inject) {
            double chat = clamp01(atom.c_hat.at(t));
            for (int i = 0; i < n; ++i) {
                s.qI[i] += r * d[i];
                s.chat_qI[i] += chat * r * d[i];
            }
            ia += r * atom.weight;
        } else {
            for (int i = 0; i < n; ++i) s.qP[i] += r * d[i];
            ib += r * atom.weight;
        }
    }

    if (ia > 0.0) {
        s.lambda = ib / ia;
        for (int i = 0; i < n; ++i) {
            s.qI[i] *= s.lambda;
            s.chat_qI[i] *= s.lambda;
        }
    } else if (ib > 0.0) {
        fail("wells: production is active but discrete injection integral is zero");
    }

    // Exact discrete compatibility: remove the last rounding ulps so that
    // sum(qI) vol == sum(qP) vol to machine precision on every grid.
    double si = 0.0, sp = 0.0;
    for (int i = 0; i < n; ++i) {
        si += s.qI[i] * vol;
        sp += s.qP[i] * vol;
    }
    if (si > 0.0) {
        double fix = sp / si;
        for (int i = 0; i < n; ++i) {
            s.qI[i] *= fix;
            s.chat_qI[i] *= fix;
        }
        s.lambda *= fix;
    }

    for (int i = 0; i < n; ++i) {
        if (rw.nu[i] > 0.0) {
            s.a_max = std::max(s.a_max, s.qI[i] / rw.nu[i]);
            s.b_max = std::max(s.b_max, s.qP[i] / rw.nu[i]);
        }
    }
    return s;
}

}  // namespace mds
