#pragma once

// Measure-valued wells: the measure nu as weighted point atoms, per-atom
// rate and injected-concentration schedules, tent-kernel mollification into
// a cell density nu_eps, and the compatibility-preserving rate correction
// that rescales the injection side so discrete injection equals discrete
// production at every time level.

#include <utility>
#include <vector>

#include "mds/fields.hpp"
#include "mds/grid.hpp"

namespace mds {

// Piecewise-constant-in-time table: value of the last entry with t_i <= t.
struct Schedule {
    std::vector<std::pair<double, double>> table;  // (time, value), sorted

    Schedule() = default;
    explicit Schedule(double v) : table{{0.0, v}} {}

    double at(double t) const {
        double v = table.empty() ? 0.0 : table.front().second;
        for (const auto& [ti, vi] : table) {
            if (ti <= t) v = vi;
            else break;
        }
        return v;
    }
    double max_value() const {
        double m = 0.0;
        for (const auto& [ti, vi] : table) m = vi > m ? vi : m;
        return m;
    }
};

enum class WellRole { inject, produce };

struct WellAtom {
    Vec2 pos;
    double weight = 1.0;  // atom mass in nu
    WellRole role = WellRole::inject;
    Schedule rate;        // a (injector) or b (producer) evaluated at the atom
    Schedule c_hat;       // injected concentration, injectors only
};

struct WellSet {
    std::vector<WellAtom> atoms;
    double epsilon = 0.0;  // mollification radius; 0 = atomic deposition

    double total_mass() const {
        double m = 0.0;
        for (const auto& a : atoms) m += a.weight;
        return m;
    }
};

// Per-atom mollified densities plus their sum nu_eps. Each atom density is
// nonnegative with discrete integral exactly equal to the atom weight.
struct RegularizedWells {
    std::vector<CellField> atom_density;
    CellField nu;  // sum of atom densities
};

// Mollify one atom: eps = 0 deposits weight/volume in the containing cell;
// eps > 0 uses a product tent kernel sampled at cell centers and rescaled so
// the discrete integral equals the weight (boundary clipping compensated by
// the rescale).
CellField regularize_atom(const Grid& g, Vec2 pos, double weight, double eps);

RegularizedWells regularize_wells(const WellSet& w, const Grid& g);

// Convenience: just the summed density field.
CellField regularize_measure(const WellSet& w, const Grid& g);

struct CorrectedRates {
    CellField a_eff;
    CellField b_eff;
    double lambda = 1.0;  // scale applied to the injection side
};

// Rescale a so that sum(a nu) vol == sum(b nu) vol exactly. Throws when
// production is active with no injection.
CorrectedRates corrected_rates(const CellField& a, const CellField& b,
                               const CellField& nu, double cell_volume);

struct SourceFields {
    CellField qI;       // a_eff * nu_eps (injection density)
    CellField qP;       // b * nu_eps (production density)
    CellField chat_qI;  // c_hat-weighted injection density
    double lambda = 1.0;
    double a_max = 0.0;  // max cell value of the corrected rate a_eff
    double b_max = 0.0;
};

SourceFields source_fields(const WellSet& w, const RegularizedWells& rw,
                           const Grid& g, double t);

}  // namespace mds
