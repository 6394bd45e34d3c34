#pragma once

// Numerical checks of the a priori estimates: per-run invariant audit
// (maximum principle, mass balance, compatibility, discrete energy
// inequality), manufactured-solution convergence orders, and the
// regularization (epsilon) and truncation (k) sweeps.

#include <string>
#include <vector>

#include "mds/config.hpp"

namespace mds {

struct InvariantCheck {
    std::string name;
    double worst = 0.0;      // worst observed value across steps
    double tolerance = 0.0;
    bool pass = false;
};

struct InvariantReport {
    std::vector<StepRecord> steps;
    std::vector<InvariantCheck> checks;
    // Energy bound pieces, computed from data constants only.
    double energy_initial = 0.0;  // 1/2 ||sqrt(Phi) c0||^2
    double a_sup = 0.0, b_sup = 0.0, nu_mass = 0.0;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

InvariantReport audit_run(const RunResult& rr, const SimConfig& cfg);

struct SweepReport {
    std::string parameter;            // "h", "dt", "eps", "k"
    std::vector<double> values;
    std::vector<double> diff_norms;   // pairwise or vs-reference norms
    std::vector<double> grad_diff_norms;  // used by the eps sweep
    std::vector<double> orders;       // observed convergence orders
    bool pass = false;
};

// Manufactured-solution convergence. Cases: "pressure" (elliptic, L2 order
// of p), "transport-space" (prescribed divergence-free velocity, L2 order
// of c), "transport-time" (Richardson order under dt halving).
SweepReport manufactured_convergence(const std::string& case_id,
                                     const std::vector<int>& grid_levels);

// Runs cfg once per epsilon (descending, last may be 0) and reports
// consecutive concentration differences plus off-well pressure-gradient
// differences. Pass = both sequences strictly decreasing.
SweepReport regularization_sweep(const SimConfig& cfg,
                                 const std::vector<double>& eps_list,
                                 double far_field_radius = -1.0, int jobs = 1);

// Runs cfg untruncated and once per k (ascending); reports ||c_k - c_inf||.
// Pass = non-increasing in k, and exact zero once k exceeds the observed
// maximum cell speed of the untruncated run.
SweepReport truncation_sweep(const SimConfig& cfg,
                             const std::vector<double>& k_list, int jobs = 1);

// CSV emission with fixed headers.
std::string invariant_report_csv(const InvariantReport& rep);
std::string sweep_report_csv(const SweepReport& rep);

// Discrete L2 norm of the difference of two cell fields.
double l2_diff(const Grid& g, const CellField& a, const CellField& b);

}  // namespace mds
