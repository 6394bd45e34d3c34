#pragma once

// Run configuration: flat sectioned key-value text, hypothesis validation,
// embedded presets, and the time-loop driver.

#include <string>
#include <vector>

#include "mds/fields.hpp"
#include "mds/grid.hpp"
#include "mds/transport.hpp"
#include "mds/wells.hpp"

namespace mds {

// Spatial field spec: "const:v", "checkerboard:v1:v2" (per-cell parity), or
// "box:x0:y0:x1:y1:inside:outside".
struct FieldSpec {
    std::string kind = "const";
    std::vector<double> params{0.0};
};

CellField evaluate_field_spec(const FieldSpec& fs, const Grid& g);

struct SimConfig {
    int nx = 16, ny = 16;
    double lx = 1.0, ly = 1.0;

    double final_time = 1.0;
    double dt = 0.01;

    FieldSpec phi{"const", {1.0}};
    FieldSpec kx{"const", {1.0}};
    FieldSpec ky{"const", {1.0}};
    double phi_star = 0.1;
    double k_star = 0.1;

    FluidModel fluid;
    DispersionModel dispersion;

    WellSet wells;
    FieldSpec c0{"const", {0.0}};

    StepControls controls;

    int output_cadence = 0;  // 0 = final state only
    std::string output_dir = "out";
};

// Parse the sectioned key-value format; throws on malformed input or any
// hypothesis violation, naming the violated bound.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::string& path);

// Re-run the hypothesis checks on an already-built config.
void validate_config(const SimConfig& cfg);

// Embedded presets: "equilibrium", "quarter-five-spot-16",
// "quarter-five-spot-32", "quarter-five-spot-gravity-16", "hydrostatic".
SimConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

struct RunResult {
    Grid grid;
    CoefficientFields coeffs;
    SimState initial;
    SimState final_state;
    std::vector<StepRecord> records;
    // Snapshots taken at the configured cadence (step index, state).
    std::vector<std::pair<int, SimState>> snapshots;
};

RunResult run_simulation(const SimConfig& cfg);

}  // namespace mds
