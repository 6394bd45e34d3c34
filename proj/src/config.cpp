#include "mds/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace mds {

CellField evaluate_field_spec(const FieldSpec& fs, const Grid& g) {
    CellField f(g.num_cells(), 0.0);
    if (fs.kind == "const") {
        require(fs.params.size() == 1, "config: const field spec takes one value");
        std::fill(f.begin(), f.end(), fs.params[0]);
    } else if (fs.kind == "checkerboard") {
        require(fs.params.size() == 2, "config: checkerboard takes two values");
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                f[g.cell_index(i, j)] = fs.params[(i + j) % 2];
    } else if (fs.kind == "box") {
        require(fs.params.size() == 6,
                "config: box takes x0:y0:x1:y1:inside:outside");
        for (int idx = 0; idx < g.num_cells(); ++idx) {
            Vec2 x = g.cell_center(idx);
            bool in = x.x >= fs.params[0] && x.y >= fs.params[1] &&
                      x.x <= fs.params[2] && x.y <= fs.params[3];
            f[idx] = in ? fs.params[4] : fs.params[5];
        }
    } else {
        fail("config: unknown field spec kind '" + fs.kind + "'");
    }
    return f;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

double to_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    size_t pos = 0;
    double v = std::stod(s, &pos);
    require(pos == s.size(), "config: malformed number '" + s + "'");
    return v;
}

FieldSpec parse_field_spec(const std::string& s) {
    FieldSpec fs;
    std::stringstream ss(s);
    std::string tok;
    std::getline(ss, fs.kind, ':');
    fs.params.clear();
    while (std::getline(ss, tok, ':')) fs.params.push_back(to_double(tok));
    return fs;
}

Schedule parse_schedule(const std::string& s) {
    Schedule sc;
    std::stringstream ss(s);
    std::string entry;
    while (std::getline(ss, entry, ',')) {
        auto colon = entry.find(':');
        if (colon == std::string::npos) {
            sc.table.emplace_back(0.0, to_double(entry));
        } else {
            sc.table.emplace_back(to_double(entry.substr(0, colon)),
                                  to_double(entry.substr(colon + 1)));
        }
    }
    std::sort(sc.table.begin(), sc.table.end());
    require(!sc.table.empty(), "config: empty schedule");
    return sc;
}

WellAtom parse_well(const std::string& s) {
    std::stringstream ss(s);
    WellAtom w;
    std::string role;
    ss >> w.pos.x >> w.pos.y >> w.weight >> role;
    require(!ss.fail(), "config: malformed well line '" + s + "'");
    if (role == "inject")
        w.role = WellRole::inject;
    else if (role == "produce")
        w.role = WellRole::produce;
    else
        fail("config: well role must be inject or produce, got '" + role + "'");
    w.rate = Schedule(1.0);
    w.c_hat = Schedule(1.0);
    std::string kv;
    while (ss >> kv) {
        auto eq = kv.find('=');
        require(eq != std::string::npos, "config: malformed well option '" + kv + "'");
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "rate")
            w.rate = parse_schedule(val);
        else if (key == "chat")
            w.c_hat = parse_schedule(val);
        else
            fail("config: unknown well option '" + key + "'");
    }
    return w;
}

}  // namespace

SimConfig parse_config(const std::string& text) {
    SimConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            require(line.back() == ']', "config: malformed section at line " +
                                            std::to_string(lineno));
            section = line.substr(1, line.size() - 2);
            continue;
        }
        auto eq = line.find('=');
        require(eq != std::string::npos,
                "config: expected key = value at line " + std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));

        if (section == "grid") {
            if (key == "nx") cfg.nx = static_cast<int>(to_double(val));
            else if (key == "ny") cfg.ny = static_cast<int>(to_double(val));
            else if (key == "lx") cfg.lx = to_double(val);
            else if (key == "ly") cfg.ly = to_double(val);
            else fail("config: unknown key grid." + key);
        } else if (section == "time") {
            if (key == "T") cfg.final_time = to_double(val);
            else if (key == "dt") cfg.dt = to_double(val);
            else fail("config: unknown key time." + key);
        } else if (section == "rock") {
            if (key == "phi") cfg.phi = parse_field_spec(val);
            else if (key == "kx") cfg.kx = parse_field_spec(val);
            else if (key == "ky") cfg.ky = parse_field_spec(val);
            else if (key == "K") { cfg.kx = parse_field_spec(val); cfg.ky = cfg.kx; }
            else if (key == "phi_star") cfg.phi_star = to_double(val);
            else if (key == "k_star") cfg.k_star = to_double(val);
            else fail("config: unknown key rock." + key);
        } else if (section == "fluid") {
            if (key == "mu0") cfg.fluid.mu0 = to_double(val);
            else if (key == "M") cfg.fluid.M = to_double(val);
            else if (key == "rho0") cfg.fluid.rho0 = to_double(val);
            else if (key == "rho1") cfg.fluid.rho1 = to_double(val);
            else if (key == "gravity") {
                std::stringstream ss(val);
                ss >> cfg.fluid.gravity.x >> cfg.fluid.gravity.y;
                require(!ss.fail(), "config: gravity takes two components");
            } else fail("config: unknown key fluid." + key);
        } else if (section == "dispersion") {
            if (key == "dm") cfg.dispersion.dm = to_double(val);
            else if (key == "dl") cfg.dispersion.dl = to_double(val);
            else if (key == "dt") cfg.dispersion.dt = to_double(val);
            else if (key == "trunc_k") cfg.dispersion.trunc_k = to_double(val);
            else fail("config: unknown key dispersion." + key);
        } else if (section == "wells") {
            if (key == "epsilon") cfg.wells.epsilon = to_double(val);
            else if (key == "well") cfg.wells.atoms.push_back(parse_well(val));
            else fail("config: unknown key wells." + key);
        } else if (section == "init") {
            if (key == "c0") cfg.c0 = parse_field_spec(val);
            else fail("config: unknown key init." + key);
        } else if (section == "solver") {
            if (key == "pressure_tol") cfg.controls.pressure_tol = to_double(val);
            else if (key == "transport_tol") cfg.controls.transport_tol = to_double(val);
            else if (key == "max_iterations") cfg.controls.max_iterations = static_cast<int>(to_double(val));
            else if (key == "picard_max") cfg.controls.picard_max = static_cast<int>(to_double(val));
            else if (key == "picard_tol") cfg.controls.picard_tol = to_double(val);
            else fail("config: unknown key solver." + key);
        } else if (section == "output") {
            if (key == "cadence") cfg.output_cadence = static_cast<int>(to_double(val));
            else if (key == "dir") cfg.output_dir = val;
            else fail("config: unknown key output." + key);
        } else {
            fail("config: unknown section '" + section + "'");
        }
    }
    validate_config(cfg);
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate_config(const SimConfig& cfg) {
    require(cfg.final_time > 0.0, "(2.1) final time T must be positive");
    require(cfg.dt > 0.0, "config: dt must be positive");
    Grid g = build_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);

    CoefficientFields cf{evaluate_field_spec(cfg.phi, g),
                         evaluate_field_spec(cfg.kx, g),
                         evaluate_field_spec(cfg.ky, g)};
    validate_coefficients(cf, cfg.phi_star, cfg.k_star);

    require(cfg.fluid.mu0 > 0.0 && cfg.fluid.M > 0.0,
            "(2.4) viscosity must be positive: mu0 > 0 and M > 0");
    require(cfg.dispersion.dm > 0.0 && cfg.dispersion.dl > 0.0 &&
                cfg.dispersion.dt > 0.0,
            "(2.5) ellipticity requires dm, dl, dt > 0");
    require(cfg.dispersion.trunc_k > 0.0,
            "(3.1) truncation level must be positive");

    for (const auto& a : cfg.wells.atoms) {
        require(a.weight > 0.0, "(2.9) atom weights must be positive");
        require(a.pos.x >= 0.0 && a.pos.x <= cfg.lx && a.pos.y >= 0.0 &&
                    a.pos.y <= cfg.ly,
                "(2.9) well atom outside the domain");
        for (const auto& [t, v] : a.rate.table)
            require(v >= 0.0, "(2.9) well rates must be nonnegative");
        for (const auto& [t, v] : a.c_hat.table)
            require(v >= 0.0 && v <= 1.0,
                    "(2.6) injected concentration out of [0,1]");
    }
    require(cfg.wells.epsilon >= 0.0,
            "(4.3) mollification radius must be nonnegative");

    CellField c0 = evaluate_field_spec(cfg.c0, g);
    for (double v : c0)
        require(v >= 0.0 && v <= 1.0, "(2.7) initial concentration out of [0,1]");
}

SimConfig preset_config(const std::string& name) {
    static const std::map<std::string, std::string> presets = {
        {"equilibrium", R"(
[grid]
nx = 16
ny = 16
[time]
T = 0.1
dt = 0.01
[rock]
phi = const:0.2
K = const:1.0
[fluid]
mu0 = 1.0
M = 2.0
[dispersion]
dm = 0.005
dl = 0.02
dt = 0.002
[init]
c0 = const:0.5
)"},
        {"hydrostatic", R"(
[grid]
nx = 16
ny = 16
[time]
T = 1.0
dt = 0.01
[rock]
phi = const:0.2
K = const:1.0
[fluid]
mu0 = 1.0
M = 2.0
rho0 = 1.0
rho1 = 1.0
gravity = 0.0 -1.0
[dispersion]
dm = 0.005
dl = 0.02
dt = 0.002
[init]
c0 = const:0.5
)"},
        {"quarter-five-spot-16", R"(
[grid]
nx = 16
ny = 16
[time]
T = 0.2
dt = 0.005
[rock]
phi = const:0.2
K = const:1.0
[fluid]
mu0 = 1.0
M = 2.0
[dispersion]
dm = 0.005
dl = 0.02
dt = 0.002
[wells]
epsilon = 0.0
well = 0.0 0.0 1.0 inject rate=1.0 chat=1.0
well = 1.0 1.0 1.0 produce rate=1.0
[init]
c0 = const:0.0
)"},
        {"quarter-five-spot-32", R"(
[grid]
nx = 32
ny = 32
[time]
T = 0.2
dt = 0.005
[rock]
phi = const:0.2
K = const:1.0
[fluid]
mu0 = 1.0
M = 2.0
[dispersion]
dm = 0.005
dl = 0.02
dt = 0.002
[wells]
epsilon = 0.0
well = 0.0 0.0 1.0 inject rate=1.0 chat=1.0
well = 1.0 1.0 1.0 produce rate=1.0
[init]
c0 = const:0.0
)"},
        {"quarter-five-spot-gravity-16", R"(
[grid]
nx = 16
ny = 16
[time]
T = 0.2
dt = 0.005
[rock]
phi = const:0.2
K = const:1.0
[fluid]
mu0 = 1.0
M = 2.0
rho0 = 1.0
rho1 = 0.8
gravity = 0.0 -1.0
[dispersion]
dm = 0.005
dl = 0.02
dt = 0.002
[wells]
epsilon = 0.0
well = 0.0 0.0 1.0 inject rate=1.0 chat=1.0
well = 1.0 1.0 1.0 produce rate=1.0
[init]
c0 = const:0.0
)"}};
    auto it = presets.find(name);
    if (it == presets.end()) fail("unknown preset '" + name + "'");
    return parse_config(it->second);
}

std::vector<std::string> preset_names() {
    return {"equilibrium", "hydrostatic", "quarter-five-spot-16",
            "quarter-five-spot-32", "quarter-five-spot-gravity-16"};
}

RunResult run_simulation(const SimConfig& cfg) {
    validate_config(cfg);
    RunResult rr;
    rr.grid = build_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
    rr.coeffs = CoefficientFields{evaluate_field_spec(cfg.phi, rr.grid),
                                  evaluate_field_spec(cfg.kx, rr.grid),
                                  evaluate_field_spec(cfg.ky, rr.grid)};

    RegularizedWells rw = regularize_wells(cfg.wells, rr.grid);
    CellField c0 = evaluate_field_spec(cfg.c0, rr.grid);
    rr.initial = init_state(rr.grid, rr.coeffs, cfg.fluid, c0, cfg.wells, rw,
                            cfg.controls);

    SimState state = rr.initial;
    if (cfg.output_cadence > 0) rr.snapshots.emplace_back(0, state);

    int nsteps = static_cast<int>(std::ceil(cfg.final_time / cfg.dt - 1e-12));
    for (int n = 0; n < nsteps; ++n) {
        double dt = std::min(cfg.dt, cfg.final_time - state.time);
        if (dt <= 0.0) break;
        StepResult sr = step(state, dt, rr.grid, rr.coeffs, cfg.fluid,
                             cfg.dispersion, cfg.wells, rw, cfg.controls);
        state = std::move(sr.state);
        rr.records.push_back(sr.record);
        bool last = (n == nsteps - 1);
        if (cfg.output_cadence > 0 && ((n + 1) % cfg.output_cadence == 0 || last))
            rr.snapshots.emplace_back(n + 1, state);
    }
    rr.final_state = std::move(state);
    return rr;
}

}  // namespace mds
