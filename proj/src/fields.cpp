#include "mds/fields.hpp"

#include <algorithm>
#include <cmath>

namespace mds {

double viscosity(double c, const FluidModel& fm) {
    c = clamp01(c);
    double base = 1.0 + (std::pow(fm.M, 0.25) - 1.0) * c;
    return fm.mu0 * std::pow(base, -4.0);
}

double density(double c, const FluidModel& fm) {
    c = clamp01(c);
    return (1.0 - c) * fm.rho0 + c * fm.rho1;
}

SymTensor2 dispersion_tensor(double phi_x, Vec2 u, const DispersionModel& dm) {
    SymTensor2 d{phi_x * dm.dm, 0.0, phi_x * dm.dm};
    double speed = std::hypot(u.x, u.y);
    if (speed > 0.0) {
        double ex = u.x / speed;
        double ey = u.y / speed;
        d.xx += phi_x * speed * (dm.dl * ex * ex + dm.dt * (1.0 - ex * ex));
        d.yy += phi_x * speed * (dm.dl * ey * ey + dm.dt * (1.0 - ey * ey));
        d.xy += phi_x * speed * (dm.dl - dm.dt) * ex * ey;
    }
    return d;
}

SymTensor2 dispersion_tensor_truncated(double phi_x, Vec2 u, double k,
                                       const DispersionModel& dm) {
    require(k > 0.0, "dispersion: truncation level must be positive");
    double speed = std::hypot(u.x, u.y);
    if (speed < k) return dispersion_tensor(phi_x, u, dm);
    Vec2 capped{u.x / speed * k, u.y / speed * k};
    return dispersion_tensor(phi_x, capped, dm);
}

SymTensor2 tensor_sqrt(const SymTensor2& d) {
    double tr = d.xx + d.yy;
    double det = d.xx * d.yy - d.xy * d.xy;
    double scale = std::max({std::abs(d.xx), std::abs(d.yy), std::abs(d.xy), 1.0});
    require(det >= -1e-14 * scale * scale && tr >= -1e-14 * scale,
            "tensor_sqrt: matrix is not positive semi-definite");
    det = std::max(det, 0.0);
    // sqrt(D) = (D + sqrt(det) I) / sqrt(tr + 2 sqrt(det)) for 2x2 SPD.
    double s = std::sqrt(det);
    double t = std::sqrt(std::max(tr + 2.0 * s, 0.0));
    if (t == 0.0) return SymTensor2{0.0, 0.0, 0.0};
    return SymTensor2{(d.xx + s) / t, d.xy / t, (d.yy + s) / t};
}

double dispersion_alpha(double phi_star, const DispersionModel& dm) {
    return phi_star * std::min({dm.dm, dm.dl, dm.dt});
}

double dispersion_lambda(double phi_star, const DispersionModel& dm) {
    return std::max({dm.dm, dm.dl, dm.dt}) / phi_star;
}

void validate_coefficients(const CoefficientFields& cf, double phi_star,
                           double k_star) {
    require(phi_star > 0.0 && phi_star <= 1.0, "(2.3) phi_* must lie in (0,1]");
    require(k_star > 0.0 && k_star <= 1.0, "(2.2) k_* must lie in (0,1]");
    for (double p : cf.phi)
        require(p >= phi_star && p <= 1.0 / phi_star,
                "(2.3) porosity outside [phi_*, 1/phi_*]");
    for (size_t i = 0; i < cf.kx.size(); ++i) {
        bool ok = cf.kx[i] >= k_star && cf.kx[i] <= 1.0 / k_star &&
                  cf.ky[i] >= k_star && cf.ky[i] <= 1.0 / k_star;
        require(ok, "(2.2) permeability eigenvalues outside [k_*, 1/k_*]");
    }
}

}  // namespace mds
