#pragma once

// Constitutive laws and coefficient fields: porosity, (diagonal) permeability,
// Koval viscosity, linear density mixing, and the velocity-dependent
// diffusion-dispersion tensor with optional magnitude truncation.

#include <limits>
#include <vector>

#include "mds/common.hpp"
#include "mds/grid.hpp"

namespace mds {

struct SymTensor2 {
    double xx = 0.0, xy = 0.0, yy = 0.0;
};

struct FluidModel {
    double mu0 = 1.0;    // viscosity at c = 0
    double M = 1.0;      // mobility ratio mu(0)/mu(1)
    double rho0 = 1.0;   // density at c = 0
    double rho1 = 1.0;   // density at c = 1
    Vec2 gravity{0.0, 0.0};
};

struct DispersionModel {
    double dm = 1e-2;  // molecular diffusion
    double dl = 1e-1;  // longitudinal dispersion
    double dt = 1e-2;  // transverse dispersion
    // Velocity magnitude cap; infinity means the untruncated tensor.
    double trunc_k = std::numeric_limits<double>::infinity();
};

// Per-cell porosity and diagonal permeability (kx, ky eigenvalues).
struct CoefficientFields {
    CellField phi;
    CellField kx;
    CellField ky;
};

inline double clamp01(double c) { return c < 0.0 ? 0.0 : (c > 1.0 ? 1.0 : c); }

// Koval: mu(c) = mu0 * (1 + (M^{1/4} - 1) c)^{-4}. Input clamped to [0,1].
double viscosity(double c, const FluidModel& fm);

// Linear mixing rho(c) = (1-c) rho0 + c rho1. Input clamped to [0,1].
double density(double c, const FluidModel& fm);

// Peaceman tensor D = phi (dm I + |u| (dl E(u) + dt (I - E(u)))), with
// E(u) the projection onto the flow direction; D(0) = phi dm I.
SymTensor2 dispersion_tensor(double phi_x, Vec2 u, const DispersionModel& dm);

// D evaluated at the velocity with magnitude capped at k, direction kept.
// Identical (bitwise) to dispersion_tensor when |u| < k.
SymTensor2 dispersion_tensor_truncated(double phi_x, Vec2 u, double k,
                                       const DispersionModel& dm);

// Symmetric PSD square root. Throws on indefinite input.
SymTensor2 tensor_sqrt(const SymTensor2& d);

// Ellipticity constants for the hypothesis checks:
// alpha_D = phi_* min(dm,dl,dt), Lambda_D = max(dm,dl,dt)/phi_*.
double dispersion_alpha(double phi_star, const DispersionModel& dm);
double dispersion_lambda(double phi_star, const DispersionModel& dm);

// Throws if phi or K violate the configured bounds
// phi_* <= phi <= 1/phi_* and k_* <= kx,ky <= 1/k_*.
void validate_coefficients(const CoefficientFields& cf, double phi_star,
                           double k_star);

}  // namespace mds
