#pragma once

// Pure-Neumann elliptic pressure problem
//   -div((K/mu(c)) (grad p - rho(c) g)) = qI - qP,   u.n = 0 on the boundary,
// discretized with a two-point flux approximation (harmonic face mobilities,
// arithmetic face density for gravity) and normalized to zero mean.

#include <vector>

#include "mds/fields.hpp"
#include "mds/grid.hpp"
#include "mds/linalg.hpp"

namespace mds {

// Face transmissibilities (flux per unit pressure jump) and gravity face
// fluxes, shared between assembly and flux reconstruction so both sides use
// identical numbers. Boundary face entries are zero.
struct FaceCoefficients {
    FaceField trans;
    FaceField grav;
};

FaceCoefficients face_coefficients(const Grid& g, const CoefficientFields& cf,
                                   const FluidModel& fm, const CellField& c);

struct PressureSystem {
    SparseMatrix matrix;
    std::vector<double> rhs;
    FaceCoefficients coeffs;
};

// source = qI - qP as a cell density (per unit volume).
PressureSystem assemble_pressure(const Grid& g, const CoefficientFields& cf,
                                 const FluidModel& fm, const CellField& c,
                                 const CellField& source);

// CG on the singular system with the rhs projected to exact zero sum; the
// returned field has zero volume-weighted mean. Throws on non-convergence.
CellField solve_pressure(const PressureSystem& sys, double tol, int maxit);

// Volumetric face fluxes U_f = -T_f (p_R - p_L) + G_f; boundary faces are
// exactly zero.
FaceField darcy_flux(const Grid& g, const FaceCoefficients& fc,
                     const CellField& p);

// Cell-centered velocity: per component, arithmetic mean of the two opposing
// face fluxes divided by face area.
std::vector<Vec2> cell_velocity(const Grid& g, const FaceField& u);

}  // namespace mds
