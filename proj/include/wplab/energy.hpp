#pragma once

#include <utility>
#include <vector>

#include "wplab/equivariant_map.hpp"
#include "wplab/wolf.hpp"

namespace wplab {

struct SolverConfig {
    double tol = 1e-8;    ///< stop when gradient sup-norm <= tol * max(1, E)
    int max_iter = 20000;
};

struct EnergyReport {
    double energy = 0.0;
    double gradient_norm = 0.0;  ///< sup over orbits of |g_o|
    int iterations = 0;
    std::vector<double> density;  ///< per face (quadrature average)
    std::vector<complex> hopf;    ///< per face, undeformed chart
};

/// Energy of the map against the deformed domain structure g(t):
/// sum over faces of the quadrature of (1/2)|du|^2 dmu_{g(t)}.
/// Throws std::domain_error when an interpolated value leaves the disk.
double energy(const EquivariantMap& map, const WolfMetricFamily& family, double t);

/// Wirtinger gradient per orbit, g_o = 2 dE/d(conj v_o); the directional
/// derivative along a perturbation d is Re sum conj(g_o) d_o.
std::vector<complex> tension_gradient(const EquivariantMap& map, const WolfMetricFamily& family,
                                      double t);

/// Production kernel (OpenMP over faces, fixed-order reduction; results are
/// independent of the thread count). Either output may be null.
void energy_and_gradient(const EquivariantMap& map, const WolfMetricFamily& family, double t,
                         double* energy_out, std::vector<complex>* grad_out);

/// Straightforward single-loop reference implementation of the same
/// quantities, kept for validating the parallel kernel.
void energy_and_gradient_serial(const EquivariantMap& map, const WolfMetricFamily& family,
                                double t, double* energy_out, std::vector<complex>* grad_out);

/// Preconditioned descent with Armijo backtracking; map.values are updated
/// in place. Throws std::runtime_error if the iteration cap is reached
/// before the gradient criterion.
EnergyReport minimize(EquivariantMap& map, const WolfMetricFamily& family, double t,
                      const SolverConfig& cfg = {});

/// Per-face energy density (quadrature-averaged 1/2 |du|^2 at parameter t).
std::vector<double> energy_density(const EquivariantMap& map, const WolfMetricFamily& family,
                                   double t);

/// Per-face Hopf field rho^2(u) u_z conj(u_zb) in the undeformed chart.
std::vector<complex> hopf_differential(const EquivariantMap& map);

/// Mass-weighted RMS Morera circulation residual of a per-face
/// quadratic-differential field (vertex-averaged in deck-transported
/// frames): per face |contour integral of phi dz| / perimeter, zero for
/// holomorphic fields, O(h) for first-order-accurate data.
double hopf_holomorphy_residual(const EquivariantMap& map, const std::vector<complex>& hopf);

struct DegreeResult {
    int value = 0;
    double raw = 0.0;  ///< pre-rounding integral value
};

/// Topological degree from the integral of the Jacobian density. Throws
/// std::runtime_error when the integral is farther than 0.2 from an integer.
DegreeResult degree(const EquivariantMap& map);

}  // namespace wplab
