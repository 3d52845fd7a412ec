#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wplab/energy.hpp"
#include "wplab/equivariant_map.hpp"
#include "wplab/jacobi.hpp"
#include "wplab/quad_diff.hpp"
#include "wplab/wolf.hpp"

namespace wplab {

/// Energy samples along the metric family on a symmetric t grid, with
/// central-difference derivatives at t = 0 and Richardson error estimates
/// from the half-step/full-step pair.
struct EnergyCurve {
    std::vector<double> t;
    std::vector<double> energy;
    std::vector<double> grad_norm;
    std::vector<int> iterations;
    double fd_first = 0.0, fd_first_err = 0.0;
    double fd_second = 0.0, fd_second_err = 0.0;
};

/// Sweep the family over `grid_points` (odd) symmetric samples spanning
/// [-t_span, t_span], re-minimizing at each t with warm starts outward
/// from the centre. Throws if any sample fails to converge.
EnergyCurve energy_curve(const EquivariantMap& start, const WolfMetricFamily& family,
                         int grid_points, double t_span, const SolverConfig& cfg = {});

/// Closed-form first derivative of E(t) at t = 0: the pairing of the Hopf
/// field with the Beltrami direction, -4 Re integral hopf * mu.
double first_variation_formula(const EquivariantMap& map, const FaceSamples& mu_nodes);

struct SecondVariation {
    double formula = 0.0;  ///< 2 (integral term - <J V, V>)
    double term1 = 0.0;    ///< integral |du|^2 |q|^2/lambda0^4 dmu0
    double jvv = 0.0;      ///< <J V, V> with V = solve_jacobi(rhs)
    double wp4 = 0.0;      ///< 4 ||mu||^2_WP
    double hproj4 = 0.0;   ///< 4 ||H(i_mu du)||^2 (critical-point bound)
    double rhs_rel = 0.0;  ///< ||rhs|| / ||i_mu du|| diagnostic
};

/// Closed-form second derivative of E(t) at t = 0 plus the diagnostics
/// entering the convexity bounds; wp_sq is ||mu||^2_WP on the domain.
SecondVariation second_variation_formula(const JacobiOperator& jac,
                                         const std::vector<complex>& mu_face, double wp_sq);

/// Dimensionless conformality defect: sup over faces of |hopf| relative
/// to the local energy-density scale.
double hopf_relative_sup(const EquivariantMap& map, const std::vector<complex>& hopf,
                         const std::vector<double>& density);

/// Sample mu at the chart barycenters of every face.
std::vector<complex> mu_at_barycenters(const TriangulatedDomain& dom, const HarmonicBeltrami& mu);

struct CheckResult {
    std::string name;
    double value = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct MuReport {
    int mu_id = 0;
    double fd1 = 0.0, fd1_err = 0.0, formula1 = 0.0;
    double fd2 = 0.0, fd2_err = 0.0, formula2 = 0.0;
    double wp4 = 0.0, hproj4 = 0.0;
};

struct CertificationReport {
    std::string scenario;
    bool is_critical = false;
    double hopf_rel = 0.0;
    double density_min = 0.0, density_max = 0.0;
    int degree = 0;
    double degree_raw = 0.0;
    double energy = 0.0, area = 0.0;
    int solver_iterations = 0;
    double convexity_constant = 0.0;  ///< min formula2 / wp over tested mu
    std::vector<MuReport> mu_rows;
    std::vector<EnergyCurve> curves;
    std::vector<CheckResult> checks;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct CertifyOptions {
    double critical_tol = 1e-4;
    double density_tol = 1e-2;
    double area_tol = 1e-2;
    double convexity_tol = 1e-6;
    double second_var_tol = 0.1;
    int grid_points = 5;
    double kernel_kappa = 1e-10;
    SolverConfig solver;
    bool run_curves = true;   ///< sweep E(t) for fd derivatives
    bool run_jacobi = true;   ///< assemble J for formula_second
};

/// Generic critical-point certification of a converged map against a list
/// of Beltrami directions (may be empty).
CertificationReport certify_critical(const EquivariantMap& map,
                                     const std::vector<QuadraticDifferential>& mus,
                                     const CertifyOptions& opts = {});

/// Full covering-corollary certificate: builds the degree-d cyclic cover
/// of the genus-g base, solves the pullback scenario at t = 0 and checks
/// density, energy = area, degree and the convexity identities for
/// `num_mu` Poincare-series directions.
CertificationReport covering_certificate(int genus, int cover_degree, int refine,
                                         int q_truncation, int q_seed, int num_mu,
                                         const CertifyOptions& opts = {});

}  // namespace wplab
