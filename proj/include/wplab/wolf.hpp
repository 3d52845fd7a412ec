#pragma once

#include <memory>

#include "wplab/laplacian.hpp"
#include "wplab/quad_diff.hpp"

namespace wplab {

/// Metric tensor of the deformed hyperbolic structure at one chart point,
/// in complex coordinates: g = G_zz dz^2 + 2 G_zzb |dz|^2 + G_zbzb dzb^2.
/// All derived quantities truncate after the t^2 term (O(t^4) dropped).
struct GMatrix {
    complex q;       ///< quadratic-differential value at the point
    double alpha;    ///< compensator field value
    double lambda2;  ///< lambda0^2 at the point
    double t;

    complex g_zz() const { return t * q; }
    complex g_zbzb() const { return t * std::conj(q); }
    double g_zzb() const {
        return 0.5 * lambda2 +
               0.5 * t * t * (std::norm(q) / (lambda2 * lambda2) + alpha) * lambda2;
    }
    double det() const {
        double l4 = lambda2 * lambda2;
        return -0.25 * l4 + 0.5 * t * t * (std::norm(q) - alpha * l4);
    }
};

/// Second-order family g(t) of hyperbolic metrics through the base
/// structure in the direction of a harmonic Beltrami differential:
/// alpha solves (Delta - 2) alpha = -2 |q|^2 / lambda0^4.
struct WolfMetricFamily {
    std::shared_ptr<const TriangulatedDomain> domain;
    std::shared_ptr<const QuadraticDifferential> q;  ///< null means q == 0
    ScalarField alpha;                                ///< per orbit
    double t_max = 0.0;

    // cached per-quadrature-node samples
    FaceSamples q_nodes;
    std::vector<std::vector<double>> alpha_nodes;

    complex q_at(int face, int node) const { return q ? q_nodes[face][node] : complex{0.0}; }
    double alpha_at(int face, int node) const { return q ? alpha_nodes[face][node] : 0.0; }
};

/// Build the family: solve for alpha, cache node samples, set t_max so the
/// first-order term stays a small fraction of the undeformed metric.
WolfMetricFamily make_wolf_family(std::shared_ptr<const TriangulatedDomain> domain,
                                  std::shared_ptr<const QuadraticDifferential> q,
                                  double solver_tol = 1e-12, int solver_max_iter = 10000);

/// Metric at a quadrature node (cached fields). Throws std::out_of_range
/// for |t| > t_max.
GMatrix metric_at_node(const WolfMetricFamily& family, double t, int face, int node);

/// Metric at an arbitrary chart point (locates the containing face and
/// interpolates alpha; q evaluated directly). For diagnostics, not hot loops.
GMatrix metric_at(const WolfMetricFamily& family, double t, complex z);

/// sqrt(|det G|): density of the deformed volume element against 2 dx dy.
double volume_element(const WolfMetricFamily& family, double t, complex z);
double volume_element_at_node(const WolfMetricFamily& family, double t, int face, int node);

GMatrix assemble_gmatrix(complex qv, double alpha, double lambda2, double t);

}  // namespace wplab
