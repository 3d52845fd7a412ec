#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "wplab/mesh.hpp"

namespace wplab {

/// Scalar field on the quotient: one real value per vertex orbit, affine
/// within faces.
using ScalarField = Eigen::VectorXd;

/// Weak-form hyperbolic Laplacian on orbit-based scalar fields. The 2D
/// Dirichlet form is conformally invariant, so the stiffness is the flat
/// cotangent matrix of the chart triangles; the hyperbolic geometry enters
/// through the lumped vertex mass. Laplacian action: Delta f = -M^{-1} K f.
struct HyperbolicLaplacian {
    Eigen::SparseMatrix<double> stiffness;  ///< K, positive semidefinite
    Eigen::VectorXd mass;                   ///< lumped hyperbolic vertex mass

    Eigen::VectorXd apply(const Eigen::VectorXd& f) const {
        return -(stiffness * f).cwiseQuotient(mass);
    }
};

HyperbolicLaplacian assemble_laplacian(const TriangulatedDomain& dom);

/// Lumped hyperbolic vertex mass alone (the mass part of the Laplacian).
Eigen::VectorXd lumped_mass(const TriangulatedDomain& dom);

/// Solve (Delta - 2) alpha = -2 rhs, i.e. (K + 2M) alpha = 2 M rhs, by
/// conjugate gradients on the SPD system. Throws std::runtime_error when
/// the relative residual does not reach `tol`.
ScalarField solve_shifted(const HyperbolicLaplacian& lap, const ScalarField& rhs,
                          double tol = 1e-12, int max_iter = 10000);

/// Sample an orbit field at every face quadrature node (affine shapes).
std::vector<std::vector<double>> field_at_nodes(const TriangulatedDomain& dom,
                                                const ScalarField& f);

/// Build an orbit field from a chart function evaluated at representatives.
template <class F>
ScalarField orbit_field(const TriangulatedDomain& dom, F&& f) {
    ScalarField v(dom.num_orbits());
    for (int o = 0; o < dom.num_orbits(); ++o) v[o] = f(dom.orbit_pos(o));
    return v;
}

}  // namespace wplab
