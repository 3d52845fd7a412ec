#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <utility>
#include <vector>

#include "wplab/energy.hpp"
#include "wplab/equivariant_map.hpp"

namespace wplab {

/// Section of the complexified pullback bundle along the map:
/// W = f1 d/dv + f2 d/dvb, one complex pair per vertex orbit. Real
/// sections satisfy f2 = conj(f1).
struct BundleSection {
    Eigen::VectorXcd f1, f2;
};

/// Bundle-valued (0,1)-form: one complex pair per face against dzb.
struct BundleOneForm {
    Eigen::VectorXcd w1, w2;
};

/// Discretized second-variation machinery of the energy at a fixed map:
/// the pullback connection's (0,1)-part d01 (vertices -> faces, affine
/// derivatives plus barycenter connection coefficients), its exact
/// mass-weighted transpose, the pointwise curvature operator R, and the
/// Jacobi operator J = d01_adjoint d01 + R. The assembled quadratic form
/// is averaged with its conjugate under the real structure
/// C(f1,f2) = (conj f2, conj f1), making J exactly real.
///
/// Inner products: sections use the hyperbolic vertex mass with frame
/// weight rho^2(v); forms use the Euclidean chart face mass with frame
/// weight rho^2(u) at the mapped barycenter (the 1/lambda0^2 form weight
/// cancels the hyperbolic area element).
class JacobiOperator {
public:
    explicit JacobiOperator(const EquivariantMap& map, double kernel_kappa = 1e-10);

    int num_orbits() const { return n_; }
    int num_faces() const { return nf_; }

    BundleOneForm d01(const BundleSection& w) const;
    BundleSection d01_adjoint(const BundleOneForm& om) const;
    BundleSection curvature_R(const BundleSection& w) const;
    BundleSection jacobi_apply(const BundleSection& w) const;

    double section_dot(const BundleSection& a, const BundleSection& b) const;
    double form_dot(const BundleOneForm& a, const BundleOneForm& b) const;
    double section_norm_sq(const BundleSection& a) const { return section_dot(a, a); }
    double form_norm_sq(const BundleOneForm& a) const { return form_dot(a, a); }

    /// Quadratic form <J W, W> evaluated through the assembled matrix.
    double jacobi_quad(const BundleSection& w) const;
    double curvature_quad(const BundleSection& w) const;

    /// Minimum-norm solution of J V = P(rhs), P projecting off the
    /// numerical kernel (eigenvalues below kappa * lambda_max).
    BundleSection solve_jacobi(const BundleSection& rhs) const;

    /// H(om) = om - d01(s) with s the kernel-complement least-squares
    /// solution of d01_adjoint(d01 s) = d01_adjoint(om).
    BundleOneForm harmonic_projection(const BundleOneForm& om) const;

    /// Orthonormal numerical-kernel sections of J (may be empty).
    std::vector<BundleSection> jacobi_kernel() const;

    /// Assembled real symmetric matrix of the J quadratic form (4n x 4n,
    /// layout per orbit: Re f1, Im f1, Re f2, Im f2).
    const Eigen::MatrixXd& matrix() const { return a_; }
    double matrix_asymmetry() const { return asymmetry_; }
    double lambda_max() const;
    int kernel_dimension() const;

    /// The form mu(z) (u_z, conj(u_zb)) dzb and the doubled real section
    /// 2 Re d01_adjoint of it (the Jacobi right-hand side of the
    /// deformation field); mu_face holds mu at the chart barycenters.
    std::pair<BundleOneForm, BundleSection> rhs_from_mu(const std::vector<complex>& mu_face) const;

    /// Same-quadrature value of the integral |du|^2 |q|^2/lambda0^4 dmu0
    /// appearing in the second-variation formula (= 2 ||i_mu du||^2).
    double du_sq_mu_integral(const std::vector<complex>& mu_face) const;

    /// Per-face map derivatives in the chart (u_z, u_zb).
    complex u_z(int face) const { return az_[face]; }
    complex u_zb(int face) const { return bz_[face]; }

private:
    struct EigDecomp {
        Eigen::VectorXd evals;
        Eigen::MatrixXd evecs;  // columns, in y = G^{1/2} x coordinates
    };
    const EigDecomp& jacobi_eig() const;
    const EigDecomp& laplace_eig() const;
    Eigen::VectorXd pack(const BundleSection& w) const;
    BundleSection unpack(const Eigen::VectorXd& x) const;
    Eigen::VectorXd pack_form(const BundleOneForm& om) const;
    BundleOneForm unpack_form(const Eigen::VectorXd& x) const;

    int n_ = 0, nf_ = 0;
    double kappa_ = 1e-10;
    double asymmetry_ = 0.0;
    std::vector<std::array<int, 3>> orb_;          ///< per face corner orbits
    std::vector<std::array<complex, 3>> coef1_;    ///< d01 coefficients for f1
    std::vector<std::array<complex, 3>> coef2_;    ///< d01 coefficients for f2
    std::vector<complex> az_, bz_;                 ///< per face u_z, u_zb
    Eigen::VectorXd wform_;                        ///< per face form weight
    Eigen::VectorXd gsec_;                         ///< per orbit section weight
    Eigen::MatrixXd a_;                            ///< J quadratic form
    Eigen::MatrixXd rmat_;                         ///< R quadratic form
    Eigen::MatrixXd amat0_;                        ///< d01^T W d01 alone
    mutable std::unique_ptr<EigDecomp> jeig_, leig_;
};

/// Deterministic random section (standard normal components).
BundleSection random_section(int num_orbits, unsigned seed);

/// C W = (conj f2, conj f1); real sections are the fixed points.
BundleSection real_structure(const BundleSection& w);

/// Deviation of W from the real subspace, sup |W - C W|.
double reality_defect(const BundleSection& w);

}  // namespace wplab
