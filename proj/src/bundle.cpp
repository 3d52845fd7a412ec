#include "wplab/jacobi.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "wplab/conformal.hpp"
#include "wplab/laplacian.hpp"

namespace wplab {

namespace {

// Real structure C (f1,f2) -> (conj f2, conj f1) on the packed layout
// (Re f1, Im f1, Re f2, Im f2): symmetric orthogonal involution.
Eigen::VectorXd apply_c(const Eigen::VectorXd& x) {
    Eigen::VectorXd y(x.size());
    for (int o = 0; o < x.size() / 4; ++o) {
        y[4 * o + 0] = x[4 * o + 2];
        y[4 * o + 1] = -x[4 * o + 3];
        y[4 * o + 2] = x[4 * o + 0];
        y[4 * o + 3] = -x[4 * o + 1];
    }
    return y;
}

Eigen::MatrixXd conjugate_by_c(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    Eigen::MatrixXd out(n, n);
    for (int j = 0; j < n; ++j) out.col(j) = apply_c(m.col(j));
    for (int i = 0; i < n; ++i) out.row(i) = apply_c(out.row(i).transpose()).transpose();
    return out;
}

// Add the real 4x4 block of the Hermitian pair form
// p |f1|^2 + r |f2|^2 + 2 Re(m conj(f1) f2) at orbit o.
void add_hermitian_block(Eigen::MatrixXd& mat, int o, double p, double r, complex m) {
    const int k = 4 * o;
    mat(k + 0, k + 0) += p;
    mat(k + 1, k + 1) += p;
    mat(k + 2, k + 2) += r;
    mat(k + 3, k + 3) += r;
    const double mr = m.real(), mi = m.imag();
    mat(k + 0, k + 2) += mr;
    mat(k + 2, k + 0) += mr;
    mat(k + 1, k + 3) += mr;
    mat(k + 3, k + 1) += mr;
    mat(k + 0, k + 3) += -mi;
    mat(k + 3, k + 0) += -mi;
    mat(k + 1, k + 2) += mi;
    mat(k + 2, k + 1) += mi;
}

}  // namespace

JacobiOperator::JacobiOperator(const EquivariantMap& map, double kernel_kappa)
    : kappa_(kernel_kappa) {
    const TriangulatedDomain& dom = *map.domain;
    n_ = dom.num_orbits();
    nf_ = dom.num_faces();
    orb_.resize(nf_);
    coef1_.resize(nf_);
    coef2_.resize(nf_);
    az_.resize(nf_);
    bz_.resize(nf_);
    wform_.resize(nf_);

    Eigen::VectorXd mass = lumped_mass(dom);
    gsec_.resize(n_);
    for (int o = 0; o < n_; ++o) gsec_[o] = mass[o] * conformal::lambda2(map.values[o]);

    rmat_ = Eigen::MatrixXd::Zero(4 * n_, 4 * n_);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(nf_) * 24);

    for (int f = 0; f < nf_; ++f) {
        const MeshFace& face = dom.faces[f];
        complex z[3], w[3], tr[3];
        for (int c = 0; c < 3; ++c) {
            int inst = face.v[c];
            orb_[f][c] = dom.orbit[inst];
            z[c] = dom.pos[inst];
            Moebius g = map.corner_transform(inst);
            complex v = map.values[dom.orbit[inst]];
            w[c] = g.apply(v);
            tr[c] = g.derivative(v);
        }
        complex d1 = z[1] - z[0], d2 = z[2] - z[0];
        complex det = d1 * std::conj(d2) - d2 * std::conj(d1);
        complex A1 = std::conj(d2) / det, A2 = -std::conj(d1) / det;
        complex B1 = -d2 / det, B2 = d1 / det;
        complex a = A1 * (w[1] - w[0]) + A2 * (w[2] - w[0]);
        complex b = B1 * (w[1] - w[0]) + B2 * (w[2] - w[0]);
        az_[f] = a;
        bz_[f] = b;

        complex ubar = (w[0] + w[1] + w[2]) / 3.0;
        complex cc = conformal::dlog_lambda2(ubar);

        double area = 0.0;
        double cmass[3] = {0.0, 0.0, 0.0};
        for (const auto& nd : face.nodes) {
            area += nd.w;
            for (int c = 0; c < 3; ++c) cmass[c] += nd.w * nd.N[c];
        }
        wform_[f] = area * conformal::lambda2(ubar);

        const complex bc[3] = {-(B1 + B2), B1, B2};
        for (int c = 0; c < 3; ++c) {
            coef1_[f][c] = (bc[c] + cc * b / 3.0) * tr[c];
            coef2_[f][c] = (bc[c] + std::conj(cc * a) / 3.0) * std::conj(tr[c]);

            // d01 real embedding: each complex coefficient becomes a 2x2
            // rotation-scaling block (rows per face, cols per orbit).
            const int row = 4 * f, col = 4 * orb_[f][c];
            const complex c1 = coef1_[f][c], c2 = coef2_[f][c];
            trips.emplace_back(row + 0, col + 0, c1.real());
            trips.emplace_back(row + 0, col + 1, -c1.imag());
            trips.emplace_back(row + 1, col + 0, c1.imag());
            trips.emplace_back(row + 1, col + 1, c1.real());
            trips.emplace_back(row + 2, col + 2, c2.real());
            trips.emplace_back(row + 2, col + 3, -c2.imag());
            trips.emplace_back(row + 3, col + 2, c2.imag());
            trips.emplace_back(row + 3, col + 3, c2.real());

            // Curvature quadratic form, pointwise with corner chart mass:
            // (rho^4 / 2)(|u_zb|^2 |f1|^2 + |u_z|^2 |f2|^2
            //              - 2 Re(conj(f1) f2 u_z u_zb)) in the corner
            // frame; transported to the orbit frame by t and conj(t).
            double rho2 = conformal::lambda2(w[c]);
            double scale = 0.5 * rho2 * rho2 * cmass[c];
            double t2 = std::norm(tr[c]);
            complex tb2 = std::conj(tr[c]) * std::conj(tr[c]);
            add_hermitian_block(rmat_, orb_[f][c], scale * t2 * std::norm(b),
                                scale * t2 * std::norm(a), -scale * a * b * tb2);
        }
    }

    Eigen::SparseMatrix<double> d(4 * nf_, 4 * n_);
    d.setFromTriplets(trips.begin(), trips.end());
    Eigen::VectorXd wf4(4 * nf_);
    for (int f = 0; f < nf_; ++f)
        for (int k = 0; k < 4; ++k) wf4[4 * f + k] = wform_[f];
    Eigen::SparseMatrix<double> dtwd =
        Eigen::SparseMatrix<double>(d.transpose()) * wf4.asDiagonal() * d;
    amat0_ = Eigen::MatrixXd(dtwd);

    // Real-structure average makes J exactly real (commuting with C);
    // the raw composition is real only up to discretization error.
    rmat_ = 0.5 * (rmat_ + conjugate_by_c(rmat_));
    a_ = 0.5 * (amat0_ + conjugate_by_c(amat0_)) + rmat_;
    asymmetry_ = (a_ - a_.transpose()).cwiseAbs().maxCoeff();
    a_ = 0.5 * (a_ + a_.transpose());
}

BundleOneForm JacobiOperator::d01(const BundleSection& w) const {
    if (w.f1.size() != n_ || w.f2.size() != n_)
        throw std::invalid_argument("d01: section size mismatch");
    BundleOneForm om;
    om.w1.setZero(nf_);
    om.w2.setZero(nf_);
    for (int f = 0; f < nf_; ++f)
        for (int c = 0; c < 3; ++c) {
            om.w1[f] += coef1_[f][c] * w.f1[orb_[f][c]];
            om.w2[f] += coef2_[f][c] * w.f2[orb_[f][c]];
        }
    return om;
}

BundleSection JacobiOperator::d01_adjoint(const BundleOneForm& om) const {
    if (om.w1.size() != nf_ || om.w2.size() != nf_)
        throw std::invalid_argument("d01_adjoint: form size mismatch");
    BundleSection s;
    s.f1.setZero(n_);
    s.f2.setZero(n_);
    for (int f = 0; f < nf_; ++f)
        for (int c = 0; c < 3; ++c) {
            s.f1[orb_[f][c]] += wform_[f] * std::conj(coef1_[f][c]) * om.w1[f];
            s.f2[orb_[f][c]] += wform_[f] * std::conj(coef2_[f][c]) * om.w2[f];
        }
    for (int o = 0; o < n_; ++o) {
        s.f1[o] /= gsec_[o];
        s.f2[o] /= gsec_[o];
    }
    return s;
}

Eigen::VectorXd JacobiOperator::pack(const BundleSection& w) const {
    Eigen::VectorXd x(4 * n_);
    for (int o = 0; o < n_; ++o) {
        x[4 * o + 0] = w.f1[o].real();
        x[4 * o + 1] = w.f1[o].imag();
        x[4 * o + 2] = w.f2[o].real();
        x[4 * o + 3] = w.f2[o].imag();
    }
    return x;
}

BundleSection JacobiOperator::unpack(const Eigen::VectorXd& x) const {
    BundleSection w;
    w.f1.resize(n_);
    w.f2.resize(n_);
    for (int o = 0; o < n_; ++o) {
        w.f1[o] = complex{x[4 * o + 0], x[4 * o + 1]};
        w.f2[o] = complex{x[4 * o + 2], x[4 * o + 3]};
    }
    return w;
}

Eigen::VectorXd JacobiOperator::pack_form(const BundleOneForm& om) const {
    Eigen::VectorXd x(4 * nf_);
    for (int f = 0; f < nf_; ++f) {
        x[4 * f + 0] = om.w1[f].real();
        x[4 * f + 1] = om.w1[f].imag();
        x[4 * f + 2] = om.w2[f].real();
        x[4 * f + 3] = om.w2[f].imag();
    }
    return x;
}

BundleOneForm JacobiOperator::unpack_form(const Eigen::VectorXd& x) const {
    BundleOneForm om;
    om.w1.resize(nf_);
    om.w2.resize(nf_);
    for (int f = 0; f < nf_; ++f) {
        om.w1[f] = complex{x[4 * f + 0], x[4 * f + 1]};
        om.w2[f] = complex{x[4 * f + 2], x[4 * f + 3]};
    }
    return om;
}

BundleSection JacobiOperator::curvature_R(const BundleSection& w) const {
    Eigen::VectorXd x = rmat_ * pack(w);
    for (int o = 0; o < n_; ++o)
        for (int k = 0; k < 4; ++k) x[4 * o + k] /= gsec_[o];
    return unpack(x);
}

BundleSection JacobiOperator::jacobi_apply(const BundleSection& w) const {
    Eigen::VectorXd x = a_ * pack(w);
    for (int o = 0; o < n_; ++o)
        for (int k = 0; k < 4; ++k) x[4 * o + k] /= gsec_[o];
    return unpack(x);
}

double JacobiOperator::section_dot(const BundleSection& a, const BundleSection& b) const {
    double s = 0.0;
    for (int o = 0; o < n_; ++o)
        s += gsec_[o] * (std::real(std::conj(a.f1[o]) * b.f1[o]) +
                         std::real(std::conj(a.f2[o]) * b.f2[o]));
    return s;
}

double JacobiOperator::form_dot(const BundleOneForm& a, const BundleOneForm& b) const {
    double s = 0.0;
    for (int f = 0; f < nf_; ++f)
        s += wform_[f] * (std::real(std::conj(a.w1[f]) * b.w1[f]) +
                          std::real(std::conj(a.w2[f]) * b.w2[f]));
    return s;
}

double JacobiOperator::jacobi_quad(const BundleSection& w) const {
    Eigen::VectorXd x = pack(w);
    return x.dot(a_ * x);
}

double JacobiOperator::curvature_quad(const BundleSection& w) const {
    Eigen::VectorXd x = pack(w);
    return x.dot(rmat_ * x);
}

const JacobiOperator::EigDecomp& JacobiOperator::jacobi_eig() const {
    if (!jeig_) {
        Eigen::VectorXd gs = gsec_.cwiseSqrt();
        Eigen::VectorXd g4(4 * n_);
        for (int o = 0; o < n_; ++o)
            for (int k = 0; k < 4; ++k) g4[4 * o + k] = gs[o];
        Eigen::MatrixXd at = g4.cwiseInverse().asDiagonal() * a_ * g4.cwiseInverse().asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(at);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("jacobi: eigendecomposition failed");
        jeig_ = std::make_unique<EigDecomp>(EigDecomp{es.eigenvalues(), es.eigenvectors()});
    }
    return *jeig_;
}

const JacobiOperator::EigDecomp& JacobiOperator::laplace_eig() const {
    if (!leig_) {
        Eigen::VectorXd gs = gsec_.cwiseSqrt();
        Eigen::VectorXd g4(4 * n_);
        for (int o = 0; o < n_; ++o)
            for (int k = 0; k < 4; ++k) g4[4 * o + k] = gs[o];
        Eigen::MatrixXd at =
            g4.cwiseInverse().asDiagonal() * amat0_ * g4.cwiseInverse().asDiagonal();
        at = 0.5 * (at + at.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(at);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("jacobi: eigendecomposition failed");
        leig_ = std::make_unique<EigDecomp>(EigDecomp{es.eigenvalues(), es.eigenvectors()});
    }
    return *leig_;
}

double JacobiOperator::lambda_max() const { return jacobi_eig().evals.maxCoeff(); }

int JacobiOperator::kernel_dimension() const {
    const EigDecomp& e = jacobi_eig();
    double thresh = kappa_ * e.evals.maxCoeff();
    int k = 0;
    for (int i = 0; i < e.evals.size(); ++i)
        if (e.evals[i] < thresh) ++k;
    return k;
}

BundleSection JacobiOperator::solve_jacobi(const BundleSection& rhs) const {
    const EigDecomp& e = jacobi_eig();
    double thresh = kappa_ * e.evals.maxCoeff();
    Eigen::VectorXd g4(4 * n_);
    for (int o = 0; o < n_; ++o)
        for (int k = 0; k < 4; ++k) g4[4 * o + k] = std::sqrt(gsec_[o]);
    Eigen::VectorXd yr = g4.cwiseProduct(pack(rhs));
    Eigen::VectorXd coef = e.evecs.transpose() * yr;
    for (int i = 0; i < coef.size(); ++i)
        coef[i] = e.evals[i] >= thresh ? coef[i] / e.evals[i] : 0.0;
    Eigen::VectorXd y = e.evecs * coef;
    return unpack(y.cwiseQuotient(g4));
}

std::vector<BundleSection> JacobiOperator::jacobi_kernel() const {
    const EigDecomp& e = jacobi_eig();
    double thresh = kappa_ * e.evals.maxCoeff();
    Eigen::VectorXd g4(4 * n_);
    for (int o = 0; o < n_; ++o)
        for (int k = 0; k < 4; ++k) g4[4 * o + k] = std::sqrt(gsec_[o]);
    std::vector<BundleSection> out;
    for (int i = 0; i < e.evals.size(); ++i)
        if (e.evals[i] < thresh)
            out.push_back(unpack(Eigen::VectorXd(e.evecs.col(i)).cwiseQuotient(g4)));
    return out;
}

BundleOneForm JacobiOperator::harmonic_projection(const BundleOneForm& om) const {
    const EigDecomp& e = laplace_eig();
    double thresh = kappa_ * std::max(e.evals.maxCoeff(), 0.0);
    Eigen::VectorXd g4(4 * n_);
    for (int o = 0; o < n_; ++o)
        for (int k = 0; k < 4; ++k) g4[4 * o + k] = std::sqrt(gsec_[o]);
    Eigen::VectorXd yr = g4.cwiseProduct(pack(d01_adjoint(om)));
    Eigen::VectorXd coef = e.evecs.transpose() * yr;
    for (int i = 0; i < coef.size(); ++i)
        coef[i] = e.evals[i] >= thresh && e.evals[i] > 0.0 ? coef[i] / e.evals[i] : 0.0;
    BundleSection s = unpack((e.evecs * coef).cwiseQuotient(g4));
    BundleOneForm ds = d01(s);
    BundleOneForm h;
    h.w1 = om.w1 - ds.w1;
    h.w2 = om.w2 - ds.w2;
    return h;
}

std::pair<BundleOneForm, BundleSection> JacobiOperator::rhs_from_mu(
    const std::vector<complex>& mu_face) const {
    if (static_cast<int>(mu_face.size()) != nf_)
        throw std::invalid_argument("rhs_from_mu: face count mismatch");
    BundleOneForm om;
    om.w1.resize(nf_);
    om.w2.resize(nf_);
    for (int f = 0; f < nf_; ++f) {
        om.w1[f] = mu_face[f] * az_[f];
        om.w2[f] = mu_face[f] * std::conj(bz_[f]);
    }
    BundleSection s = d01_adjoint(om);
    BundleSection rhs;
    rhs.f1.resize(n_);
    rhs.f2.resize(n_);
    for (int o = 0; o < n_; ++o) {
        rhs.f1[o] = s.f1[o] + std::conj(s.f2[o]);
        rhs.f2[o] = s.f2[o] + std::conj(s.f1[o]);
    }
    return {std::move(om), std::move(rhs)};
}

double JacobiOperator::du_sq_mu_integral(const std::vector<complex>& mu_face) const {
    if (static_cast<int>(mu_face.size()) != nf_)
        throw std::invalid_argument("du_sq_mu_integral: face count mismatch");
    double s = 0.0;
    for (int f = 0; f < nf_; ++f)
        s += wform_[f] * std::norm(mu_face[f]) * (std::norm(az_[f]) + std::norm(bz_[f]));
    return 2.0 * s;
}

BundleSection random_section(int num_orbits, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist;
    BundleSection w;
    w.f1.resize(num_orbits);
    w.f2.resize(num_orbits);
    for (int o = 0; o < num_orbits; ++o) {
        w.f1[o] = complex{dist(gen), dist(gen)};
        w.f2[o] = complex{dist(gen), dist(gen)};
    }
    return w;
}

BundleSection real_structure(const BundleSection& w) {
    BundleSection out;
    out.f1 = w.f2.conjugate();
    out.f2 = w.f1.conjugate();
    return out;
}

double reality_defect(const BundleSection& w) {
    double m = 0.0;
    for (int o = 0; o < w.f1.size(); ++o) {
        m = std::max(m, std::abs(w.f1[o] - std::conj(w.f2[o])));
        m = std::max(m, std::abs(w.f2[o] - std::conj(w.f1[o])));
    }
    return m;
}

}  // namespace wplab
