#include <doctest.h>

#include <cmath>
#include <memory>

#include "wplab/energy.hpp"
#include "wplab/equivariant_map.hpp"
#include "wplab/jacobi.hpp"
#include "wplab/quad_diff.hpp"
#include "wplab/surface.hpp"
#include "wplab/variation.hpp"

using namespace wplab;

namespace {

/// Harmonic identity-class map at level 2 with its Jacobi machinery,
/// shared across the cases (the eigendecompositions dominate the cost).
struct JacFixture {
    std::shared_ptr<const TriangulatedDomain> dom;
    EquivariantMap map;
    std::unique_ptr<JacobiOperator> jac;

    JacFixture() {
        auto base = std::make_shared<FuchsianSurface>(build_surface(2));
        dom = std::make_shared<TriangulatedDomain>(triangulate(base, 2));
        map = identity_scenario(dom);
        auto family = make_wolf_family(dom, nullptr);
        minimize(map, family, 0.0, {});
        jac = std::make_unique<JacobiOperator>(map);
    }
};

JacFixture& fixture() {
    static JacFixture fx;
    return fx;
}

}  // namespace

TEST_CASE("d01_adjoint is the exact transpose of d01") {
    auto& fx = fixture();
    for (unsigned s = 0; s < 5; ++s) {
        BundleSection v = random_section(fx.jac->num_orbits(), 40 + s);
        BundleOneForm om;
        om.w1 = random_section(fx.jac->num_faces(), 50 + s).f1;
        om.w2 = random_section(fx.jac->num_faces(), 60 + s).f1;
        double lhs = fx.jac->form_dot(fx.jac->d01(v), om);
        double rhs = fx.jac->section_dot(v, fx.jac->d01_adjoint(om));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0));
    }
}

TEST_CASE("jacobi matrix is symmetric, semi-positive and real") {
    auto& fx = fixture();
    CHECK(fx.jac->matrix_asymmetry() <= 1e-12);
    for (unsigned s = 0; s < 20; ++s) {
        BundleSection v = random_section(fx.jac->num_orbits(), 70 + s);
        double ray = fx.jac->jacobi_quad(v) / fx.jac->section_norm_sq(v);
        CHECK(ray >= -1e-10);
    }
    // J preserves real sections
    BundleSection v = random_section(fx.jac->num_orbits(), 90);
    BundleSection c = real_structure(v);
    v.f1 = 0.5 * (v.f1 + c.f1);
    v.f2 = 0.5 * (v.f2 + c.f2);
    CHECK(reality_defect(v) < 1e-14);
    CHECK(reality_defect(fx.jac->jacobi_apply(v)) < 1e-10);
}

TEST_CASE("real structure is an isometric involution of the forms") {
    auto& fx = fixture();
    BundleSection v = random_section(fx.jac->num_orbits(), 91);
    BundleSection cc = real_structure(real_structure(v));
    CHECK((cc.f1 - v.f1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((cc.f2 - v.f2).cwiseAbs().maxCoeff() == 0.0);
    double q1 = fx.jac->jacobi_quad(v);
    double q2 = fx.jac->jacobi_quad(real_structure(v));
    CHECK(q1 == doctest::Approx(q2).epsilon(1e-12));
    double r1 = fx.jac->curvature_quad(v);
    double r2 = fx.jac->curvature_quad(real_structure(v));
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
    CHECK(r1 >= 0.0);
}

TEST_CASE("solve_jacobi residual is small") {
    auto& fx = fixture();
    HarmonicBeltrami mu = beltrami_from_q(poincare_series(fx.dom->surface, 0, 4));
    std::vector<complex> mu_face = mu_at_barycenters(*fx.dom, mu);
    auto [om, rhs] = fx.jac->rhs_from_mu(mu_face);

    CHECK(reality_defect(rhs) < 1e-12);  // the deformation rhs is a real section

    BundleSection v = fx.jac->solve_jacobi(rhs);
    BundleSection jv = fx.jac->jacobi_apply(v);
    double res = 0.0, scale = 0.0;
    for (int o = 0; o < fx.jac->num_orbits(); ++o) {
        res = std::max({res, std::abs(jv.f1[o] - rhs.f1[o]), std::abs(jv.f2[o] - rhs.f2[o])});
        scale = std::max({scale, std::abs(rhs.f1[o]), std::abs(rhs.f2[o])});
    }
    CHECK(res <= 1e-8 * scale);
}

TEST_CASE("harmonic projection properties") {
    auto& fx = fixture();
    BundleOneForm om;
    om.w1 = random_section(fx.jac->num_faces(), 101).f1;
    om.w2 = random_section(fx.jac->num_faces(), 102).f1;

    BundleOneForm h = fx.jac->harmonic_projection(om);

    // annihilated by the adjoint
    BundleSection ah = fx.jac->d01_adjoint(h);
    double an = std::sqrt(fx.jac->section_norm_sq(ah));
    double on = std::sqrt(fx.jac->form_norm_sq(om));
    CHECK(an <= 1e-6 * on);

    // Pythagoras and contraction
    BundleOneForm diff{om.w1 - h.w1, om.w2 - h.w2};
    double o2 = fx.jac->form_norm_sq(om);
    double h2 = fx.jac->form_norm_sq(h);
    double d2 = fx.jac->form_norm_sq(diff);
    CHECK(std::abs(o2 - h2 - d2) <= 1e-8 * o2);
    CHECK(h2 <= o2 * (1.0 + 1e-12));

    // exact forms project to zero
    BundleSection s = random_section(fx.jac->num_orbits(), 103);
    BundleOneForm ex = fx.jac->d01(s);
    BundleOneForm hex = fx.jac->harmonic_projection(ex);
    CHECK(std::sqrt(fx.jac->form_norm_sq(hex)) <=
          1e-8 * std::sqrt(fx.jac->form_norm_sq(ex)));
}

TEST_CASE("contraction norm identity against the energy integral") {
    auto& fx = fixture();
    HarmonicBeltrami mu = beltrami_from_q(poincare_series(fx.dom->surface, 0, 4));
    std::vector<complex> mu_face = mu_at_barycenters(*fx.dom, mu);
    auto [om, rhs] = fx.jac->rhs_from_mu(mu_face);
    double lhs = fx.jac->form_norm_sq(om);
    double rhs_int = 0.5 * fx.jac->du_sq_mu_integral(mu_face);
    CHECK(std::abs(lhs - rhs_int) <= 1e-10 * rhs_int);
}

TEST_CASE("curvature annihilates the parallel direction before averaging") {
    // At the identity map u_z = 1, u_zb = 0 in matching charts, so the
    // (swapped-weight) curvature form reduces to r |f2|^2 pointwise: a
    // section parallel to du (f2 = 0) is annihilated before the real-
    // structure averaging, and the C-average splits the weight evenly.
    auto& fx = fixture();
    BundleSection par;
    par.f1 = random_section(fx.jac->num_orbits(), 104).f1;
    par.f2 = Eigen::VectorXcd::Zero(fx.jac->num_orbits());
    BundleSection anti;
    anti.f1 = Eigen::VectorXcd::Zero(fx.jac->num_orbits());
    anti.f2 = par.f1.conjugate();

    double qp = fx.jac->curvature_quad(par);
    double qa = fx.jac->curvature_quad(anti);
    // C-averaging makes both directions carry half the raw weight
    CHECK(qp == doctest::Approx(qa).epsilon(1e-10));
    CHECK(qp >= 0.0);
}

TEST_CASE("kernel vectors do not change the jacobi quadratic form") {
    auto& fx = fixture();
    HarmonicBeltrami mu = beltrami_from_q(poincare_series(fx.dom->surface, 0, 4));
    auto [om, rhs] = fx.jac->rhs_from_mu(mu_at_barycenters(*fx.dom, mu));
    BundleSection v = fx.jac->solve_jacobi(rhs);
    double q0 = fx.jac->jacobi_quad(v);
    for (const auto& k : fx.jac->jacobi_kernel()) {
        BundleSection w = v;
        w.f1 += 0.5 * k.f1;
        w.f2 += 0.5 * k.f2;
        CHECK(std::abs(fx.jac->jacobi_quad(w) - q0) <= 1e-8 * std::abs(q0));
    }
}
