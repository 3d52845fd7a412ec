#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "wplab/conformal.hpp"
#include "wplab/mesh.hpp"
#include "wplab/quad_diff.hpp"
#include "wplab/surface.hpp"

using namespace wplab;

TEST_CASE("poincare series automorphy improves with truncation") {
    auto base = std::make_shared<FuchsianSurface>(build_surface(2));
    double r3 = automorphy_residual(poincare_series(base, 0, 3));
    double r4 = automorphy_residual(poincare_series(base, 0, 4));
    CHECK(r4 < r3);
    CHECK(r4 < 1e-2);
}

TEST_CASE("poincare series is holomorphic") {
    auto base = std::make_shared<FuchsianSurface>(build_surface(2));
    QuadraticDifferential q = poincare_series(base, 0, 4);
    CHECK(cauchy_riemann_residual(q) < 1e-5);
    QuadraticDifferential q2 = poincare_series(base, 2, 4);
    CHECK(cauchy_riemann_residual(q2) < 1e-5);
}

TEST_CASE("invalid series arguments are rejected, small seeds are not") {
    auto base = std::make_shared<FuchsianSurface>(build_surface(2));
    CHECK_THROWS_AS(poincare_series(base, -1, 3), std::invalid_argument);
    CHECK_THROWS_AS(poincare_series(base, 0, -1), std::invalid_argument);
    // seed powers 0..5 all give nondegenerate series on this surface
    for (int m = 0; m < 3; ++m) CHECK_NOTHROW(poincare_series(base, m, 2));
}

TEST_CASE("reduced evaluation matches automorphy transport") {
    auto base = std::make_shared<FuchsianSurface>(build_surface(2));
    QuadraticDifferential q = poincare_series(base, 0, 4);

    // inside the fundamental polygon both evaluations coincide
    complex z{0.05, -0.08};
    CHECK(std::abs(q.eval_reduced(z) - q(z)) < 1e-12 * std::abs(q(z)));

    // outside: reduced evaluation equals the transported interior value
    for (const auto& g : base->generators) {
        complex w = g.m.apply(z);
        complex dginv = g.m.inverse().derivative(w);
        complex transported = q(z) * dginv * dginv;
        CHECK(std::abs(q.eval_reduced(w) - transported) <
              1e-6 * std::max(1.0, std::abs(transported)));
    }
}

TEST_CASE("wp norm stable against deeper truncation") {
    auto base = std::make_shared<FuchsianSurface>(build_surface(2));
    TriangulatedDomain dom = triangulate(base, 2);
    double wp4 = wp_norm_sq(beltrami_from_q(poincare_series(base, 0, 4)), dom);
    double wp5 = wp_norm_sq(beltrami_from_q(poincare_series(base, 0, 5)), dom);
    CHECK(wp4 > 0.0);
    CHECK(std::abs(wp5 - wp4) / wp4 < 1e-2);
}

TEST_CASE("qb pairing of q with its own beltrami is the wp norm") {
    auto base = std::make_shared<FuchsianSurface>(build_surface(2));
    TriangulatedDomain dom = triangulate(base, 2);
    for (int m : {0, 2}) {
        QuadraticDifferential q = poincare_series(base, m, 4);
        HarmonicBeltrami mu = beltrami_from_q(q);
        FaceSamples phi = sample_at_nodes(dom, [&](complex z) { return q.eval_reduced(z); });
        double pair = qb_pairing(phi, mu, dom);
        double wp = wp_norm_sq(mu, dom);
        // same quadrature, same samples: identical up to roundoff
        CHECK(std::abs(pair - wp) < 1e-12 * wp);
    }
}

TEST_CASE("beltrami is bounded on the domain") {
    auto base = std::make_shared<FuchsianSurface>(build_surface(2));
    TriangulatedDomain dom = triangulate(base, 2);
    HarmonicBeltrami mu = beltrami_from_q(poincare_series(base, 0, 4));
    double sup = 0.0;
    for (int o = 0; o < dom.num_orbits(); ++o)
        sup = std::max(sup, std::abs(mu(dom.orbit_pos(o))));
    CHECK(sup > 0.0);
    CHECK(sup < 1e3);  // finite; the deformation bound t_max scales with 1/sup
}
