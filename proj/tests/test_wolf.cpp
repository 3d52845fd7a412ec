#include <doctest.h>

#include <cmath>
#include <memory>

#include "wplab/conformal.hpp"
#include "wplab/laplacian.hpp"
#include "wplab/surface.hpp"
#include "wplab/wolf.hpp"

using namespace wplab;

namespace {

std::shared_ptr<const TriangulatedDomain> make_domain() {
    auto base = std::make_shared<FuchsianSurface>(build_surface(2));
    return std::make_shared<TriangulatedDomain>(triangulate(base, 2));
}

}  // namespace

TEST_CASE("laplacian basics") {
    auto dom = make_domain();
    HyperbolicLaplacian lap = assemble_laplacian(*dom);

    // constants are harmonic
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(dom->num_orbits());
    CHECK((lap.stiffness * ones).cwiseAbs().maxCoeff() < 1e-10);

    // mass sums to the hyperbolic area
    CHECK(lap.mass.sum() == doctest::Approx(hyperbolic_area(*dom)).epsilon(1e-10));

    // stiffness is symmetric positive semidefinite
    Eigen::MatrixXd k = Eigen::MatrixXd(lap.stiffness);
    CHECK((k - k.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("shifted solve satisfies its equation") {
    auto dom = make_domain();
    HyperbolicLaplacian lap = assemble_laplacian(*dom);
    ScalarField rhs = orbit_field(*dom, [](complex z) { return std::exp(-std::norm(z)); });
    ScalarField alpha = solve_shifted(lap, rhs);

    Eigen::VectorXd res = (lap.stiffness * alpha + 2.0 * lap.mass.asDiagonal() * alpha) -
                          2.0 * lap.mass.asDiagonal() * rhs;
    CHECK(res.norm() < 1e-9 * rhs.norm());
}

TEST_CASE("metric family at t = 0 is the hyperbolic metric") {
    auto dom = make_domain();
    auto base = dom->surface;
    auto q = std::make_shared<QuadraticDifferential>(poincare_series(base, 0, 4));
    WolfMetricFamily fam = make_wolf_family(dom, q);
    CHECK(fam.t_max > 0.0);

    for (int f = 0; f < dom->num_faces(); f += 17) {
        GMatrix g = metric_at_node(fam, 0.0, f, 0);
        CHECK(std::abs(g.g_zz()) == 0.0);
        CHECK(g.g_zzb() == doctest::Approx(0.5 * g.lambda2).epsilon(1e-14));
        CHECK(g.det() == doctest::Approx(-0.25 * g.lambda2 * g.lambda2).epsilon(1e-14));
    }

    CHECK_THROWS_AS(metric_at_node(fam, 2.0 * fam.t_max, 0, 0), std::out_of_range);
}

TEST_CASE("compensator satisfies the pointwise lower bound") {
    auto dom = make_domain();
    auto base = dom->surface;
    for (int m : {0, 2}) {
        auto q = std::make_shared<QuadraticDifferential>(poincare_series(base, m, 4));
        WolfMetricFamily fam = make_wolf_family(dom, q);
        double worst = 1e300, scale = 0.0;
        for (int o = 0; o < dom->num_orbits(); ++o) {
            complex z = dom->orbit_pos(o);
            double l2 = conformal::lambda2(z);
            double qq = std::norm(q->eval_reduced(z)) / (l2 * l2);
            worst = std::min(worst, fam.alpha[o] - qq / 3.0);
            scale = std::max(scale, qq);
        }
        CHECK(worst >= -1e-6 * scale);
    }
}

TEST_CASE("null direction gives the frozen family") {
    auto dom = make_domain();
    WolfMetricFamily fam = make_wolf_family(dom, nullptr);
    CHECK(fam.t_max == 1.0);
    GMatrix g0 = metric_at_node(fam, 0.0, 3, 1);
    GMatrix g1 = metric_at_node(fam, 0.5, 3, 1);
    CHECK(g0.g_zzb() == g1.g_zzb());
    CHECK(std::abs(g1.g_zz()) == 0.0);
}

TEST_CASE("volume element consistent with the metric determinant") {
    auto dom = make_domain();
    auto q = std::make_shared<QuadraticDifferential>(poincare_series(dom->surface, 0, 4));
    WolfMetricFamily fam = make_wolf_family(dom, q);
    double t = 0.5 * fam.t_max;
    for (int f = 0; f < dom->num_faces(); f += 29) {
        GMatrix g = metric_at_node(fam, t, f, 2);
        CHECK(volume_element_at_node(fam, t, f, 2) ==
              doctest::Approx(std::sqrt(std::abs(g.det()))).epsilon(1e-12));
    }
}
