#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <set>

#include "wplab/surface.hpp"

using namespace wplab;

namespace {
constexpr double kPi = std::numbers::pi_v<double>;
}

TEST_CASE("moebius algebra") {
    Moebius g = Moebius::align({0.3, 0.1}, {-0.2, 0.4});
    Moebius h = Moebius::rotation(0.7);
    complex z{0.11, -0.25};

    CHECK(std::abs(g.compose(g.inverse()).apply(z) - z) < 1e-14);
    CHECK(std::abs(g.compose(h).apply(z) - g.apply(h.apply(z))) < 1e-14);
    CHECK(g.det_defect() < 1e-12);

    // holomorphic derivative against finite differences
    double fd_h = 1e-7;
    complex fd = (g.apply(z + fd_h) - g.apply(z - fd_h)) / (2.0 * fd_h);
    CHECK(std::abs(g.derivative(z) - fd) < 1e-6);

    // isometry of the hyperbolic distance
    complex w{-0.4, 0.2};
    CHECK(hyperbolic_distance(g.apply(z), g.apply(w)) ==
          doctest::Approx(hyperbolic_distance(z, w)).epsilon(1e-12));

    // midpoint is equidistant and on the segment
    complex m = hyperbolic_midpoint(z, w);
    CHECK(hyperbolic_distance(z, m) == doctest::Approx(hyperbolic_distance(m, w)).epsilon(1e-10));
    CHECK(hyperbolic_distance(z, m) + hyperbolic_distance(m, w) ==
          doctest::Approx(hyperbolic_distance(z, w)).epsilon(1e-10));
}

TEST_CASE("word evaluation") {
    FuchsianSurface s = build_surface(2);
    std::vector<Moebius> gens;
    for (const auto& g : s.generators) gens.push_back(g.m);

    Word w{1, -2, 3};
    Moebius direct = gens[0].compose(gens[1].inverse()).compose(gens[2]);
    CHECK(word_to_moebius(w, gens).dist_to(direct) < 1e-12);
    CHECK(word_to_moebius(word_concat(w, word_inverse(w)), gens).dist_to_identity() < 1e-12);
}

TEST_CASE("genus 2 surface group") {
    FuchsianSurface s = build_surface(2);
    CHECK(s.genus == 2);
    CHECK(s.num_sides() == 8);
    CHECK(s.generators.size() == 4);
    CHECK(s.euler_characteristic() == -2);

    // smooth quotient: polygon angles sum to a full turn
    CHECK(polygon_angle_sum(s) == doctest::Approx(2.0 * kPi).epsilon(1e-10));
    CHECK(relator_defect(s) < 1e-10);
    CHECK(pairing_defect(s) < 1e-10);
}

TEST_CASE("genus 3 surface group") {
    FuchsianSurface s = build_surface(3);
    CHECK(s.num_sides() == 12);
    CHECK(polygon_angle_sum(s) == doctest::Approx(2.0 * kPi).epsilon(1e-10));
    CHECK(relator_defect(s) < 1e-10);
}

TEST_CASE("invalid genus rejected") {
    CHECK_THROWS_AS(build_surface(1), std::invalid_argument);
    CHECK_THROWS_AS(build_surface(0), std::invalid_argument);
}

TEST_CASE("cyclic cover construction") {
    auto base = std::make_shared<FuchsianSurface>(build_surface(2));

    for (int d : {2, 3}) {
        FuchsianSurface cover = build_cyclic_cover(base, {1, 0, 0, 0}, d);
        CHECK(cover.is_cover());
        CHECK(cover.cover_degree == d);
        // Riemann-Hurwitz for unramified covers: g' = d (g - 1) + 1
        CHECK(cover.genus == d * (base->genus - 1) + 1);
        CHECK(cover.coset_reps.size() == static_cast<std::size_t>(d));

        // coset enumeration oracle: representative words hit every residue
        std::set<int> residues;
        for (const auto& r : cover.coset_reps)
            residues.insert(hom_value(cover.hom_images, d, r.w));
        CHECK(residues.size() == static_cast<std::size_t>(d));
    }

    // images must generate Z/d
    CHECK_THROWS_AS(build_cyclic_cover(base, {0, 0, 0, 0}, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_cyclic_cover(base, {2, 0, 0, 0}, 4), std::invalid_argument);
}

TEST_CASE("homomorphism on words") {
    std::vector<int> hom{1, 0, 0, 0};
    CHECK(hom_value(hom, 2, Word{}) == 0);
    CHECK(hom_value(hom, 2, Word{1}) == 1);
    CHECK(hom_value(hom, 2, Word{1, 1}) == 0);
    CHECK(hom_value(hom, 2, Word{-1, 2, 3}) == 1);
    // relator maps to zero (commutators die in the abelian quotient)
    CHECK(hom_value(hom, 2, Word{1, 2, -1, -2, 3, 4, -3, -4}) == 0);
}
