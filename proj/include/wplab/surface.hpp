#pragma once

#include <memory>
#include <vector>

#include "wplab/moebius.hpp"

namespace wplab {

/// g maps side `side` onto side `partner`, endpoint to endpoint
/// (first endpoint of `side` to second endpoint of `partner`).
struct SidePairing {
    int side = 0;
    int partner = 0;
    Deck g;
};

/// A closed hyperbolic surface presented as a Fuchsian quotient of the disk:
/// canonical generators a1,b1,...,ag,bg, a regular 4g-gon fundamental
/// polygon with the standard commutator side pairing. Cyclic covers carry
/// the covering data (coset representatives, Z/d images) instead of their
/// own polygon; their fundamental domain is d copies of the base polygon.
struct FuchsianSurface {
    int genus = 2;
    std::vector<Deck> generators;
    std::vector<complex> polygon;
    std::vector<SidePairing> pairings;

    // covering data (degree 1, empty for a base surface)
    std::shared_ptr<const FuchsianSurface> base;
    int cover_degree = 1;
    std::vector<int> hom_images;  ///< Z/d image of each base generator
    std::vector<Deck> coset_reps; ///< r_0 = id, ..., r_{d-1}

    bool is_cover() const { return base != nullptr; }
    int euler_characteristic() const { return 2 - 2 * genus; }
    int num_sides() const { return static_cast<int>(polygon.size()); }

    /// The group whose deck-transformation words index this surface's mesh
    /// (the base group for covers, itself otherwise).
    const FuchsianSurface& word_group() const { return base ? *base : *this; }
};

/// Regular 4g-gon quotient with the commutator side pairing.
/// Throws std::invalid_argument for genus < 2.
FuchsianSurface build_surface(int genus);

/// Cyclic cover determined by a surjection of the base group onto Z/d given
/// by the images `hom` of the canonical generators. Throws
/// std::invalid_argument when the images do not generate Z/d.
FuchsianSurface build_cyclic_cover(std::shared_ptr<const FuchsianSurface> base,
                                   const std::vector<int>& hom, int d);

/// Deviation of the commutator relator word from +-identity.
double relator_defect(const FuchsianSurface& s);

/// Sum of the geodesic interior angles of the fundamental polygon.
double polygon_angle_sum(const FuchsianSurface& s);

/// Largest endpoint mismatch over all side pairings.
double pairing_defect(const FuchsianSurface& s);

/// Value of the Z/d homomorphism on a word in the base generators.
int hom_value(const std::vector<int>& hom, int d, const Word& w);

}  // namespace wplab
