#pragma once

#include <memory>
#include <vector>

#include "wplab/mesh.hpp"
#include "wplab/surface.hpp"

namespace wplab {

/// Piecewise-affine equivariant map into a hyperbolic target quotient.
/// One target disk value is stored per vertex orbit; the value used at a
/// mesh instance is the stored value pushed through the homomorphism image
/// of the instance's deck word (and a per-orbit gauge choice of lift).
struct EquivariantMap {
    std::shared_ptr<const TriangulatedDomain> domain;
    std::shared_ptr<const FuchsianSurface> target;
    std::vector<Moebius> phi;     ///< generator images (domain word group -> target group)
    std::vector<complex> values;  ///< per orbit
    std::vector<Moebius> gauge;   ///< per orbit, lift choice (default identity)
    std::vector<Moebius> corner;  ///< per instance, cached phi(deck word)

    Moebius corner_transform(int inst) const {
        return corner[inst].compose(gauge[domain->orbit[inst]]);
    }
    complex corner_value(int inst) const {
        return corner_transform(inst).apply(values[domain->orbit[inst]]);
    }
    Moebius word_image(const Word& w) const { return word_to_moebius(w, phi); }
};

/// Assemble a map and its per-instance transform cache. Throws when a
/// generator image list does not match the domain word group.
EquivariantMap make_equivariant_map(std::shared_ptr<const TriangulatedDomain> domain,
                                    std::shared_ptr<const FuchsianSurface> target,
                                    std::vector<Moebius> phi, std::vector<complex> values);

/// Identity map of a base surface onto itself (phi = generators).
EquivariantMap identity_scenario(std::shared_ptr<const TriangulatedDomain> domain);

/// Covering projection of a cyclic cover onto its base at the pullback
/// structure (phi = base-generator images of the deck words; values are the
/// chart positions, making the map the identity on the disk).
EquivariantMap covering_scenario(std::shared_ptr<const TriangulatedDomain> domain);

/// Orientation-reversed covering: values conjugated and the generator
/// images conjugated coefficient-wise (degree flips sign).
EquivariantMap conjugated_covering_scenario(std::shared_ptr<const TriangulatedDomain> domain);

/// Self-map of a base surface in the homotopy class of a Dehn twist
/// (a1 -> a1, b1 -> b1 a1, other generators fixed), started at the
/// identity values. Its harmonic representative has nonzero Hopf field.
EquivariantMap twist_scenario(std::shared_ptr<const TriangulatedDomain> domain);

/// Worst defect of the homomorphism on the domain relator (base surfaces)
/// or on a sample of identified corner words; a well-formed phi gives ~0.
double homomorphism_defect(const EquivariantMap& map);

/// Pull stored values with |v| >= radius back toward the target fundamental
/// domain by deck moves, compensating in the per-orbit gauge (used corner
/// values are unchanged up to roundoff).
void recenter_values(EquivariantMap& map, double radius = 1.0 - 1e-6);

/// Random equivariant perturbation of the stored values, amplitude scaled
/// by (1 - |v|^2) so values stay inside the disk. Deterministic in seed.
void perturb_values(EquivariantMap& map, double amplitude, unsigned seed);

}  // namespace wplab
