#pragma once

#include <array>
#include <memory>
#include <vector>

#include "wplab/surface.hpp"

namespace wplab {

/// Quadrature node in a face chart. `w` is an absolute dx dy weight
/// (negative for curved-boundary correction nodes), N are the affine
/// shape-function values of the face corners at z.
struct QuadNode {
    complex z;
    double w;
    std::array<double, 3> N;
};

struct MeshFace {
    std::array<int, 3> v;  ///< corner instance ids, counterclockwise
    double chart_area = 0.0;
    std::vector<QuadNode> nodes;
};

/// A face edge lying on a glued geodesic side of the fundamental domain.
/// `g` maps this edge's chart points onto the partner edge's chart, with
/// reversed orientation (side pairings flip the traversal direction).
struct GluedEdge {
    int face = 0;
    int side = 0;     ///< local edge (v[side], v[(side+1)%3])
    int partner = -1; ///< index of the partner edge in `glued`
    Deck g;
};

/// Triangulated fundamental domain of a Fuchsian quotient. Chart points are
/// stored per *instance*; instances identified by deck transformations share
/// an *orbit*, which is the actual vertex of the quotient complex. All
/// per-vertex fields live on orbits; a corner instance carries the deck
/// transformation from its orbit representative.
struct TriangulatedDomain {
    std::shared_ptr<const FuchsianSurface> surface;
    int refinement_level = 0;

    std::vector<complex> pos;    ///< per instance
    std::vector<int> orbit;      ///< instance -> orbit id
    std::vector<Deck> deck;      ///< pos[i] = deck[i].m(pos of orbit representative)
    std::vector<int> rep;        ///< orbit -> representative instance (deck = id)
    std::vector<MeshFace> faces;
    std::vector<GluedEdge> glued;

    int num_orbits() const { return static_cast<int>(rep.size()); }
    int num_instances() const { return static_cast<int>(pos.size()); }
    int num_faces() const { return static_cast<int>(faces.size()); }
    complex orbit_pos(int o) const { return pos[rep[o]]; }
    /// V - E + F of the identified complex (every face edge is matched).
    int euler_characteristic() const { return num_orbits() - num_faces() / 2; }
};

/// Fan triangulation of the fundamental domain (d copies of the base
/// polygon for covers) with `level` rounds of 1->4 midpoint refinement.
TriangulatedDomain triangulate(std::shared_ptr<const FuchsianSurface> surface, int level);

/// One round of 1->4 refinement at geodesic edge midpoints (kept
/// equivariant across glued edges by the pairing transforms).
TriangulatedDomain refine(const TriangulatedDomain& dom);

/// Integral of lambda0^2 over the domain; equals -2 pi chi up to quadrature error.
double hyperbolic_area(const TriangulatedDomain& dom);

double max_chart_edge_length(const TriangulatedDomain& dom);

/// Worst |pos[i] - deck[i](rep pos)| over instances, a construction invariant.
double instance_consistency_defect(const TriangulatedDomain& dom);

}  // namespace wplab
