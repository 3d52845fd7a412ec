#include "wplab/mesh.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "wplab/conformal.hpp"

namespace wplab {

namespace {

/// Union-find over vertex instances where every link carries the deck
/// transformation relating the two charts: pos[i] = up(pos[parent]).
class OrbitBuilder {
  public:
    int add() {
        parent_.push_back(static_cast<int>(parent_.size()));
        up_.push_back(Deck::identity());
        return static_cast<int>(parent_.size()) - 1;
    }

    std::pair<int, Deck> find(int i) {
        if (parent_[i] == i) return {i, up_[i]};
        auto [r, d] = find(parent_[i]);
        parent_[i] = r;
        up_[i] = up_[i].compose(d);
        return {r, up_[i]};
    }

    /// Record pos[i] = g(pos[j]).
    void unite(int i, int j, const Deck& g) {
        auto [ri, di] = find(i);
        auto [rj, dj] = find(j);
        if (ri == rj) {
            // Same orbit reached along two side chains; the transforms must
            // agree as group elements (stabilizers are trivial).
            if (di.m.dist_to(g.m.compose(dj.m)) > 1e-6)
                throw std::runtime_error("mesh: inconsistent vertex identification");
            return;
        }
        parent_[ri] = rj;
        up_[ri] = di.inverse().compose(g).compose(dj);
    }

    /// Write orbit ids, per-instance decks and representatives into dom.
    void finalize(TriangulatedDomain& dom) {
        const int n = static_cast<int>(parent_.size());
        dom.orbit.assign(n, -1);
        dom.deck.assign(n, Deck::identity());
        dom.rep.clear();
        std::map<int, int> id_of_root;
        for (int i = 0; i < n; ++i) {
            auto [r, d] = find(i);
            auto it = id_of_root.find(r);
            if (it == id_of_root.end()) {
                it = id_of_root.emplace(r, static_cast<int>(dom.rep.size())).first;
                dom.rep.push_back(r);
            }
            dom.orbit[i] = it->second;
            dom.deck[i] = d;
        }
    }

  private:
    std::vector<int> parent_;
    std::vector<Deck> up_;
};

double cross(complex u, complex v) { return std::imag(std::conj(u) * v); }

// 6-point degree-4 triangle rule (two orbits of barycentric points).
struct TriRulePoint {
    double l0, l1, l2, w;
};
constexpr double kTriA = 0.445948490915965;
constexpr double kTriB = 0.091576213509771;
constexpr double kTriWA = 0.223381589678011;
constexpr double kTriWB = 0.109951743655322;
const TriRulePoint kTriRule[6] = {
    {kTriA, kTriA, 1 - 2 * kTriA, kTriWA}, {kTriA, 1 - 2 * kTriA, kTriA, kTriWA},
    {1 - 2 * kTriA, kTriA, kTriA, kTriWA}, {kTriB, kTriB, 1 - 2 * kTriB, kTriWB},
    {kTriB, 1 - 2 * kTriB, kTriB, kTriWB}, {1 - 2 * kTriB, kTriB, kTriB, kTriWB},
};

// Gauss-Legendre on [0,1].
const double kGauss4X[4] = {0.069431844202974, 0.330009478207572, 0.669990521792428,
                            0.930568155797026};
const double kGauss4W[4] = {0.173927422568727, 0.326072577431273, 0.326072577431273,
                            0.173927422568727};
const double kGauss3X[3] = {0.112701665379258, 0.5, 0.887298334620742};
const double kGauss3W[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

/// Affine extension of the corner shape functions of face f at z.
std::array<double, 3> shape_at(const TriangulatedDomain& dom, const MeshFace& f, complex z) {
    complex z0 = dom.pos[f.v[0]], z1 = dom.pos[f.v[1]], z2 = dom.pos[f.v[2]];
    double c = cross(z1 - z0, z2 - z0);
    double l1 = cross(z - z0, z2 - z0) / c;
    double l2 = cross(z1 - z0, z - z0) / c;
    return {1.0 - l1 - l2, l1, l2};
}

/// Quadrature for a face whose glued side is a geodesic arc: a transfinite
/// product-Gauss rule over the true curved region (segments from the
/// opposite corner to arc points). Every weight is positive, so the
/// discrete energy stays a nonnegative quadratic form; the earlier
/// straight-rule-plus-signed-strip scheme made the energy unbounded below
/// for wild maps (negative weights times a divergent conformal factor),
/// which opened spurious descent paths for the minimizer.
void curved_face_nodes(const TriangulatedDomain& dom, MeshFace& f, const GluedEdge& e) {
    complex p = dom.pos[f.v[e.side]];
    complex q = dom.pos[f.v[(e.side + 1) % 3]];
    complex opp = dom.pos[f.v[(e.side + 2) % 3]];

    Moebius t = Moebius::to_origin(p);
    Moebius ti = t.inverse();
    complex tq = t.apply(q);

    auto arc = [&](double s) { return ti.apply(s * tq); };
    auto arc_deriv = [&](double s) { return ti.derivative(s * tq) * tq; };

    f.nodes.clear();
    f.nodes.reserve(16);
    double total = 0.0;
    for (int is = 0; is < 4; ++is) {
        complex a = arc(kGauss4X[is]);
        complex ad = arc_deriv(kGauss4X[is]);
        for (int iu = 0; iu < 4; ++iu) {
            double u = kGauss4X[iu];
            complex x = opp + u * (a - opp);
            double w = u * cross(ad, a - opp) * kGauss4W[is] * kGauss4W[iu];
            f.nodes.push_back(QuadNode{x, w, shape_at(dom, f, x)});
            total += w;
        }
    }
    // fix the orientation of the (s,u) patch once per face
    if (total < 0.0)
        for (auto& n : f.nodes) n.w = -n.w;
}

void finalize_quadrature(TriangulatedDomain& dom) {
    for (auto& f : dom.faces) {
        complex z0 = dom.pos[f.v[0]], z1 = dom.pos[f.v[1]], z2 = dom.pos[f.v[2]];
        f.chart_area = 0.5 * cross(z1 - z0, z2 - z0);
        if (!(f.chart_area > 0.0)) throw std::runtime_error("mesh: degenerate or flipped face");
        f.nodes.clear();
        f.nodes.reserve(6);
        for (const auto& r : kTriRule) {
            complex z = r.l0 * z0 + r.l1 * z1 + r.l2 * z2;
            f.nodes.push_back(QuadNode{z, r.w * f.chart_area, {r.l0, r.l1, r.l2}});
        }
    }
    for (const auto& e : dom.glued) curved_face_nodes(dom, dom.faces[e.face], e);
}

}  // namespace

TriangulatedDomain triangulate(std::shared_ptr<const FuchsianSurface> surface, int level) {
    if (!surface) throw std::invalid_argument("triangulate: null surface");
    if (level < 0) throw std::invalid_argument("triangulate: negative refinement level");
    const FuchsianSurface& s = *surface;
    const int n = s.num_sides();
    const int d = s.cover_degree;
    std::vector<Deck> reps = s.is_cover() ? s.coset_reps : std::vector<Deck>{Deck::identity()};
    if (static_cast<int>(reps.size()) != d)
        throw std::invalid_argument("triangulate: bad coset representatives");

    TriangulatedDomain dom;
    dom.surface = surface;

    // One polygon copy per coset representative; instance layout per copy:
    // [center, corner 0, ..., corner n-1].
    OrbitBuilder ub;
    auto inst = [&](int copy, int corner) { return copy * (n + 1) + 1 + corner; };
    for (int j = 0; j < d; ++j) {
        dom.pos.push_back(reps[j].m.apply(complex{0.0, 0.0}));
        ub.add();
        for (int k = 0; k < n; ++k) {
            dom.pos.push_back(reps[j].m.apply(s.polygon[k]));
            ub.add();
        }
    }

    for (int j = 0; j < d; ++j)
        for (int k = 0; k < n; ++k)
            dom.faces.push_back(
                MeshFace{{j * (n + 1), inst(j, k), inst(j, (k + 1) % n)}, 0.0, {}});

    // Side gluings: copy j's side maps onto copy k's partner side, where k
    // absorbs the Z/d drop of the pairing element; the glueing transform
    // r_k g r_j^-1 lies in the kernel, i.e. is a deck move of the cover.
    if (static_cast<int>(s.pairings.size()) != n)
        throw std::invalid_argument("triangulate: pairing per side required");
    std::vector<int> pairing_of_side(n, -1);
    for (int i = 0; i < n; ++i) pairing_of_side[s.pairings[i].side] = i;
    dom.glued.resize(static_cast<std::size_t>(d) * n);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < n; ++i) {
            const SidePairing& p = s.pairings[i];
            int h = s.is_cover() ? hom_value(s.hom_images, d, p.g.w) : 0;
            int k = ((j - h) % d + d) % d;
            Deck g = reps[k].compose(p.g).compose(reps[j].inverse());
            dom.glued[j * n + p.side] =
                GluedEdge{j * n + p.side, 1, k * n + p.partner, g};
            // endpoint identifications (pairings reverse orientation)
            ub.unite(inst(k, (p.partner + 1) % n), inst(j, p.side), g);
            ub.unite(inst(k, p.partner), inst(j, (p.side + 1) % n), g);
        }
    }
    for (std::size_t i = 0; i < dom.glued.size(); ++i)
        if (dom.glued[dom.glued[i].partner].partner != static_cast<int>(i))
            throw std::runtime_error("triangulate: asymmetric side gluing");

    ub.finalize(dom);
    finalize_quadrature(dom);
    for (int l = 0; l < level; ++l) dom = refine(dom);
    return dom;
}

TriangulatedDomain refine(const TriangulatedDomain& dom) {
    TriangulatedDomain out;
    out.surface = dom.surface;
    out.refinement_level = dom.refinement_level + 1;
    out.pos = dom.pos;
    out.orbit = dom.orbit;
    out.deck = dom.deck;
    out.rep = dom.rep;

    std::map<std::pair<int, int>, int> glued_side;  // (face, side) -> glued index
    for (std::size_t i = 0; i < dom.glued.size(); ++i)
        glued_side[{dom.glued[i].face, dom.glued[i].side}] = static_cast<int>(i);

    // Geodesic midpoints throughout, so refinement commutes with the deck
    // action and every polygon copy stays an exact isometric image of the
    // first. Glued-edge midpoints are created once per pair, the partner
    // transported by the gluing so the orbit stays shared.
    std::vector<int> glued_mid(dom.glued.size(), -1);
    for (std::size_t i = 0; i < dom.glued.size(); ++i) {
        const GluedEdge& e = dom.glued[i];
        if (static_cast<int>(i) > e.partner) continue;
        const MeshFace& f = dom.faces[e.face];
        complex p = dom.pos[f.v[e.side]];
        complex q = dom.pos[f.v[(e.side + 1) % 3]];
        complex m = hyperbolic_midpoint(p, q);
        int mi = static_cast<int>(out.pos.size());
        out.pos.push_back(m);
        out.orbit.push_back(out.num_orbits());
        out.deck.push_back(Deck::identity());
        out.rep.push_back(mi);
        glued_mid[i] = mi;
        int mpi = static_cast<int>(out.pos.size());
        out.pos.push_back(e.g.m.apply(m));
        out.orbit.push_back(out.orbit[mi]);
        out.deck.push_back(e.g);
        glued_mid[e.partner] = mpi;
    }
    std::map<std::pair<int, int>, int> interior_mid;
    auto midpoint_of = [&](int face, int side) {
        auto git = glued_side.find({face, side});
        if (git != glued_side.end()) return glued_mid[git->second];
        const MeshFace& f = dom.faces[face];
        int a = f.v[side], b = f.v[(side + 1) % 3];
        auto key = std::minmax(a, b);
        auto it = interior_mid.find(key);
        if (it != interior_mid.end()) return it->second;
        int mi = static_cast<int>(out.pos.size());
        out.pos.push_back(hyperbolic_midpoint(dom.pos[a], dom.pos[b]));
        out.orbit.push_back(out.num_orbits());
        out.deck.push_back(Deck::identity());
        out.rep.push_back(mi);
        interior_mid.emplace(key, mi);
        return mi;
    };

    out.faces.reserve(dom.faces.size() * 4);
    for (std::size_t fi = 0; fi < dom.faces.size(); ++fi) {
        const MeshFace& f = dom.faces[fi];
        int m01 = midpoint_of(static_cast<int>(fi), 0);
        int m12 = midpoint_of(static_cast<int>(fi), 1);
        int m20 = midpoint_of(static_cast<int>(fi), 2);
        out.faces.push_back(MeshFace{{f.v[0], m01, m20}, 0.0, {}});
        out.faces.push_back(MeshFace{{f.v[1], m12, m01}, 0.0, {}});
        out.faces.push_back(MeshFace{{f.v[2], m20, m12}, 0.0, {}});
        out.faces.push_back(MeshFace{{m01, m12, m20}, 0.0, {}});
    }

    // Each glued edge splits in two; child i of edge e pairs with child 1-i
    // of e's partner (the gluing reverses endpoints).
    out.glued.resize(dom.glued.size() * 2);
    for (std::size_t i = 0; i < dom.glued.size(); ++i) {
        const GluedEdge& e = dom.glued[i];
        int fa = 4 * e.face + e.side;             // child at first endpoint
        int fb = 4 * e.face + (e.side + 1) % 3;   // child at second endpoint
        out.glued[2 * i] = GluedEdge{fa, 0, 2 * e.partner + 1, e.g};
        out.glued[2 * i + 1] = GluedEdge{fb, 2, 2 * e.partner, e.g};
    }

    finalize_quadrature(out);
    return out;
}

double hyperbolic_area(const TriangulatedDomain& dom) {
    double area = 0.0;
    for (const auto& f : dom.faces)
        for (const auto& n : f.nodes) area += n.w * conformal::lambda2(n.z);
    return area;
}

double max_chart_edge_length(const TriangulatedDomain& dom) {
    double worst = 0.0;
    for (const auto& f : dom.faces)
        for (int e = 0; e < 3; ++e)
            worst = std::max(worst, std::abs(dom.pos[f.v[e]] - dom.pos[f.v[(e + 1) % 3]]));
    return worst;
}

double instance_consistency_defect(const TriangulatedDomain& dom) {
    double worst = 0.0;
    for (int i = 0; i < dom.num_instances(); ++i)
        worst = std::max(worst,
                         std::abs(dom.pos[i] - dom.deck[i].m.apply(dom.orbit_pos(dom.orbit[i]))));
    return worst;
}

}  // namespace wplab
