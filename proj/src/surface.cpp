#include "wplab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>

namespace wplab {

namespace {

/// Interior angle of the regular hyperbolic n-gon with Euclidean
/// circumradius r (geodesic sides), measured at a vertex.
double vertex_angle(double r, int n) {
    double step = 2.0 * std::numbers::pi / n;
    complex v0{r, 0.0};
    complex vn = std::polar(r, step);
    complex vp = std::polar(r, -step);
    Moebius t = Moebius::to_origin(v0);
    double a1 = std::arg(t.apply(vn));
    double a2 = std::arg(t.apply(vp));
    double d = std::fmod(std::abs(a1 - a2), 2.0 * std::numbers::pi);
    return std::min(d, 2.0 * std::numbers::pi - d);
}

}  // namespace

FuchsianSurface build_surface(int genus) {
    if (genus < 2) throw std::invalid_argument("build_surface: genus must be >= 2");
    const int n = 4 * genus;
    const double target = 2.0 * std::numbers::pi / n;

    // Circumradius by bisection: the vertex angle decreases from the
    // Euclidean value (n-2)pi/n at r=0 towards 0 as r -> 1.
    double lo = 1e-6, hi = 1.0 - 1e-12;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (vertex_angle(mid, n) > target)
            lo = mid;
        else
            hi = mid;
    }
    double r = 0.5 * (lo + hi);

    FuchsianSurface s;
    s.genus = genus;
    s.polygon.resize(n);
    for (int k = 0; k < n; ++k)
        s.polygon[k] = std::polar(r, 2.0 * std::numbers::pi * k / n);

    // Commutator pairing: sides in blocks (a_j, b_j, a_j^-1, b_j^-1).
    // Generator A_j carries the a_j^-1 side onto the a_j side reversed.
    auto& v = s.polygon;
    auto at = [&](int k) { return v[((k % n) + n) % n]; };
    for (int j = 0; j < genus; ++j) {
        Moebius A = Moebius::matching(at(4 * j + 3), at(4 * j + 2), at(4 * j), at(4 * j + 1));
        Moebius B = Moebius::matching(at(4 * j + 1), at(4 * j + 2), at(4 * j + 4), at(4 * j + 3));
        A.renormalize();
        B.renormalize();
        s.generators.push_back(Deck{A, Word{static_cast<std::int16_t>(2 * j + 1)}});
        s.generators.push_back(Deck{B, Word{static_cast<std::int16_t>(2 * j + 2)}});
    }

    for (int j = 0; j < genus; ++j) {
        const Deck& A = s.generators[2 * j];
        const Deck& B = s.generators[2 * j + 1];
        s.pairings.push_back({4 * j, 4 * j + 2, A.inverse()});
        s.pairings.push_back({4 * j + 2, 4 * j, A});
        s.pairings.push_back({4 * j + 1, 4 * j + 3, B});
        s.pairings.push_back({4 * j + 3, 4 * j + 1, B.inverse()});
    }
    return s;
}

int hom_value(const std::vector<int>& hom, int d, const Word& w) {
    long v = 0;
    for (auto l : w) {
        int i = std::abs(l) - 1;
        v += (l > 0) ? hom[i] : -hom[i];
    }
    return static_cast<int>(((v % d) + d) % d);
}

FuchsianSurface build_cyclic_cover(std::shared_ptr<const FuchsianSurface> base,
                                   const std::vector<int>& hom, int d) {
    if (!base) throw std::invalid_argument("build_cyclic_cover: null base");
    if (d < 1) throw std::invalid_argument("build_cyclic_cover: degree must be >= 1");
    if (hom.size() != base->generators.size())
        throw std::invalid_argument("build_cyclic_cover: one image per generator required");

    // Surjectivity onto Z/d: the images must generate, i.e. gcd(images, d) = 1.
    int g = d;
    for (int h : hom) g = std::gcd(g, ((h % d) + d) % d);
    if (d > 1 && g != 1)
        throw std::invalid_argument("build_cyclic_cover: hom is not surjective onto Z/d");

    FuchsianSurface c;
    c.base = base;
    c.cover_degree = d;
    c.hom_images = hom;
    c.genus = d * (base->genus - 1) + 1;
    c.polygon = base->polygon;
    c.pairings = base->pairings;

    if (d == 1) {
        c.coset_reps = {Deck::identity()};
        c.generators = base->generators;
        return c;
    }

    // Shortest word w with hom(w) = 1 mod d, by breadth-first search over
    // generator letters; coset representatives are its powers.
    std::vector<Word> reach(d);
    std::vector<bool> seen(d, false);
    seen[0] = true;
    std::deque<int> queue{0};
    while (!queue.empty() && !seen[1 % d]) {
        int cur = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i < hom.size(); ++i) {
            for (int sgn : {+1, -1}) {
                int nxt = ((cur + sgn * hom[i]) % d + d) % d;
                if (!seen[nxt]) {
                    seen[nxt] = true;
                    reach[nxt] = reach[cur];
                    reach[nxt].push_back(static_cast<std::int16_t>(sgn * (int(i) + 1)));
                    queue.push_back(nxt);
                }
            }
        }
    }
    const Word& w1 = reach[1];
    Deck w{word_to_moebius(w1, [&] {
               std::vector<Moebius> ms;
               for (auto& gdeck : base->generators) ms.push_back(gdeck.m);
               return ms;
           }()),
           w1};

    c.coset_reps.resize(d);
    c.coset_reps[0] = Deck::identity();
    for (int j = 1; j < d; ++j) c.coset_reps[j] = c.coset_reps[j - 1].compose(w);

    // Schreier generators r_j x_i r_k^-1, k = j + hom(x_i).
    for (int j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < base->generators.size(); ++i) {
            int k = ((j + hom[i]) % d + d) % d;
            Deck s = c.coset_reps[j].compose(base->generators[i]).compose(c.coset_reps[k].inverse());
            if (!s.w.empty()) c.generators.push_back(s);
        }
    }
    return c;
}

double relator_defect(const FuchsianSurface& s) {
    Moebius r = Moebius::identity();
    if (s.is_cover()) {
        // No canonical relator for Schreier generators; report the worst
        // kernel-membership defect instead: every generator must map to 0 in Z/d.
        double worst = 0.0;
        for (auto& gdeck : s.generators)
            worst = std::max(worst, double(hom_value(s.hom_images, s.cover_degree, gdeck.w) != 0));
        return worst;
    }
    for (int j = 0; j < s.genus; ++j) {
        const Moebius& A = s.generators[2 * j].m;
        const Moebius& B = s.generators[2 * j + 1].m;
        r = r.compose(A).compose(B).compose(A.inverse()).compose(B.inverse());
    }
    return r.dist_to_identity();
}

double polygon_angle_sum(const FuchsianSurface& s) {
    const int n = s.num_sides();
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        complex v0 = s.polygon[k];
        complex vn = s.polygon[(k + 1) % n];
        complex vp = s.polygon[(k + n - 1) % n];
        Moebius t = Moebius::to_origin(v0);
        double a1 = std::arg(t.apply(vn));
        double a2 = std::arg(t.apply(vp));
        double d = std::fmod(std::abs(a1 - a2), 2.0 * std::numbers::pi);
        sum += std::min(d, 2.0 * std::numbers::pi - d);
    }
    return sum;
}

double pairing_defect(const FuchsianSurface& s) {
    const int n = s.num_sides();
    double worst = 0.0;
    for (const auto& p : s.pairings) {
        complex p0 = s.polygon[p.side];
        complex p1 = s.polygon[(p.side + 1) % n];
        complex q0 = s.polygon[p.partner];
        complex q1 = s.polygon[(p.partner + 1) % n];
        // endpoint-to-endpoint with orientation reversal
        worst = std::max(worst, std::abs(p.g.m.apply(p0) - q1));
        worst = std::max(worst, std::abs(p.g.m.apply(p1) - q0));
    }
    return worst;
}

}  // namespace wplab
