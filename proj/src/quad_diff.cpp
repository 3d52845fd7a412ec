#include "wplab/quad_diff.hpp"

#include <cmath>
#include <cstdint>
#include <deque>
#include <numbers>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace wplab {

namespace {

/// Spatial hash over (a, b) coefficients for deduplicating group elements
/// up to the overall sign ambiguity, with tolerance well below the bucket.
class ElementSet {
  public:
    explicit ElementSet(double tol) : tol_(tol) {}

    /// Insert if no element within tolerance is present; true when new.
    bool insert(const Moebius& g) {
        Moebius n = normalized(g);
        double c[4] = {n.a.real(), n.a.imag(), n.b.real(), n.b.imag()};
        long q[4];
        for (int i = 0; i < 4; ++i) q[i] = std::lround(c[i] / bucket_);
        for (long d0 = -1; d0 <= 1; ++d0)
            for (long d1 = -1; d1 <= 1; ++d1)
                for (long d2 = -1; d2 <= 1; ++d2)
                    for (long d3 = -1; d3 <= 1; ++d3) {
                        auto it = buckets_.find(key(q[0] + d0, q[1] + d1, q[2] + d2, q[3] + d3));
                        if (it == buckets_.end()) continue;
                        for (const auto& m : it->second)
                            if (m.dist_to(n) < tol_) return false;
                    }
        buckets_[key(q[0], q[1], q[2], q[3])].push_back(n);
        return true;
    }

  private:
    static Moebius normalized(const Moebius& g) {
        double lead = g.a.real();
        if (std::abs(lead) < 1e-12) lead = g.a.imag();
        if (std::abs(lead) < 1e-12) lead = g.b.real();
        if (std::abs(lead) < 1e-12) lead = g.b.imag();
        return lead < 0 ? Moebius{-g.a, -g.b} : g;
    }
    static std::uint64_t key(long a, long b, long c, long d) {
        std::uint64_t h = 1469598103934665603ull;
        for (long v : {a, b, c, d}) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 1099511628211ull;
        }
        return h;
    }

    double tol_;
    double bucket_ = 1e-4;
    std::unordered_map<std::uint64_t, std::vector<Moebius>> buckets_;
};

/// Deterministic interior sample points (inside a disk well within the
/// fundamental polygon so that finite differences stay in-chart).
std::vector<complex> interior_samples(const QuadraticDifferential& q, int count) {
    double r = 0.4;
    if (q.surface && !q.surface->polygon.empty())
        r = 0.55 * std::abs(q.surface->polygon[0]);
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<complex> pts;
    pts.reserve(count);
    for (int i = 0; i < count; ++i) {
        double rad = r * std::sqrt(unit(rng));
        double ang = 2.0 * std::numbers::pi_v<double> * unit(rng);
        pts.push_back(std::polar(rad, ang));
    }
    return pts;
}

}  // namespace

complex QuadraticDifferential::eval_reduced(complex z) const {
    if (!surface || surface->generators.empty()) return (*this)(z);
    // Greedy reduction into the Dirichlet polygon around the origin: apply
    // whichever generator moves the point closest to 0 until none does.
    // q(z) = q(gamma z) * gamma'(z)^2 with gamma'(z) accumulated stepwise.
    const FuchsianSurface& grp = surface->word_group();
    complex w = z;
    complex chain = 1.0;
    for (int it = 0; it < 256; ++it) {
        const Moebius* best = nullptr;
        Moebius inv;
        double best_abs = std::abs(w) - 1e-14;
        for (const auto& gen : grp.generators) {
            for (int sgn : {+1, -1}) {
                Moebius g = sgn > 0 ? gen.m : gen.m.inverse();
                double a = std::abs(g.apply(w));
                if (a < best_abs) {
                    best_abs = a;
                    inv = g;
                    best = &inv;
                }
            }
        }
        if (!best) break;
        chain *= best->derivative(w);
        w = best->apply(w);
    }
    return (*this)(w)*chain * chain;
}

QuadraticDifferential poincare_series(std::shared_ptr<const FuchsianSurface> surface, int m,
                                      int L) {
    if (m < 0 || L < 0) throw std::invalid_argument("poincare_series: m, L must be >= 0");

    QuadraticDifferential q;
    q.surface = surface;
    q.seed_power = m;
    q.truncation = L;

    // Breadth-first enumeration of distinct group elements up to word
    // length L (elements compared up to sign with tolerance 1e-9).
    ElementSet seen(1e-9);
    seen.insert(Moebius::identity());
    q.elements.push_back(Moebius::identity());
    std::deque<std::pair<Moebius, int>> frontier{{Moebius::identity(), 0}};
    const std::vector<Deck>* gens = surface ? &surface->generators : nullptr;
    while (!frontier.empty() && gens) {
        auto [g, len] = frontier.front();
        frontier.pop_front();
        if (len == L) continue;
        for (const auto& gen : *gens) {
            for (int sgn : {+1, -1}) {
                Moebius next = g.compose(sgn > 0 ? gen.m : gen.m.inverse());
                next.renormalize();
                if (seen.insert(next)) {
                    q.elements.push_back(next);
                    frontier.emplace_back(next, len + 1);
                }
            }
        }
    }

    double max_abs = 0.0;
    for (complex z : interior_samples(q, 50)) max_abs = std::max(max_abs, std::abs(q(z)));
    if (max_abs < 1e-14)
        throw std::runtime_error("poincare_series: degenerate series (try another seed power)");
    return q;
}

double automorphy_residual(const QuadraticDifferential& q, int samples) {
    if (!q.surface) return 0.0;
    double worst = 0.0;
    for (complex z : interior_samples(q, samples)) {
        for (const auto& gen : q.surface->generators) {
            complex d = gen.m.derivative(z);
            worst = std::max(worst, std::abs(q(gen.m.apply(z)) * d * d - q(z)));
        }
    }
    return worst;
}

double cauchy_riemann_residual(const QuadraticDifferential& q, int samples) {
    const double h = 1e-5;
    double worst = 0.0, max_abs = 0.0;
    for (complex z : interior_samples(q, samples)) {
        max_abs = std::max(max_abs, std::abs(q(z)));
        complex dx = (q(z + h) - q(z - h)) / (2.0 * h);
        complex dy = (q(z + complex{0.0, h}) - q(z - complex{0.0, h})) / (2.0 * h);
        // d/dzbar = (d/dx + i d/dy) / 2
        worst = std::max(worst, 0.5 * std::abs(dx + complex{0.0, 1.0} * dy));
    }
    return max_abs > 0.0 ? worst / max_abs : 0.0;
}

HarmonicBeltrami beltrami_from_q(const QuadraticDifferential& q) { return HarmonicBeltrami{q}; }

double wp_norm_sq(const HarmonicBeltrami& mu, const TriangulatedDomain& dom) {
    double sum = 0.0;
    for (const auto& f : dom.faces)
        for (const auto& n : f.nodes) sum += n.w * std::norm(mu(n.z)) * conformal::lambda2(n.z);
    return sum;
}

double qb_pairing(const FaceSamples& phi, const FaceSamples& mu_samples,
                  const TriangulatedDomain& dom) {
    if (phi.size() != dom.faces.size() || mu_samples.size() != dom.faces.size())
        throw std::invalid_argument("qb_pairing: samples not aligned with faces");
    double sum = 0.0;
    for (std::size_t i = 0; i < dom.faces.size(); ++i) {
        const auto& nodes = dom.faces[i].nodes;
        if (phi[i].size() != nodes.size() || mu_samples[i].size() != nodes.size())
            throw std::invalid_argument("qb_pairing: samples not aligned with nodes");
        for (std::size_t k = 0; k < nodes.size(); ++k)
            sum += nodes[k].w * std::real(phi[i][k] * mu_samples[i][k]);
    }
    return sum;
}

double qb_pairing(const FaceSamples& phi, const HarmonicBeltrami& mu,
                  const TriangulatedDomain& dom) {
    return qb_pairing(phi, sample_at_nodes(dom, [&](complex z) { return mu(z); }), dom);
}

}  // namespace wplab
