#pragma once

#include <memory>
#include <vector>

#include "wplab/conformal.hpp"
#include "wplab/mesh.hpp"
#include "wplab/surface.hpp"

namespace wplab {

/// Holomorphic quadratic differential on the quotient, generated as a
/// relative Poincare series q(z) = sum_{|gamma| <= L} (gamma z)^m gamma'(z)^2
/// over the deduplicated group elements of word length at most L.
struct QuadraticDifferential {
    std::shared_ptr<const FuchsianSurface> surface;
    int seed_power = 0;
    int truncation = 0;
    std::vector<Moebius> elements;

    complex operator()(complex z) const {
        complex sum = 0.0;
        for (const auto& g : elements) {
            complex d = g.derivative(z);
            complex v = d * d;
            if (seed_power > 0) {
                complex gz = g.apply(z);
                for (int k = 0; k < seed_power; ++k) v *= gz;
            }
            sum += v;
        }
        return sum;
    }

    /// Evaluation that first pulls z into the fundamental polygon by deck
    /// moves and transports the value back through the automorphy law.
    /// Identical to operator() up to truncation error, but stays accurate
    /// (and well-conditioned) for points deep in other polygon copies.
    complex eval_reduced(complex z) const;
};

/// Harmonic Beltrami differential mu = conj(q) / lambda0^2. Evaluation
/// goes through the reduced form so it stays accurate on meshes that
/// extend across several polygon copies.
struct HarmonicBeltrami {
    QuadraticDifferential q;

    complex operator()(complex z) const {
        return std::conj(q.eval_reduced(z)) / conformal::lambda2(z);
    }
};

/// Truncated Poincare series of weight 4 with seed w^m. Throws
/// std::runtime_error when the series is numerically zero on samples
/// (degenerate; choose another seed power).
QuadraticDifferential poincare_series(std::shared_ptr<const FuchsianSurface> surface, int m,
                                      int L);

/// Largest |q(gamma z) gamma'(z)^2 - q(z)| over the generators and a fixed
/// deterministic interior sample set (truncation-quality measure).
double automorphy_residual(const QuadraticDifferential& q, int samples = 50);

/// Largest finite-difference |d q / d zbar| over interior samples,
/// normalized by max |q| on the same samples.
double cauchy_riemann_residual(const QuadraticDifferential& q, int samples = 50);

HarmonicBeltrami beltrami_from_q(const QuadraticDifferential& q);

/// integral |mu|^2 lambda0^2 over the domain (Weil-Petersson norm squared).
double wp_norm_sq(const HarmonicBeltrami& mu, const TriangulatedDomain& dom);

/// Per-face quadrature samples of a field, aligned with face node lists.
using FaceSamples = std::vector<std::vector<complex>>;

/// Sample a callable field at every quadrature node.
template <class F>
FaceSamples sample_at_nodes(const TriangulatedDomain& dom, F&& f) {
    FaceSamples s(dom.faces.size());
    for (std::size_t i = 0; i < dom.faces.size(); ++i) {
        s[i].reserve(dom.faces[i].nodes.size());
        for (const auto& n : dom.faces[i].nodes) s[i].push_back(f(n.z));
    }
    return s;
}

/// Re integral of phi * mu over the domain, with phi given at the
/// quadrature nodes and mu evaluated there.
double qb_pairing(const FaceSamples& phi, const HarmonicBeltrami& mu,
                  const TriangulatedDomain& dom);

/// Same pairing with both factors pre-sampled.
double qb_pairing(const FaceSamples& phi, const FaceSamples& mu_samples,
                  const TriangulatedDomain& dom);

}  // namespace wplab
