#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace wplab {

using complex = std::complex<double>;

/// Orientation-preserving isometry of the Poincare disk,
/// z -> (a z + b) / (conj(b) z + conj(a)) with |a|^2 - |b|^2 = 1.
struct Moebius {
    complex a{1.0, 0.0};
    complex b{0.0, 0.0};

    complex apply(complex z) const {
        return (a * z + b) / (std::conj(b) * z + std::conj(a));
    }
    complex operator()(complex z) const { return apply(z); }

    /// Holomorphic derivative at z (unit determinant assumed).
    complex derivative(complex z) const {
        complex d = std::conj(b) * z + std::conj(a);
        return 1.0 / (d * d);
    }

    Moebius inverse() const { return Moebius{std::conj(a), -b}; }

    /// this after other: (this * other)(z) = this(other(z)).
    Moebius compose(const Moebius& other) const {
        return Moebius{a * other.a + b * std::conj(other.b),
                       a * other.b + b * std::conj(other.a)};
    }

    double det_defect() const {
        return std::abs(std::norm(a) - std::norm(b) - 1.0);
    }

    /// Rescale so |a|^2 - |b|^2 = 1 exactly (up to roundoff).
    Moebius& renormalize() {
        double d = std::norm(a) - std::norm(b);
        if (d <= 0.0) throw std::domain_error("Moebius: not a disk isometry");
        double s = std::sqrt(d);
        a /= s;
        b /= s;
        return *this;
    }

    /// Distance to +-identity in coefficient space.
    double dist_to_identity() const {
        double dp = std::abs(a - 1.0) + std::abs(b);
        double dm = std::abs(a + 1.0) + std::abs(b);
        return std::min(dp, dm);
    }

    double dist_to(const Moebius& o) const {
        double dp = std::abs(a - o.a) + std::abs(b - o.b);
        double dm = std::abs(a + o.a) + std::abs(b + o.b);
        return std::min(dp, dm);
    }

    static Moebius identity() { return Moebius{}; }

    static Moebius rotation(double theta) {
        return Moebius{std::polar(1.0, theta / 2.0), 0.0};
    }

    /// The isometry sending p to the origin.
    static Moebius to_origin(complex p) {
        double s = std::sqrt(1.0 - std::norm(p));
        return Moebius{1.0 / s, -p / s};
    }

    /// Unique isometry with g(p) = 0 and g(q) on the positive real axis.
    static Moebius align(complex p, complex q) {
        Moebius t = to_origin(p);
        complex w = t.apply(q);
        double theta = std::abs(w) > 0 ? -std::arg(w) : 0.0;
        return rotation(theta).compose(t);
    }

    /// Isometry mapping p -> p2 and q -> q2 (requires d(p,q) = d(p2,q2)).
    static Moebius matching(complex p, complex q, complex p2, complex q2) {
        return align(p2, q2).inverse().compose(align(p, q));
    }
};

/// Word in the surface-group generators: letters +-(i+1) for generator i
/// and its inverse. Empty word is the identity.
using Word = std::vector<std::int16_t>;

inline Word word_inverse(const Word& w) {
    Word r(w.rbegin(), w.rend());
    for (auto& l : r) l = static_cast<std::int16_t>(-l);
    return r;
}

inline Word word_concat(const Word& u, const Word& v) {
    Word r = u;
    // cancel adjacent inverse letters to keep words short
    for (auto l : v) {
        if (!r.empty() && r.back() == -l)
            r.pop_back();
        else
            r.push_back(l);
    }
    return r;
}

/// A group element carried with its expression in the generators, used for
/// deck transformations on meshes so that homomorphisms can be evaluated
/// on them letter by letter.
struct Deck {
    Moebius m;
    Word w;

    Deck() = default;
    Deck(Moebius mm, Word ww) : m(mm), w(std::move(ww)) {}

    Deck inverse() const { return Deck{m.inverse(), word_inverse(w)}; }
    Deck compose(const Deck& o) const {
        return Deck{m.compose(o.m), word_concat(w, o.w)};
    }
    static Deck identity() { return Deck{}; }
};

/// Evaluate a word against generator matrices.
inline Moebius word_to_moebius(const Word& w, const std::vector<Moebius>& gens) {
    Moebius r = Moebius::identity();
    for (auto l : w) {
        int i = std::abs(l) - 1;
        if (i < 0 || i >= static_cast<int>(gens.size()))
            throw std::out_of_range("word letter out of range");
        r = r.compose(l > 0 ? gens[i] : gens[i].inverse());
    }
    return r;
}

/// Hyperbolic distance between disk points.
inline double hyperbolic_distance(complex p, complex q) {
    complex w = (p - q) / (1.0 - std::conj(q) * p);
    return 2.0 * std::atanh(std::abs(w));
}

/// Hyperbolic midpoint of the geodesic segment [p, q].
inline complex hyperbolic_midpoint(complex p, complex q) {
    Moebius t = Moebius::to_origin(p);
    complex w = t.apply(q);
    double r = std::abs(w);
    if (r == 0.0) return p;
    complex m = (w / r) * std::tanh(std::atanh(r) / 2.0);
    return t.inverse().apply(m);
}

}  // namespace wplab
