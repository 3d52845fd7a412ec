#pragma once

// Internal per-face helpers shared by the parallel and reference energy
// kernels. Everything here is pure arithmetic on chart data.

#include <array>

#include "wplab/conformal.hpp"
#include "wplab/energy.hpp"

namespace wplab::detail {

/// Coefficients of the affine chart derivatives: for corner increments
/// dw_c = w_c - w_0, u_z = A1 dw1 + A2 dw2 and u_zb = B1 dw1 + B2 dw2.
struct FaceGeom {
    complex A1, A2, B1, B2;

    complex a_coef(int c) const { return c == 0 ? -(A1 + A2) : (c == 1 ? A1 : A2); }
    complex b_coef(int c) const { return c == 0 ? -(B1 + B2) : (c == 1 ? B1 : B2); }
};

inline FaceGeom face_geom(complex z0, complex z1, complex z2) {
    complex d1 = z1 - z0, d2 = z2 - z0;
    complex det = d1 * std::conj(d2) - d2 * std::conj(d1);
    return FaceGeom{std::conj(d2) / det, -std::conj(d1) / det, -d2 / det, d1 / det};
}

/// Energy contribution of one face plus (optionally) the gradient of the
/// contribution with respect to the three corner values. Returns false when
/// an interpolated value leaves the unit disk.
inline bool face_energy(const TriangulatedDomain& dom, const WolfMetricFamily& family, double t,
                        int face, const complex* w, double* energy_out,
                        std::array<complex, 3>* grad_w) {
    const MeshFace& f = dom.faces[face];
    FaceGeom geo = face_geom(dom.pos[f.v[0]], dom.pos[f.v[1]], dom.pos[f.v[2]]);
    complex a = geo.A1 * (w[1] - w[0]) + geo.A2 * (w[2] - w[0]);
    complex b = geo.B1 * (w[1] - w[0]) + geo.B2 * (w[2] - w[0]);

    double e = 0.0;
    std::array<complex, 3> g{};
    for (std::size_t k = 0; k < f.nodes.size(); ++k) {
        const QuadNode& nd = f.nodes[k];
        complex u = nd.N[0] * w[0] + nd.N[1] * w[1] + nd.N[2] * w[2];
        if (std::norm(u) >= 1.0) return false;

        GMatrix gm{family.q_at(face, static_cast<int>(k)),
                   family.alpha_at(face, static_cast<int>(k)), conformal::lambda2(nd.z), t};
        complex gzz = gm.g_zz();
        double gzzb = gm.g_zzb();
        double sq = std::sqrt(-gm.det());
        double rho2 = conformal::lambda2(u);

        // (1/2)|du|^2 dmu = -rho^2 S / sqrt(-det G) dx dy with
        // S = 2 Re(G_zz u_zb conj(u_z)) - G_zzb (|u_z|^2 + |u_zb|^2).
        double s = 2.0 * std::real(gzz * b * std::conj(a)) -
                   gzzb * (std::norm(a) + std::norm(b));
        double c = -nd.w / sq;
        e += c * rho2 * s;

        if (grad_w) {
            complex ds_dab = gzz * b - gzzb * a;                 // dS / d conj(u_z)
            complex ds_dbb = std::conj(gzz) * a - gzzb * b;     // dS / d conj(u_zb)
            complex drho = rho2 * std::conj(conformal::dlog_lambda2(u));
            for (int cidx = 0; cidx < 3; ++cidx)
                g[cidx] += c * (rho2 * (ds_dab * std::conj(geo.a_coef(cidx)) +
                                        ds_dbb * std::conj(geo.b_coef(cidx))) +
                                s * drho * nd.N[cidx]);
        }
    }
    *energy_out = e;
    if (grad_w) *grad_w = g;
    return true;
}

/// Corner values and the conjugated transform derivatives for the chain
/// rule back to stored orbit values.
struct CornerData {
    std::vector<complex> value;  ///< per instance
    std::vector<complex> dfac;   ///< per instance, conj(F'(v_orbit))
};

inline CornerData corner_data(const EquivariantMap& map) {
    const TriangulatedDomain& dom = *map.domain;
    CornerData cd;
    cd.value.resize(dom.num_instances());
    cd.dfac.resize(dom.num_instances());
    for (int i = 0; i < dom.num_instances(); ++i) {
        Moebius tr = map.corner_transform(i);
        complex v = map.values[dom.orbit[i]];
        cd.value[i] = tr.apply(v);
        cd.dfac[i] = std::conj(tr.derivative(v));
    }
    return cd;
}

}  // namespace wplab::detail
