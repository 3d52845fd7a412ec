#include "wplab/wolf.hpp"

#include <cmath>
#include <stdexcept>

namespace wplab {

namespace {

void check_t(const WolfMetricFamily& family, double t) {
    if (std::abs(t) > family.t_max)
        throw std::out_of_range("wolf family: |t| exceeds t_max = " +
                                std::to_string(family.t_max));
}

}  // namespace

GMatrix assemble_gmatrix(complex qv, double alpha, double lambda2, double t) {
    return GMatrix{qv, alpha, lambda2, t};
}

WolfMetricFamily make_wolf_family(std::shared_ptr<const TriangulatedDomain> domain,
                                  std::shared_ptr<const QuadraticDifferential> q,
                                  double solver_tol, int solver_max_iter) {
    if (!domain) throw std::invalid_argument("make_wolf_family: null domain");
    WolfMetricFamily fam;
    fam.domain = domain;
    fam.q = q;

    if (!q) {
        fam.alpha = ScalarField::Zero(domain->num_orbits());
        fam.t_max = 1.0;
        return fam;
    }

    HyperbolicLaplacian lap = assemble_laplacian(*domain);
    ScalarField rhs = orbit_field(*domain, [&](complex z) {
        double l2 = conformal::lambda2(z);
        return std::norm(q->eval_reduced(z)) / (l2 * l2);
    });
    fam.alpha = solve_shifted(lap, rhs, solver_tol, solver_max_iter);

    fam.q_nodes = sample_at_nodes(*domain, [&](complex z) { return q->eval_reduced(z); });
    fam.alpha_nodes = field_at_nodes(*domain, fam.alpha);

    // Keep the first-order term a small fraction of the undeformed metric:
    // |t q| <= 0.05 lambda0^2 at every quadrature node.
    double worst = 0.0;
    for (std::size_t f = 0; f < domain->faces.size(); ++f)
        for (std::size_t k = 0; k < domain->faces[f].nodes.size(); ++k)
            worst = std::max(worst, std::abs(fam.q_nodes[f][k]) /
                                        conformal::lambda2(domain->faces[f].nodes[k].z));
    fam.t_max = worst > 0.0 ? 0.05 / worst : 1.0;
    return fam;
}

GMatrix metric_at_node(const WolfMetricFamily& family, double t, int face, int node) {
    check_t(family, t);
    complex z = family.domain->faces[face].nodes[node].z;
    return GMatrix{family.q_at(face, node), family.alpha_at(face, node), conformal::lambda2(z),
                   t};
}

GMatrix metric_at(const WolfMetricFamily& family, double t, complex z) {
    check_t(family, t);
    const TriangulatedDomain& dom = *family.domain;

    // Locate a containing face (affine barycentrics within tolerance); fall
    // back to the face with the closest barycenter.
    int best_face = 0;
    double best_score = 1e300;
    std::array<double, 3> best_n{1.0 / 3, 1.0 / 3, 1.0 / 3};
    for (std::size_t f = 0; f < dom.faces.size(); ++f) {
        const MeshFace& face = dom.faces[f];
        complex z0 = dom.pos[face.v[0]], z1 = dom.pos[face.v[1]], z2 = dom.pos[face.v[2]];
        double c = 2.0 * face.chart_area;
        double l1 = std::imag(std::conj(z - z0) * (z2 - z0)) / c;
        double l2 = std::imag(std::conj(z1 - z0) * (z - z0)) / c;
        double l0 = 1.0 - l1 - l2;
        double outside = std::max({-l0, -l1, -l2, 0.0});
        if (outside < best_score) {
            best_score = outside;
            best_face = static_cast<int>(f);
            best_n = {l0, l1, l2};
        }
        if (outside <= 1e-12) break;
    }
    const MeshFace& face = dom.faces[best_face];
    double alpha = 0.0;
    for (int i = 0; i < 3; ++i) alpha += best_n[i] * family.alpha[dom.orbit[face.v[i]]];
    complex qv = family.q ? family.q->eval_reduced(z) : complex{0.0};
    if (!family.q) alpha = 0.0;
    return GMatrix{qv, alpha, conformal::lambda2(z), t};
}

double volume_element(const WolfMetricFamily& family, double t, complex z) {
    return std::sqrt(std::abs(metric_at(family, t, z).det()));
}

double volume_element_at_node(const WolfMetricFamily& family, double t, int face, int node) {
    return std::sqrt(std::abs(metric_at_node(family, t, face, node).det()));
}

}  // namespace wplab
