#include "wplab/laplacian.hpp"

#include <stdexcept>
#include <vector>

#include "wplab/conformal.hpp"

namespace wplab {

Eigen::VectorXd lumped_mass(const TriangulatedDomain& dom) {
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(dom.num_orbits());
    for (const auto& f : dom.faces)
        for (const auto& nd : f.nodes) {
            double w = nd.w * conformal::lambda2(nd.z);
            for (int i = 0; i < 3; ++i) mass[dom.orbit[f.v[i]]] += w * nd.N[i];
        }
    return mass;
}

HyperbolicLaplacian assemble_laplacian(const TriangulatedDomain& dom) {
    const int n = dom.num_orbits();
    HyperbolicLaplacian lap;
    lap.mass = Eigen::VectorXd::Zero(n);

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(dom.faces.size() * 9);
    for (const auto& f : dom.faces) {
        if (!(f.chart_area > 0.0)) throw std::runtime_error("assemble_laplacian: degenerate face");
        complex z[3] = {dom.pos[f.v[0]], dom.pos[f.v[1]], dom.pos[f.v[2]]};
        int o[3] = {dom.orbit[f.v[0]], dom.orbit[f.v[1]], dom.orbit[f.v[2]]};

        // Flat cotangent stiffness: k_local = |e_i| |e_j| cos / (4 A) terms;
        // equivalently grad N_i . grad N_j * A with affine shapes.
        complex e[3] = {z[2] - z[1], z[0] - z[2], z[1] - z[0]};  // edge opposite corner i
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double kij = std::real(std::conj(e[i]) * e[j]) / (4.0 * f.chart_area);
                trips.emplace_back(o[i], o[j], kij);
            }

        for (const auto& nd : f.nodes) {
            double w = nd.w * conformal::lambda2(nd.z);
            for (int i = 0; i < 3; ++i) lap.mass[o[i]] += w * nd.N[i];
        }
    }
    lap.stiffness.resize(n, n);
    lap.stiffness.setFromTriplets(trips.begin(), trips.end());

    for (int i = 0; i < n; ++i)
        if (!(lap.mass[i] > 0.0))
            throw std::runtime_error("assemble_laplacian: non-positive vertex mass");
    return lap;
}

ScalarField solve_shifted(const HyperbolicLaplacian& lap, const ScalarField& rhs, double tol,
                          int max_iter) {
    Eigen::SparseMatrix<double> m(lap.mass.size(), lap.mass.size());
    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 0; i < lap.mass.size(); ++i) trips.emplace_back(i, i, 2.0 * lap.mass[i]);
    m.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseMatrix<double> a = lap.stiffness + m;

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(max_iter);
    cg.compute(a);
    Eigen::VectorXd b = 2.0 * lap.mass.cwiseProduct(rhs);
    ScalarField x = cg.solve(b);
    if (cg.info() != Eigen::Success)
        throw std::runtime_error("solve_shifted: conjugate gradients did not converge, residual " +
                                 std::to_string(cg.error()));
    return x;
}

std::vector<std::vector<double>> field_at_nodes(const TriangulatedDomain& dom,
                                                const ScalarField& f) {
    std::vector<std::vector<double>> out(dom.faces.size());
    for (std::size_t i = 0; i < dom.faces.size(); ++i) {
        const auto& face = dom.faces[i];
        out[i].reserve(face.nodes.size());
        for (const auto& nd : face.nodes)
            out[i].push_back(nd.N[0] * f[dom.orbit[face.v[0]]] + nd.N[1] * f[dom.orbit[face.v[1]]] +
                             nd.N[2] * f[dom.orbit[face.v[2]]]);
    }
    return out;
}

}  // namespace wplab
