#include "energy_kernels.hpp"

#include <stdexcept>

namespace wplab {

void energy_and_gradient_serial(const EquivariantMap& map, const WolfMetricFamily& family,
                                double t, double* energy_out, std::vector<complex>* grad_out) {
    const TriangulatedDomain& dom = *map.domain;
    if (family.domain.get() != &dom)
        throw std::invalid_argument("energy: map and family use different domains");
    if (std::abs(t) > family.t_max) throw std::out_of_range("energy: |t| exceeds t_max");

    detail::CornerData cd = detail::corner_data(map);
    double total = 0.0;
    if (grad_out) grad_out->assign(dom.num_orbits(), complex{0.0});

    for (int f = 0; f < dom.num_faces(); ++f) {
        const auto& face = dom.faces[f];
        complex w[3] = {cd.value[face.v[0]], cd.value[face.v[1]], cd.value[face.v[2]]};
        double e = 0.0;
        std::array<complex, 3> gw{};
        if (!detail::face_energy(dom, family, t, f, w, &e, grad_out ? &gw : nullptr))
            throw std::domain_error("energy: interpolated map value left the unit disk");
        total += e;
        if (grad_out)
            for (int c = 0; c < 3; ++c)
                (*grad_out)[dom.orbit[face.v[c]]] += 2.0 * gw[c] * cd.dfac[face.v[c]];
    }
    if (energy_out) *energy_out = total;
}

}  // namespace wplab
