#include "wplab/equivariant_map.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace wplab {

namespace {

Word word_group_relator(const FuchsianSurface& grp) {
    Word w;
    for (int j = 0; j < grp.genus; ++j) {
        auto a = static_cast<std::int16_t>(2 * j + 1);
        auto b = static_cast<std::int16_t>(2 * j + 2);
        for (auto l : {a, b, static_cast<std::int16_t>(-a), static_cast<std::int16_t>(-b)})
            w.push_back(l);
    }
    return w;
}

}  // namespace

EquivariantMap make_equivariant_map(std::shared_ptr<const TriangulatedDomain> domain,
                                    std::shared_ptr<const FuchsianSurface> target,
                                    std::vector<Moebius> phi, std::vector<complex> values) {
    if (!domain || !target) throw std::invalid_argument("make_equivariant_map: null argument");
    const FuchsianSurface& grp = domain->surface->word_group();
    if (phi.size() != grp.generators.size())
        throw std::invalid_argument("make_equivariant_map: one image per generator required");
    if (static_cast<int>(values.size()) != domain->num_orbits())
        throw std::invalid_argument("make_equivariant_map: one value per orbit required");

    EquivariantMap m;
    m.domain = std::move(domain);
    m.target = std::move(target);
    m.phi = std::move(phi);
    m.values = std::move(values);
    m.gauge.assign(m.domain->num_orbits(), Moebius::identity());
    m.corner.resize(m.domain->num_instances());
    for (int i = 0; i < m.domain->num_instances(); ++i)
        m.corner[i] = m.word_image(m.domain->deck[i].w);
    return m;
}

EquivariantMap identity_scenario(std::shared_ptr<const TriangulatedDomain> domain) {
    if (!domain) throw std::invalid_argument("identity_scenario: null domain");
    if (domain->surface->is_cover())
        throw std::invalid_argument("identity_scenario: expects a base surface domain");
    std::vector<Moebius> phi;
    for (const auto& g : domain->surface->generators) phi.push_back(g.m);
    std::vector<complex> vals(domain->num_orbits());
    for (int o = 0; o < domain->num_orbits(); ++o) vals[o] = domain->orbit_pos(o);
    auto target = domain->surface;
    return make_equivariant_map(std::move(domain), target, std::move(phi), std::move(vals));
}

EquivariantMap covering_scenario(std::shared_ptr<const TriangulatedDomain> domain) {
    if (!domain) throw std::invalid_argument("covering_scenario: null domain");
    if (!domain->surface->is_cover())
        throw std::invalid_argument("covering_scenario: expects a cover domain");
    auto target = domain->surface->base;
    std::vector<Moebius> phi;
    for (const auto& g : target->generators) phi.push_back(g.m);
    std::vector<complex> vals(domain->num_orbits());
    for (int o = 0; o < domain->num_orbits(); ++o) vals[o] = domain->orbit_pos(o);
    return make_equivariant_map(std::move(domain), target, std::move(phi), std::move(vals));
}

EquivariantMap conjugated_covering_scenario(std::shared_ptr<const TriangulatedDomain> domain) {
    EquivariantMap m = covering_scenario(std::move(domain));
    for (auto& g : m.phi) g = Moebius{std::conj(g.a), std::conj(g.b)};
    for (auto& v : m.values) v = std::conj(v);
    for (int i = 0; i < m.domain->num_instances(); ++i)
        m.corner[i] = m.word_image(m.domain->deck[i].w);
    return m;
}

EquivariantMap twist_scenario(std::shared_ptr<const TriangulatedDomain> domain) {
    if (!domain) throw std::invalid_argument("twist_scenario: null domain");
    if (domain->surface->is_cover())
        throw std::invalid_argument("twist_scenario: expects a base surface domain");
    const auto& gens = domain->surface->generators;
    std::vector<Moebius> phi;
    for (const auto& g : gens) phi.push_back(g.m);
    // Dehn twist along the a1 curve: b1 picks up a factor of a1.
    phi[1] = gens[1].m.compose(gens[0].m);
    std::vector<complex> vals(domain->num_orbits());
    for (int o = 0; o < domain->num_orbits(); ++o) vals[o] = domain->orbit_pos(o);
    auto target = domain->surface;
    return make_equivariant_map(std::move(domain), target, std::move(phi), std::move(vals));
}

double homomorphism_defect(const EquivariantMap& map) {
    const FuchsianSurface& grp = map.domain->surface->word_group();
    return map.word_image(word_group_relator(grp)).dist_to_identity();
}

void recenter_values(EquivariantMap& map, double radius) {
    const auto& gens = map.target->generators;
    for (std::size_t o = 0; o < map.values.size(); ++o) {
        if (std::abs(map.values[o]) < radius) continue;
        complex v = map.values[o];
        Moebius total = Moebius::identity();
        for (int it = 0; it < 256; ++it) {
            const Moebius* best = nullptr;
            Moebius cand;
            double best_abs = std::abs(v) - 1e-14;
            for (const auto& gen : gens) {
                for (int sgn : {+1, -1}) {
                    Moebius g = sgn > 0 ? gen.m : gen.m.inverse();
                    double a = std::abs(g.apply(v));
                    if (a < best_abs) {
                        best_abs = a;
                        cand = g;
                        best = &cand;
                    }
                }
            }
            if (!best) break;
            v = best->apply(v);
            total = best->compose(total);
        }
        map.values[o] = v;
        map.gauge[o] = map.gauge[o].compose(total.inverse());
    }
}

void perturb_values(EquivariantMap& map, double amplitude, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (auto& v : map.values) {
        complex xi{nd(rng), nd(rng)};
        v += amplitude * (1.0 - std::norm(v)) * xi / std::sqrt(2.0);
    }
}

}  // namespace wplab
