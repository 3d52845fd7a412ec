// Benchmark of the OpenMP energy/gradient kernel against the serial
// reference on the default covering scenario, with a bit-identity check.

#include <chrono>
#include <cstdio>
#include <memory>
#include <vector>

#include "wplab/energy.hpp"
#include "wplab/equivariant_map.hpp"
#include "wplab/mesh.hpp"
#include "wplab/surface.hpp"

using namespace wplab;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int refine = argc > 1 ? std::atoi(argv[1]) : 4;
    int reps = argc > 2 ? std::atoi(argv[2]) : 20;

    auto base = std::make_shared<FuchsianSurface>(build_surface(2));
    auto cover = std::make_shared<FuchsianSurface>(
        build_cyclic_cover(base, {1, 0, 0, 0}, 2));
    auto dom = std::make_shared<TriangulatedDomain>(triangulate(cover, refine));
    EquivariantMap map = covering_scenario(dom);
    perturb_values(map, 0.02, 7);
    auto family = make_wolf_family(dom, nullptr);

    std::printf("faces: %d  orbits: %d  reps: %d\n", dom->num_faces(), dom->num_orbits(),
                reps);

    double e_par = 0.0, e_ser = 0.0;
    std::vector<complex> g_par, g_ser;

    auto t0 = clock_type::now();
    for (int r = 0; r < reps; ++r) energy_and_gradient(map, family, 0.0, &e_par, &g_par);
    double tp = seconds_since(t0) / reps;

    t0 = clock_type::now();
    for (int r = 0; r < reps; ++r)
        energy_and_gradient_serial(map, family, 0.0, &e_ser, &g_ser);
    double ts = seconds_since(t0) / reps;

    double gdiff = 0.0;
    for (std::size_t i = 0; i < g_par.size(); ++i)
        gdiff = std::max(gdiff, std::abs(g_par[i] - g_ser[i]));

    std::printf("parallel: %.3f ms/eval\n", 1e3 * tp);
    std::printf("serial:   %.3f ms/eval\n", 1e3 * ts);
    std::printf("speedup:  %.2fx\n", ts / tp);
    std::printf("energy diff: %.3e  gradient diff: %.3e %s\n", std::abs(e_par - e_ser), gdiff,
                (e_par == e_ser && gdiff == 0.0) ? "(bit-identical)" : "");
    return 0;
}
