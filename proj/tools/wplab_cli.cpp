// wplab command-line driver: builds scenarios from a key=value config,
// runs the requested pipeline and writes machine-readable artifacts.
//
// Exit codes: 0 pass, 1 certification failure, 2 config error, 3 solver
// failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "wplab/acceptance.hpp"
#include "wplab/config.hpp"
#include "wplab/energy.hpp"
#include "wplab/equivariant_map.hpp"
#include "wplab/io.hpp"
#include "wplab/mesh.hpp"
#include "wplab/quad_diff.hpp"
#include "wplab/surface.hpp"
#include "wplab/variation.hpp"
#include "wplab/wolf.hpp"

namespace {

using namespace wplab;

constexpr int kExitPass = 0;
constexpr int kExitCertFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Pipeline {
    ScenarioConfig cfg;
    std::string out_dir;

    std::shared_ptr<const FuchsianSurface> base;
    std::shared_ptr<const FuchsianSurface> dom_surface;
    std::shared_ptr<const TriangulatedDomain> dom;

    void build_surfaces() {
        auto b = std::make_shared<FuchsianSurface>(build_surface(cfg.genus));
        base = b;
        if (cfg.cover_degree == 1) {
            dom_surface = base;
        } else {
            std::vector<int> hom(2 * cfg.genus, 0);
            hom[0] = 1;
            dom_surface = std::make_shared<FuchsianSurface>(
                build_cyclic_cover(b, hom, cfg.cover_degree));
        }
        dom = std::make_shared<TriangulatedDomain>(triangulate(dom_surface, cfg.refine));
    }

    EquivariantMap scenario_map() const {
        return cfg.cover_degree == 1 ? identity_scenario(dom) : covering_scenario(dom);
    }

    SolverConfig solver() const { return SolverConfig{cfg.solver_tol, cfg.solver_max_iter}; }

    std::ofstream open(const std::string& name) const {
        std::filesystem::create_directories(out_dir);
        std::ofstream out(out_dir + "/" + name);
        if (!out) throw std::runtime_error("cannot write " + out_dir + "/" + name);
        return out;
    }
};

int run_surface(Pipeline& p) {
    p.build_surfaces();
    auto mesh = mesh_file_from(*p.dom);
    auto out = p.open("mesh.txt");
    write_mesh(out, mesh);
    auto rep = p.open("surface.txt");
    rep << "genus: " << p.dom_surface->genus << '\n'
        << "cover_degree: " << p.cfg.cover_degree << '\n'
        << "vertices: " << p.dom->num_instances() << '\n'
        << "orbits: " << p.dom->num_orbits() << '\n'
        << "faces: " << p.dom->num_faces() << '\n'
        << "euler_characteristic: " << p.dom->euler_characteristic() << '\n'
        << "area: " << format_double(hyperbolic_area(*p.dom)) << '\n'
        << "relator_defect: " << format_double(relator_defect(p.dom_surface->word_group()))
        << '\n'
        << "pairing_defect: " << format_double(pairing_defect(*p.base)) << '\n'
        << "instance_defect: " << format_double(instance_consistency_defect(*p.dom)) << '\n';
    std::cout << "surface artifacts written to " << p.out_dir << "\n";
    return kExitPass;
}

int run_qdiff(Pipeline& p) {
    p.build_surfaces();
    QuadraticDifferential q = poincare_series(p.dom_surface, p.cfg.q_seed, p.cfg.q_truncation);
    HarmonicBeltrami mu = beltrami_from_q(q);
    auto rep = p.open("qdiff.txt");
    rep << "seed_power: " << q.seed_power << '\n'
        << "truncation: " << q.truncation << '\n'
        << "group_elements: " << q.elements.size() << '\n'
        << "automorphy_residual: " << format_double(automorphy_residual(q)) << '\n'
        << "cauchy_riemann_residual: " << format_double(cauchy_riemann_residual(q)) << '\n'
        << "wp_norm_sq: " << format_double(wp_norm_sq(mu, *p.dom)) << '\n';
    std::cout << "qdiff artifacts written to " << p.out_dir << "\n";
    return kExitPass;
}

int run_solve(Pipeline& p) {
    p.build_surfaces();
    EquivariantMap map = p.scenario_map();
    if (p.cfg.seed != 0) perturb_values(map, 0.05, p.cfg.seed);
    auto family = make_wolf_family(p.dom, nullptr);
    EnergyReport er = minimize(map, family, 0.0, p.solver());
    auto mout = p.open("map.txt");
    write_map(mout, map_file_from(map));
    DegreeResult dg = degree(map);
    auto rep = p.open("solve.txt");
    rep << "energy: " << format_double(er.energy) << '\n'
        << "gradient_norm: " << format_double(er.gradient_norm) << '\n'
        << "iterations: " << er.iterations << '\n'
        << "degree: " << dg.value << '\n'
        << "degree_raw: " << format_double(dg.raw) << '\n';
    std::cout << "solved: E = " << format_double(er.energy) << " in " << er.iterations
              << " iterations\n";
    return kExitPass;
}

int run_sweep(Pipeline& p) {
    p.build_surfaces();
    EquivariantMap map = p.scenario_map();
    std::shared_ptr<QuadraticDifferential> q;
    if (p.cfg.q_truncation > 0)
        q = std::make_shared<QuadraticDifferential>(
            poincare_series(p.dom_surface, p.cfg.q_seed, p.cfg.q_truncation));
    WolfMetricFamily family = make_wolf_family(p.dom, q);
    double span = p.cfg.t_max > 0.0 ? std::min(p.cfg.t_max, family.t_max) : family.t_max;
    EnergyCurve curve = energy_curve(map, family, p.cfg.grid_points, span, p.solver());
    auto out = p.open("curve.csv");
    write_curve_csv(out, curve);
    std::cout << "sweep: fd1 = " << format_double(curve.fd_first)
              << ", fd2 = " << format_double(curve.fd_second) << "\n";
    return kExitPass;
}

int run_certify(Pipeline& p) {
    CertifyOptions opts;
    opts.grid_points = p.cfg.grid_points;
    opts.kernel_kappa = p.cfg.kernel_kappa;
    opts.solver = p.solver();
    CertificationReport rep = covering_certificate(p.cfg.genus, p.cfg.cover_degree,
                                                   p.cfg.refine, p.cfg.q_truncation,
                                                   p.cfg.q_seed, 3, opts);
    auto out = p.open("certificate.txt");
    write_report(out, rep, format_config(p.cfg));
    auto dout = p.open("derivs.csv");
    write_derivs_csv(dout, rep.mu_rows);
    if (!rep.curves.empty()) {
        auto cout_ = p.open("curve.csv");
        write_curve_csv(cout_, rep.curves.front());
    }
    for (const auto& c : rep.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
                  << " value=" << format_double(c.value) << " tol=" << format_double(c.tol)
                  << "\n";
    std::cout << "certificate: " << (rep.passed() ? "PASS" : "FAIL") << "\n";
    return rep.passed() ? kExitPass : kExitCertFail;
}

int run_verify_all(Pipeline& p) {
    AcceptanceOptions opts;
    opts.refine = p.cfg.refine;
    opts.q_truncation = p.cfg.q_truncation;
    opts.kernel_kappa = p.cfg.kernel_kappa;
    opts.solver = p.solver();
    std::vector<CheckResult> checks = acceptance_suite(opts, &std::cout);
    auto out = p.open("verify.txt");
    bool all = true;
    for (const auto& c : checks) {
        out << "check_" << c.name << ": " << (c.pass ? "PASS" : "FAIL") << " value="
            << format_double(c.value) << " tol=" << format_double(c.tol) << '\n';
        all = all && c.pass;
    }
    out << "result: " << (all ? "PASS" : "FAIL") << '\n';
    std::cout << "verify-all: " << (all ? "PASS" : "FAIL") << "\n";
    return all ? kExitPass : kExitCertFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for harmonic-map energy along Weil-Petersson lines"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    unsigned seed = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--out", out_dir, "output directory (overrides config out_dir)");
    app.add_option("--seed", seed, "random seed (overrides config seed)")
        ->each([&](const std::string&) { seed_set = true; });

    for (const char* name :
         {"surface", "qdiff", "solve", "sweep", "certify", "verify-all"})
        app.add_subcommand(name);

    CLI11_PARSE(app, argc, argv);

    Pipeline p;
    try {
        if (!config_path.empty()) p.cfg = load_config(config_path);
        if (seed_set) p.cfg.seed = seed;
        p.out_dir = !out_dir.empty() ? out_dir : p.cfg.out_dir;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        if (sub == "surface") return run_surface(p);
        if (sub == "qdiff") return run_qdiff(p);
        if (sub == "solve") return run_solve(p);
        if (sub == "sweep") return run_sweep(p);
        if (sub == "certify") return run_certify(p);
        if (sub == "verify-all") return run_verify_all(p);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitConfig;
}
