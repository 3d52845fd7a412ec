#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "wplab/config.hpp"
#include "wplab/energy.hpp"
#include "wplab/equivariant_map.hpp"
#include "wplab/io.hpp"
#include "wplab/mesh.hpp"
#include "wplab/surface.hpp"

using namespace wplab;

TEST_CASE("config defaults") {
    ScenarioConfig cfg = parse_config("");
    CHECK(cfg.genus == 2);
    CHECK(cfg.cover_degree == 2);
    CHECK(cfg.refine == 3);
    CHECK(cfg.q_seed == 0);
    CHECK(cfg.q_truncation == 6);
    CHECK(cfg.grid_points == 5);
    CHECK(cfg.t_max == 0.0);
    CHECK(cfg.solver_tol == 1e-8);
    CHECK(cfg.solver_max_iter == 20000);
    CHECK(cfg.kernel_kappa == 1e-10);
}

TEST_CASE("config overrides and comments") {
    ScenarioConfig cfg = parse_config(
        "# a comment\n"
        "genus = 3\n"
        "\n"
        "t_max = auto  # keep the family bound\n"
        "solver_tol = 1e-10\n"
        "out_dir = results\n");
    CHECK(cfg.genus == 3);
    CHECK(cfg.cover_degree == 2);
    CHECK(cfg.t_max == 0.0);
    CHECK(cfg.solver_tol == 1e-10);
    CHECK(cfg.out_dir == "results");
}

TEST_CASE("config rejects unknown keys naming the line") {
    try {
        parse_config("gnus=3");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
        CHECK(std::string(e.what()).find("gnus") != std::string::npos);
    }
    try {
        parse_config("genus=2\nrefin=1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("config rejects bad values") {
    CHECK_THROWS_AS(parse_config("genus=two"), ConfigError);
    CHECK_THROWS_AS(parse_config("genus=1"), ConfigError);
    CHECK_THROWS_AS(parse_config("grid_points=4"), ConfigError);
    CHECK_THROWS_AS(parse_config("grid_points=1"), ConfigError);
    CHECK_THROWS_AS(parse_config("solver_tol=0"), ConfigError);
    CHECK_THROWS_AS(parse_config("genus"), ConfigError);
    CHECK_THROWS_AS(parse_config("genus="), ConfigError);
}

TEST_CASE("config round trip through format") {
    ScenarioConfig cfg = parse_config("genus=3\nrefine=2\nseed=7\n");
    ScenarioConfig back = parse_config(format_config(cfg));
    CHECK(back.genus == cfg.genus);
    CHECK(back.refine == cfg.refine);
    CHECK(back.seed == cfg.seed);
    CHECK(back.t_max == cfg.t_max);
}

TEST_CASE("shortest round-trip decimals") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 3.141592653589793, 1e308, -0.0, 42.0}) {
        std::string s = format_double(x);
        double y = parse_double(s);
        CHECK(std::memcmp(&x, &y, sizeof x) == 0);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK_THROWS_AS(parse_double("zzz"), std::runtime_error);
}

TEST_CASE("mesh file round trip is bit-exact") {
    auto base = std::make_shared<FuchsianSurface>(build_surface(2));
    auto dom = triangulate(base, 1);
    MeshFile mf = mesh_file_from(dom);
    CHECK(mf.pairings.size() == 8);
    CHECK(mf.generators.size() == 4);

    std::ostringstream out;
    write_mesh(out, mf);
    std::istringstream in(out.str());
    MeshFile back = read_mesh(in);

    REQUIRE(back.vertices.size() == mf.vertices.size());
    for (std::size_t i = 0; i < mf.vertices.size(); ++i)
        CHECK(back.vertices[i] == mf.vertices[i]);
    REQUIRE(back.faces.size() == mf.faces.size());
    for (std::size_t i = 0; i < mf.faces.size(); ++i) CHECK(back.faces[i] == mf.faces[i]);
    for (std::size_t i = 0; i < mf.generators.size(); ++i) {
        CHECK(back.generators[i].a == mf.generators[i].a);
        CHECK(back.generators[i].b == mf.generators[i].b);
    }

    // writing again reproduces the identical byte stream
    std::ostringstream out2;
    write_mesh(out2, back);
    CHECK(out2.str() == out.str());
}

TEST_CASE("mesh reader flags malformed input") {
    std::istringstream bad1("WPLAB-MESH v2\n");
    CHECK_THROWS_AS(read_mesh(bad1), std::runtime_error);
    std::istringstream bad2("WPLAB-MESH v1\nVERTEX 1 0.0 0.0\n");
    CHECK_THROWS_AS(read_mesh(bad2), std::runtime_error);
    std::istringstream bad3("WPLAB-MESH v1\nVERT 0 0.0 0.0\n");
    try {
        read_mesh(bad3);
        FAIL("expected error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("map checkpoint round trip preserves the map") {
    auto base = std::make_shared<FuchsianSurface>(build_surface(2));
    auto dom = std::make_shared<TriangulatedDomain>(triangulate(base, 1));
    EquivariantMap map = identity_scenario(dom);
    perturb_values(map, 0.05, 13);
    recenter_values(map, 0.3);  // force a nontrivial gauge

    MapFile mf = map_file_from(map);
    std::ostringstream out;
    write_map(out, mf);
    std::istringstream in(out.str());
    MapFile back = read_map(in);

    REQUIRE(back.values.size() == mf.values.size());
    for (std::size_t o = 0; o < mf.values.size(); ++o) CHECK(back.values[o] == mf.values[o]);

    EquivariantMap rebuilt = map_from_file(back, dom, map.target);
    auto family = make_wolf_family(dom, nullptr);
    // gauge was folded into the stored values: the rebuilt map is the same
    // map up to roundoff of the gauge application
    CHECK(energy(rebuilt, family, 0.0) ==
          doctest::Approx(energy(map, family, 0.0)).epsilon(1e-10));
}

TEST_CASE("csv writers emit the declared headers") {
    EnergyCurve curve;
    curve.t = {-0.1, 0.0, 0.1};
    curve.energy = {1.5, 1.0, 1.5};
    curve.grad_norm = {1e-9, 1e-9, 1e-9};
    std::ostringstream cout_;
    write_curve_csv(cout_, curve);
    CHECK(cout_.str().rfind("t,energy,grad_norm\n", 0) == 0);
    CHECK(cout_.str().find("-0.1,1.5,1e-09\n") != std::string::npos);

    std::vector<MuReport> rows(1);
    rows[0].mu_id = 0;
    rows[0].fd1 = 0.25;
    std::ostringstream dout;
    write_derivs_csv(dout, rows);
    CHECK(dout.str().rfind("mu_id,fd1,formula1,fd2,formula2,wp4,hproj4\n", 0) == 0);
}

TEST_CASE("report writer embeds checks and config") {
    CertificationReport rep;
    rep.scenario = "covering_g2_d2";
    rep.energy = 25.0;
    rep.checks.push_back(CheckResult{"degree", 0.01, 0.05, true});
    std::ostringstream out;
    write_report(out, rep, format_config(ScenarioConfig{}));
    std::string s = out.str();
    CHECK(s.find("scenario: covering_g2_d2\n") != std::string::npos);
    CHECK(s.find("check_degree: PASS") != std::string::npos);
    CHECK(s.find("config_genus=2\n") != std::string::npos);
    CHECK(s.find("result: PASS") != std::string::npos);
}
