#include "wplab/io.hpp"

#include <charconv>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wplab {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double out = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error("cannot parse number '" + s + "'");
    return out;
}

namespace {

[[noreturn]] void bad_line(int lineno, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(lineno) + ": " + what);
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

double num(const std::vector<std::string>& t, std::size_t i, int lineno) {
    try {
        return parse_double(t.at(i));
    } catch (const std::exception& e) {
        bad_line(lineno, e.what());
    }
}

int inum(const std::vector<std::string>& t, std::size_t i, int lineno) {
    int out = 0;
    const std::string& s = t.at(i);
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        bad_line(lineno, "cannot parse integer '" + s + "'");
    return out;
}

}  // namespace

MeshFile mesh_file_from(const TriangulatedDomain& dom) {
    MeshFile mf;
    mf.vertices = dom.pos;
    mf.faces.reserve(dom.faces.size());
    for (const auto& f : dom.faces) mf.faces.push_back(f.v);
    const FuchsianSurface& s = *dom.surface;
    for (const auto& p : s.pairings)
        mf.pairings.push_back({p.side, p.partner, p.g.m.a, p.g.m.b});
    for (const auto& g : s.word_group().generators) mf.generators.push_back(g.m);
    return mf;
}

void write_mesh(std::ostream& out, const MeshFile& mesh) {
    out << "WPLAB-MESH v1\n";
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        out << "VERTEX " << i << ' ' << format_double(mesh.vertices[i].real()) << ' '
            << format_double(mesh.vertices[i].imag()) << '\n';
    for (const auto& f : mesh.faces)
        out << "FACE " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    for (const auto& p : mesh.pairings)
        out << "PAIRING " << p.side << ' ' << p.partner << ' '
            << format_double(p.alpha.real()) << ' ' << format_double(p.alpha.imag()) << ' '
            << format_double(p.beta.real()) << ' ' << format_double(p.beta.imag()) << '\n';
    for (const auto& g : mesh.generators)
        out << "GENERATOR " << format_double(g.a.real()) << ' ' << format_double(g.a.imag())
            << ' ' << format_double(g.b.real()) << ' ' << format_double(g.b.imag()) << '\n';
}

MeshFile read_mesh(std::istream& in) {
    MeshFile mf;
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line) || line != "WPLAB-MESH v1")
        throw std::runtime_error("line 1: expected header 'WPLAB-MESH v1'");
    lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = tokens_of(line);
        if (t.empty()) continue;
        if (t[0] == "VERTEX") {
            if (t.size() != 4) bad_line(lineno, "VERTEX needs id re im");
            int id = inum(t, 1, lineno);
            if (id != static_cast<int>(mf.vertices.size()))
                bad_line(lineno, "vertex ids must be consecutive from 0");
            mf.vertices.emplace_back(num(t, 2, lineno), num(t, 3, lineno));
        } else if (t[0] == "FACE") {
            if (t.size() != 4) bad_line(lineno, "FACE needs three corner ids");
            mf.faces.push_back({inum(t, 1, lineno), inum(t, 2, lineno), inum(t, 3, lineno)});
        } else if (t[0] == "PAIRING") {
            if (t.size() != 7) bad_line(lineno, "PAIRING needs side partner and 4 reals");
            MeshFile::Pairing p;
            p.side = inum(t, 1, lineno);
            p.partner = inum(t, 2, lineno);
            p.alpha = {num(t, 3, lineno), num(t, 4, lineno)};
            p.beta = {num(t, 5, lineno), num(t, 6, lineno)};
            mf.pairings.push_back(p);
        } else if (t[0] == "GENERATOR") {
            if (t.size() != 5) bad_line(lineno, "GENERATOR needs 4 reals");
            Moebius g;
            g.a = {num(t, 1, lineno), num(t, 2, lineno)};
            g.b = {num(t, 3, lineno), num(t, 4, lineno)};
            mf.generators.push_back(g);
        } else {
            bad_line(lineno, "unknown record '" + t[0] + "'");
        }
    }
    return mf;
}

MapFile map_file_from(const EquivariantMap& map) {
    MapFile mf;
    mf.phi = map.phi;
    mf.values.resize(map.values.size());
    // fold the per-orbit gauge into the stored value so the checkpoint is
    // self-contained (corner values are gauge-invariant)
    for (std::size_t o = 0; o < map.values.size(); ++o)
        mf.values[o] = map.gauge[o].apply(map.values[o]);
    return mf;
}

void write_map(std::ostream& out, const MapFile& mf) {
    out << "WPLAB-MAP v1\n";
    for (const auto& g : mf.phi)
        out << "GENERATOR " << format_double(g.a.real()) << ' ' << format_double(g.a.imag())
            << ' ' << format_double(g.b.real()) << ' ' << format_double(g.b.imag()) << '\n';
    for (std::size_t o = 0; o < mf.values.size(); ++o)
        out << "VALUE " << o << ' ' << format_double(mf.values[o].real()) << ' '
            << format_double(mf.values[o].imag()) << '\n';
}

MapFile read_map(std::istream& in) {
    MapFile mf;
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line) || line != "WPLAB-MAP v1")
        throw std::runtime_error("line 1: expected header 'WPLAB-MAP v1'");
    lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = tokens_of(line);
        if (t.empty()) continue;
        if (t[0] == "GENERATOR") {
            if (t.size() != 5) bad_line(lineno, "GENERATOR needs 4 reals");
            Moebius g;
            g.a = {num(t, 1, lineno), num(t, 2, lineno)};
            g.b = {num(t, 3, lineno), num(t, 4, lineno)};
            mf.phi.push_back(g);
        } else if (t[0] == "VALUE") {
            if (t.size() != 4) bad_line(lineno, "VALUE needs orbit_id re im");
            int id = inum(t, 1, lineno);
            if (id != static_cast<int>(mf.values.size()))
                bad_line(lineno, "orbit ids must be consecutive from 0");
            mf.values.emplace_back(num(t, 2, lineno), num(t, 3, lineno));
        } else {
            bad_line(lineno, "unknown record '" + t[0] + "'");
        }
    }
    return mf;
}

EquivariantMap map_from_file(const MapFile& mf,
                             std::shared_ptr<const TriangulatedDomain> domain,
                             std::shared_ptr<const FuchsianSurface> target) {
    return make_equivariant_map(std::move(domain), std::move(target), mf.phi, mf.values);
}

void write_curve_csv(std::ostream& out, const EnergyCurve& curve) {
    out << "t,energy,grad_norm\n";
    for (std::size_t i = 0; i < curve.t.size(); ++i)
        out << format_double(curve.t[i]) << ',' << format_double(curve.energy[i]) << ','
            << format_double(curve.grad_norm[i]) << '\n';
}

void write_derivs_csv(std::ostream& out, const std::vector<MuReport>& rows) {
    out << "mu_id,fd1,formula1,fd2,formula2,wp4,hproj4\n";
    for (const auto& r : rows)
        out << r.mu_id << ',' << format_double(r.fd1) << ',' << format_double(r.formula1)
            << ',' << format_double(r.fd2) << ',' << format_double(r.formula2) << ','
            << format_double(r.wp4) << ',' << format_double(r.hproj4) << '\n';
}

void write_report(std::ostream& out, const CertificationReport& rep,
                  const std::string& config_text) {
    out << "scenario: " << rep.scenario << '\n';
    out << "result: " << (rep.passed() ? "PASS" : "FAIL") << '\n';
    out << "is_critical: " << (rep.is_critical ? 1 : 0) << '\n';
    out << "hopf_rel: " << format_double(rep.hopf_rel) << '\n';
    out << "density_min: " << format_double(rep.density_min) << '\n';
    out << "density_max: " << format_double(rep.density_max) << '\n';
    out << "degree: " << rep.degree << '\n';
    out << "degree_raw: " << format_double(rep.degree_raw) << '\n';
    out << "energy: " << format_double(rep.energy) << '\n';
    out << "area: " << format_double(rep.area) << '\n';
    out << "solver_iterations: " << rep.solver_iterations << '\n';
    out << "convexity_constant: " << format_double(rep.convexity_constant) << '\n';
    for (const auto& c : rep.checks)
        out << "check_" << c.name << ": " << (c.pass ? "PASS" : "FAIL") << " value="
            << format_double(c.value) << " tol=" << format_double(c.tol) << '\n';
    std::istringstream cfg(config_text);
    std::string line;
    while (std::getline(cfg, line))
        if (!line.empty()) out << "config_" << line << '\n';
}

}  // namespace wplab
