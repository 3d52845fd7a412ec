#include "wplab/config.hpp"

#include "wplab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace wplab {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw ConfigError("config error at line " + std::to_string(line) + ": " + what);
}

template <class T>
T parse_number(const std::string& v, int line) {
    T out{};
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last)
        fail(line, "cannot parse value '" + v + "'");
    return out;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected key=value in '" + trim(raw) + "'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) fail(lineno, "empty key");
        if (val.empty()) fail(lineno, "empty value for key '" + key + "'");

        if (key == "genus")
            cfg.genus = parse_number<int>(val, lineno);
        else if (key == "cover_degree")
            cfg.cover_degree = parse_number<int>(val, lineno);
        else if (key == "refine")
            cfg.refine = parse_number<int>(val, lineno);
        else if (key == "q_seed")
            cfg.q_seed = parse_number<int>(val, lineno);
        else if (key == "q_truncation")
            cfg.q_truncation = parse_number<int>(val, lineno);
        else if (key == "t_max")
            cfg.t_max = val == "auto" ? 0.0 : parse_number<double>(val, lineno);
        else if (key == "grid_points")
            cfg.grid_points = parse_number<int>(val, lineno);
        else if (key == "solver_tol")
            cfg.solver_tol = parse_number<double>(val, lineno);
        else if (key == "solver_max_iter")
            cfg.solver_max_iter = parse_number<int>(val, lineno);
        else if (key == "kernel_kappa")
            cfg.kernel_kappa = parse_number<double>(val, lineno);
        else if (key == "seed")
            cfg.seed = parse_number<unsigned>(val, lineno);
        else if (key == "out_dir")
            cfg.out_dir = val;
        else
            fail(lineno, "unknown key '" + key + "'");

        if (key == "genus" && cfg.genus < 2) fail(lineno, "genus must be >= 2");
        if (key == "cover_degree" && cfg.cover_degree < 1)
            fail(lineno, "cover_degree must be >= 1");
        if (key == "refine" && cfg.refine < 0) fail(lineno, "refine must be >= 0");
        if (key == "q_seed" && cfg.q_seed < 0) fail(lineno, "q_seed must be >= 0");
        if (key == "q_truncation" && cfg.q_truncation < 0)
            fail(lineno, "q_truncation must be >= 0");
        if (key == "t_max" && cfg.t_max < 0.0) fail(lineno, "t_max must be >= 0 or auto");
        if (key == "grid_points" && (cfg.grid_points < 3 || cfg.grid_points % 2 == 0))
            fail(lineno, "grid_points must be odd and >= 3");
        if (key == "solver_tol" && !(cfg.solver_tol > 0.0))
            fail(lineno, "solver_tol must be > 0");
        if (key == "solver_max_iter" && cfg.solver_max_iter < 1)
            fail(lineno, "solver_max_iter must be >= 1");
        if (key == "kernel_kappa" && !(cfg.kernel_kappa > 0.0))
            fail(lineno, "kernel_kappa must be > 0");
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string format_config(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "genus=" << cfg.genus << "\n"
        << "cover_degree=" << cfg.cover_degree << "\n"
        << "refine=" << cfg.refine << "\n"
        << "q_seed=" << cfg.q_seed << "\n"
        << "q_truncation=" << cfg.q_truncation << "\n"
        << "t_max=" << (cfg.t_max == 0.0 ? std::string("auto") : format_double(cfg.t_max))
        << "\n"
        << "grid_points=" << cfg.grid_points << "\n"
        << "solver_tol=" << format_double(cfg.solver_tol) << "\n"
        << "solver_max_iter=" << cfg.solver_max_iter << "\n"
        << "kernel_kappa=" << format_double(cfg.kernel_kappa) << "\n"
        << "seed=" << cfg.seed << "\n"
        << "out_dir=" << cfg.out_dir << "\n";
    return out.str();
}

}  // namespace wplab
