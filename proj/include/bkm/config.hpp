// Plain-text experiment/domain configuration: one `key = value` pair per
// line, nesting expressed with dotted keys, `#` starts a comment. Unknown
// keys are hard errors so a typo cannot silently fall back to a default.
//
// Recognized keys:
//   problem                     builtin problem name
//   scheme                      unsym | sym
//   seed                        unsigned integer
//   inner_knots                 integer >= 0
//   eval_knots                  integer >= 0 (0 = problem default)
//   out                         CSV output path
//   boundary_knots.total        integer (split across components by measure)
//   boundary_knots.<component>  integer (explicit per-component count)
//   domain.variant              rect2d_ellipse_hole | cube3d_peanut_cavity |
//                               rect2d | cube3d
//   domain.outer_min.{x,y,z}    reals
//   domain.outer_max.{x,y,z}    reals
//   domain.hole_center.{x,y}    reals
//   domain.hole_a, domain.hole_b        reals
//   domain.cavity_center.{x,y,z}        reals
//   domain.cavity_scale                 real
//   domain.bc.<component>       dirichlet | neumann
#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bkm/bench.hpp"

namespace bkm {

namespace config_detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_real(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double out;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' needs a real number, got '" + v + "'");
    }
    if (pos != v.size())
        throw std::invalid_argument("config: key '" + key + "' needs a real number, got '" + v + "'");
    return out;
}

inline long long parse_int(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    long long out;
    try {
        out = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' needs an integer, got '" + v + "'");
    }
    if (pos != v.size())
        throw std::invalid_argument("config: key '" + key + "' needs an integer, got '" + v + "'");
    return out;
}

inline bool component_known(const DomainSpec& d, const std::string& name) {
    for (const std::string& c : geo_detail::component_names(d))
        if (c == name) return true;
    return false;
}

inline void set_point_field(Point& p, const std::string& key, const std::string& axis, double v) {
    if (axis == "x") p.x = v;
    else if (axis == "y") p.y = v;
    else if (axis == "z") p.z = v;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

}  // namespace config_detail

// Parse a config file into key/value pairs, preserving file order.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = config_detail::trim(line);
        if (t.empty()) continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not of the form key = value");
        const std::string key = config_detail::trim(t.substr(0, eq));
        const std::string value = config_detail::trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is missing a key or value");
        out.emplace_back(key, value);
    }
    return out;
}

// Apply parsed pairs onto an ExperimentConfig. Domain keys materialize
// cfg.domain (starting from the problem default when first touched).
inline void apply_config(const std::vector<std::pair<std::string, std::string>>& pairs,
                         ExperimentConfig& cfg) {
    using config_detail::parse_int;
    using config_detail::parse_real;
    // Any domain.* key materializes a full override built up from the stock
    // defaults, so the resulting domain does not depend on key order or on
    // which problem the config names.
    auto domain = [&cfg]() -> DomainSpec& {
        if (!cfg.domain) cfg.domain = DomainSpec{};
        return *cfg.domain;
    };
    for (const auto& [key, value] : pairs) {
        if (key == "problem") {
            cfg.problem = value;
        } else if (key == "scheme") {
            if (value == "unsym") cfg.scheme = Scheme::Unsymmetric;
            else if (value == "sym") cfg.scheme = Scheme::Symmetric;
            else throw std::invalid_argument("config: scheme must be unsym or sym, got '" + value + "'");
        } else if (key == "seed") {
            const long long v = parse_int(key, value);
            if (v < 0) throw std::invalid_argument("config: seed must be non-negative");
            cfg.seed = static_cast<std::uint64_t>(v);
        } else if (key == "inner_knots") {
            cfg.inner_count = static_cast<int>(parse_int(key, value));
        } else if (key == "eval_knots") {
            cfg.eval_count = static_cast<int>(parse_int(key, value));
        } else if (key == "out") {
            cfg.out = value;
        } else if (key == "boundary_knots.total") {
            cfg.boundary_total = static_cast<int>(parse_int(key, value));
            cfg.boundary_counts.clear();
        } else if (key.rfind("boundary_knots.", 0) == 0) {
            cfg.boundary_counts[key.substr(15)] = static_cast<int>(parse_int(key, value));
        } else if (key == "domain.variant") {
            DomainSpec& d = domain();
            if (value == "rect2d_ellipse_hole") d.variant = DomainVariant::Rect2DWithEllipseHole;
            else if (value == "cube3d_peanut_cavity") d.variant = DomainVariant::Cube3DWithPeanutCavity;
            else if (value == "rect2d") d.variant = DomainVariant::Rect2D;
            else if (value == "cube3d") d.variant = DomainVariant::Cube3D;
            else throw std::invalid_argument("config: unknown domain variant '" + value + "'");
        } else if (key.rfind("domain.outer_min.", 0) == 0) {
            config_detail::set_point_field(domain().outer_min, key, key.substr(17),
                                           parse_real(key, value));
        } else if (key.rfind("domain.outer_max.", 0) == 0) {
            config_detail::set_point_field(domain().outer_max, key, key.substr(17),
                                           parse_real(key, value));
        } else if (key.rfind("domain.hole_center.", 0) == 0) {
            config_detail::set_point_field(domain().hole_center, key, key.substr(19),
                                           parse_real(key, value));
        } else if (key == "domain.hole_a") {
            domain().hole_a = parse_real(key, value);
        } else if (key == "domain.hole_b") {
            domain().hole_b = parse_real(key, value);
        } else if (key.rfind("domain.cavity_center.", 0) == 0) {
            config_detail::set_point_field(domain().cavity_center, key, key.substr(21),
                                           parse_real(key, value));
        } else if (key == "domain.cavity_scale") {
            domain().cavity_scale = parse_real(key, value);
        } else if (key.rfind("domain.bc.", 0) == 0) {
            const std::string comp = key.substr(10);
            DomainSpec& d = domain();
            if (!config_detail::component_known(d, comp))
                throw std::invalid_argument("config: unknown boundary component '" + comp + "'");
            if (value == "dirichlet") d.bc_assignment[comp] = BcKind::Dirichlet;
            else if (value == "neumann") d.bc_assignment[comp] = BcKind::Neumann;
            else
                throw std::invalid_argument("config: bc must be dirichlet or neumann, got '" + value +
                                            "'");
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
}

}  // namespace bkm
