#pragma once

// Test-domain geometry: a 2-D rectangle with an elliptical cutout and a
// 3-D cube with a peanut-shaped cavity (plus their hole-free variants),
// knot generation on the boundary components with outward unit normals,
// and grid-based interior/evaluation knot placement.
//
// Normals always point out of the SOLUTION domain, so on a hole or cavity
// they point into the cutout.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bkm/point.hpp"

namespace bkm {

enum class BcKind { Dirichlet, Neumann };

struct BoundaryKnot {
    Point position;
    Point normal;  // unit, outward from the solution domain
    BcKind bc_kind = BcKind::Dirichlet;
    double bc_value = 0.0;
};

// Boundary knots ordered Dirichlet-block-first, plus interior and
// evaluation points. The block ordering is what gives the symmetric
// scheme's matrix its 2x2 block layout.
struct KnotSet {
    std::vector<BoundaryKnot> boundary;
    std::vector<Point> interior;
    std::vector<Point> evaluation;

    std::size_t dirichlet_count() const {
        std::size_t c = 0;
        while (c < boundary.size() && boundary[c].bc_kind == BcKind::Dirichlet) ++c;
        return c;
    }
    std::size_t neumann_count() const { return boundary.size() - dirichlet_count(); }
};

enum class DomainVariant { Rect2DWithEllipseHole, Cube3DWithPeanutCavity, Rect2D, Cube3D };

// Domain description. Component names:
//   2-D variants: "outer" (the rectangle), "hole" (the ellipse)
//   3-D variants: faces "x0","x1","y0","y1","z0","z1", "cavity" (the peanut)
// bc_assignment maps component name -> kind; missing entries fall back to
// the defaults (Dirichlet everywhere except the ellipse hole and, in 3-D,
// the x0 face, which default to Neumann).
struct DomainSpec {
    DomainVariant variant = DomainVariant::Rect2DWithEllipseHole;
    Point outer_min{0.0, 0.0, 0.0};
    Point outer_max{2.0, 2.0, 2.0};
    Point hole_center{1.0, 1.0, 0.0};
    double hole_a = 0.5;
    double hole_b = 0.3;
    Point cavity_center{1.0, 1.0, 1.0};
    double cavity_scale = 0.35;
    std::map<std::string, BcKind> bc_assignment;

    int dim() const {
        return (variant == DomainVariant::Rect2DWithEllipseHole || variant == DomainVariant::Rect2D) ? 2
                                                                                                     : 3;
    }
    bool has_hole() const {
        return variant == DomainVariant::Rect2DWithEllipseHole ||
               variant == DomainVariant::Cube3DWithPeanutCavity;
    }
};

namespace geo_detail {

inline const std::vector<std::string>& component_names(const DomainSpec& d) {
    static const std::vector<std::string> rect{"outer"};
    static const std::vector<std::string> rect_hole{"outer", "hole"};
    static const std::vector<std::string> cube{"x0", "x1", "y0", "y1", "z0", "z1"};
    static const std::vector<std::string> cube_cavity{"x0", "x1", "y0", "y1", "z0", "z1", "cavity"};
    switch (d.variant) {
        case DomainVariant::Rect2D: return rect;
        case DomainVariant::Rect2DWithEllipseHole: return rect_hole;
        case DomainVariant::Cube3D: return cube;
        case DomainVariant::Cube3DWithPeanutCavity: return cube_cavity;
    }
    throw std::logic_error("unknown domain variant");
}

inline BcKind default_bc(const DomainSpec& d, const std::string& component) {
    if (component == "hole") return BcKind::Neumann;
    if (component == "x0" && d.variant == DomainVariant::Cube3DWithPeanutCavity) return BcKind::Neumann;
    return BcKind::Dirichlet;
}

inline void validate(const DomainSpec& d) {
    if (!(d.outer_min.x < d.outer_max.x) || !(d.outer_min.y < d.outer_max.y) ||
        (d.dim() == 3 && !(d.outer_min.z < d.outer_max.z)))
        throw std::invalid_argument("DomainSpec: outer extents must be nonempty");
    if (d.variant == DomainVariant::Rect2DWithEllipseHole) {
        if (!(d.hole_a > 0.0) || !(d.hole_b > 0.0))
            throw std::invalid_argument("DomainSpec: ellipse semi-axes must be > 0");
        if (d.hole_center.x - d.hole_a <= d.outer_min.x || d.hole_center.x + d.hole_a >= d.outer_max.x ||
            d.hole_center.y - d.hole_b <= d.outer_min.y || d.hole_center.y + d.hole_b >= d.outer_max.y)
            throw std::invalid_argument("DomainSpec: ellipse hole must lie strictly inside the rectangle");
    }
    if (d.variant == DomainVariant::Cube3DWithPeanutCavity) {
        if (!(d.cavity_scale > 0.0)) throw std::invalid_argument("DomainSpec: cavity scale must be > 0");
        // max of R(theta) is sqrt(1 + sqrt(1.1)) ~ 1.432 at theta = 0
        const double rmax = d.cavity_scale * 1.44;
        if (d.cavity_center.x - rmax <= d.outer_min.x || d.cavity_center.x + rmax >= d.outer_max.x ||
            d.cavity_center.y - rmax <= d.outer_min.y || d.cavity_center.y + rmax >= d.outer_max.y ||
            d.cavity_center.z - rmax <= d.outer_min.z || d.cavity_center.z + rmax >= d.outer_max.z)
            throw std::invalid_argument("DomainSpec: peanut cavity must lie strictly inside the cube");
    }
    for (const auto& [name, kind] : d.bc_assignment) {
        (void)kind;
        const auto& names = component_names(d);
        bool known = false;
        for (const auto& n : names) known = known || (n == name);
        if (!known) throw std::invalid_argument("DomainSpec: unknown boundary component '" + name + "'");
    }
}

inline BcKind bc_kind_for(const DomainSpec& d, const std::string& component) {
    auto it = d.bc_assignment.find(component);
    return it != d.bc_assignment.end() ? it->second : default_bc(d, component);
}

// Uniform double in [0, 1) with exactly 53 random bits.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

}  // namespace geo_detail

// Radial profile of the peanut cavity.
inline double peanut_profile(double theta) {
    const double s = std::sin(2.0 * theta);
    return std::sqrt(std::cos(2.0 * theta) + std::sqrt(1.1 - s * s));
}

// d/dtheta of the profile.
inline double peanut_profile_derivative(double theta) {
    const double s2 = std::sin(2.0 * theta);
    const double root = std::sqrt(1.1 - s2 * s2);
    const double gprime = -2.0 * std::sin(2.0 * theta) - std::sin(4.0 * theta) / root;
    return 0.5 * gprime / peanut_profile(theta);
}

// Point on the peanut surface: center + scale * R(theta) * (cos t, sin t cos p, sin t sin p).
inline Point peanut_surface(double theta, double phi, double scale, const Point& center) {
    const double r = scale * peanut_profile(theta);
    return {center.x + r * std::cos(theta), center.y + r * std::sin(theta) * std::cos(phi),
            center.z + r * std::sin(theta) * std::sin(phi)};
}

// Is p strictly inside the solution domain (inside the outer shape, outside
// any hole/cavity)?
inline bool point_in_domain(const DomainSpec& d, const Point& p) {
    geo_detail::validate(d);
    if (!(p.x > d.outer_min.x && p.x < d.outer_max.x && p.y > d.outer_min.y && p.y < d.outer_max.y))
        return false;
    if (d.dim() == 3 && !(p.z > d.outer_min.z && p.z < d.outer_max.z)) return false;
    if (d.variant == DomainVariant::Rect2DWithEllipseHole) {
        const double ex = (p.x - d.hole_center.x) / d.hole_a;
        const double ey = (p.y - d.hole_center.y) / d.hole_b;
        if (ex * ex + ey * ey <= 1.0) return false;
    } else if (d.variant == DomainVariant::Cube3DWithPeanutCavity) {
        const Point loc = p - d.cavity_center;
        const double rho = norm(loc);
        if (rho == 0.0) return false;
        const double theta = std::acos(std::clamp(loc.x / rho, -1.0, 1.0));
        if (rho <= d.cavity_scale * peanut_profile(theta)) return false;
    }
    return true;
}

// Equally spaced boundary knots with outward unit normals. Counts are per
// component name; rectangle and ellipse counts are exact, cube faces use
// the nearest grid (actual count may differ slightly from the target), and
// the peanut component draws seeded uniformly random (theta, phi) samples,
// exactly `count` of them. Returned Dirichlet block first, then Neumann.
inline std::vector<BoundaryKnot> boundary_knots(const DomainSpec& d,
                                                const std::map<std::string, int>& count_per_component,
                                                std::uint64_t rng_seed) {
    geo_detail::validate(d);
    const auto& names = geo_detail::component_names(d);
    for (const auto& [name, count] : count_per_component) {
        bool known = false;
        for (const auto& n : names) known = known || (n == name);
        if (!known) throw std::invalid_argument("boundary_knots: unknown component '" + name + "'");
        if (count < 4) throw std::invalid_argument("boundary_knots: need >= 4 knots per component");
    }

    std::vector<BoundaryKnot> knots;
    auto count_of = [&](const std::string& name) -> int {
        auto it = count_per_component.find(name);
        return it == count_per_component.end() ? 0 : it->second;
    };

    for (const auto& name : names) {
        const int count = count_of(name);
        if (count == 0) continue;
        const BcKind kind = geo_detail::bc_kind_for(d, name);

        if (name == "outer") {
            // Allocate knots to the four edges by length (largest-remainder
            // rounding), then half-offset within each edge so no knot can
            // land on a corner, where the normal is undefined.
            const double w = d.outer_max.x - d.outer_min.x;
            const double h = d.outer_max.y - d.outer_min.y;
            const double len[4] = {w, h, w, h};
            const double per = 2.0 * (w + h);
            int alloc[4];
            double frac[4];
            int used = 0;
            for (int e = 0; e < 4; ++e) {
                const double share = count * len[e] / per;
                alloc[e] = static_cast<int>(std::floor(share));
                frac[e] = share - alloc[e];
                used += alloc[e];
            }
            for (int left = count - used; left > 0; --left) {
                int best = 0;
                for (int e = 1; e < 4; ++e)
                    if (frac[e] > frac[best]) best = e;
                ++alloc[best];
                frac[best] = -1.0;
            }
            const Point nrm_of[4] = {{0.0, -1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {-1.0, 0.0, 0.0}};
            for (int e = 0; e < 4; ++e)
                for (int i = 0; i < alloc[e]; ++i) {
                    const double t = (i + 0.5) * len[e] / alloc[e];
                    Point pos;
                    switch (e) {
                        case 0: pos = {d.outer_min.x + t, d.outer_min.y, 0.0}; break;
                        case 1: pos = {d.outer_max.x, d.outer_min.y + t, 0.0}; break;
                        case 2: pos = {d.outer_max.x - t, d.outer_max.y, 0.0}; break;
                        default: pos = {d.outer_min.x, d.outer_max.y - t, 0.0}; break;
                    }
                    knots.push_back({pos, nrm_of[e], kind, 0.0});
                }
        } else if (name == "hole") {
            for (int i = 0; i < count; ++i) {
                const double t = 2.0 * kPi * i / count;
                Point pos{d.hole_center.x + d.hole_a * std::cos(t),
                          d.hole_center.y + d.hole_b * std::sin(t), 0.0};
                Point nrm{std::cos(t) / d.hole_a, std::sin(t) / d.hole_b, 0.0};
                const double len = norm(nrm);
                nrm = (-1.0 / len) * nrm;  // into the hole = out of the solution domain
                knots.push_back({pos, nrm, kind, 0.0});
            }
        } else if (name == "cavity") {
            std::mt19937_64 rng(rng_seed);
            int placed = 0;
            while (placed < count) {
                const double theta = kPi * geo_detail::uniform01(rng);
                const double phi = 2.0 * kPi * geo_detail::uniform01(rng);
                if (std::sin(theta) < 1e-9) continue;  // degenerate tangent frame at the pole
                const Point pos = peanut_surface(theta, phi, d.cavity_scale, d.cavity_center);
                const double r = peanut_profile(theta);
                const double rp = peanut_profile_derivative(theta);
                const double st = std::sin(theta), ct = std::cos(theta);
                const double sp = std::sin(phi), cp = std::cos(phi);
                const Point t_theta{rp * ct - r * st, (rp * st + r * ct) * cp, (rp * st + r * ct) * sp};
                const Point t_phi{0.0, -r * st * sp, r * st * cp};
                Point nrm = cross(t_theta, t_phi);
                nrm = (1.0 / norm(nrm)) * nrm;
                // Out of the solution domain means toward the cavity center.
                if (dot(nrm, pos - d.cavity_center) > 0.0) nrm = -1.0 * nrm;
                knots.push_back({pos, nrm, kind, 0.0});
                ++placed;
            }
        } else {
            // Cube face: name is axis ('x','y','z') + side ('0','1').
            const int axis = name[0] == 'x' ? 0 : (name[0] == 'y' ? 1 : 2);
            const bool high = name[1] == '1';
            const int ku = std::max(2, static_cast<int>(std::lround(std::sqrt(double(count)))));
            const int kv = std::max(2, static_cast<int>(std::lround(double(count) / ku)));
            const double lo[3] = {d.outer_min.x, d.outer_min.y, d.outer_min.z};
            const double hi[3] = {d.outer_max.x, d.outer_max.y, d.outer_max.z};
            const int ua = (axis + 1) % 3, va = (axis + 2) % 3;
            for (int i = 0; i < ku; ++i)
                for (int j = 0; j < kv; ++j) {
                    double c[3];
                    c[axis] = high ? hi[axis] : lo[axis];
                    c[ua] = lo[ua] + (i + 0.5) * (hi[ua] - lo[ua]) / ku;
                    c[va] = lo[va] + (j + 0.5) * (hi[va] - lo[va]) / kv;
                    Point nrm{0.0, 0.0, 0.0};
                    double* ncomp[3] = {&nrm.x, &nrm.y, &nrm.z};
                    *ncomp[axis] = high ? 1.0 : -1.0;
                    knots.push_back({{c[0], c[1], c[2]}, nrm, kind, 0.0});
                }
        }
    }

    // Dirichlet block first, stable within blocks.
    std::vector<BoundaryKnot> ordered;
    ordered.reserve(knots.size());
    for (const auto& k : knots)
        if (k.bc_kind == BcKind::Dirichlet) ordered.push_back(k);
    for (const auto& k : knots)
        if (k.bc_kind == BcKind::Neumann) ordered.push_back(k);

    for (std::size_t i = 0; i < ordered.size(); ++i)
        for (std::size_t j = i + 1; j < ordered.size(); ++j)
            if (dist(ordered[i].position, ordered[j].position) <= 1e-12)
                throw std::runtime_error("boundary_knots: coincident knots at index " + std::to_string(i) +
                                         " and " + std::to_string(j));
    return ordered;
}

namespace geo_detail {

// Regular grid filtered by the inside test, decimated deterministically to
// the requested count.
inline std::vector<Point> grid_points_inside(const DomainSpec& d, int count) {
    if (count < 0) throw std::invalid_argument("knot count must be >= 0");
    if (count == 0) return {};
    const int dim = d.dim();
    int g = std::max(2, static_cast<int>(std::ceil(std::pow(double(count), 1.0 / dim))) + 1);
    const int gmax = dim == 2 ? 600 : 120;
    for (; g <= gmax; g = g + 1 + g / 4) {
        std::vector<Point> inside;
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) {
                const double x = d.outer_min.x + (i + 0.5) * (d.outer_max.x - d.outer_min.x) / g;
                const double y = d.outer_min.y + (j + 0.5) * (d.outer_max.y - d.outer_min.y) / g;
                if (dim == 2) {
                    Point p{x, y, 0.0};
                    if (point_in_domain(d, p)) inside.push_back(p);
                } else {
                    for (int k = 0; k < g; ++k) {
                        const double z = d.outer_min.z + (k + 0.5) * (d.outer_max.z - d.outer_min.z) / g;
                        Point p{x, y, z};
                        if (point_in_domain(d, p)) inside.push_back(p);
                    }
                }
            }
        if (static_cast<int>(inside.size()) >= count) {
            std::vector<Point> out;
            out.reserve(count);
            const std::size_t m = inside.size();
            for (int i = 0; i < count; ++i) out.push_back(inside[(i * m) / count]);
            return out;
        }
    }
    throw std::runtime_error("interior knot grid cannot supply " + std::to_string(count) + " points");
}

}  // namespace geo_detail

inline std::vector<Point> interior_knots(const DomainSpec& d, int count) {
    geo_detail::validate(d);
    return geo_detail::grid_points_inside(d, count);
}

inline std::vector<Point> evaluation_knots(const DomainSpec& d, int count) {
    geo_detail::validate(d);
    return geo_detail::grid_points_inside(d, count);
}

}  // namespace bkm
