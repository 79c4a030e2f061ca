#pragma once

// Minimal 2-D/3-D point-and-vector type. Points are stored with three
// coordinates; 2-D problems keep z = 0, so norms and dot products are
// dimension-agnostic.

#include <cmath>

namespace bkm {

inline constexpr double kPi = 3.141592653589793;

struct Point {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Point operator+(const Point& a, const Point& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point operator*(double s, const Point& a) { return {s * a.x, s * a.y, s * a.z}; }

inline double dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Point cross(const Point& a, const Point& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline double dist(const Point& a, const Point& b) { return norm(a - b); }

}  // namespace bkm
