#pragma once

#include <cmath>
#include <complex>

namespace hballs {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

using Complex = std::complex<double>;

inline Complex to_complex(Point p) { return {p.x, p.y}; }

inline double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace hballs
