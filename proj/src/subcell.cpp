#include "hballs/subcell.hpp"

#include <algorithm>
#include <cmath>

namespace hballs::subcell {

namespace {

struct Piece {
    double area;
    double cx, cy;
};

// Positive part of a linear function on a triangle: clip the triangle along
// the zero level and report the resulting polygon's area and centroid.
template <class Fn>
void clip_triangle(const double px[3], const double py[3], const double v[3], Fn&& emit) {
    double qx[5], qy[5];
    int n = 0;
    for (int a = 0; a < 3; ++a) {
        int b = (a + 1) % 3;
        if (v[a] > 0.0) {
            qx[n] = px[a];
            qy[n] = py[a];
            ++n;
        }
        if ((v[a] > 0.0) != (v[b] > 0.0)) {
            double t = v[a] / (v[a] - v[b]);
            qx[n] = px[a] + t * (px[b] - px[a]);
            qy[n] = py[a] + t * (py[b] - py[a]);
            ++n;
        }
    }
    if (n < 3) return;
    double a2 = 0.0, sx = 0.0, sy = 0.0;
    for (int k = 1; k + 1 < n; ++k) {
        double cross = (qx[k] - qx[0]) * (qy[k + 1] - qy[0]) - (qx[k + 1] - qx[0]) * (qy[k] - qy[0]);
        a2 += cross;
        sx += cross * (qx[0] + qx[k] + qx[k + 1]);
        sy += cross * (qy[0] + qy[k] + qy[k + 1]);
    }
    if (a2 == 0.0) return;
    emit(Piece{0.5 * a2, sx / (3.0 * a2), sy / (3.0 * a2)});
}

// Pieces of {phi > 0} cell by cell.  Fully covered cells arrive as one piece
// (area h^2, centroid at the cell center); boundary cells as up to four
// clipped triangles around the cell center.
template <class Fn>
void for_each_piece(const ScalarField& phi, Fn&& emit) {
    const GridSpec& g = phi.grid;
    double h = g.h, h2 = h * h;
    for (int j = 0; j + 1 < g.ny; ++j)
        for (int i = 0; i + 1 < g.nx; ++i) {
            double f00 = phi.at(i, j), f10 = phi.at(i + 1, j);
            double f01 = phi.at(i, j + 1), f11 = phi.at(i + 1, j + 1);
            bool p00 = f00 > 0.0, p10 = f10 > 0.0, p01 = f01 > 0.0, p11 = f11 > 0.0;
            if (!p00 && !p10 && !p01 && !p11) continue;
            double x0 = g.x(i), y0 = g.y(j);
            if (p00 && p10 && p01 && p11) {
                emit(i, j, Piece{h2, x0 + 0.5 * h, y0 + 0.5 * h});
                continue;
            }
            double cx = x0 + 0.5 * h, cy = y0 + 0.5 * h;
            double fc = 0.25 * (f00 + f10 + f01 + f11);
            // corners counterclockwise, triangles (corner, next corner, center)
            const double vx[4] = {x0, x0 + h, x0 + h, x0};
            const double vy[4] = {y0, y0, y0 + h, y0 + h};
            const double vf[4] = {f00, f10, f11, f01};
            for (int a = 0; a < 4; ++a) {
                int b = (a + 1) % 4;
                double px[3] = {vx[a], vx[b], cx};
                double py[3] = {vy[a], vy[b], cy};
                double vv[3] = {vf[a], vf[b], fc};
                clip_triangle(px, py, vv, [&](const Piece& p) { emit(i, j, p); });
            }
        }
}

}  // namespace

double area(const ScalarField& phi) {
    double total = 0.0;
    for_each_piece(phi, [&](int, int, const Piece& p) { total += p.area; });
    return total;
}

Complex moment(const ScalarField& phi, int k) {
    Complex total{0.0, 0.0};
    for_each_piece(phi, [&](int, int, const Piece& p) {
        Complex z{p.cx, p.cy}, zk{1.0, 0.0};
        for (int q = 0; q < k; ++q) zk *= z;
        total += p.area * zk;
    });
    return total;
}

double integral(const ScalarField& phi, const ScalarField& f) {
    const GridSpec& g = phi.grid;
    double inv_h = 1.0 / g.h;
    double total = 0.0;
    for_each_piece(phi, [&](int i, int j, const Piece& p) {
        double s = (p.cx - g.x(i)) * inv_h, t = (p.cy - g.y(j)) * inv_h;
        double v = (1.0 - s) * (1.0 - t) * f.at(i, j) + s * (1.0 - t) * f.at(i + 1, j) +
                   (1.0 - s) * t * f.at(i, j + 1) + s * t * f.at(i + 1, j + 1);
        total += p.area * v;
    });
    return total;
}

ScalarField fold_level(const ScalarField& u, const RegionMask& region) {
    const GridSpec& g = u.grid;
    double h = g.h;
    ScalarField phi(g);
    auto fold = [&](int i, int j) { return std::sqrt(2.0 * std::abs(u.at(i, j))); };
    // A non-member node whose own field value places the boundary more than a
    // cell away contradicts the fold model (the work field cannot stay large
    // right outside its support): the membership must have been edited out
    // from under the field.  Such nodes and their member neighbors fall back
    // to plain staircase distances so an excised set keeps its full measure.
    auto cut = [&](int i, int j) { return !region.at(i, j) && fold(i, j) > h; };
    constexpr int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (region.at(i, j)) {
                double f = fold(i, j);
                for (int d = 0; d < 4; ++d) {
                    int ni = i + di[d], nj = j + dj[d];
                    if (g.in_grid(ni, nj) && cut(ni, nj)) f = std::min(f, 0.5 * h);
                }
                phi.at(i, j) = f;
                continue;
            }
            if (cut(i, j)) {
                phi.at(i, j) = -0.5 * h;
                continue;
            }
            // Extrapolate the member-side distance along each grid line so the
            // edge crossing lands at the fold's directional rate; with a single
            // inside sample fall back to a unit-rate step.  A non-member node is
            // never past the boundary (u <= theta there), hence the clamp; at a
            // fixed boundary (u = 0 on the wall) a steep contact extrapolates
            // positive and the clamp pins the crossing onto the wall exactly.
            double best = -h;
            for (int d = 0; d < 4; ++d) {
                int pi = i + di[d], pj = j + dj[d];
                if (!g.in_grid(pi, pj) || !region.at(pi, pj)) continue;
                int qi = pi + di[d], qj = pj + dj[d];
                double fp = fold(pi, pj);
                double ext = (g.in_grid(qi, qj) && region.at(qi, qj)) ? 2.0 * fp - fold(qi, qj)
                                                                      : fp - h;
                best = std::max(best, ext);
            }
            phi.at(i, j) = std::min(best, 0.0);
        }
    return phi;
}

}  // namespace hballs::subcell
