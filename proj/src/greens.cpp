#include "hballs/greens.hpp"

#include <cmath>
#include <limits>

namespace hballs {

namespace {
constexpr double pi = 3.14159265358979323846;
constexpr double two_pi = 2.0 * pi;
}  // namespace

double log_kernel(Point x, Point y) { return -std::log(dist(x, y)) / two_pi; }

double green_halfplane(Point a, Point b, double offset) {
    Point b_star{b.x, 2.0 * offset - b.y};  // image across the edge
    return std::log(dist(a, b_star) / dist(a, b)) / two_pi;
}

double green_disc(Point a, Point b, Point center, double R) {
    Complex z{a.x - center.x, a.y - center.y};
    Complex w{b.x - center.x, b.y - center.y};
    return std::log(std::abs(R * R - z * std::conj(w)) / (R * std::abs(z - w))) / two_pi;
}

ScalarField green_numeric(const DomainMask& mask, Point source, const SolverOptions& opts) {
    const GridSpec& g = mask.grid;
    double h2 = g.h * g.h;

    double fx = (source.x - g.x_min) / g.h;
    double fy = (source.y - g.y_min) / g.h;
    int i0 = static_cast<int>(std::floor(fx));
    int j0 = static_cast<int>(std::floor(fy));
    for (int dj = -2; dj <= 3; ++dj)
        for (int di = -2; di <= 3; ++di) {
            int i = i0 + di, j = j0 + dj;
            if (!g.in_grid(i, j) || !mask.interior(i, j)) throw SourceTooCloseToBoundary();
        }

    // -lap_h G = delta_h / h^2; in h^2 units the right side is just the
    // bilinear unit-mass splat
    std::vector<double> rhs(g.size(), 0.0);
    double tx = fx - i0, ty = fy - j0;
    rhs[g.index(i0, j0)] = (1 - tx) * (1 - ty);
    rhs[g.index(i0 + 1, j0)] = tx * (1 - ty);
    rhs[g.index(i0, j0 + 1)] = (1 - tx) * ty;
    rhs[g.index(i0 + 1, j0 + 1)] = tx * ty;

    std::vector<std::uint8_t> active(g.size(), 0);
    for (std::size_t k = 0; k < active.size(); ++k)
        if (mask.cls[k] == NodeClass::Interior) active[k] = 1;

    ScalarField G{g, std::vector<double>(g.size(), 0.0)};
    double relax = opts.relaxation > 0.0
                       ? opts.relaxation
                       : 2.0 / (1.0 + std::sin(pi / std::max(g.nx, g.ny)));
    double tol = opts.tol_factor / h2;

    long sweeps = 0;
    double res = std::numeric_limits<double>::infinity();
    while (sweeps < opts.max_sweeps) {
        kernels::psor_halfsweep(G.v, rhs, active, g.nx, g.ny, 0, relax, false, opts.mode);
        kernels::psor_halfsweep(G.v, rhs, active, g.nx, g.ny, 1, relax, false, opts.mode);
        ++sweeps;
        if (sweeps % opts.residual_interval == 0 || sweeps == opts.max_sweeps) {
            res = kernels::lcp_residual(G.v, rhs, active, g.nx, g.ny, h2, false, opts.mode);
            if (res <= tol) break;
        }
    }
    if (!(res <= tol)) throw NonConvergence();
    return G;
}

GreenEvaluator GreenEvaluator::analytic(const DomainSpec& domain) {
    GreenEvaluator ev;
    if (const auto* hp = std::get_if<HalfPlane>(&domain))
        ev.halfplane_ = *hp;
    else if (const auto* dc = std::get_if<Disc>(&domain))
        ev.disc_ = *dc;
    else
        throw WrongDomainKind("no closed-form Green function for this domain");
    return ev;
}

GreenEvaluator GreenEvaluator::numeric(const DomainMask& mask, const SolverOptions& opts) {
    GreenEvaluator ev;
    ev.mask_ = mask;
    ev.opts_ = opts;
    return ev;
}

double GreenEvaluator::value(Point a, Point b) const {
    if (halfplane_) return green_halfplane(a, b, halfplane_->offset);
    if (disc_) return green_disc(a, b, disc_->center, disc_->radius);
    throw WrongDomainKind("pointwise values need an analytic kernel");
}

ScalarField GreenEvaluator::source_field(Point source, const GridSpec& grid) const {
    if (mask_) {
        if (!(mask_->grid == grid)) throw GridMismatch();
        return green_numeric(*mask_, source, opts_);
    }
    ScalarField f{grid, std::vector<double>(grid.size(), 0.0)};
    double floor_r = grid.h / 4.0;  // keeps the on-node singularity out of sums
    if (halfplane_) {
        double off = halfplane_->offset;
        Point src_star{source.x, 2.0 * off - source.y};
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i) {
                Point p = grid.node(i, j);
                double r = std::max(dist(p, source), floor_r);
                f.v[grid.index(i, j)] = std::log(dist(p, src_star) / r) / two_pi;
            }
    } else {
        Point c = disc_->center;
        double R = disc_->radius;
        Complex w{source.x - c.x, source.y - c.y};
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i) {
                Complex z{grid.x(i) - c.x, grid.y(j) - c.y};
                double r = std::max(std::abs(z - w), floor_r);
                f.v[grid.index(i, j)] = std::log(std::abs(R * R - z * std::conj(w)) / (R * r)) / two_pi;
            }
    }
    return f;
}

}  // namespace hballs
