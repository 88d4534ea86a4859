#include "hballs/balayage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hballs {

double BoundaryMeasure::total() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.weight;
    return s;
}

double BoundaryMeasure::min_weight() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::min(m, e.weight);
    return m;
}

double measure_total_mass(const MeasureSpec& mu, const GridSpec& grid) {
    double s = 0.0;
    for (const auto& a : mu.atoms) s += a.weight;
    if (mu.density) s += mu.density->value * grid.h * grid.h * mu.density->region.count();
    return s;
}

ScalarField splat_measure(const DomainMask& mask, const MeasureSpec& mu) {
    const GridSpec& g = mask.grid;
    ScalarField mu_h{g, std::vector<double>(g.size(), 0.0)};
    double h2 = g.h * g.h;

    for (const auto& a : mu.atoms) {
        if (!(a.weight > 0.0)) throw Error("atom weight must be positive");
        double fx = (a.location.x - g.x_min) / g.h;
        double fy = (a.location.y - g.y_min) / g.h;
        int i0 = static_cast<int>(std::floor(fx));
        int j0 = static_cast<int>(std::floor(fy));
        // every node within 2 cells of the splat must be interior so that the
        // atom cannot leak mass straight onto the boundary
        for (int dj = -2; dj <= 3; ++dj)
            for (int di = -2; di <= 3; ++di) {
                int i = i0 + di, j = j0 + dj;
                if (!g.in_grid(i, j) || !mask.interior(i, j)) throw SupportTouchesBoundary();
            }
        double tx = fx - i0, ty = fy - j0;
        double w[2][2] = {{(1 - tx) * (1 - ty), (1 - tx) * ty}, {tx * (1 - ty), tx * ty}};
        for (int di = 0; di < 2; ++di)
            for (int dj = 0; dj < 2; ++dj)
                mu_h.v[g.index(i0 + di, j0 + dj)] += a.weight * w[di][dj] / h2;
    }

    if (mu.density) {
        const auto& d = *mu.density;
        if (!(d.region.grid == g)) throw GridMismatch();
        if (d.value < 0.0) throw Error("density must be nonnegative");
        for (std::size_t k = 0; k < d.region.member.size(); ++k) {
            if (!d.region.member[k]) continue;
            if (mask.cls[k] != NodeClass::Interior) throw SupportTouchesBoundary();
            mu_h.v[k] += d.value;
        }
    }
    return mu_h;
}

namespace {

constexpr double pi = 3.14159265358979323846;

double field_theta(const ScalarField& u, double theta_scale) {
    if (theta_scale < 0) theta_scale = std::sqrt(std::numeric_limits<double>::epsilon());
    double umax = 0.0;
    for (double a : u.v) umax = std::max(umax, a);
    return theta_scale * umax;
}

// unbounded domains are truncated by the grid box; the truncation is only
// valid when the work field dies out well before the artificial sides
void check_box_margin(const DomainMask& mask, const ScalarField& u, double theta) {
    const GridSpec& g = mask.grid;
    bool x_sides = false, top = false, bottom = false;
    if (std::holds_alternative<WholePlaneBox>(mask.domain)) {
        x_sides = top = bottom = true;
    } else if (const auto* hp = std::get_if<HalfPlane>(&mask.domain)) {
        x_sides = top = true;
        bottom = hp->offset < g.y_min;
    } else {
        return;  // bounded domains sit strictly inside the box
    }
    const int strip = 5;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            bool near = (x_sides && (i < strip || i >= g.nx - strip)) ||
                        (top && j >= g.ny - strip) || (bottom && j < strip);
            if (near && u.at(i, j) > theta) throw BoxTooSmall();
        }
}

ScalarField swept_density(const ScalarField& u, const ScalarField& mu_h, const DomainMask& mask) {
    const GridSpec& g = mask.grid;
    ScalarField B{g, std::vector<double>(g.size(), 0.0)};
    double inv_h2 = 1.0 / (g.h * g.h);
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) {
            if (!mask.interior(i, j)) continue;
            double nb = (u.at(i - 1, j) + u.at(i + 1, j)) + (u.at(i, j - 1) + u.at(i, j + 1));
            B.v[g.index(i, j)] = mu_h.at(i, j) + (nb - 4.0 * u.at(i, j)) * inv_h2;
        }
    return B;
}

}  // namespace

BoundaryMeasure extract_sweep_measure(const ScalarField& u, const DomainMask& mask) {
    if (!(u.grid == mask.grid)) throw GridMismatch();
    const GridSpec& g = mask.grid;
    BoundaryMeasure nu{g, {}};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!mask.boundary(i, j)) continue;
            double w = 0.0;
            if (i > 0 && mask.interior(i - 1, j)) w += u.at(i - 1, j);
            if (i + 1 < g.nx && mask.interior(i + 1, j)) w += u.at(i + 1, j);
            if (j > 0 && mask.interior(i, j - 1)) w += u.at(i, j - 1);
            if (j + 1 < g.ny && mask.interior(i, j + 1)) w += u.at(i, j + 1);
            if (w > 0.0) nu.entries.push_back({i, j, w});
        }
    return nu;
}

double complementarity_residual(const ScalarField& u, const ScalarField& mu_h,
                                const DomainMask& mask) {
    if (!(u.grid == mask.grid) || !(mu_h.grid == mask.grid)) throw GridMismatch();
    const GridSpec& g = mask.grid;
    double h2 = g.h * g.h;
    double worst = 0.0;
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) {
            if (!mask.interior(i, j)) continue;
            double nb = (u.at(i - 1, j) + u.at(i + 1, j)) + (u.at(i, j - 1) + u.at(i, j + 1));
            double slack = 4.0 * u.at(i, j) - nb - h2 * (mu_h.at(i, j) - 1.0);
            worst = std::max(worst, std::min(u.at(i, j), slack));
        }
    return worst;
}

BalayageResult solve_obstacle(const DomainMask& mask, const MeasureSpec& mu,
                              const SolverOptions& opts) {
    const GridSpec& g = mask.grid;
    ScalarField mu_h = splat_measure(mask, mu);
    double total = measure_total_mass(mu, g);
    double h2 = g.h * g.h;

    std::vector<double> rhs(g.size(), 0.0);
    std::vector<std::uint8_t> active(g.size(), 0);
    for (std::size_t k = 0; k < rhs.size(); ++k)
        if (mask.cls[k] == NodeClass::Interior) {
            active[k] = 1;
            rhs[k] = h2 * (mu_h.v[k] - 1.0);
        }

    ScalarField u{g, std::vector<double>(g.size(), 0.0)};
    double relax = opts.relaxation > 0.0 ? opts.relaxation : 1.9;
    double tol = opts.tol_factor * total / h2;

    long sweeps = 0;
    double res = std::numeric_limits<double>::infinity();
    while (sweeps < opts.max_sweeps) {
        kernels::psor_halfsweep(u.v, rhs, active, g.nx, g.ny, 0, relax, true, opts.mode);
        kernels::psor_halfsweep(u.v, rhs, active, g.nx, g.ny, 1, relax, true, opts.mode);
        ++sweeps;
        if (sweeps % opts.residual_interval == 0 || sweeps == opts.max_sweeps) {
            res = kernels::lcp_residual(u.v, rhs, active, g.nx, g.ny, h2, true, opts.mode);
            if (res <= tol) break;
        }
    }
    if (!(res <= tol)) throw NonConvergence();

    double theta = field_theta(u, opts.theta_scale);
    check_box_margin(mask, u, theta);

    BalayageResult out;
    out.u = u;
    out.mu_h = mu_h;
    out.B = swept_density(u, mu_h, mask);
    out.omega = region_from_field(u, mask, opts.theta_scale);
    out.omega_big = interior_of_closure(out.omega, mask);
    out.nu = extract_sweep_measure(u, mask);
    out.total_mass = total;
    out.iterations = sweeps;
    out.residual = res;
    return out;
}

BalayageResult sandpile(const DomainMask& mask, const MeasureSpec& mu, const SandpileOptions& opts) {
    const GridSpec& g = mask.grid;
    ScalarField mu_h = splat_measure(mask, mu);
    double total = measure_total_mass(mu, g);
    double h2 = g.h * g.h;
    double cap = h2;

    std::vector<std::uint8_t> active(g.size(), 0);
    for (std::size_t k = 0; k < active.size(); ++k)
        if (mask.cls[k] == NodeClass::Interior) active[k] = 1;

    std::vector<double> mass_a(g.size(), 0.0);
    for (std::size_t k = 0; k < mass_a.size(); ++k) mass_a[k] = mu_h.v[k] * h2;
    std::vector<double> mass_b = mass_a;  // identical outside the window at all times
    std::vector<double> odo(g.size(), 0.0);

    kernels::Window win{g.nx, g.ny, 0, 0};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (mass_a[g.index(i, j)] > cap) {
                win.i0 = std::min(win.i0, i);
                win.j0 = std::min(win.j0, j);
                win.i1 = std::max(win.i1, i + 1);
                win.j1 = std::max(win.j1, j + 1);
            }
    if (win.i0 >= win.i1) {  // nothing above capacity: nothing topples
        BalayageResult out;
        out.u = ScalarField{g, std::vector<double>(g.size(), 0.0)};
        out.mu_h = mu_h;
        out.B = swept_density(out.u, mu_h, mask);
        out.omega = RegionMask(g);
        out.omega_big = RegionMask(g);
        out.nu = BoundaryMeasure{g, {}};
        out.total_mass = total;
        return out;
    }
    auto grow = [&](int by) {
        win.i0 = std::max(0, win.i0 - by);
        win.j0 = std::max(0, win.j0 - by);
        win.i1 = std::min(g.nx, win.i1 + by);
        win.j1 = std::min(g.ny, win.j1 + by);
    };
    grow(2);

    // an active node in the two outermost window layers that is over capacity
    // forces expansion before it topples, so emissions never cross the window
    // edge (mass outside the window is untouched and the two buffers agree
    // there by construction)
    auto rim_hot = [&](const std::vector<double>& m) {
        for (int layer = 0; layer < 2; ++layer) {
            int i0 = win.i0 + layer, i1 = win.i1 - 1 - layer;
            int j0 = win.j0 + layer, j1 = win.j1 - 1 - layer;
            if (i0 > i1 || j0 > j1) return false;
            for (int i = i0; i <= i1; ++i) {
                if ((active[g.index(i, j0)] && m[g.index(i, j0)] > cap) ||
                    (active[g.index(i, j1)] && m[g.index(i, j1)] > cap))
                    return true;
            }
            for (int j = j0; j <= j1; ++j) {
                if ((active[g.index(i0, j)] && m[g.index(i0, j)] > cap) ||
                    (active[g.index(i1, j)] && m[g.index(i1, j)] > cap))
                    return true;
            }
        }
        return false;
    };

    std::vector<double>* cur = &mass_a;
    std::vector<double>* nxt = &mass_b;
    long iters = 0;
    double worst = std::numeric_limits<double>::infinity();
    bool window_maxed = false;
    while (iters < opts.max_iterations) {
        if (!window_maxed && rim_hot(*cur)) {
            grow(8);
            window_maxed = win.i0 == 0 && win.j0 == 0 && win.i1 == g.nx && win.j1 == g.ny;
        }
        worst = kernels::sandpile_step(*cur, *nxt, odo, active, g.nx, g.ny, win, cap, opts.mode);
        std::swap(cur, nxt);
        ++iters;
        if (worst <= opts.tol * cap) break;
    }
    if (!(worst <= opts.tol * cap)) throw NonConvergence();

    BalayageResult out;
    out.u = ScalarField{g, std::vector<double>(g.size(), 0.0)};
    for (std::size_t k = 0; k < odo.size(); ++k) out.u.v[k] = 0.25 * odo[k];
    out.mu_h = mu_h;
    out.total_mass = total;
    out.iterations = iters;
    out.residual = worst / h2;

    double theta = field_theta(out.u, -1.0);
    check_box_margin(mask, out.u, theta);

    const std::vector<double>& m = *cur;
    out.B = ScalarField{g, std::vector<double>(g.size(), 0.0)};
    out.omega = RegionMask(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            std::size_t k = g.index(i, j);
            if (mask.cls[k] != NodeClass::Interior) continue;
            out.B.v[k] = m[k] / h2;
            if (m[k] >= cap * (1.0 - 1e-9)) out.omega.member[k] = 1;  // fully loaded cells
        }
    out.omega_big = interior_of_closure(out.omega, mask);
    out.nu = BoundaryMeasure{g, {}};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            std::size_t k = g.index(i, j);
            if (mask.cls[k] == NodeClass::Boundary && m[k] > 0.0)
                out.nu.entries.push_back({i, j, m[k]});
        }
    return out;
}

}  // namespace hballs
