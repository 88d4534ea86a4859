#include "hballs/twophase.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hballs/subcell.hpp"

namespace hballs {

namespace {

constexpr double pi = 3.14159265358979323846;

std::string point_detail(Point p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.6g, %.6g)", p.x, p.y);
    return buf;
}

double default_exclusion(double h, double c) {
    // near an atom the field carries a 1/(z - z0) term whose discrete dbar is
    // ~h^2/r^4; keeping r^3 >= h/c with a x1.5 margin keeps that term inside
    // the c*h*max|S| budget (max|S| itself grows like 1/r toward the atom)
    return std::max(3.0 * h, 1.5 * std::cbrt(h / c));
}

RegionMask intersect(const RegionMask& a, const RegionMask& b) {
    if (!(a.grid == b.grid)) throw GridMismatch();
    RegionMask r(a.grid);
    for (std::size_t k = 0; k < r.member.size(); ++k) r.member[k] = a.member[k] && b.member[k];
    return r;
}

bool near_region(const RegionMask& r, int i, int j, int cells) {
    const GridSpec& g = r.grid;
    for (int dj = -cells; dj <= cells; ++dj)
        for (int di = -cells; di <= cells; ++di) {
            int i2 = i + di, j2 = j + dj;
            if (g.in_grid(i2, j2) && r.at(i2, j2)) return true;
        }
    return false;
}

double max_abs_over(const RegionMask& phase, const SchwarzField& s) {
    return s.S.max_abs(intersect(phase, s.defined));
}

}  // namespace

std::vector<Point> TwoPhaseResult::gamma() const {
    std::vector<Point> out;
    out.reserve(interface.size());
    for (const auto& e : interface) out.push_back(e.mid);
    return out;
}

SchwarzField schwarz_field(const ScalarField& u, const RegionMask& region, double beta, int sign,
                           std::span<const Point> exclusions, double exclusion_radius) {
    const GridSpec& g = u.grid;
    if (!(region.grid == g)) throw GridMismatch();
    SchwarzField out{ComplexField(g), RegionMask(g)};
    double inv2h = 1.0 / (2.0 * g.h);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!region.at(i, j)) continue;
            Point p = g.node(i, j);
            bool excluded = false;
            for (Point e : exclusions)
                if (dist(p, e) < exclusion_radius) {
                    excluded = true;
                    break;
                }
            if (excluded) continue;
            double ux, uy;
            if (i == 0)
                ux = (u.at(1, j) - u.at(0, j)) / g.h;
            else if (i == g.nx - 1)
                ux = (u.at(i, j) - u.at(i - 1, j)) / g.h;
            else
                ux = (u.at(i + 1, j) - u.at(i - 1, j)) * inv2h;
            if (j == 0)
                uy = (u.at(i, 1) - u.at(i, 0)) / g.h;
            else if (j == g.ny - 1)
                uy = (u.at(i, j) - u.at(i, j - 1)) / g.h;
            else
                uy = (u.at(i, j + 1) - u.at(i, j - 1)) * inv2h;
            Complex dz{0.5 * ux, -0.5 * uy};
            Complex zbar{p.x, -p.y};
            out.S.v[g.index(i, j)] = static_cast<double>(sign) * beta * zbar - 4.0 * dz;
            out.defined.set(i, j, true);
        }
    return out;
}

TwoPhaseResult reflection_twophase(const GridSpec& grid, Point z0, double alpha,
                                   const SolverOptions& opts) {
    grid.validate();
    int j0 = (grid.ny - 1) / 2;
    if (grid.ny % 2 == 0 || std::abs(grid.y(j0)) > 1e-9 ||
        std::abs(grid.y_max() + grid.y_min) > 1e-9)
        throw GridMismatch("grid must be symmetric about y = 0 with a node row on the axis");
    if (!(z0.y > 0.0)) throw GeometryOutOfBounds("atom must lie in the upper half plane");

    DomainMask mask = build_domain_mask(grid, HalfPlane{0.0});
    MeasureSpec mu;
    mu.atoms.push_back({z0, alpha});

    TwoPhaseResult tp;
    tp.kind = TwoPhaseKind::Reflection;
    tp.grid = grid;
    tp.bal = solve_obstacle(mask, mu, opts);
    tp.z0 = z0;
    tp.alpha = alpha;
    tp.mu_plus = mu;
    tp.mu_minus.atoms.push_back({{z0.x, -z0.y}, alpha});

    tp.d_plus = tp.bal.omega;
    tp.d_minus = RegionMask(grid);
    tp.u = ScalarField(grid);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            int jm = 2 * j0 - j;
            if (j < j0 && tp.d_plus.at(i, jm)) tp.d_minus.set(i, j, true);
            // odd extension; the lower-phase term is zero above the axis and
            // vice versa, so one formula covers the whole grid
            tp.u.at(i, j) = tp.bal.u.at(i, j) - tp.bal.u.at(i, jm);
        }

    // contact run on the axis; both samples needed for extrapolation, and two
    // edges at each run end are dropped (one-sided limits degrade there)
    std::vector<char> contact(grid.nx, 0);
    for (int i = 0; i < grid.nx; ++i)
        if (tp.d_plus.at(i, j0 + 1) && tp.d_plus.at(i, j0 + 2)) contact[i] = 1;
    for (int i = 0; i < grid.nx;) {
        if (!contact[i]) {
            ++i;
            continue;
        }
        int b = i;
        while (i < grid.nx && contact[i]) ++i;
        for (int k = b + 2; k < i - 2; ++k)
            tp.interface.push_back({{grid.x(k), 0.0}, k, j0 + 1, k, j0 - 1, 0, 1, grid.h});
    }

    double er = default_exclusion(grid.h, SchwarzOptions{}.c);
    Point atoms[2] = {z0, {z0.x, -z0.y}};
    tp.s_plus = schwarz_field(tp.u, tp.d_plus, tp.beta_plus, +1, atoms, er);
    tp.s_minus = schwarz_field(tp.u, tp.d_minus, tp.beta_minus, -1, atoms, er);
    return tp;
}

TwoPhaseResult null_quadrature_pair(const DomainMask& box, const RegionMask& d_plus,
                                    const SolverOptions& opts) {
    if (!std::holds_alternative<WholePlaneBox>(box.domain))
        throw WrongDomainKind("null pairs are built against the whole plane");
    const GridSpec& g = box.grid;
    if (!(d_plus.grid == g)) throw GridMismatch();

    Point c{0.0, 0.0};
    int n = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!d_plus.at(i, j)) continue;
            if (!box.interior(i, j)) throw SupportTouchesBoundary();
            c.x += g.x(i);
            c.y += g.y(j);
            ++n;
        }
    if (n == 0) throw Error("d_plus is empty");
    c.x /= n;
    c.y /= n;
    double rho = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (d_plus.at(i, j)) rho = std::max(rho, dist(c, g.node(i, j)));
    // doubling the density of the circumscribed disc sweeps out a disc sqrt(2)
    // times as large; monotonicity in the source caps the swept set by that,
    // so it must fit in the box with a safety strip to spare
    double need = std::sqrt(2.0) * rho + 5.0 * g.h;
    if (c.x - need <= g.x_min || c.x + need >= g.x_max() || c.y - need <= g.y_min ||
        c.y + need >= g.y_max())
        throw MarginTooSmall();

    MeasureSpec mu;
    mu.density = MeasureSpec::Density{d_plus, 2.0};

    TwoPhaseResult tp;
    tp.kind = TwoPhaseKind::NullPair;
    tp.grid = g;
    tp.bal = solve_obstacle(box, mu, opts);
    tp.d_plus = d_plus;
    tp.d_minus = RegionMask(g);
    for (std::size_t k = 0; k < tp.d_minus.member.size(); ++k)
        tp.d_minus.member[k] = tp.bal.omega.member[k] && !d_plus.member[k];

    tp.u = ScalarField(g);
    for (std::size_t k = 0; k < tp.u.v.size(); ++k) tp.u.v[k] = -tp.bal.u.v[k];

    const int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!tp.d_plus.at(i, j)) continue;
            for (const auto& d : dirs) {
                int mi = i + d[0], mj = j + d[1];
                if (!g.in_grid(mi, mj) || !tp.d_minus.at(mi, mj)) continue;
                int di = -d[0], dj = -d[1];  // from the minus node toward the plus node
                int p2i = i + di, p2j = j + dj;
                int m2i = mi - di, m2j = mj - dj;
                if (!g.in_grid(p2i, p2j) || !tp.d_plus.at(p2i, p2j)) continue;
                if (!g.in_grid(m2i, m2j) || !tp.d_minus.at(m2i, m2j)) continue;
                Point mid{0.5 * (g.x(i) + g.x(mi)), 0.5 * (g.y(j) + g.y(mj))};
                tp.interface.push_back({mid, i, j, mi, mj, di, dj, 0.5 * g.h});
            }
        }

    double er = default_exclusion(g.h, SchwarzOptions{}.c);
    tp.s_plus = schwarz_field(tp.u, tp.d_plus, tp.beta_plus, +1, {}, er);
    tp.s_minus = schwarz_field(tp.u, tp.d_minus, tp.beta_minus, -1, {}, er);
    return tp;
}

CheckReport verify_dbar_analytic(const SchwarzField& s, const RegionMask& region, double h,
                                 double c, const std::string& label) {
    const GridSpec& g = s.S.grid;
    RegionMask dom = intersect(region, s.defined);
    RegionMask eval = erode(dom, 2);
    double smax = s.S.max_abs(dom);
    double inv2h = 1.0 / (2.0 * h);

    double worst = 0.0;
    Point worst_at{0.0, 0.0};
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) {
            if (!eval.at(i, j)) continue;
            Complex dx = (s.S.at(i + 1, j) - s.S.at(i - 1, j)) * inv2h;
            Complex dy = (s.S.at(i, j + 1) - s.S.at(i, j - 1)) * inv2h;
            double v = std::abs(0.5 * (dx + Complex{0.0, 1.0} * dy));
            if (v > worst) {
                worst = v;
                worst_at = g.node(i, j);
            }
        }
    CheckReport rep;
    // The tolerance scale is floored at 1: the unit background density pins the
    // work field's curvature at order one near the phase boundary, so the O(h)
    // discretization floor is absolute.  A field whose true Schwarz function
    // vanishes (the inner phase of a null pair) would otherwise face an
    // unattainable bound proportional to its own noise level.
    rep.add(label, worst, c * h * std::max(1.0, smax), point_detail(worst_at));
    return rep;
}

CheckReport verify_schwarz_boundary(const TwoPhaseResult& tp, const SchwarzOptions& so) {
    CheckReport rep;
    double h = tp.grid.h;
    const GridSpec& g = tp.grid;
    for (int phase = 0; phase < 2; ++phase) {
        const RegionMask& own = phase == 0 ? tp.d_plus : tp.d_minus;
        const RegionMask& other = phase == 0 ? tp.d_minus : tp.d_plus;
        const SchwarzField& s = phase == 0 ? tp.s_plus : tp.s_minus;
        double beta = phase == 0 ? tp.beta_plus : tp.beta_minus;
        double sign = phase == 0 ? 1.0 : -1.0;

        RegionMask rim = inner_rim(own);
        double worst = 0.0;
        Point worst_at{0.0, 0.0};
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                if (!rim.at(i, j) || !s.defined.at(i, j)) continue;
                if (near_region(other, i, j, 2)) continue;  // that rim is the interface
                Complex target = sign * beta * std::conj(to_complex(g.node(i, j)));
                double v = std::abs(s.S.at(i, j) - target);
                if (v > worst) {
                    worst = v;
                    worst_at = g.node(i, j);
                }
            }
        // Rim nodes sit up to h*sqrt(2) inside the true boundary, where the field
        // departs from its boundary value at rate |grad(S -+ beta*conj(z))| =
        // 2|u''| <= 2 at unit background density; the scale therefore carries the
        // same absolute floor as the analyticity check.
        rep.add(phase == 0 ? "boundary_plus" : "boundary_minus", worst,
                so.c * h * std::max(1.0, max_abs_over(own, s)), point_detail(worst_at));
    }
    return rep;
}

CheckReport verify_schwarz_jump(const TwoPhaseResult& tp, const SchwarzOptions& so,
                                int target_sign) {
    if (tp.interface.empty()) throw EmptyInterface();
    double h = tp.grid.h;
    double smax = std::max(max_abs_over(tp.d_plus, tp.s_plus), max_abs_over(tp.d_minus, tp.s_minus));

    double worst = 0.0;
    Point worst_at{0.0, 0.0};
    int used = 0;
    for (const auto& e : tp.interface) {
        if (!tp.s_plus.defined.at(e.pi, e.pj) || !tp.s_plus.defined.at(e.pi + e.di, e.pj + e.dj) ||
            !tp.s_minus.defined.at(e.mi, e.mj) ||
            !tp.s_minus.defined.at(e.mi - e.di, e.mj - e.dj))
            continue;
        double w0 = (e.t0 + h) / h, w1 = e.t0 / h;
        Complex sp =
            tp.s_plus.S.at(e.pi, e.pj) * w0 - tp.s_plus.S.at(e.pi + e.di, e.pj + e.dj) * w1;
        Complex sm =
            tp.s_minus.S.at(e.mi, e.mj) * w0 - tp.s_minus.S.at(e.mi - e.di, e.mj - e.dj) * w1;
        Complex target = static_cast<double>(target_sign) * (tp.beta_plus + tp.beta_minus) *
                         std::conj(to_complex(e.mid));
        double v = std::abs((sp - sm) - target);
        if (v > worst) {
            worst = v;
            worst_at = e.mid;
        }
        ++used;
    }
    if (used == 0) throw EmptyInterface();
    CheckReport rep;
    rep.add("jump", worst, so.c * h * smax, point_detail(worst_at));
    return rep;
}

CheckReport verify_quadrature_identity(const TwoPhaseResult& tp, const SchwarzOptions& so) {
    const GridSpec& g = tp.grid;
    double h2 = g.h * g.h;

    // diameter of the combined support, used to scale the k-th moment tolerance
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (tp.d_plus.at(i, j) || tp.d_minus.at(i, j)) {
                Point p = g.node(i, j);
                x_lo = std::min(x_lo, p.x);
                x_hi = std::max(x_hi, p.x);
                y_lo = std::min(y_lo, p.y);
                y_hi = std::max(y_hi, p.y);
            }
    double diam = std::hypot(x_hi - x_lo, y_hi - y_lo);

    // Phase moments with the free boundary resolved below cell size: the fold
    // of the work field places the outer boundary, and each phase is clipped
    // by its own side of the interface (the axis for the reflection pair, the
    // prescribed cell union for a null pair).
    RegionMask both(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            both.set(i, j, tp.d_plus.at(i, j) || tp.d_minus.at(i, j));
    ScalarField fold = subcell::fold_level(tp.u, both);

    std::vector<Complex> ip(so.kmax + 1, Complex{0.0, 0.0});
    std::vector<Complex> im(so.kmax + 1, Complex{0.0, 0.0});
    if (tp.kind == TwoPhaseKind::Reflection) {
        ScalarField phi_p(g), phi_m(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double f = fold.at(i, j), y = g.y(j);
                phi_p.at(i, j) = std::min(f, y);
                phi_m.at(i, j) = std::min(f, -y);
            }
        for (int k = 0; k <= so.kmax; ++k) {
            ip[k] = subcell::moment(phi_p, k);
            im[k] = subcell::moment(phi_m, k);
        }
    } else {
        ScalarField stair(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                stair.at(i, j) = tp.d_plus.at(i, j) ? 0.5 * g.h : -0.5 * g.h;
        for (int k = 0; k <= so.kmax; ++k) {
            ip[k] = subcell::moment(stair, k);
            im[k] = subcell::moment(fold, k) - ip[k];
        }
    }

    CheckReport rep;
    for (int k = 0; k <= so.kmax; ++k) {
        Complex lhs = tp.beta_plus * ip[k] - tp.beta_minus * im[k];
        Complex rhs{0.0, 0.0};
        double tol;
        if (tp.kind == TwoPhaseKind::Reflection) {
            Complex z0c = to_complex(tp.z0);
            Complex z0k{1.0, 0.0};
            for (int p = 0; p < k; ++p) z0k *= z0c;
            rhs = tp.alpha * (z0k - std::conj(z0k));
            double r_alpha = std::sqrt(tp.alpha / pi);
            tol = k == 0 ? 1e-3 * tp.alpha
                         : so.quadrature_rel *
                               (tp.alpha * std::pow(std::abs(z0c), k) +
                                tp.alpha * std::pow(diam, k) * (g.h / r_alpha));
        } else {
            tol = so.quadrature_rel * (h2 * tp.d_plus.count()) * std::pow(diam, k);
        }
        rep.add("moment[" + std::to_string(k) + "]", std::abs(lhs - rhs), tol);
    }
    return rep;
}

}  // namespace hballs
