#include "hballs/balls.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hballs/subcell.hpp"

namespace hballs {

namespace {

constexpr double two_pi = 6.28318530717958647692;

std::string point_detail(Point p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.6g, %.6g)", p.x, p.y);
    return buf;
}

enum class ProbeStatus { Ok, InBall, NearBoundary };

// a probe is usable when every node within `margin` cells of it is interior
// and outside omega
ProbeStatus classify_probe(const DomainMask& mask, const RegionMask& omega, Point p,
                           double margin) {
    const GridSpec& g = mask.grid;
    if (p.x < g.x_min || p.x > g.x_max() || p.y < g.y_min || p.y > g.y_max())
        return ProbeStatus::NearBoundary;
    auto [ci, cj] = g.nearest(p);
    int m = static_cast<int>(std::ceil(margin));
    bool in_ball = false, near_bdry = false;
    for (int dj = -m; dj <= m; ++dj)
        for (int di = -m; di <= m; ++di) {
            int i = ci + di, j = cj + dj;
            if (!g.in_grid(i, j) || !mask.interior(i, j))
                near_bdry = true;
            else if (omega.at(i, j))
                in_ball = true;
        }
    if (in_ball) return ProbeStatus::InBall;
    if (near_bdry) return ProbeStatus::NearBoundary;
    return ProbeStatus::Ok;
}

}  // namespace

BallResult compute_ball(const DomainMask& mask, Point x0, double alpha,
                        const SolverOptions& opts) {
    if (!(alpha > 0.0)) throw Error("alpha must be positive");
    MeasureSpec mu;
    mu.atoms.push_back({x0, alpha});
    BallResult out{mask, x0, alpha, solve_obstacle(mask, mu, opts)};
    return out;
}

CheckReport verify_field_characterization(const BallResult& ball, const VerifyOptions& vo) {
    CheckReport rep;
    const ScalarField& u = ball.bal.u;
    double umax = u.max_abs();

    double most_negative = 0.0;
    for (double a : u.v) most_negative = std::min(most_negative, a);
    rep.add("u_nonnegative", -most_negative, vo.neg_tol * umax);

    RegionMask support = dilate(ball.omega(), 2);
    double stray = 0.0;
    for (std::size_t k = 0; k < u.v.size(); ++k)
        if (!support.member[k]) stray = std::max(stray, std::abs(u.v[k]));
    rep.add("u_zero_outside", stray, vo.zero_tol * umax);

    rep.add("complementarity", complementarity_residual(u, ball.bal.mu_h, ball.mask),
            vo.compl_tol * ball.alpha);
    return rep;
}

std::vector<Point> place_probes(const BallResult& ball, int count, const VerifyOptions& vo) {
    const GridSpec& g = ball.mask.grid;
    const RegionMask& om = ball.omega();
    Point c = ball.center;
    double r = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (om.at(i, j)) r = std::max(r, dist(c, g.node(i, j)));

    double m = vo.probe_margin * g.h;
    std::vector<Point> valid;
    const int dense = std::max(4 * count, 64);
    for (double rad : {r + 3.0 * m, r + 6.0 * m}) {
        for (int a = 0; a < dense; ++a) {
            double ang = two_pi * (a + 0.5) / dense;
            Point p{c.x + rad * std::cos(ang), c.y + rad * std::sin(ang)};
            if (classify_probe(ball.mask, om, p, vo.probe_margin) == ProbeStatus::Ok)
                valid.push_back(p);
        }
    }
    if (static_cast<int>(valid.size()) <= count) return valid;
    std::vector<Point> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) out.push_back(valid[k * valid.size() / count]);
    return out;
}

std::vector<Point> arc_probes(Point center, double radius, int count, double angle0,
                              double angle1) {
    std::vector<Point> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        double ang = angle0 + (angle1 - angle0) * (k + 0.5) / count;
        out.push_back({center.x + radius * std::cos(ang), center.y + radius * std::sin(ang)});
    }
    return out;
}

CheckReport verify_mean_value(const BallResult& ball, const GreenEvaluator& green,
                              std::span<const Point> probes, const VerifyOptions& vo) {
    CheckReport rep;
    const GridSpec& g = ball.mask.grid;
    // integrate over the boundary-corrected region: node counting alone loses
    // the partially covered band along the free boundary (an O(h) bias)
    ScalarField phi = subcell::fold_level(ball.bal.u, ball.omega());
    for (std::size_t k = 0; k < probes.size(); ++k) {
        Point x = probes[k];
        ProbeStatus st = classify_probe(ball.mask, ball.omega(), x, vo.probe_margin);
        if (st == ProbeStatus::InBall) throw ProbeInsideBall(point_detail(x));
        if (st == ProbeStatus::NearBoundary) throw ProbeTooCloseToBoundary(point_detail(x));

        ScalarField f = green.source_field(x, g);
        double sum = subcell::integral(phi, f);
        double lhs = ball.alpha *
                     (green.is_analytic() ? green.value(ball.center, x) : f.interp(ball.center));
        double scale = std::max(std::abs(lhs), std::numeric_limits<double>::min());
        rep.add("mean_value[" + std::to_string(k) + "]", std::abs(lhs - sum) / scale, vo.rel_tol,
                point_detail(x));
    }
    return rep;
}

CheckReport verify_subharmonic_inequality(const BallResult& ball, const GreenEvaluator& green,
                                          std::span<const Point> probes, const VerifyOptions& vo) {
    CheckReport rep;
    const GridSpec& g = ball.mask.grid;
    ScalarField phi = subcell::fold_level(ball.bal.u, ball.omega());
    for (std::size_t k = 0; k < probes.size(); ++k) {
        Point x = probes[k];
        auto [ci, cj] = g.nearest(x);
        if (!ball.mask.interior(ci, cj)) throw ProbeTooCloseToBoundary(point_detail(x));

        ScalarField f = green.source_field(x, g);
        double sum = subcell::integral(phi, f);
        double lhs = ball.alpha *
                     (green.is_analytic() ? green.value(ball.center, x) : f.interp(ball.center));
        // margin = alpha*G(x0,x) - integral over omega; this equals the Green
        // representation of the work field, so it must stay nonnegative
        // everywhere (strictly positive inside omega, ~0 far outside)
        double margin = lhs - sum;
        double tol = vo.rel_tol * std::max(std::abs(lhs), std::abs(sum));
        rep.add("subharmonic[" + std::to_string(k) + "]", std::max(0.0, -margin), tol,
                point_detail(x));
    }
    return rep;
}

CheckReport check_positivity(const BallResult& ball, const VerifyOptions& vo) {
    CheckReport rep;
    double lambda_omega = subcell::area(subcell::fold_level(ball.bal.u, ball.omega()));
    double nu_total = ball.bal.nu.total();
    double alpha = ball.alpha;

    rep.add("nu_nonnegative", -ball.bal.nu.min_weight(), vo.neg_tol * alpha);
    rep.add("omega_area_bound", lambda_omega - alpha, vo.rel_tol * alpha);
    rep.add("mass_balance", std::abs(lambda_omega + nu_total - alpha), vo.rel_tol * alpha);

    // swept density never exceeds the background; by the solver algebra
    // B - 1 = -residual at loaded nodes, so the measured residual is the bound
    double bmax = 0.0;
    const GridSpec& g = ball.mask.grid;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (ball.mask.interior(i, j)) bmax = std::max(bmax, ball.bal.B.at(i, j));
    rep.add("density_bound", bmax - 1.0, 2.0 * ball.bal.residual + 1e-12);
    return rep;
}

CheckReport check_monotonicity(const BallResult& smaller, const BallResult& larger) {
    if (!(smaller.mask.grid == larger.mask.grid)) throw GridMismatch();

    bool same_domain = smaller.mask.cls == larger.mask.cls;
    bool same_center = dist(smaller.center, larger.center) < 0.5 * smaller.mask.grid.h;
    bool alpha_ordered = smaller.alpha <= larger.alpha;
    bool domain_nested = true;
    for (std::size_t k = 0; k < smaller.mask.cls.size(); ++k)
        if (smaller.mask.cls[k] == NodeClass::Interior &&
            larger.mask.cls[k] != NodeClass::Interior) {
            domain_nested = false;
            break;
        }
    bool comparable = same_center && ((same_domain && alpha_ordered) ||
                                      (std::abs(smaller.alpha - larger.alpha) == 0.0 && domain_nested));
    if (!comparable) throw IncomparableInputs();

    CheckReport rep;
    int escaped = count_diff(smaller.omega(), dilate(larger.omega(), 1));
    rep.add("omega_nested", escaped, 0.0);
    return rep;
}

CheckReport check_starshaped_ball(const BallResult& ball) {
    const GridSpec& g = ball.mask.grid;
    auto [ci, cj] = g.nearest(ball.center);

    if (std::holds_alternative<Polygon>(ball.mask.domain)) {
        StarshapeResult k = is_starshaped(interior_region(ball.mask), ci, cj);
        if (!k.starshaped) throw DomainNotStarshaped();
    }
    // the remaining kinds are convex, hence starshaped from any interior point

    CheckReport rep;
    StarshapeResult s = is_starshaped(ball.omega(), ci, cj);
    rep.add("omega_starshaped", static_cast<double>(s.violations.size()), 0.0);
    rep.add("saturation", omega_equality_gap(ball.omega(), ball.omega_big()), 0.0);
    return rep;
}

CheckReport check_halfspace_omega_equality(const BallResult& ball) {
    if (!std::holds_alternative<HalfPlane>(ball.mask.domain))
        throw WrongDomainKind("free set equality is a half-plane statement");
    CheckReport rep;
    rep.add("omega_equality", omega_equality_gap(ball.omega(), ball.omega_big()), 0.0);
    return rep;
}

int omega_equality_gap(const RegionMask& small, const RegionMask& big) {
    if (!(small.grid == big.grid)) throw GridMismatch();
    const GridSpec& g = small.grid;
    int gap = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!big.at(i, j) || small.at(i, j)) continue;
            bool near = false;
            for (int dj = -1; dj <= 1 && !near; ++dj)
                for (int di = -1; di <= 1 && !near; ++di) {
                    int i2 = i + di, j2 = j + dj;
                    if (g.in_grid(i2, j2) && small.at(i2, j2)) near = true;
                }
            if (!near) ++gap;
        }
    return gap;
}

}  // namespace hballs
