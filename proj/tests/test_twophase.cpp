#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hballs/twophase.hpp"

using namespace hballs;

namespace {

constexpr double pi = 3.14159265358979323846;

RegionMask disc_region(const GridSpec& g, Point c, double r) {
    RegionMask m(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (std::hypot(g.x(i) - c.x, g.y(j) - c.y) < r) m.set(i, j, true);
    return m;
}

RegionMask square_region(const GridSpec& g, double half) {
    RegionMask m(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (std::abs(g.x(i)) < half && std::abs(g.y(j)) < half) m.set(i, j, true);
    return m;
}

}  // namespace

TEST_CASE("dbar operator on hand-built fields") {
    GridSpec g = make_grid(-0.5, 0.5, -0.5, 0.5, 0.02);
    RegionMask all(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) all.set(i, j, true);

    // conjugate field: dbar = 1 everywhere, maximally non-analytic
    SchwarzField conj_field{ComplexField(g), all};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            conj_field.S.at(i, j) = std::conj(to_complex(g.node(i, j)));
    CheckReport bad = verify_dbar_analytic(conj_field, all, g.h);
    CHECK_FALSE(bad.overall());
    CHECK(bad.checks[0].value == doctest::Approx(1.0).epsilon(1e-12));

    // pole outside the region: analytic, residual at truncation level
    SchwarzField pole{ComplexField(g), all};
    Complex p{0.9, 0.4};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            pole.S.at(i, j) = 1.0 / (to_complex(g.node(i, j)) - p);
    CheckReport good = verify_dbar_analytic(pole, all, g.h);
    CHECK(good.overall());
}

TEST_CASE("schwarz field of a quadratic work field vanishes") {
    GridSpec g = make_grid(-0.5, 0.5, -0.5, 0.5, 0.02);
    ScalarField u(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            Point p = g.node(i, j);
            u.at(i, j) = 0.25 * (p.x * p.x + p.y * p.y);  // 4*dz(u) = conj(z)
        }
    RegionMask disc = disc_region(g, {0.0, 0.0}, 0.4);
    SchwarzField s = schwarz_field(u, disc, 1.0, +1, {}, 0.0);
    // centered differences are exact on quadratics
    CHECK(s.S.max_abs(s.defined) <= 1e-13);

    Point atom[1] = {{0.0, 0.0}};
    SchwarzField cut = schwarz_field(u, disc, 1.0, +1, atom, 0.1);
    CHECK(cut.defined.count() < disc.count());
    CHECK_FALSE(cut.defined.at(g.nearest({0.0, 0.0}).first, g.nearest({0.0, 0.0}).second));
}

TEST_CASE("reflection pair with contact") {
    GridSpec g = make_grid(-0.6, 0.6, -0.6, 0.6, 0.005);
    TwoPhaseResult tp = reflection_twophase(g, {0.0, 0.15}, pi * 0.04);

    // odd symmetry node-exact, mirror phases
    int j0 = (g.ny - 1) / 2;
    int bad_sym = 0, bad_mirror = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (tp.u.at(i, j) + tp.u.at(i, 2 * j0 - j) != 0.0) ++bad_sym;
            if (tp.d_plus.at(i, j) != tp.d_minus.at(i, 2 * j0 - j)) ++bad_mirror;
        }
    CHECK(bad_sym == 0);
    CHECK(bad_mirror == 0);
    CHECK(sym_diff(tp.d_plus, tp.d_minus).count() > 0);  // disjoint, both nonempty

    CHECK_FALSE(tp.interface.empty());
    for (const auto& e : tp.interface) CHECK(e.mid.y == 0.0);

    CHECK(verify_dbar_analytic(tp.s_plus, tp.d_plus, g.h, 5.0, "dbar_plus").overall());
    CHECK(verify_dbar_analytic(tp.s_minus, tp.d_minus, g.h, 5.0, "dbar_minus").overall());
    CHECK(verify_schwarz_boundary(tp).overall());
    CHECK(verify_schwarz_jump(tp).overall());
    CHECK_FALSE(verify_schwarz_jump(tp, {}, -1).overall());  // sign-flipped target

    CheckReport q = verify_quadrature_identity(tp);
    REQUIRE(q.find("moment[4]") != nullptr);
    CHECK(q.overall());
}

TEST_CASE("separated reflection pair has no interface") {
    GridSpec g = make_grid(-0.7, 0.7, -0.7, 0.7, 0.005);
    TwoPhaseResult tp = reflection_twophase(g, {0.0, 0.35}, pi * 0.04);
    CHECK(tp.interface.empty());
    CHECK(tp.gamma().empty());
    CHECK_THROWS_AS(verify_schwarz_jump(tp), EmptyInterface);
    CHECK(verify_schwarz_boundary(tp).overall());
    CHECK(verify_quadrature_identity(tp).overall());
}

TEST_CASE("reflection grid must be symmetric") {
    GridSpec skew = make_grid(-0.6, 0.6, -0.5, 0.6, 0.01);
    CHECK_THROWS_AS(reflection_twophase(skew, {0.0, 0.15}, 0.1), GridMismatch);
    GridSpec g = make_grid(-0.6, 0.6, -0.6, 0.6, 0.01);
    CHECK_THROWS_AS(reflection_twophase(g, {0.0, -0.2}, 0.1), GeometryOutOfBounds);
}

TEST_CASE("null pair from a disc doubles the area") {
    double h = 0.01;
    GridSpec g = make_grid(-1.2, 1.2, -1.2, 1.2, h);
    DomainMask box = build_domain_mask(g, WholePlaneBox{});
    RegionMask dplus = disc_region(g, {0.0, 0.0}, 0.7);
    TwoPhaseResult tp = null_quadrature_pair(box, dplus);

    CHECK(tp.alpha == 0.0);
    CHECK(tp.mu_plus.atoms.empty());

    // omega = disc radius 0.7*sqrt(2); D- the annulus between
    double r_exp = 0.7 * std::sqrt(2.0);
    double rmax = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (tp.d_minus.at(i, j)) rmax = std::max(rmax, std::hypot(g.x(i), g.y(j)));
    CHECK(rmax <= r_exp + 2.0 * h);
    CHECK(rmax >= r_exp - 2.0 * h);

    // area balance carries the free-boundary band deficit (~2*0.7h/r of the
    // annulus area at this h); never overshoots
    double lp = integrate(tp.d_plus), lm = integrate(tp.d_minus);
    CHECK(lm <= lp);
    CHECK(lm >= 0.97 * lp);

    CHECK(verify_quadrature_identity(tp).overall());
    CHECK(verify_dbar_analytic(tp.s_plus, tp.d_plus, g.h, 5.0, "dbar_plus").overall());
    CHECK(verify_dbar_analytic(tp.s_minus, tp.d_minus, g.h, 5.0, "dbar_minus").overall());
    CHECK(verify_schwarz_jump(tp).overall());
    CHECK_FALSE(tp.interface.empty());
}

TEST_CASE("null pair from a square balances all moments") {
    double h = 0.005;
    GridSpec g = make_grid(-0.8, 0.8, -0.8, 0.8, h);
    DomainMask box = build_domain_mask(g, WholePlaneBox{});
    RegionMask dplus = square_region(g, 0.35);
    TwoPhaseResult tp = null_quadrature_pair(box, dplus);

    CheckReport q = verify_quadrature_identity(tp);
    CHECK(q.overall());
    double lp = integrate(tp.d_plus), lm = integrate(tp.d_minus);
    CHECK(std::abs(lm - lp) <= 0.025 * lp);
}

TEST_CASE("null pair rejects bad inputs") {
    double h = 0.01;
    GridSpec g = make_grid(-1.0, 1.0, -1.0, 1.0, h);
    DomainMask box = build_domain_mask(g, WholePlaneBox{});
    RegionMask dplus = disc_region(g, {0.0, 0.0}, 0.7);
    CHECK_THROWS_AS(null_quadrature_pair(box, dplus), MarginTooSmall);

    GridSpec gh = make_grid(-1.0, 1.0, 0.0, 1.0, h);
    DomainMask half = build_domain_mask(gh, HalfPlane{0.0});
    RegionMask dsmall = disc_region(gh, {0.0, 0.5}, 0.1);
    CHECK_THROWS_AS(null_quadrature_pair(half, dsmall), WrongDomainKind);
}

TEST_CASE("reflection quadrature residual drops under refinement") {
    double prev = -1.0;
    for (double h : {0.01, 0.005}) {
        GridSpec g = make_grid(-0.6, 0.6, -0.6, 0.6, h);
        TwoPhaseResult tp = reflection_twophase(g, {0.0, 0.15}, pi * 0.04);
        CheckReport q = verify_quadrature_identity(tp);
        const Check* m1 = q.find("moment[1]");
        REQUIRE(m1 != nullptr);
        if (prev >= 0.0) CHECK(m1->value <= 0.7 * prev);
        prev = m1->value;
    }
}
