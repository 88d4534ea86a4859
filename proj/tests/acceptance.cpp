// Acceptance battery: eleven numbered scenario criteria, one [PASS]/[FAIL]
// line each with the measured values and the tolerances pinned inline.
// Exit status 0 iff every line passes.  Budget: grids <= 1024^2, each
// scenario sized to finish well inside 120 s.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "hballs/scenario.hpp"
#include "hballs/subcell.hpp"
#include "hballs/twophase.hpp"

using namespace hballs;

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double alpha04 = pi * 0.04;  // disc of radius 0.2

int g_failed = 0;

// one criterion line: sub-results accumulate into a single detail string
struct Crit {
    std::string text;
    bool ok = true;

    void sub(const char* name, double value, double tol) {
        bool p = value <= tol;
        ok = ok && p;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s%s=%.3g (tol %.3g)%s", text.empty() ? "" : "; ", name,
                      value, tol, p ? "" : " FAIL");
        text += buf;
    }
    void flag(const char* name, bool p) {
        ok = ok && p;
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s%s=%s%s", text.empty() ? "" : "; ", name,
                      p ? "yes" : "no", p ? "" : " FAIL");
        text += buf;
    }
};

void emit(const char* id, const char* title, const Crit& c, double secs) {
    if (!c.ok) ++g_failed;
    std::printf("[%s] %-3s %-28s (%5.1fs)  %s\n", c.ok ? "PASS" : "FAIL", id, title, secs,
                c.text.c_str());
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RegionMask disc_nodes(const GridSpec& g, Point c, double r) {
    RegionMask m(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (std::hypot(g.x(i) - c.x, g.y(j) - c.y) < r) m.set(i, j, true);
    return m;
}

// node-sampled Hausdorff distance between a region and the disc |z-c| < r
double hausdorff_to_disc(const RegionMask& om, Point c, double r) {
    const GridSpec& g = om.grid;
    RegionMask rim = inner_rim(om);
    std::vector<Point> rimpts;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (rim.at(i, j)) rimpts.push_back(g.node(i, j));
    if (rimpts.empty()) return 1e9;

    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double d = std::hypot(g.x(i) - c.x, g.y(j) - c.y);
            if (om.at(i, j)) {
                worst = std::max(worst, d - r);  // member sticking out of the disc
            } else if (d <= r) {  // disc node not covered: distance to the region
                double dmin = 1e9;
                Point q = g.node(i, j);
                for (const Point& m : rimpts) dmin = std::min(dmin, dist(q, m));
                worst = std::max(worst, dmin);
            }
        }
    return worst;
}

double union_bbox_diameter(const RegionMask& a, const RegionMask& b) {
    const GridSpec& g = a.grid;
    double xlo = 1e9, xhi = -1e9, ylo = 1e9, yhi = -1e9;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!a.at(i, j) && !b.at(i, j)) continue;
            xlo = std::min(xlo, g.x(i));
            xhi = std::max(xhi, g.x(i));
            ylo = std::min(ylo, g.y(j));
            yhi = std::max(yhi, g.y(j));
        }
    return std::hypot(xhi - xlo, yhi - ylo);
}

// scenario results shared between criteria (each solved once)
struct Lab {
    std::optional<BallResult> plane, halfhigh, contact;
    std::optional<TwoPhaseResult> refl;

    const BallResult& whole_plane_disc() {  // scenario 1
        if (!plane) {
            GridSpec g = make_grid(-1.0, 1.0, -1.0, 1.0, 0.005);
            plane = compute_ball(build_domain_mask(g, WholePlaneBox{}), {0.0, 0.0}, alpha04);
        }
        return *plane;
    }
    const BallResult& lifted_ball() {  // scenario 2
        if (!halfhigh) {
            GridSpec g = make_grid(-0.6, 0.6, 0.0, 1.0, 0.005);
            halfhigh = compute_ball(build_domain_mask(g, HalfPlane{0.0}), {0.0, 0.5}, alpha04);
        }
        return *halfhigh;
    }
    const BallResult& contact_ball() {  // scenario 3
        if (!contact) {
            GridSpec g = make_grid(-0.6, 0.6, 0.0, 0.8, 0.005);
            contact = compute_ball(build_domain_mask(g, HalfPlane{0.0}), {0.0, 0.1}, alpha04);
        }
        return *contact;
    }
    const TwoPhaseResult& reflection() {  // scenario 9
        if (!refl) {
            GridSpec g = make_grid(-0.6, 0.6, -0.6, 0.6, 0.0025);
            refl = reflection_twophase(g, {0.0, 0.15}, alpha04);
        }
        return *refl;
    }
};

void c1(Lab& lab) {
    auto t0 = std::chrono::steady_clock::now();
    Crit c;
    const BallResult& ball = lab.whole_plane_disc();
    double h = ball.mask.grid.h;
    c.sub("radius_dH", hausdorff_to_disc(ball.omega(), {0.0, 0.0}, 0.2), 2.0 * h);
    double lam = subcell::area(subcell::fold_level(ball.bal.u, ball.omega()));
    c.sub("mass_rel_err", std::abs(lam - alpha04) / alpha04, 0.01);
    c.sub("nu_rel", ball.bal.nu.total() / alpha04, 1e-6);
    emit("C1", "whole-plane disc", c, seconds_since(t0));
}

void c2(Lab& lab) {
    auto t0 = std::chrono::steady_clock::now();
    Crit c;
    const BallResult& a = lab.whole_plane_disc();
    const BallResult& b = lab.lifted_ball();
    const GridSpec& ga = a.mask.grid;
    const GridSpec& gb = b.mask.grid;
    // both grids share h = 0.005 and node phase; the lift (0, 0.5) is an
    // exact index shift (di, dj) = (-80, -100)
    RegionMask lifted(gb);
    for (int j = 0; j < ga.ny; ++j)
        for (int i = 0; i < ga.nx; ++i) {
            if (!a.omega().at(i, j)) continue;
            int i2 = i - 80, j2 = j - 100;
            if (gb.in_grid(i2, j2)) lifted.set(i2, j2, true);
        }
    c.sub("escaped_vs_lifted", count_diff(b.omega(), dilate(lifted, 1)), 0.0);
    c.sub("missing_vs_lifted", count_diff(lifted, dilate(b.omega(), 1)), 0.0);
    emit("C2", "lifted ball = shifted disc", c, seconds_since(t0));
}

void c3(Lab& lab) {
    auto t0 = std::chrono::steady_clock::now();
    Crit c;
    const BallResult& ball = lab.contact_ball();
    VerifyOptions vo;  // rel_tol 1%, neg_tol 1e-12, zero_tol 1e-6

    CheckReport field = verify_field_characterization(ball, vo);
    c.flag("field", field.overall());

    GreenEvaluator green = GreenEvaluator::analytic(HalfPlane{0.0});
    std::vector<Point> probes = place_probes(ball, 20, vo);
    CheckReport mv = verify_mean_value(ball, green, probes, vo);
    double worst = 0.0;
    for (const auto& ch : mv.checks) worst = std::max(worst, ch.value);
    c.sub("mean_value_max", worst, vo.rel_tol);

    CheckReport pos = check_positivity(ball, vo);
    c.sub("nu_negativity", pos.find("nu_nonnegative")->value, pos.find("nu_nonnegative")->tol);
    c.sub("mass_balance_rel", pos.find("mass_balance")->value / alpha04, vo.rel_tol);
    emit("C3", "contact ball battery", c, seconds_since(t0));
}

void c4(Lab& lab) {
    auto t0 = std::chrono::steady_clock::now();
    Crit c;
    const char* tags[3] = {"plane", "lifted", "contact"};
    const BallResult* balls[3] = {&lab.whole_plane_disc(), &lab.lifted_ball(),
                                  &lab.contact_ball()};
    for (int s = 0; s < 3; ++s) {
        const BallResult& ball = *balls[s];
        MeasureSpec mu;
        mu.atoms.push_back({ball.center, ball.alpha});
        BalayageResult sand = sandpile(ball.mask, mu);
        double du = 0.0, umax = 0.0;
        for (std::size_t k = 0; k < sand.u.v.size(); ++k) {
            du = std::max(du, std::abs(sand.u.v[k] - ball.bal.u.v[k]));
            umax = std::max(umax, ball.bal.u.v[k]);
        }
        double h = ball.mask.grid.h;
        char name[32];
        std::snprintf(name, sizeof name, "du_%s", tags[s]);
        c.sub(name, du, 5.0 * h * umax);
        RegionMask band = dilate(inner_rim(ball.omega()), 1);
        std::snprintf(name, sizeof name, "band_%s", tags[s]);
        c.flag(name, within_cells_of(sym_diff(sand.omega, ball.omega()), band, 0));
    }
    emit("C4", "sandpile oracle agreement", c, seconds_since(t0));
}

void c5() {
    auto t0 = std::chrono::steady_clock::now();
    Crit c;
    // nesting in the weight at fixed geometry
    GridSpec g = make_grid(-0.6, 0.6, 0.0, 0.8, 0.01);
    DomainMask K = build_domain_mask(g, HalfPlane{0.0});
    std::vector<BallResult> seq;
    for (double a : {0.05, 0.1, 0.2}) seq.push_back(compute_ball(K, {0.0, 0.1}, a));
    bool nested = check_monotonicity(seq[0], seq[1]).overall() &&
                  check_monotonicity(seq[1], seq[2]).overall();
    c.flag("nested", nested);

    // fixed probes, halving grids: worst mean-value residual must shrink
    std::vector<Point> probes = arc_probes({0.0, 0.1}, 0.5, 20, 0.15, 2.99);
    GreenEvaluator green = GreenEvaluator::analytic(HalfPlane{0.0});
    VerifyOptions loose;
    loose.rel_tol = 1.0;  // collect residuals; the ratios below are the gate
    double prev = -1.0;
    int step = 0;
    for (double h : {0.02, 0.01, 0.005}) {
        GridSpec gh = make_grid(-0.6, 0.6, 0.0, 0.8, h);
        BallResult ball = compute_ball(build_domain_mask(gh, HalfPlane{0.0}), {0.0, 0.1}, alpha04);
        CheckReport mv = verify_mean_value(ball, green, probes, loose);
        double worst = 0.0;
        for (const auto& ch : mv.checks) worst = std::max(worst, ch.value);
        if (prev >= 0.0) {
            char name[32];
            std::snprintf(name, sizeof name, "ratio_halving_%d", step++);
            c.sub(name, worst / prev, 0.7);
        }
        prev = worst;
    }
    emit("C5", "monotonicity + refinement", c, seconds_since(t0));
}

void c6() {
    auto t0 = std::chrono::steady_clock::now();
    Crit c;
    GridSpec g = make_grid(-0.1, 2.1, -0.1, 2.1, 0.005);
    Polygon ell{{{0.0, 0.0}, {2.0, 0.0}, {2.0, 1.0}, {1.0, 1.0}, {1.0, 2.0}, {0.0, 2.0}}};
    BallResult ball = compute_ball(build_domain_mask(g, ell), {0.5, 0.5}, 0.5);
    CheckReport rep = check_starshaped_ball(ball);
    c.sub("ray_violations", rep.find("omega_starshaped")->value, 0.0);
    c.sub("closure_gap_nodes", rep.find("saturation")->value, 0.0);
    emit("C6", "starshaped corner ball", c, seconds_since(t0));
}

void c7(Lab& lab) {
    auto t0 = std::chrono::steady_clock::now();
    Crit c;
    CheckReport rep = check_halfspace_omega_equality(lab.contact_ball());
    c.sub("omega_equality_gap", rep.find("omega_equality")->value, 0.0);
    emit("C7", "half-space saturation", c, seconds_since(t0));
}

void c8(Lab& lab) {
    auto t0 = std::chrono::steady_clock::now();
    Crit c;
    const BallResult& ball = lab.whole_plane_disc();
    const GridSpec& g = ball.mask.grid;
    double h = g.h, R = 0.2;
    double er = std::max(3.0 * h, 1.5 * std::cbrt(h / 5.0));
    Point atoms[1] = {{0.0, 0.0}};
    SchwarzField s = schwarz_field(ball.bal.u, ball.omega(), 1.0, +1, atoms, er);

    // one node inside the free boundary the field must already match the
    // circle kernel conj(a) + r^2/(z - a) of the disc (here a = 0)
    RegionMask rim = inner_rim(ball.omega());
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!rim.at(i, j) || !s.defined.at(i, j)) continue;
            Complex z = to_complex(g.node(i, j));
            worst = std::max(worst, std::abs(s.S.at(i, j) - R * R / z));
        }
    c.sub("boundary_match", worst, 5.0 * h);
    CheckReport db = verify_dbar_analytic(s, ball.omega(), h, 5.0);
    double smax = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (ball.omega().at(i, j) && s.defined.at(i, j))
                smax = std::max(smax, std::abs(s.S.at(i, j)));
    c.sub("dbar_max", db.checks[0].value, 5.0 * h * smax);
    emit("C8", "one-phase circle kernel", c, seconds_since(t0));
}

void c9(Lab& lab) {
    auto t0 = std::chrono::steady_clock::now();
    Crit c;
    const TwoPhaseResult& tp = lab.reflection();
    const GridSpec& g = tp.grid;
    int j0 = (g.ny - 1) / 2;
    int bad = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (tp.u.at(i, j) + tp.u.at(i, 2 * j0 - j) != 0.0) ++bad;
    c.sub("odd_symmetry_defects", bad, 0.0);
    c.flag("interface_nonempty", !tp.interface.empty());

    CheckReport jump = verify_schwarz_jump(tp);
    c.sub("jump_max", jump.checks[0].value, jump.checks[0].tol);

    CheckReport q = verify_quadrature_identity(tp);
    c.sub("k0_residual", q.find("moment[0]")->value, 1e-3 * alpha04);
    // k = 1 identity pinned directly: I+(z) - I-(z) = alpha (z0 - conj z0),
    // i.e. the residual the library reports, against 2% of the alpha |z0| scale
    c.sub("k1_err", q.find("moment[1]")->value, 0.02 * alpha04 * 0.15);
    c.flag("k_le_4", q.overall());
    emit("C9", "two-phase reflection", c, seconds_since(t0));
}

void c10() {
    auto t0 = std::chrono::steady_clock::now();
    Crit c;
    SolverOptions so;
    so.relaxation = 1.98;  // wide active set; near-optimal SOR keeps it in budget

    GridSpec g = make_grid(-1.6, 1.6, -1.6, 1.6, 0.005);
    DomainMask box = build_domain_mask(g, WholePlaneBox{});
    TwoPhaseResult tp = null_quadrature_pair(box, disc_nodes(g, {0.0, 0.0}, 1.0), so);
    c.sub("omega_radius_dH", hausdorff_to_disc(tp.bal.omega, {0.0, 0.0}, std::sqrt(2.0)),
          2.0 * g.h);
    double lp = integrate(tp.d_plus);
    CheckReport qd = verify_quadrature_identity(tp);
    c.sub("area_rel_err", qd.find("moment[0]")->value / lp, 0.01);

    GridSpec gs = make_grid(-1.2, 1.2, -1.2, 1.2, 0.005);
    DomainMask boxs = build_domain_mask(gs, WholePlaneBox{});
    RegionMask square(gs);
    for (int j = 0; j < gs.ny; ++j)
        for (int i = 0; i < gs.nx; ++i)
            if (std::abs(gs.x(i)) < 0.5 && std::abs(gs.y(j)) < 0.5) square.set(i, j, true);
    TwoPhaseResult ts = null_quadrature_pair(boxs, square, so);
    double lps = integrate(ts.d_plus);
    double diam = union_bbox_diameter(ts.d_plus, ts.d_minus);
    CheckReport qs = verify_quadrature_identity(ts);
    double worst_rel = 0.0;
    for (int k = 1; k <= 4; ++k) {
        double err = qs.find("moment[" + std::to_string(k) + "]")->value;
        worst_rel = std::max(worst_rel, err / (lps * std::pow(diam, k)));
    }
    c.sub("square_moment_rel", worst_rel, 0.02);
    emit("C10", "null quadrature pairs", c, seconds_since(t0));
}

void c11(Lab& lab) {
    auto t0 = std::chrono::steady_clock::now();
    Crit c;
    // (a) a deleted 3x3 block must break the mean-value identity.  Coarse
    // grid so the block carries weight; probes sit near the block to see it.
    // Measured at this resolution: baseline residual 0.061, post-deletion
    // residual 0.239 at the near probe, so 0.12 separates both by ~2x.
    GridSpec g = make_grid(-0.6, 0.6, 0.0, 0.8, 0.03);
    BallResult ball = compute_ball(build_domain_mask(g, HalfPlane{0.0}), {0.0, 0.1}, alpha04);
    GreenEvaluator green = GreenEvaluator::analytic(HalfPlane{0.0});
    std::vector<Point> probes = {{0.3, 0.28}, {-0.25, 0.4}};
    VerifyOptions vo;
    vo.rel_tol = 0.12;
    c.flag("baseline_passes", verify_mean_value(ball, green, probes, vo).overall());

    BallResult broken = ball;
    auto [bi, bj] = g.nearest({0.12, 0.14});
    bool was_inside = true;
    for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
            was_inside = was_inside && broken.bal.omega.at(bi + di, bj + dj);
            broken.bal.omega.set(bi + di, bj + dj, false);
        }
    c.flag("block_was_inside", was_inside);
    c.flag("deletion_detected", !verify_mean_value(broken, green, probes, vo).overall());

    // (b) flipping the jump target sign must fail on the reflection pair
    c.flag("flipped_jump_fails", !verify_schwarz_jump(lab.reflection(), {}, -1).overall());

    // (c) an impossible tolerance must drive the scenario runner to exit 1
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "hballs_acceptance_c11";
    fs::create_directories(dir);
    nlohmann::json cfg{
        {"kind", "ball"},
        {"grid", {{"x_min", -0.6}, {"x_max", 0.6}, {"y_min", 0.0}, {"y_max", 0.8}, {"h", 0.02}}},
        {"domain", {{"type", "half_plane"}}},
        {"x0", {0.0, 0.1}},
        {"alpha", alpha04},
        {"checks", {{"rel_tol", 1e-9}}},
        {"out", (dir / "out").string()}};
    std::ofstream(dir / "cfg.json") << cfg.dump(2);
    RunRequest req;
    req.config_path = (dir / "cfg.json").string();
    req.write_artifacts = false;
    c.flag("strict_run_exits_1", run_scenario(req) == ExitCheckFailed);
    std::error_code ec;
    fs::remove_all(dir, ec);
    emit("C11", "negative controls", c, seconds_since(t0));
}

}  // namespace

int main() {
    Lab lab;
    c1(lab);
    c2(lab);
    c3(lab);
    c4(lab);
    c5();
    c6();
    c7(lab);
    c8(lab);
    c9(lab);
    c10();
    c11(lab);
    std::printf("acceptance: %d of 11 criteria passed\n", 11 - g_failed);
    return g_failed == 0 ? 0 : 1;
}
