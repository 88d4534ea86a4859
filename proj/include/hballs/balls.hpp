#pragma once

#include <span>

#include "hballs/balayage.hpp"
#include "hballs/greens.hpp"
#include "hballs/report.hpp"

namespace hballs {

// Ball of size alpha swept out of the point mass alpha*delta_{x0} within K.
struct BallResult {
    DomainMask mask;
    Point center;
    double alpha = 0.0;
    BalayageResult bal;

    const RegionMask& omega() const { return bal.omega; }
    const RegionMask& omega_big() const { return bal.omega_big; }
};

BallResult compute_ball(const DomainMask& mask, Point x0, double alpha,
                        const SolverOptions& opts = {});

struct VerifyOptions {
    double rel_tol = 0.01;        // mean-value / mass-balance relative tolerance
    double neg_tol = 1e-12;       // times max(u): allowed negativity
    double zero_tol = 1e-6;       // times max(u): allowed |u| two cells outside omega
    double compl_tol = 1e-8;      // times alpha: complementarity residual
    double probe_margin = 3.0;    // times h: probe distance from omega and dK
};

// u >= 0 on K, u = 0 at distance >= 2h outside omega, complementarity.
CheckReport verify_field_characterization(const BallResult& ball, const VerifyOptions& vo = {});

// Evenly spread points on two arcs around the ball, outside omega and K's
// boundary by the configured margin.  Deterministic.
std::vector<Point> place_probes(const BallResult& ball, int count = 16,
                                const VerifyOptions& vo = {});
// fixed arc of probes around the center (used by scenarios with pinned probes)
std::vector<Point> arc_probes(Point center, double radius, int count, double angle0,
                              double angle1);

// Mean-value identity alpha*G_K(x0,x) = h^2 * sum_{y in omega} G_K(y,x) at
// probes x in K \ closure(omega); relative residual per probe <= rel_tol.
// Throws ProbeInsideBall / ProbeTooCloseToBoundary.
CheckReport verify_mean_value(const BallResult& ball, const GreenEvaluator& green,
                              std::span<const Point> probes, const VerifyOptions& vo = {});

// One-sided version valid at any probe in K (also inside omega):
// margin(x) = alpha*G_K(x0,x) - h^2 * sum_{y in omega} G_K(y,x) >= -tol;
// the margin equals the work field's Green representation, so it is strictly
// positive inside omega and ~0 beyond its closure.
CheckReport verify_subharmonic_inequality(const BallResult& ball, const GreenEvaluator& green,
                                          std::span<const Point> probes,
                                          const VerifyOptions& vo = {});

// nu >= 0 nodewise, lambda(omega) <= alpha(1+tol), mass balance
// lambda(omega) + nu_total = alpha within tol.
CheckReport check_positivity(const BallResult& ball, const VerifyOptions& vo = {});

// omega(ball1) ⊆ dilate(omega(ball2), 1) for same grid and either same K with
// alpha1 <= alpha2 or same (x0, alpha) with K1 ⊆ K2.  Throws GridMismatch,
// IncomparableInputs.
CheckReport check_monotonicity(const BallResult& smaller, const BallResult& larger);

// K starshaped wrt x0 (else DomainNotStarshaped): omega starshaped with no
// violations beyond a one-cell collar, and omega_big = omega up to one cell.
CheckReport check_starshaped_ball(const BallResult& ball);

// Half-plane domains only (else WrongDomainKind): omega_big = omega up to a
// one-cell layer along the free boundary.
CheckReport check_halfspace_omega_equality(const BallResult& ball);

// shared helper: nodes of big \ small farther than one cell from small
int omega_equality_gap(const RegionMask& small, const RegionMask& big);

}  // namespace hballs
