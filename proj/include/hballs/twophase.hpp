#pragma once

#include <span>
#include <vector>

#include "hballs/balls.hpp"

namespace hballs {

// Interface edge between the two phases.  The jump checks extrapolate each
// phase linearly to `mid` along the lattice line through the phase nodes:
// plus side samples (pi,pj) and (pi+di,pj+dj), minus side (mi,mj) and
// (mi-di,mj-dj); t0 is the distance from the first sample to mid.
struct InterfaceEdge {
    Point mid;
    int pi = 0, pj = 0;
    int mi = 0, mj = 0;
    int di = 0, dj = 0;
    double t0 = 0.0;
};

struct SchwarzField {
    ComplexField S;
    RegionMask defined;  // member nodes outside the atom exclusion discs
};

enum class TwoPhaseKind { Reflection, NullPair };

struct TwoPhaseResult {
    TwoPhaseKind kind = TwoPhaseKind::Reflection;
    GridSpec grid;
    RegionMask d_plus, d_minus;
    std::vector<InterfaceEdge> interface;
    ScalarField u;  // two-phase work field (odd-extended / negated swept field)
    double beta_plus = 1.0, beta_minus = 1.0;
    Point z0;            // reflection: atom in the upper phase
    double alpha = 0.0;  // reflection: atom weight (0 for null pairs)
    MeasureSpec mu_plus, mu_minus;  // per-phase sources (empty for null pairs)
    SchwarzField s_plus, s_minus;
    BalayageResult bal;  // reflection: upper half-plane solve; null pair: whole-plane solve

    std::vector<Point> gamma() const;  // interface edge midpoints
};

// Two-phase pair by reflection: sweep alpha*delta_{z0} inside the upper half
// plane { y > 0 }, mirror the result across the axis with odd u.  The grid
// must be symmetric about y = 0 (a node row on the axis).  Interface edges sit
// on the axis where both mirrored phases reach it (contact).
TwoPhaseResult reflection_twophase(const GridSpec& grid, Point z0, double alpha,
                                   const SolverOptions& opts = {});

// Null pair: sweep density 2 on d_plus over the whole plane; the complement
// phase is omega \ d_plus.  The pair satisfies the quadrature identity with
// zero right-hand side.  Throws MarginTooSmall / WrongDomainKind.
TwoPhaseResult null_quadrature_pair(const DomainMask& box, const RegionMask& d_plus,
                                    const SolverOptions& opts = {});

// S = sign*beta*conj(z) - 4*dz(u) on the region (centered differences,
// one-sided at the grid rim); nodes within exclusion_radius of an exclusion
// center are left undefined.
SchwarzField schwarz_field(const ScalarField& u, const RegionMask& region, double beta, int sign,
                           std::span<const Point> exclusions, double exclusion_radius);

struct SchwarzOptions {
    double c = 5.0;              // tolerance constant: C * h * scale
    int kmax = 4;                // quadrature moments 0..kmax
    double quadrature_rel = 0.02;
    // Radius around atoms left out of the Schwarz field.  -1 selects
    // max(3h, 1.5*cbrt(h/c)): below cbrt(h/c) the kernel's own third
    // derivative (~1/r^4) exceeds the c*h*max|S| budget (~c*h/r), so nothing
    // is testable closer in; the 1.5 gives headroom over that break-even.
    double exclusion_radius = -1.0;
};

// max |dbar_h S| over nodes at least two cells inside the region and outside
// the exclusions, <= C * h * max(1, max|S|); the floor keeps the bound
// attainable for fields whose true Schwarz function vanishes.
CheckReport verify_dbar_analytic(const SchwarzField& s, const RegionMask& region, double h,
                                 double c = 5.0, const std::string& label = "dbar");

// S(+/-) = +/- beta * conj(z) sampled on each phase's outer rim (one node
// inside the boundary, away from the interface), within
// C * h * max(1, max|S|).
CheckReport verify_schwarz_boundary(const TwoPhaseResult& tp, const SchwarzOptions& so = {});

// (S+ - S-) extrapolated to the interface midpoints equals
// (beta+ + beta-) * conj(z) within C * h * max|S|.  target_sign = -1 flips the
// target (diagnostic / negative control).  Throws EmptyInterface.
CheckReport verify_schwarz_jump(const TwoPhaseResult& tp, const SchwarzOptions& so = {},
                                int target_sign = +1);

// Moment identities for z^k, k = 0..kmax:
//   reflection: beta+ I+(z^k) - beta- I-(z^k) = alpha ((z0)^k - (conj z0)^k)
//   null pair:  I+(z^k) - I-(z^k) = 0
CheckReport verify_quadrature_identity(const TwoPhaseResult& tp, const SchwarzOptions& so = {});

}  // namespace hballs
