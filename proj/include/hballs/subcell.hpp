#pragma once
// Sub-cell quadrature over {phi > 0} for a node field phi that behaves like a
// signed distance near its zero level.  Node counting measures a region with
// an O(h) boundary bias (about 0.4*h per unit of boundary length); cutting the
// boundary cells along the interpolated zero level removes that bias and
// leaves an O(h^2) quadrature.  Each grid cell is split into four triangles
// about its center, and the positive part of each triangle (phi linear there)
// is accumulated exactly, so there is no marching-squares ambiguity.

#include <complex>

#include "hballs/grid.hpp"

namespace hballs::subcell {

// Area of {phi > 0}.
double area(const ScalarField& phi);

// Integral of z^k over {phi > 0}; each piece contributes area * centroid^k.
Complex moment(const ScalarField& phi, int k);

// Integral of f over {phi > 0}; f is interpolated bilinearly from the cell
// corners at each piece centroid.
double integral(const ScalarField& phi, const ScalarField& f);

// Distance-like level field for the free boundary of a swept region.  Member
// nodes carry sqrt(2|u|): the work field leaves its zero set quadratically,
// u ~ d^2/2 at unit density contrast, so this is the distance to the free
// boundary.  Non-member nodes take a linear extrapolation of that estimate
// along each grid line (clamped to <= 0: the boundary never lies past a
// non-member node), which also pins contact segments onto fixed boundaries,
// where u vanishes linearly and the extrapolation overshoots.
ScalarField fold_level(const ScalarField& u, const RegionMask& region);

}  // namespace hballs::subcell
