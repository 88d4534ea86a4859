#pragma once

#include <optional>

#include "hballs/balayage.hpp"
#include "hballs/grid.hpp"

namespace hballs {

// Logarithmic potential kernel, normalized so that -lap U(mu) = mu.
double log_kernel(Point x, Point y);

// Green function of { y > offset } by the image formula.
double green_halfplane(Point a, Point b, double offset = 0.0);

// Green function of the disc |z - center| < R.
double green_disc(Point a, Point b, Point center, double R);

// Green function of the masked domain with a unit source, by SOR on the
// 5-point Laplacian with zero values at non-interior nodes.  The source is
// splatted bilinearly and must be at least 2h inside K.
// Throws SourceTooCloseToBoundary, NonConvergence.
ScalarField green_numeric(const DomainMask& mask, Point source, const SolverOptions& opts = {});

// Uniform access to G_K for the verification sums: analytic image formulas
// for half-planes and discs, or per-source numeric solves otherwise.
class GreenEvaluator {
  public:
    // throws WrongDomainKind unless domain is HalfPlane or Disc
    static GreenEvaluator analytic(const DomainSpec& domain);
    static GreenEvaluator numeric(const DomainMask& mask, const SolverOptions& opts = {});

    bool is_analytic() const { return !mask_.has_value(); }

    // pointwise value; analytic mode only (throws WrongDomainKind otherwise)
    double value(Point a, Point b) const;

    // G_K(source, y) sampled at node y.  For quadrature sums near an interior
    // source the analytic kernels clamp |y - source| below h/4.
    // numeric mode: one SOR solve per source, zero at non-interior nodes.
    ScalarField source_field(Point source, const GridSpec& grid) const;

  private:
    GreenEvaluator() = default;
    std::optional<HalfPlane> halfplane_;
    std::optional<Disc> disc_;
    std::optional<DomainMask> mask_;
    SolverOptions opts_;
};

}  // namespace hballs
