#pragma once

#include <optional>
#include <vector>

#include "hballs/grid.hpp"
#include "hballs/kernels.hpp"

namespace hballs {

// Source measure: point atoms plus an optional uniform density on a region.
struct MeasureSpec {
    struct Atom {
        Point location;
        double weight = 0.0;  // > 0
    };
    std::vector<Atom> atoms;
    struct Density {
        RegionMask region;
        double value = 0.0;  // density >= 0 relative to the background measure
    };
    std::optional<Density> density;
};

struct SolverOptions {
    // SOR relaxation factor; 0 selects the 1.9 default.
    double relaxation = 0.0;
    double tol_factor = 1e-10;  // converged when residual <= tol_factor * total_mass / h^2
    long max_sweeps = 200000;
    int residual_interval = 8;  // residual evaluated every this many full sweeps
    double theta_scale = -1.0;  // threshold factor for { u > theta }; -1 = sqrt(eps)
    ExecMode mode = ExecMode::Parallel;
};

// Weight per boundary node swept out of K.
struct BoundaryMeasure {
    struct Entry {
        int i = 0, j = 0;
        double weight = 0.0;
    };
    GridSpec grid;
    std::vector<Entry> entries;  // boundary nodes with nonzero weight, row-major order

    double total() const;
    double min_weight() const;  // min over entries and 0
};

struct BalayageResult {
    ScalarField u;         // nonnegative work field, zero outside INTERIOR(K)
    ScalarField mu_h;      // splatted source density (mass / h^2 per node)
    ScalarField B;         // swept density mu_h + lap_h(u) on interior nodes
    RegionMask omega;      // { u > theta } ∩ INTERIOR(K)
    RegionMask omega_big;  // interior of the closure of omega, within K
    BoundaryMeasure nu;    // mass swept onto the domain boundary
    double total_mass = 0.0;
    long iterations = 0;
    double residual = 0.0;  // final residual in density units
};

// Bilinear splat of the measure onto grid nodes, as a density (mass/h^2).
// Throws SupportTouchesBoundary if an atom is within 2h of a non-interior
// node or the density region leaves INTERIOR(K).
ScalarField splat_measure(const DomainMask& mask, const MeasureSpec& mu);

// Discrete obstacle problem for the swept measure: find u >= 0 on INTERIOR(K),
// u = 0 elsewhere, with -lap_h(u) >= mu_h - 1 and complementarity, by
// projected red-black SOR.  Throws NonConvergence, BoxTooSmall (artificial
// box sides must keep a 5-node strip with u = 0), SupportTouchesBoundary.
BalayageResult solve_obstacle(const DomainMask& mask, const MeasureSpec& mu,
                              const SolverOptions& opts = {});

struct SandpileOptions {
    double tol = 1e-10;  // stop when max excess <= tol * h^2
    long max_iterations = 4000000;
    ExecMode mode = ExecMode::Parallel;
};

// Divisible sandpile with cell capacity h^2: independent route to the same
// swept measure.  Mass arriving at BOUNDARY nodes freezes (that is nu); the
// reconstructed work field is odometer/4, which satisfies the same discrete
// identity B = mu_h + lap_h(u) as the obstacle solution.
BalayageResult sandpile(const DomainMask& mask, const MeasureSpec& mu,
                        const SandpileOptions& opts = {});

// nu_b = sum of u over the interior 4-neighbors of each boundary node b
// (h^2 * lap_h of the zero-extended u).
BoundaryMeasure extract_sweep_measure(const ScalarField& u, const DomainMask& mask);

// max over interior nodes of min(u_i, h^2 * ((1 - mu_h) - lap_h u)_i); both
// factors are nonnegative at an exact solution and at least one vanishes.
double complementarity_residual(const ScalarField& u, const ScalarField& mu_h,
                                const DomainMask& mask);

double measure_total_mass(const MeasureSpec& mu, const GridSpec& grid);

}  // namespace hballs
