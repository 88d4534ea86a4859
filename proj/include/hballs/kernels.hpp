#pragma once

#include <cstdint>
#include <span>

namespace hballs {

enum class ExecMode { Serial, Parallel };

// Low-level grid kernels.  Each kernel has a plain serial reference
// implementation and an OpenMP variant; results are bitwise identical
// (red-black half-sweeps only read the opposite color, the sandpile step is a
// two-buffer gather, and the residual reduction is an exact max), so the
// serial path doubles as the correctness reference for the parallel one.
namespace kernels {

struct Window {
    int i0 = 0, j0 = 0, i1 = 0, j1 = 0;  // half-open [i0,i1) x [j0,j1)
};

// One projected SOR half-sweep over nodes of one red-black color
// ((i+j) % 2 == color) solving  4*u - sum(neighbors) = rhs_h2  at nodes with
// active != 0, with optional projection onto u >= 0.  Neighbor sums are
// grouped as (E+W) + (N+S) so mirror-symmetric data stays bitwise symmetric.
void psor_halfsweep_serial(std::span<double> u, std::span<const double> rhs_h2,
                           std::span<const std::uint8_t> active, int nx, int ny, int color,
                           double relax, bool project);
void psor_halfsweep_parallel(std::span<double> u, std::span<const double> rhs_h2,
                             std::span<const std::uint8_t> active, int nx, int ny, int color,
                             double relax, bool project);
void psor_halfsweep(std::span<double> u, std::span<const double> rhs_h2,
                    std::span<const std::uint8_t> active, int nx, int ny, int color, double relax,
                    bool project, ExecMode mode);

// Residual of the complementarity system in density units
// (g = (4u - sum(nb) - rhs_h2)/h^2; at projected nodes with u == 0 only a
// negative g counts).  Returns max over active nodes.
double lcp_residual_serial(std::span<const double> u, std::span<const double> rhs_h2,
                           std::span<const std::uint8_t> active, int nx, int ny, double h2,
                           bool project);
double lcp_residual_parallel(std::span<const double> u, std::span<const double> rhs_h2,
                             std::span<const std::uint8_t> active, int nx, int ny, double h2,
                             bool project);
double lcp_residual(std::span<const double> u, std::span<const double> rhs_h2,
                    std::span<const std::uint8_t> active, int nx, int ny, double h2, bool project,
                    ExecMode mode);

// One synchronous toppling pass of the divisible sandpile over `win`:
// every active (interior) node with mass > cap sends its excess in equal
// quarters to its 4-neighbors; non-active nodes keep what arrives.  Gather
// form: mass_next is written from mass only, so the pass is order-independent.
// odometer accumulates emitted mass.  Returns the max excess seen in mass.
double sandpile_step_serial(std::span<const double> mass, std::span<double> mass_next,
                            std::span<double> odometer, std::span<const std::uint8_t> active,
                            int nx, int ny, Window win, double cap);
double sandpile_step_parallel(std::span<const double> mass, std::span<double> mass_next,
                              std::span<double> odometer, std::span<const std::uint8_t> active,
                              int nx, int ny, Window win, double cap);
double sandpile_step(std::span<const double> mass, std::span<double> mass_next,
                     std::span<double> odometer, std::span<const std::uint8_t> active, int nx,
                     int ny, Window win, double cap, ExecMode mode);

}  // namespace kernels
}  // namespace hballs
