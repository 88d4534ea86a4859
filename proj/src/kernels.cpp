#include "hballs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace hballs::kernels {

namespace {

// one row of a red-black half-sweep; identical arithmetic for both exec modes
inline void psor_row(double* u, const double* rhs_h2, const std::uint8_t* active, int nx, int j,
                     int i_start, double relax, bool project) {
    const double* row_s = u + static_cast<std::ptrdiff_t>(j - 1) * nx;
    double* row = u + static_cast<std::ptrdiff_t>(j) * nx;
    const double* row_n = u + static_cast<std::ptrdiff_t>(j + 1) * nx;
    const double* rhs_row = rhs_h2 + static_cast<std::ptrdiff_t>(j) * nx;
    const std::uint8_t* act_row = active + static_cast<std::ptrdiff_t>(j) * nx;
    for (int i = i_start; i < nx - 1; i += 2) {
        if (!act_row[i]) continue;
        // group opposite neighbours so mirrored configurations round identically
        double nb = (row[i - 1] + row[i + 1]) + (row_s[i] + row_n[i]);
        double gs = 0.25 * (nb + rhs_row[i]);
        double val = (1.0 - relax) * row[i] + relax * gs;
        row[i] = project ? std::max(0.0, val) : val;
    }
}

inline double residual_row(const double* u, const double* rhs_h2, const std::uint8_t* active,
                           int nx, int j, double inv_h2, bool project) {
    const double* row_s = u + static_cast<std::ptrdiff_t>(j - 1) * nx;
    const double* row = u + static_cast<std::ptrdiff_t>(j) * nx;
    const double* row_n = u + static_cast<std::ptrdiff_t>(j + 1) * nx;
    const double* rhs_row = rhs_h2 + static_cast<std::ptrdiff_t>(j) * nx;
    const std::uint8_t* act_row = active + static_cast<std::ptrdiff_t>(j) * nx;
    double worst = 0.0;
    for (int i = 1; i < nx - 1; ++i) {
        if (!act_row[i]) continue;
        double nb = (row[i - 1] + row[i + 1]) + (row_s[i] + row_n[i]);
        double g = (4.0 * row[i] - nb - rhs_row[i]) * inv_h2;
        double r;
        if (project)
            r = row[i] > 0.0 ? std::abs(g) : std::max(0.0, -g);
        else
            r = std::abs(g);
        worst = std::max(worst, r);
    }
    return worst;
}

// gather form: each node keeps what it did not emit and receives a quarter of
// each active neighbour's excess.  Horizontal and vertical contributions are
// summed separately so mirrored configurations round identically.
inline double sandpile_row(const double* mass, double* mass_next, double* odometer,
                           const std::uint8_t* active, int nx, int ny, int j, int i0, int i1,
                           double cap) {
    const double* row = mass + static_cast<std::ptrdiff_t>(j) * nx;
    double* out = mass_next + static_cast<std::ptrdiff_t>(j) * nx;
    double* odo = odometer + static_cast<std::ptrdiff_t>(j) * nx;
    const std::uint8_t* act_row = active + static_cast<std::ptrdiff_t>(j) * nx;
    auto excess = [cap](double m) { return m > cap ? m - cap : 0.0; };
    double worst = 0.0;
    for (int i = i0; i < i1; ++i) {
        double e = act_row[i] ? excess(row[i]) : 0.0;
        double recv_h = 0.0;
        if (i > 0 && act_row[i - 1]) recv_h += excess(row[i - 1]);
        if (i + 1 < nx && act_row[i + 1]) recv_h += excess(row[i + 1]);
        double recv_v = 0.0;
        if (j > 0 && act_row[i - nx]) recv_v += excess(row[i - nx]);
        if (j + 1 < ny && act_row[i + nx]) recv_v += excess(row[i + nx]);
        out[i] = (row[i] - e) + 0.25 * (recv_h + recv_v);
        if (act_row[i]) {
            odo[i] += e;
            worst = std::max(worst, e);
        }
    }
    return worst;
}

}  // namespace

void psor_halfsweep_serial(std::span<double> u, std::span<const double> rhs_h2,
                           std::span<const std::uint8_t> active, int nx, int ny, int color,
                           double relax, bool project) {
    for (int j = 1; j < ny - 1; ++j) {
        int i_start = 1 + ((j + color) & 1);
        if (i_start >= nx - 1) continue;
        psor_row(u.data(), rhs_h2.data(), active.data(), nx, j, i_start, relax, project);
    }
}

void psor_halfsweep_parallel(std::span<double> u, std::span<const double> rhs_h2,
                             std::span<const std::uint8_t> active, int nx, int ny, int color,
                             double relax, bool project) {
    double* up = u.data();
    const double* rp = rhs_h2.data();
    const std::uint8_t* ap = active.data();
#ifdef _OPENMP
    // same-colour updates read only opposite-colour values, so row order is
    // irrelevant and the result matches the serial sweep bit for bit
#pragma omp parallel for schedule(static)
#endif
    for (int j = 1; j < ny - 1; ++j) {
        int i_start = 1 + ((j + color) & 1);
        if (i_start >= nx - 1) continue;
        psor_row(up, rp, ap, nx, j, i_start, relax, project);
    }
}

void psor_halfsweep(std::span<double> u, std::span<const double> rhs_h2,
                    std::span<const std::uint8_t> active, int nx, int ny, int color, double relax,
                    bool project, ExecMode mode) {
    if (mode == ExecMode::Parallel)
        psor_halfsweep_parallel(u, rhs_h2, active, nx, ny, color, relax, project);
    else
        psor_halfsweep_serial(u, rhs_h2, active, nx, ny, color, relax, project);
}

double lcp_residual_serial(std::span<const double> u, std::span<const double> rhs_h2,
                           std::span<const std::uint8_t> active, int nx, int ny, double h2,
                           bool project) {
    double worst = 0.0;
    double inv_h2 = 1.0 / h2;
    for (int j = 1; j < ny - 1; ++j)
        worst = std::max(worst,
                         residual_row(u.data(), rhs_h2.data(), active.data(), nx, j, inv_h2, project));
    return worst;
}

double lcp_residual_parallel(std::span<const double> u, std::span<const double> rhs_h2,
                             std::span<const std::uint8_t> active, int nx, int ny, double h2,
                             bool project) {
    double worst = 0.0;
    double inv_h2 = 1.0 / h2;
    const double* up = u.data();
    const double* rp = rhs_h2.data();
    const std::uint8_t* ap = active.data();
#ifdef _OPENMP
    // max-reduction of exact per-row maxima; max is associative and
    // commutative, so the result is independent of thread count
#pragma omp parallel for schedule(static) reduction(max : worst)
#endif
    for (int j = 1; j < ny - 1; ++j)
        worst = std::max(worst, residual_row(up, rp, ap, nx, j, inv_h2, project));
    return worst;
}

double lcp_residual(std::span<const double> u, std::span<const double> rhs_h2,
                    std::span<const std::uint8_t> active, int nx, int ny, double h2, bool project,
                    ExecMode mode) {
    return mode == ExecMode::Parallel
               ? lcp_residual_parallel(u, rhs_h2, active, nx, ny, h2, project)
               : lcp_residual_serial(u, rhs_h2, active, nx, ny, h2, project);
}

double sandpile_step_serial(std::span<const double> mass, std::span<double> mass_next,
                            std::span<double> odometer, std::span<const std::uint8_t> active,
                            int nx, int ny, Window win, double cap) {
    double worst = 0.0;
    for (int j = win.j0; j < win.j1; ++j)
        worst = std::max(worst, sandpile_row(mass.data(), mass_next.data(), odometer.data(),
                                             active.data(), nx, ny, j, win.i0, win.i1, cap));
    return worst;
}

double sandpile_step_parallel(std::span<const double> mass, std::span<double> mass_next,
                              std::span<double> odometer, std::span<const std::uint8_t> active,
                              int nx, int ny, Window win, double cap) {
    double worst = 0.0;
    const double* mp = mass.data();
    double* np = mass_next.data();
    double* op = odometer.data();
    const std::uint8_t* ap = active.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : worst)
#endif
    for (int j = win.j0; j < win.j1; ++j)
        worst = std::max(worst, sandpile_row(mp, np, op, ap, nx, ny, j, win.i0, win.i1, cap));
    return worst;
}

double sandpile_step(std::span<const double> mass, std::span<double> mass_next,
                     std::span<double> odometer, std::span<const std::uint8_t> active, int nx,
                     int ny, Window win, double cap, ExecMode mode) {
    return mode == ExecMode::Parallel
               ? sandpile_step_parallel(mass, mass_next, odometer, active, nx, ny, win, cap)
               : sandpile_step_serial(mass, mass_next, odometer, active, nx, ny, win, cap);
}

}  // namespace hballs::kernels
