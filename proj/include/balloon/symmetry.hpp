#pragma once

#include <cstddef>
#include <vector>

#include "balloon/profile_ode.hpp"

namespace balloon {

// Quantities recoverable from k along a symmetry line: the transverse principal
// curvature k1 = -k''/k^2 and the transverse metric factor u (proportional to |k|;
// the constant is unobservable, so u is normalized to 1 at the subinterval midpoint).
struct SymmetryLineSample {
    double t = 0.0;
    double k0 = 0.0;
    double k1 = 0.0;
    double u = 0.0;
};

struct ResidualReport {
    double gauss_max = 0.0;
    double codazzi_max = 0.0;
    double conservation_max = 0.0;
    std::size_t grid = 0;
    std::size_t gauss_samples = 0;    // samples actually evaluated
    std::size_t codazzi_samples = 0;
};

// k1 = -k''/k^2; degenerate when |k| <= eps (k1 blows up at poles).
double second_curvature(double k, double kpp, double eps = 1e-6);

// u samples over [t_lo, t_hi]; k must not change sign inside the interval.
std::vector<SymmetryLineSample> transverse_factor(const Trajectory& traj, double t_lo,
                                                  double t_hi, std::size_t count = 65);
std::vector<SymmetryLineSample> transverse_factor(const Trajectory& traj);

// Pointwise residuals of the symmetry-line system with u = |k0| and k1 = -k0''/k0^2:
//   gauss:        k0 k1 + u''/u
//   codazzi:      k1' - (u'/u)(k0 - k1)
//   conservation: k0'/k0 - u'/u
// u'' and k1' come from centered finite differences (Richardson-extrapolated) of the
// dense output; u'/u is k'/k by construction. Samples where |k| <= eps_rel * max|k|,
// or whose difference stencils leave the one-signed region, are skipped. The Codazzi
// difference additionally uses a per-sample step balancing dense-output noise against
// the 1/k^6 growth of the derivatives of k1, and is evaluated only where that balance
// certifies the result below the report tolerance; the sample counters record how
// much of the grid was certifiable.
ResidualReport residuals(const Trajectory& traj, std::size_t grid, double eps_rel = 0.05);

}  // namespace balloon
