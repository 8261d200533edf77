#pragma once

#include <array>
#include <optional>
#include <vector>

#include "balloon/curve_geometry.hpp"
#include "balloon/numerics.hpp"
#include "balloon/profile_ode.hpp"

namespace balloon {

// Sampled upper-quadrant profile graph (x, f(x)) of the inflated disk of radius a.
struct MylarProfile {
    double a = 0.0;
    std::vector<std::array<double, 2>> samples;  // x ascending, f(a) = 0
};

// Summary quantities; all entries are magnitudes.
struct MylarReport {
    double a = 0.0;
    double flat_radius = 0.0;  // deflated disk radius r > a
    double thickness = 0.0;    // 2 f(0)
    double volume = 0.0;
    double equator_k = 0.0;    // 2/a
    double pole_kp = 0.0;      // 2/a^2
};

// Volume by two independent quadrature routes (shell integral over the profile
// and the order-swapped single integral); they must agree.
struct MylarVolume {
    double shells = 0.0;
    double swapped = 0.0;
};

struct MylarVerification {
    double max_deviation = 0.0;  // ODE-reconstructed curve vs the quadrature graph
    double equator_kp = 0.0;     // |k'(L)| at the equator, should vanish
    bool passed = false;
    double tolerance = 0.0;
    ClosureReport closure;       // two pole-to-pole halves closed into the full oval
};

// f(x) = int_x^a u^2 du / sqrt(a^4 - u^4).
double paulsen_height(double x, double a, const Tolerances& tol = {});

// k(x) = -2 x / a^2.
double linear_curvature(double x, double a);

// Arclength t(x) = int_0^x a^2 du / sqrt(a^4 - u^4) of the profile graph.
double mylar_arclength_to_x(double x, double a, const Tolerances& tol = {});

// Quarter-profile arclength = radius of the flat disk: a * int_0^1 dv/sqrt(1-v^4).
double flat_radius(double a, const Tolerances& tol = {});

MylarVolume mylar_volume(double a, const Tolerances& tol = {});

double mylar_thickness(double a, const Tolerances& tol = {});

// Family member of the mylar profile: lambda = 0, mu = 16/a^4.
ProfileParams mylar_family_params(double a);

// Profile sampled on a grid clustered toward x = a (vertical tangent).
MylarProfile mylar_profile(double a, std::size_t n, const Tolerances& tol = {});

MylarReport mylar_report(double a, const Tolerances& tol = {});

// End-to-end cross-check: solve the family ODE, reconstruct the planar curve,
// and compare pointwise against the quadrature graph resampled by arclength.
// mu_override corrupts the family member (negative-control hook).
MylarVerification verify_mylar_end_to_end(double a, const Tolerances& tol = {},
                                          std::optional<double> mu_override = {});

// Checks the linear curvature law on the quadrature profile by numerical
// differentiation: returns max |k_fd(x) + 2x/a^2| over a grid on [0, 0.95a].
// Steps shrink toward the vertical tangent; one-sided stencils at the pole
// where the geometric graph f(|x|) has a third-derivative kink.
double linear_law_deviation(double a, const Tolerances& tol = {});

}  // namespace balloon
