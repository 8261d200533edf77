#pragma once

// Independent reference values for the test suite. Everything here is computed
// from closed forms (Beta/Gamma identities, inverse hyperbolics), never through
// the library's own quadrature or ODE paths.

#include <cmath>

namespace oracle {

// B(p, q) via lgamma; accurate to ~1e-15 relative for the arguments used here.
inline double beta(double p, double q) {
    return std::exp(std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q));
}

// int_0^1 v^m / sqrt(1 - v^4) dv = (1/4) B((m+1)/4, 1/2)
inline double quartic_moment(int m) { return 0.25 * beta((m + 1) / 4.0, 0.5); }

// Frozen 30-digit values (mpmath):
//   I1 = (1/4) B(1/4,1/2), I2 = (1/4) B(3/4,1/2), I4 = (1/4) B(5/4,1/2)
inline constexpr double kFlatRadius1 = 1.31102877714605990523241979495;   // I1
inline constexpr double kPaulsenHeight0 = 0.59907011736779610371996124614;  // I2 = f(0), a=1
inline constexpr double kQuarticMoment4 = 0.437009592382019968410806598315; // I4
inline constexpr double kMylarVolume1 = 2.74581224995124800957782676313;   // 2*pi*I4
inline constexpr double kMylarThickness1 = 1.19814023473559220743992249228; // 2*I2
inline constexpr double kInflatedOverFlat = 0.762759763501813188062325980964; // 1/I1
inline constexpr double kMylarNu = 2.62205755429211981046483958989;        // 2*I1

// Double-zero branch, lambda00 = 4: t(k) measured from k_ref = 1 is
// 2*int_1^k ds/(s*sqrt(4-s^2)) = atanh(sqrt(3)/2) - ... (closed form).
inline double double_zero_time_lam4(double k) {
    auto g = [](double s) { return -0.5 * std::atanh(std::sqrt(4.0 - s * s) / 2.0); };
    return 2.0 * (g(k) - g(1.0));
}
inline constexpr double kDzTimeSqrt2 = 0.435584309905273683392437022328;  // k: 1 -> sqrt(2)
inline constexpr double kDzTimeTurn = 1.31695789692481670862504634731;    // k: 1 -> 2

}  // namespace oracle
