#pragma once

#include <array>

#include "balloon/numerics.hpp"

namespace balloon {

// One member of the profile family, identified by the constants of the implicit
// solution  int_0^k ds / sqrt((mu - lambda^2) + 4 lambda s^2 - s^4) = +- t/2.
struct ProfileParams {
    double lambda = 0.0;
    double mu = 0.0;

    // Energy-like first integral: (k')^2 = I2 + lambda k^2 - k^4/4.
    double first_integral() const { return 0.25 * (mu - lambda * lambda); }
    // Value of Q = k k'' - (k')^2 + k^4/4 on this member.
    double conserved_value() const { return -first_integral(); }
    // Radicand R(s) = (mu - lambda^2) + 4 lambda s^2 - s^4.
    double radicand(double s) const {
        const double s2 = s * s;
        return (mu - lambda * lambda) + 4.0 * lambda * s2 - s2 * s2;
    }
};

struct CurvatureState {
    double t = 0.0;
    double k = 0.0;
    double kp = 0.0;   // dk/dt
    double kpp = 0.0;  // d2k/dt2
};

// Solved curvature profile over [0, L]; dense state is (k, k').
struct Trajectory {
    ProfileParams params;
    DenseTrajectory dense;

    double length() const { return dense.t_end(); }
    double k(double t) const { return dense.eval_component(t, 0); }
    double kp(double t) const { return dense.eval_component(t, 1); }
    // k'' from the reduced relation k'' = lambda k - k^3/2.
    double kpp_analytic(double t) const {
        const double kk = k(t);
        return params.lambda * kk - 0.5 * kk * kk * kk;
    }
    // k'' from differentiating the dense k' component (independent of lambda).
    double kpp_dense(double t) const { return dense.eval_component_derivative(t, 1); }
    CurvatureState state_at(double t) const {
        return {t, k(t), kp(t), kpp_analytic(t)};
    }
};

// Residual of the third-order profile equation k k''' - k' k'' + k^3 k' = 0.
double ode_residual(const CurvatureState& s, double kppp);

// Reduced planar field (k, k') -> (k', lambda k - k^3/2); its integral curves
// are exactly the non-constant solutions of the third-order equation.
std::array<double, 2> reduced_field(double k, double kp, double lambda);

// Q = k k'' - (k')^2 + k^4/4, constant along exact solutions.
double conserved_q(const CurvatureState& s);

// Integrates the reduced system from (k0, kp0) over [0, L].
Trajectory solve_ivp(double k0, double kp0, double lambda, double length,
                     const Tolerances& tol = {});

// Inverts the two first integrals at a single state; |k| <= eps is degenerate.
ProfileParams params_from_state(const CurvatureState& s, double eps = 1e-6);

// t(k) = 2 int_0^k ds/sqrt(R(s)) on the monotone branch through k(0) = 0.
double implicit_time_of_k(double k_target, const ProfileParams& p, const Tolerances& tol = {});

// Arclength from k = 0 to the turning point k_eq (largest root of R).
double equator_time(const ProfileParams& p, const Tolerances& tol = {});

// Inverse of the implicit relation on the branch with k(0) = 0,
// k'(0) = +sqrt(mu - lambda^2)/2, continued through turning points by the
// reflection symmetry of the autonomous reduced system.
double invert_implicit(double t, const ProfileParams& p, const Tolerances& tol = {});

struct CurvaturePoint {
    double k = 0.0;
    double kp = 0.0;
};
CurvaturePoint invert_implicit_state(double t, const ProfileParams& p,
                                     const Tolerances& tol = {});

// Double-zero branch (k(0) = k'(0) = 0): t = 2 int ds/sqrt(lambda00 s^2 - s^4).
// The integral diverges at s = 0, so times are measured from the reference level
// k_ref = sqrt(lambda00)/2; the raw integral from k_ref is exposed alongside.
struct DoubleZeroTime {
    double time_from_ref = 0.0;
    double integral = 0.0;  // int_{k_ref}^{k_target} ds/sqrt(lambda00 s^2 - s^4)
};
DoubleZeroTime implicit_double_zero(double k_target, double lambda00,
                                    const Tolerances& tol = {});

// k -> c k(c t); parameters map to (c^2 lambda, c^4 mu). Negative c flips the
// sign of the profile (time still runs forward over [0, L/|c|]).
Trajectory rescale_solution(const Trajectory& traj, double c);

}  // namespace balloon
