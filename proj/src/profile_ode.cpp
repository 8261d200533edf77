#include "balloon/profile_ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace balloon {

namespace {

// Largest positive root of the radicand, k_eq^2 = 2 lambda + sqrt(3 lambda^2 + mu).
// Exists whenever mu > lambda^2 (the branch through k = 0).
double equator_curvature_checked(const ProfileParams& p) {
    const double disc = 3.0 * p.lambda * p.lambda + p.mu;
    if (disc < 0.0) {
        throw UnreachableCurvatureError("profile: radicand has no real turning point");
    }
    const double keq2 = 2.0 * p.lambda + std::sqrt(disc);
    if (keq2 <= 0.0) {
        throw UnreachableCurvatureError("profile: radicand has no positive turning point");
    }
    return std::sqrt(keq2);
}

}  // namespace

double ode_residual(const CurvatureState& s, double kppp) {
    return s.k * kppp - s.kp * s.kpp + s.k * s.k * s.k * s.kp;
}

std::array<double, 2> reduced_field(double k, double kp, double lambda) {
    return {kp, lambda * k - 0.5 * k * k * k};
}

double conserved_q(const CurvatureState& s) {
    return s.k * s.kpp - s.kp * s.kp + 0.25 * s.k * s.k * s.k * s.k;
}

Trajectory solve_ivp(double k0, double kp0, double lambda, double length,
                     const Tolerances& tol) {
    if (!(length > 0.0)) throw std::invalid_argument("solve_ivp: length must be > 0");
    const double y0[] = {k0, kp0};
    auto field = [lambda](double, std::span<const double> y, std::span<double> d) {
        d[0] = y[1];
        d[1] = lambda * y[0] - 0.5 * y[0] * y[0] * y[0];
    };
    Trajectory traj;
    traj.dense = integrate_ode(field, std::span<const double>(y0, 2), 0.0, length, tol);
    const double i2 = kp0 * kp0 - lambda * k0 * k0 + 0.25 * k0 * k0 * k0 * k0;
    traj.params = {lambda, lambda * lambda + 4.0 * i2};
    return traj;
}

ProfileParams params_from_state(const CurvatureState& s, double eps) {
    if (std::abs(s.k) <= eps) {
        throw DegenerateStateError(
            "params_from_state: |k| below degeneracy threshold; lambda is undefined at "
            "k = 0 (use the conserved quantity instead)");
    }
    const double lambda = (s.kpp + 0.5 * s.k * s.k * s.k) / s.k;
    const double i2 = s.kp * s.kp - lambda * s.k * s.k + 0.25 * s.k * s.k * s.k * s.k;
    return {lambda, lambda * lambda + 4.0 * i2};
}

double implicit_time_of_k(double k_target, const ProfileParams& p, const Tolerances& tol) {
    tol.validate();
    const double k = std::abs(k_target);  // R is even; the branch is antisymmetric
    if (k == 0.0) return 0.0;
    if (p.mu - p.lambda * p.lambda <= 0.0) {
        throw UnreachableCurvatureError(
            "implicit_time_of_k: mu <= lambda^2, no monotone branch through k = 0");
    }
    const double keq = equator_curvature_checked(p);
    if (k > keq * (1.0 + 1e-12)) {
        throw UnreachableCurvatureError("implicit_time_of_k: curvature beyond the turning point");
    }
    const double kc = std::min(k, keq);

    Tolerances part = tol;
    part.abs_tol = 0.5 * tol.abs_tol;
    const double split = std::min(kc, 0.75 * keq);
    double time = 0.0;
    if (split > 0.0) {
        auto body = [&p](double s) { return 2.0 / std::sqrt(p.radicand(s)); };
        time += integrate_adaptive(body, 0.0, split, part).value;
    }
    if (kc > split) {
        // s = keq - w^2 absorbs the inverse-square-root behavior at the turning point.
        const double w_lo = std::sqrt(std::max(keq - kc, 0.0));
        const double w_hi = std::sqrt(keq - split);
        auto head = [&p, keq](double w) {
            const double s = keq - w * w;
            return 4.0 * w / std::sqrt(std::max(p.radicand(s), 0.0));
        };
        time += integrate_adaptive(head, w_lo, w_hi, part).value;
    }
    return time;
}

double equator_time(const ProfileParams& p, const Tolerances& tol) {
    return implicit_time_of_k(equator_curvature_checked(p), p, tol);
}

CurvaturePoint invert_implicit_state(double t, const ProfileParams& p, const Tolerances& tol) {
    tol.validate();
    if (t < 0.0) throw std::invalid_argument("invert_implicit: t must be >= 0");
    if (t == 0.0) return {0.0, p.mu > p.lambda * p.lambda
                                   ? 0.5 * std::sqrt(p.mu - p.lambda * p.lambda)
                                   : 0.0};
    if (p.mu - p.lambda * p.lambda <= 0.0) {
        throw UnreachableCurvatureError(
            "invert_implicit: mu <= lambda^2, no branch through k = 0");
    }
    const double keq = equator_curvature_checked(p);
    const double teq = equator_time(p, tol);

    // Fold t into the first quarter period using evenness about turning points
    // and oddness about zero crossings.
    const double period = 4.0 * teq;
    const double tau = std::fmod(t, period);
    int phase = static_cast<int>(tau / teq);
    if (phase > 3) phase = 3;
    double tf = 0.0, k_sign = 1.0, kp_sign = 1.0;
    switch (phase) {
        case 0: tf = tau; k_sign = 1.0; kp_sign = 1.0; break;
        case 1: tf = 2.0 * teq - tau; k_sign = 1.0; kp_sign = -1.0; break;
        case 2: tf = tau - 2.0 * teq; k_sign = -1.0; kp_sign = -1.0; break;
        case 3: tf = 4.0 * teq - tau; k_sign = -1.0; kp_sign = 1.0; break;
    }

    auto time_minus = [&](double k) { return implicit_time_of_k(k, p, tol) - tf; };
    double k = 0.0;
    if (tf <= 0.0) {
        k = 0.0;
    } else if (tf >= teq) {
        k = keq;
    } else {
        k = find_root_bracketed(time_minus, 0.0, keq, tol);
    }
    const double kp = 0.5 * std::sqrt(std::max(p.radicand(k), 0.0));
    return {k_sign * k, kp_sign * kp};
}

double invert_implicit(double t, const ProfileParams& p, const Tolerances& tol) {
    return invert_implicit_state(t, p, tol).k;
}

DoubleZeroTime implicit_double_zero(double k_target, double lambda00, const Tolerances& tol) {
    tol.validate();
    if (!(lambda00 > 0.0)) {
        throw std::domain_error("implicit_double_zero: lambda00 must be > 0");
    }
    const double k_top = std::sqrt(lambda00);
    if (!(k_target > 0.0) || k_target > k_top * (1.0 + 1e-12)) {
        throw std::domain_error("implicit_double_zero: k_target outside (0, sqrt(lambda00)]");
    }
    const double k = std::min(k_target, k_top);
    const double k_ref = 0.5 * k_top;
    auto body = [lambda00](double s) {
        return 1.0 / std::sqrt(s * s * (lambda00 - s * s));
    };
    double integral = 0.0;
    if (k >= k_ref) {
        integral = integrate_singular_endpoint(body, k_ref, k, SingularEnd::right, tol).value;
    } else {
        integral = -integrate_adaptive(body, k, k_ref, tol).value;
    }
    return {2.0 * integral, integral};
}

Trajectory rescale_solution(const Trajectory& traj, double c) {
    if (c == 0.0) throw std::invalid_argument("rescale_solution: c must be nonzero");
    const double m = std::abs(c);
    Trajectory out = traj;
    out.params = {c * c * traj.params.lambda, c * c * c * c * traj.params.mu};
    out.dense.scale_time(1.0 / m);
    const double mat[] = {c, 0.0, 0.0, c * m};
    const double off[] = {0.0, 0.0};
    out.dense.transform_affine(mat, off);
    return out;
}

}  // namespace balloon
