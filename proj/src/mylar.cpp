#include "balloon/mylar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace balloon {

namespace {

void require_radius(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("mylar: radius a must be > 0");
}

}  // namespace

double paulsen_height(double x, double a, const Tolerances& tol) {
    require_radius(a);
    if (x < 0.0 || x > a * (1.0 + 1e-12)) {
        throw std::domain_error("paulsen_height: x outside [0, a]");
    }
    if (x >= a) return 0.0;
    // a^4 - u^4 = (a - u)(a + u)(a^2 + u^2); the exact (a - u) comes from the rule.
    auto body = [a](double u, double dist) {
        return u * u / std::sqrt(dist * (a + u) * (a * a + u * u));
    };
    return integrate_singular_endpoint(SingularFn(body), x, a, SingularEnd::right, tol).value;
}

double linear_curvature(double x, double a) {
    require_radius(a);
    if (x < 0.0 || x > a * (1.0 + 1e-12)) {
        throw std::domain_error("linear_curvature: x outside [0, a]");
    }
    return -2.0 * x / (a * a);
}

double mylar_arclength_to_x(double x, double a, const Tolerances& tol) {
    require_radius(a);
    if (x < 0.0 || x > a * (1.0 + 1e-12)) {
        throw std::domain_error("mylar_arclength_to_x: x outside [0, a]");
    }
    if (x == 0.0) return 0.0;
    const double a2 = a * a;
    auto sing_body = [a, a2](double u, double dist) {
        return a2 / std::sqrt(dist * (a + u) * (a2 + u * u));
    };
    if (x >= a) {
        return integrate_singular_endpoint(SingularFn(sing_body), 0.0, a, SingularEnd::right,
                                           tol).value;
    }
    if (x <= 0.5 * a) {
        const double a4 = a2 * a2;
        auto body = [a2, a4](double u) { return a2 / std::sqrt(a4 - u * u * u * u); };
        return integrate_adaptive(body, 0.0, x, tol).value;
    }
    // Close to the vertical tangent: difference of two endpoint-exact integrals.
    const double full =
        integrate_singular_endpoint(SingularFn(sing_body), 0.0, a, SingularEnd::right, tol).value;
    const double tail =
        integrate_singular_endpoint(SingularFn(sing_body), x, a, SingularEnd::right, tol).value;
    return full - tail;
}

double flat_radius(double a, const Tolerances& tol) {
    require_radius(a);
    return mylar_arclength_to_x(a, a, tol);
}

MylarVolume mylar_volume(double a, const Tolerances& tol) {
    require_radius(a);
    tol.validate();
    // Route 1: shells over the profile, V = 4 pi int_0^a x f(x) dx (nested quadrature).
    Tolerances inner = tol;
    inner.abs_tol = std::max(tol.abs_tol * 1e-2, 1e-14);
    inner.rel_tol = std::max(tol.rel_tol * 1e-2, 1e-14);
    auto shell = [a, &inner](double x) { return x * paulsen_height(x, a, inner); };
    const double shells =
        4.0 * std::numbers::pi *
        integrate_singular_endpoint(shell, 0.0, a, SingularEnd::right, tol).value;
    // Route 2: order-swapped single integral, V = 2 pi int_0^a u^4 du / sqrt(a^4 - u^4).
    auto swapped_body = [a](double u, double dist) {
        const double u2 = u * u;
        return u2 * u2 / std::sqrt(dist * (a + u) * (a * a + u2));
    };
    const double swapped =
        2.0 * std::numbers::pi *
        integrate_singular_endpoint(SingularFn(swapped_body), 0.0, a, SingularEnd::right,
                                    tol).value;

    const double slack = 10.0 * std::max(tol.abs_tol, tol.rel_tol * std::abs(swapped)) *
                         std::max(1.0, a * a * a);
    if (std::abs(shells - swapped) > slack) {
        throw ConsistencyError("mylar_volume: independent quadrature routes disagree");
    }
    return {shells, swapped};
}

double mylar_thickness(double a, const Tolerances& tol) {
    return 2.0 * paulsen_height(0.0, a, tol);
}

ProfileParams mylar_family_params(double a) {
    require_radius(a);
    return {0.0, 16.0 / (a * a * a * a)};
}

MylarProfile mylar_profile(double a, std::size_t n, const Tolerances& tol) {
    require_radius(a);
    if (n < 2) throw std::invalid_argument("mylar_profile: need at least 2 samples");
    MylarProfile prof;
    prof.a = a;
    prof.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Clustered toward x = a where the graph has a vertical tangent.
        const double u = static_cast<double>(i) / static_cast<double>(n - 1);
        const double x = (i == n - 1) ? a : a * std::sin(0.5 * std::numbers::pi * u);
        prof.samples.push_back({x, paulsen_height(x, a, tol)});
    }
    return prof;
}

MylarReport mylar_report(double a, const Tolerances& tol) {
    require_radius(a);
    MylarReport rep;
    rep.a = a;
    rep.flat_radius = flat_radius(a, tol);
    rep.thickness = mylar_thickness(a, tol);
    rep.volume = mylar_volume(a, tol).swapped;
    rep.equator_k = 2.0 / a;
    rep.pole_kp = 2.0 / (a * a);
    return rep;
}

double linear_law_deviation(double a, const Tolerances& tol) {
    require_radius(a);
    Tolerances qt = tol;
    qt.abs_tol = std::min(tol.abs_tol, 1e-14);
    qt.rel_tol = std::min(tol.rel_tol, 1e-14);
    auto f = [&](double x) { return paulsen_height(std::abs(x), a, qt); };
    auto d1r = [&](double x, double h) {
        const double da = (f(x + h) - f(x - h)) / (2.0 * h);
        const double db = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
        return (4.0 * db - da) / 3.0;
    };
    auto d2r = [&](double x, double h) {
        const double da = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        const double db = (f(x + 0.5 * h) - 2.0 * f(x) + f(x - 0.5 * h)) / (0.25 * h * h);
        return (4.0 * db - da) / 3.0;
    };
    double worst = 0.0;
    for (int i = 0; i <= 19; ++i) {
        const double x = 0.05 * i * a;
        double fp, fpp;
        if (x < 0.02 * a) {
            // One-sided stencils: f(|x|) has a third-derivative kink at the pole.
            const double h = 4e-3 * a;
            fpp = (2.0 * f(x) - 5.0 * f(x + h) + 4.0 * f(x + 2 * h) - f(x + 3 * h)) / (h * h);
            fp = (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2 * h)) / (2.0 * h);
        } else {
            const double xi = x / a;
            const double h2 = a * std::min(0.0065 * (1.0 - xi * xi * xi * xi), 0.45 * xi);
            fp = d1r(x, h2 / 8.0);
            fpp = d2r(x, h2);
        }
        const double k = curvature_from_graph(fp, fpp);
        worst = std::max(worst, std::abs(k + 2.0 * x / (a * a)));
    }
    return worst;
}

MylarVerification verify_mylar_end_to_end(double a, const Tolerances& tol,
                                          std::optional<double> mu_override) {
    require_radius(a);
    tol.validate();
    const double mu = mu_override.value_or(16.0 / (a * a * a * a));
    const double L = flat_radius(a, tol);
    const double f0 = paulsen_height(0.0, a, tol);

    // Paper-sign branch: k(0) = 0, k'(0) = -sqrt(mu)/2, pole at the origin of arclength.
    auto traj = solve_ivp(0.0, -0.5 * std::sqrt(mu), 0.0, L, tol);
    auto curve = reconstruct_from_curvature([&traj](double t) { return traj.k(t); },
                                            {0.0, f0, 0.0}, L, tol);

    // Resample the quadrature graph by arclength and take the worst pointwise distance.
    MylarVerification v;
    v.tolerance = std::max(1e-6 * a, 10.0 * tol.abs_tol);
    const int n = 65;
    for (int i = 0; i <= n; ++i) {
        const double t = L * i / n;
        double x_ref;
        if (i == 0) {
            x_ref = 0.0;
        } else if (i == n) {
            x_ref = a;
        } else {
            x_ref = find_root_bracketed(
                [&](double x) { return mylar_arclength_to_x(x, a, tol) - t; }, 0.0, a, tol);
        }
        const double y_ref = paulsen_height(x_ref, a, tol);
        const Pose p = curve.at(t);
        v.max_deviation = std::max(v.max_deviation, std::hypot(p.x - x_ref, p.y - y_ref));
    }
    v.equator_kp = std::abs(traj.kp(L));
    v.passed = v.max_deviation <= v.tolerance && v.equator_kp <= 10.0 * v.tolerance / a;

    // Close the full oval from two pole-to-pole halves (positive branch, zero corners).
    auto half_traj = solve_ivp(2.0 / a, 0.0, 0.0, L, tol);
    auto half_k = [&half_traj, L](double s) { return half_traj.k(std::abs(s - L)); };
    auto upper = reconstruct_from_curvature(half_k, {0.0, 0.0, 0.0}, 2.0 * L, tol);
    auto lower = reconstruct_from_curvature(half_k, upper.end_pose(), 2.0 * L, tol);
    const PlanarCurve halves[] = {upper, lower};
    const double corners[] = {0.0, 0.0};
    v.closure = closure_report(halves, corners);
    return v;
}

}  // namespace balloon
