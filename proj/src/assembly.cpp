#include "balloon/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace balloon {

namespace {

using std::numbers::pi;

void require_length(double length) {
    if (!(length > 0.0)) {
        throw DegenerateArcError("assembly: arc length must be > 0");
    }
}

}  // namespace

double equator_curvature(const ProfileParams& p) {
    const double disc = 3.0 * p.lambda * p.lambda + p.mu;
    if (disc < 0.0) {
        throw NoEquatorError("equator_curvature: 3 lambda^2 + mu < 0, no real turning point");
    }
    const double keq2 = 2.0 * p.lambda + std::sqrt(disc);
    if (keq2 <= 0.0) {
        throw NoEquatorError("equator_curvature: radicand has no positive root");
    }
    return std::sqrt(keq2);
}

ProfileParams family_member(double nu, double length) {
    require_length(length);
    if (!(nu > 0.0)) throw std::invalid_argument("family_member: nu must be > 0");
    const double keq = nu / length;
    return {0.0, keq * keq * keq * keq};
}

double family_nu(const ProfileParams& p, double length) {
    require_length(length);
    return equator_curvature(p) * length;
}

double mylar_nu(const Tolerances& tol) {
    // 2 * int_0^1 dv/sqrt(1 - v^4): equator time of the unit-gauge mylar member.
    return equator_time(ProfileParams{0.0, 1.0}, tol);
}

BuiltArc build_arc(const ArcSpec& spec, const Tolerances& tol) {
    require_length(spec.length);
    if (spec.params.has_value() == spec.pole_curvature.has_value()) {
        throw std::invalid_argument(
            "build_arc: exactly one of params / pole_curvature must be set");
    }
    const ProfileParams p = spec.params.has_value()
                                ? *spec.params
                                : params_for_pole_curvature(*spec.pole_curvature,
                                                            spec.length, tol);
    BuiltArc arc;
    Pose pose0;
    switch (spec.boundary) {
        case ArcBoundary::equator_kp_zero: {
            const double keq = equator_curvature(p);
            arc.trajectory = solve_ivp(keq, 0.0, p.lambda, spec.length, tol);
            pose0 = {0.0, 0.0, 0.5 * pi};  // equator tangent vertical
            break;
        }
        case ArcBoundary::pole_k_zero: {
            const double i4 = p.mu - p.lambda * p.lambda;
            if (i4 <= 1e-14 * std::max({1.0, std::abs(p.mu), p.lambda * p.lambda})) {
                throw DegenerateArcError(
                    "build_arc: mu <= lambda^2 at a k = 0 pole continues only as the "
                    "trivial solution");
            }
            arc.trajectory = solve_ivp(0.0, 0.5 * std::sqrt(i4), p.lambda, spec.length, tol);
            pose0 = {0.0, 0.0, 0.0};  // pole tangent horizontal
            break;
        }
    }
    const Trajectory& traj = arc.trajectory;
    arc.curve = reconstruct_from_curvature([&traj](double t) { return traj.k(t); }, pose0,
                                           spec.length, tol);
    return arc;
}

double pole_corner_angle(const PlanarCurve& arc, std::size_t n_fold) {
    if (n_fold < 2) throw std::invalid_argument("pole_corner_angle: need n_fold >= 2");
    return 2.0 * (pi / static_cast<double>(n_fold) - std::abs(total_turning(arc)));
}

CrossSection assemble_cross_section(const PlanarCurve& quarter_arc, std::size_t n_arcs) {
    if (n_arcs != 2 && n_arcs != 4) {
        throw std::invalid_argument("assemble_cross_section: n_arcs must be 2 or 4");
    }
    const double L = quarter_arc.length();
    const double corner = pole_corner_angle(quarter_arc, n_arcs);

    // Pole-to-pole copy: even extension of the quarter arc through its equator.
    auto copy_k = [&quarter_arc, L](double s) {
        return quarter_arc.curvature(std::abs(s - L));
    };
    PlanarCurve proto = reconstruct_from_curvature(copy_k, {0.0, 0.0, 0.0}, 2.0 * L);

    CrossSection section;
    section.arcs.reserve(n_arcs);
    section.corner_exterior_angles.assign(n_arcs, corner);
    Pose cursor = proto.start_pose();
    for (std::size_t i = 0; i < n_arcs; ++i) {
        const Pose pstart = proto.start_pose();
        const double rot = cursor.theta - pstart.theta;
        const double c = std::cos(rot), s = std::sin(rot);
        const double dx = cursor.x - (c * pstart.x - s * pstart.y);
        const double dy = cursor.y - (s * pstart.x + c * pstart.y);
        section.arcs.push_back(proto.transformed(rot, dx, dy));
        cursor = section.arcs.back().end_pose();
        cursor.theta += corner;
    }
    section.closure = closure_report(section.arcs, section.corner_exterior_angles);

    double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0;
    bool first = true;
    for (const PlanarCurve& arc : section.arcs) {
        for (const CurveSample& smp : arc.samples(64)) {
            if (first) {
                xlo = xhi = smp.x;
                ylo = yhi = smp.y;
                first = false;
            }
            xlo = std::min(xlo, smp.x);
            xhi = std::max(xhi, smp.x);
            ylo = std::min(ylo, smp.y);
            yhi = std::max(yhi, smp.y);
        }
    }
    const double diameter = std::hypot(xhi - xlo, yhi - ylo);
    section.closure_ok = section.closure.endpoint_gap <= 1e-3 * std::max(diameter, 1e-300);
    return section;
}

namespace {

double quarter_turning(double nu, double length, const Tolerances& tol) {
    ArcSpec spec;
    spec.params = family_member(nu, length);
    spec.length = length;
    auto arc = build_arc(spec, tol);
    return std::abs(total_turning(arc.curve));
}

}  // namespace

ProfileParams shoot_for_pole_angle(double length, double target_angle, const Tolerances& tol) {
    require_length(length);
    if (!(target_angle >= 0.0 && target_angle < pi)) {
        throw std::invalid_argument("shoot_for_pole_angle: target angle must be in [0, pi)");
    }
    tol.validate();
    const double nu_hi = mylar_nu(tol);  // quarter ends exactly at the k = 0 pole
    const double nu_lo = 1e-3;
    const double angle_lo = 2.0 * (0.5 * pi - quarter_turning(nu_lo, length, tol));
    if (target_angle >= angle_lo) {
        throw NoSolutionError("shoot_for_pole_angle: target angle outside the achievable range [0, " +
                                  std::to_string(angle_lo) + ")",
                              0.0, angle_lo);
    }
    auto mismatch = [&](double nu) {
        return 2.0 * (0.5 * pi - quarter_turning(nu, length, tol)) - target_angle;
    };
    // The branch end nu_hi attains angle 0 exactly; integrator noise can leave the
    // mismatch marginally positive there, which would spoil the bracket.
    const double f_hi = mismatch(nu_hi);
    if (f_hi >= 0.0) {
        if (f_hi <= 1e-9) return family_member(nu_hi, length);
        throw NoSolutionError("shoot_for_pole_angle: target angle below the scanned branch",
                              f_hi + target_angle, angle_lo);
    }
    const double nu = find_root_bracketed(mismatch, nu_lo, nu_hi, tol);
    return family_member(nu, length);
}

ProfileParams params_for_pole_curvature(double pole_k, double length, const Tolerances& tol) {
    require_length(length);
    tol.validate();
    const double nu_top = mylar_nu(tol);
    auto end_k = [&](double nu) {
        ArcSpec spec;
        spec.params = family_member(nu, length);
        spec.length = length;
        return build_arc(spec, tol).trajectory.k(length) - pole_k;
    };
    // Scan the descending branch through the mylar member (larger nu first).
    const int n_scan = 64;
    const double nu_cap = 2.9 * nu_top;
    double prev_nu = nu_cap;
    double prev_val = end_k(prev_nu);
    double k_min = prev_val + pole_k, k_max = prev_val + pole_k;
    for (int i = 1; i <= n_scan; ++i) {
        const double nu = nu_cap - (nu_cap - 1e-3) * i / n_scan;
        const double val = end_k(nu);
        k_min = std::min(k_min, val + pole_k);
        k_max = std::max(k_max, val + pole_k);
        if (prev_val == 0.0) return family_member(prev_nu, length);
        if (prev_val * val <= 0.0) {
            const double nu_root = find_root_bracketed(end_k, std::min(nu, prev_nu),
                                                       std::max(nu, prev_nu), tol);
            return family_member(nu_root, length);
        }
        prev_nu = nu;
        prev_val = val;
    }
    throw NoSolutionError("params_for_pole_curvature: pole curvature outside the family range [" +
                              std::to_string(k_min) + ", " + std::to_string(k_max) + "]",
                          k_min, k_max);
}

std::vector<SweepRow> sweep_family(std::span<const double> nu_grid, double length,
                                   const Tolerances& tol) {
    if (nu_grid.empty()) throw std::invalid_argument("sweep_family: empty grid");
    require_length(length);
    std::vector<SweepRow> rows;
    rows.reserve(nu_grid.size());
    for (double nu : nu_grid) {
        SweepRow row;
        row.nu = nu;
        try {
            ArcSpec spec;
            spec.params = family_member(nu, length);
            spec.length = length;
            auto arc = build_arc(spec, tol);
            row.pole_angle = pole_corner_angle(arc.curve, 2);
            row.pole_curvature = arc.trajectory.k(length);
            auto section = assemble_cross_section(arc.curve, 2);
            row.closure_gap = section.closure.endpoint_gap;
            row.turning_plus_corners =
                section.closure.total_turning + section.closure.corner_sum;
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.note = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace balloon
