#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "balloon/curve_geometry.hpp"
#include "balloon/profile_ode.hpp"

namespace balloon {

enum class ArcBoundary {
    equator_kp_zero,  // anchored at the equator state (k_eq, 0)
    pole_k_zero,      // anchored at the pole state (0, sqrt(mu - lambda^2)/2)
};

// One profile arc: a family member (full parameters, or a pole curvature resolved
// on the canonical one-parameter slice) integrated over arclength `length` from
// the boundary anchor. Exactly one of params / pole_curvature must be set.
struct ArcSpec {
    std::optional<ProfileParams> params;
    std::optional<double> pole_curvature;
    double length = 0.0;
    ArcBoundary boundary = ArcBoundary::equator_kp_zero;
};

struct BuiltArc {
    Trajectory trajectory;
    PlanarCurve curve;
};

// Closed symmetry-plane section: congruent pole-to-pole copies joined at pole
// corners. arcs[i] is the positioned copy, corner_exterior_angles[i] the exterior
// angle at the corner following it.
struct CrossSection {
    std::vector<PlanarCurve> arcs;
    std::vector<double> corner_exterior_angles;
    ClosureReport closure;
    bool closure_ok = false;
};

struct SweepRow {
    double nu = 0.0;
    double pole_angle = 0.0;
    double pole_curvature = 0.0;
    double closure_gap = 0.0;
    double turning_plus_corners = 0.0;
    bool ok = false;
    std::string note;
};

// Largest root of the radicand: k_eq = sqrt(2 lambda + sqrt(3 lambda^2 + mu)).
double equator_curvature(const ProfileParams& p);

// Dimensionless family coordinate nu = k_eq * L fixes the dilation gauge. The
// canonical sweep slice is lambda = 0, which contains the mylar member.
ProfileParams family_member(double nu, double length);
double family_nu(const ProfileParams& p, double length);

// nu of the member whose quarter arc of length L ends exactly at a k = 0 pole
// (the mylar profile): 2 * int_0^1 dv/sqrt(1 - v^4), independent of L.
double mylar_nu(const Tolerances& tol = {});

BuiltArc build_arc(const ArcSpec& spec, const Tolerances& tol = {});

// Exterior corner angle where the quarter arc meets its mirror image under the
// n-fold assembly: 2 (pi/n_fold - |turning|).
double pole_corner_angle(const PlanarCurve& arc, std::size_t n_fold);

// Chains n_arcs congruent pole-to-pole copies (each the even extension of the
// given quarter arc through its equator) with equal pole corners.
CrossSection assemble_cross_section(const PlanarCurve& quarter_arc, std::size_t n_arcs);

// Solves for the family member whose quarter arc of length L meets its mirror at
// the target exterior angle (n_fold = 2). Throws NoSolutionError with the
// achievable range when the target is outside the scanned branch.
ProfileParams shoot_for_pole_angle(double length, double target_angle,
                                   const Tolerances& tol = {});

// Resolves a requested pole curvature on the canonical slice (descending branch
// through the mylar member).
ProfileParams params_for_pole_curvature(double pole_k, double length,
                                        const Tolerances& tol = {});

// Per grid point: build the arc, record pole data and n=2 closure metrics.
// Failures are recorded in the row; the sweep continues.
std::vector<SweepRow> sweep_family(std::span<const double> nu_grid, double length,
                                   const Tolerances& tol = {});

}  // namespace balloon
