#pragma once

#include <span>
#include <vector>

#include "balloon/numerics.hpp"

namespace balloon {

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
};

struct CurveSample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
};

struct ClosureReport {
    double endpoint_gap = 0.0;
    double total_turning = 0.0;
    double corner_sum = 0.0;
};

// Arclength-parameterized planar curve; dense state is (x, y, theta) with
// (x', y') = (cos theta, sin theta) and theta' = k by construction.
class PlanarCurve {
public:
    PlanarCurve() = default;
    explicit PlanarCurve(DenseTrajectory path) : path_(std::move(path)) {}

    double length() const { return path_.t_end() - path_.t_begin(); }
    Pose at(double t) const;
    Pose start_pose() const { return at(path_.t_begin()); }
    Pose end_pose() const { return at(path_.t_end()); }
    double curvature(double t) const { return path_.eval_component_derivative(t, 2); }
    std::vector<CurveSample> samples(std::size_t n) const;

    // Rigid motion: rotate by angle about the origin, then translate.
    PlanarCurve transformed(double angle, double dx, double dy) const;

    const DenseTrajectory& path() const { return path_; }

private:
    DenseTrajectory path_;
};

// Integrates theta' = k(t), x' = cos theta, y' = sin theta from pose0 over [0, L].
PlanarCurve reconstruct_from_curvature(const RealFn& kfun, const Pose& pose0, double length,
                                       const Tolerances& tol = {});

// Curvature of a graph from its first two derivatives: f'' / (1 + f'^2)^(3/2).
double curvature_from_graph(double fp, double fpp);

// Arclength of a graph, int sqrt(1 + f'(x)^2) dx, tolerant of inverse-square-root
// blowup of the integrand at either end (vertical tangents).
double arclength_of_graph(const RealFn& fp, double x0, double x1, const Tolerances& tol = {});

// theta(L) - theta(0).
double total_turning(const PlanarCurve& curve);

// Measures closure of a pre-positioned cyclic chain of arcs. corner_angles must
// be empty (all zero) or have one entry per arc.
ClosureReport closure_report(std::span<const PlanarCurve> arcs,
                             std::span<const double> corner_angles);

}  // namespace balloon
