#include "balloon/curve_geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace balloon {

Pose PlanarCurve::at(double t) const {
    double buf[3];
    path_.eval(t, buf);
    return {buf[0], buf[1], buf[2]};
}

std::vector<CurveSample> PlanarCurve::samples(std::size_t n) const {
    if (n < 2) throw std::invalid_argument("PlanarCurve::samples: need n >= 2");
    std::vector<CurveSample> out;
    out.reserve(n);
    const double t0 = path_.t_begin();
    const double t1 = path_.t_end();
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (i == n - 1) ? t1 : t0 + (t1 - t0) * static_cast<double>(i) /
                                                  static_cast<double>(n - 1);
        const Pose p = at(t);
        out.push_back({t, p.x, p.y, p.theta});
    }
    return out;
}

PlanarCurve PlanarCurve::transformed(double angle, double dx, double dy) const {
    const double c = std::cos(angle), s = std::sin(angle);
    const double m[] = {c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0};
    const double b[] = {dx, dy, angle};
    DenseTrajectory path = path_;
    path.transform_affine(m, b);
    return PlanarCurve(std::move(path));
}

PlanarCurve reconstruct_from_curvature(const RealFn& kfun, const Pose& pose0, double length,
                                       const Tolerances& tol) {
    if (!(length > 0.0)) throw std::invalid_argument("reconstruct_from_curvature: length must be > 0");
    const double y0[] = {pose0.x, pose0.y, pose0.theta};
    auto field = [&kfun](double t, std::span<const double> y, std::span<double> d) {
        d[0] = std::cos(y[2]);
        d[1] = std::sin(y[2]);
        d[2] = kfun(t);
    };
    return PlanarCurve(integrate_ode(field, std::span<const double>(y0, 3), 0.0, length, tol));
}

double curvature_from_graph(double fp, double fpp) {
    const double w = 1.0 + fp * fp;
    return fpp / (w * std::sqrt(w));
}

double arclength_of_graph(const RealFn& fp, double x0, double x1, const Tolerances& tol) {
    auto speed = [&fp](double x) {
        const double d = fp(x);
        return std::sqrt(1.0 + d * d);
    };
    return integrate_singular_endpoint(speed, x0, x1, SingularEnd::both, tol).value;
}

double total_turning(const PlanarCurve& curve) {
    return curve.end_pose().theta - curve.start_pose().theta;
}

ClosureReport closure_report(std::span<const PlanarCurve> arcs,
                             std::span<const double> corner_angles) {
    if (arcs.empty()) throw std::invalid_argument("closure_report: no arcs");
    if (!corner_angles.empty() && corner_angles.size() != arcs.size()) {
        throw std::invalid_argument(
            "closure_report: corner_angles must be empty or match the arc count");
    }
    ClosureReport rep;
    for (const PlanarCurve& arc : arcs) rep.total_turning += total_turning(arc);
    for (double a : corner_angles) rep.corner_sum += a;
    const Pose first = arcs.front().start_pose();
    const Pose last = arcs.back().end_pose();
    rep.endpoint_gap = std::hypot(last.x - first.x, last.y - first.y);
    return rep;
}

}  // namespace balloon
