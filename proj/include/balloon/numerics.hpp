#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "balloon/errors.hpp"

namespace balloon {

using RealFn = std::function<double(double)>;

struct Tolerances {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    long max_steps = 1'000'000;

    void validate() const;  // throws std::invalid_argument on bad fields
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // absolute
    long evaluations = 0;
};

// Quadrature ran out of budget; carries the best estimate obtained so far.
class BudgetExceededError : public Error {
public:
    BudgetExceededError(const std::string& what, QuadratureResult best_so_far)
        : Error(what), best(best_so_far) {}
    QuadratureResult best;
};

enum class SingularEnd { left, right, both };

// Adaptive Gauss-Kronrod 7-15 with interval bisection driven by a worst-first heap.
// Stops when the summed error estimate meets max(abs_tol, rel_tol*|value|).
QuadratureResult integrate_adaptive(const RealFn& f, double a, double b,
                                    const Tolerances& tol = {});

// Integrates f with an inverse-square-root divergence at the declared end(s) by the
// substitution u = a + s^2 (resp. u = b - s^2), which makes the integrand smooth.
// Throws DivergenceError when the endpoint behavior is non-integrable.
QuadratureResult integrate_singular_endpoint(const RealFn& f, double a, double b,
                                             SingularEnd end, const Tolerances& tol = {});

// Two-argument form: f receives (u, dist) where dist = s^2 is the distance to the
// singular end computed exactly in the transformed variable. Integrands whose
// radicand cancels catastrophically near the endpoint (e.g. a^4 - u^4 at u = a)
// should factor the vanishing term out of dist. With SingularEnd::both, dist refers
// to the singular end of the half being integrated.
using SingularFn = std::function<double(double u, double dist)>;
QuadratureResult integrate_singular_endpoint(const SingularFn& f, double a, double b,
                                             SingularEnd end, const Tolerances& tol = {});

// Brent's method. Requires f(lo)*f(hi) <= 0; returns x with |f(x)| <= abs_tol or
// bracket width <= abs_tol.
double find_root_bracketed(const RealFn& f, double lo, double hi,
                           const Tolerances& tol = {});

// Arclength-indexed solution samples with a piecewise-quartic C^1 interpolant.
// Evaluation at a node time returns the stored node state bit-for-bit.
class DenseTrajectory {
public:
    static constexpr std::size_t kCoeffs = 5;  // theta^0..theta^4 per component

    DenseTrajectory() = default;

    // Cubic Hermite construction from node states and their time derivatives.
    static DenseTrajectory from_hermite(std::vector<double> times,
                                        const std::vector<std::vector<double>>& states,
                                        const std::vector<std::vector<double>>& derivs);

    std::size_t dimension() const { return dim_; }
    std::size_t node_count() const { return times_.size(); }
    double t_begin() const { return times_.front(); }
    double t_end() const { return times_.back(); }
    double node_time(std::size_t i) const { return times_[i]; }
    std::span<const double> node_state(std::size_t i) const {
        return {states_.data() + i * dim_, dim_};
    }

    void eval(double t, std::span<double> out) const;
    void eval_derivative(double t, std::span<double> out) const;
    double eval_component(double t, std::size_t comp) const;
    double eval_component_derivative(double t, std::size_t comp) const;

    // Linear state map y -> M y + b applied to nodes and interpolant (M row-major dim x dim).
    void transform_affine(std::span<const double> m, std::span<const double> b);
    // Multiplies all node times by s > 0. Interpolant coefficients are theta-based and
    // transform implicitly; time derivatives pick up the 1/s factor automatically.
    void scale_time(double s);

    // Incremental construction (used by the integrator).
    void start(std::size_t dim, double t0, std::span<const double> y0);
    void push_interval(double t1, std::span<const double> y1, std::span<const double> coeffs);

private:
    std::size_t locate(double t) const;

    std::size_t dim_ = 0;
    std::vector<double> times_;
    std::vector<double> states_;  // node_count * dim
    std::vector<double> coeffs_;  // (node_count-1) * dim * kCoeffs
};

// Step size underflowed (typically approaching a singularity); carries the partial result.
class SingularStepError : public Error {
public:
    SingularStepError(const std::string& what, DenseTrajectory partial_trajectory)
        : Error(what), partial(std::move(partial_trajectory)) {}
    DenseTrajectory partial;
};

using OdeField = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

// Dormand-Prince 5(4) with PI step control and 4th-order dense output.
DenseTrajectory integrate_ode(const OdeField& field, std::span<const double> y0, double t0,
                              double t1, const Tolerances& tol = {});

}  // namespace balloon
