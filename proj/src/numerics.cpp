#include "balloon/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace balloon {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Gauss-Kronrod 7-15 nodes on [0,1] half-interval plus weights for K15 and the
// embedded G7 rule (G7 weight zero at Kronrod-only nodes).
constexpr int kGkPoints = 8;
constexpr double kGkNode[kGkPoints] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813,
};
constexpr double kWeightK15[kGkPoints] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529,
};
constexpr double kWeightG7[kGkPoints] = {
    0.417959183673469, 0.0, 0.381830050505119, 0.0,
    0.279705391489277, 0.0, 0.129484966168870, 0.0,
};

struct Panel {
    double a, b;
    double value;
    double error;
};

struct PanelWorse {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

Panel gk15(const RealFn& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fhi[kGkPoints], flo[kGkPoints];
    fhi[0] = flo[0] = f(mid);
    for (int i = 1; i < kGkPoints; ++i) {
        const double dx = half * kGkNode[i];
        fhi[i] = f(mid + dx);
        flo[i] = f(mid - dx);
    }
    double k15 = kWeightK15[0] * fhi[0];
    double g7 = kWeightG7[0] * fhi[0];
    double resabs = kWeightK15[0] * std::abs(fhi[0]);
    for (int i = 1; i < kGkPoints; ++i) {
        k15 += kWeightK15[i] * (fhi[i] + flo[i]);
        g7 += kWeightG7[i] * (fhi[i] + flo[i]);
        resabs += kWeightK15[i] * (std::abs(fhi[i]) + std::abs(flo[i]));
    }
    const double meanv = 0.5 * k15;
    double resasc = kWeightK15[0] * std::abs(fhi[0] - meanv);
    for (int i = 1; i < kGkPoints; ++i) {
        resasc += kWeightK15[i] * (std::abs(fhi[i] - meanv) + std::abs(flo[i] - meanv));
    }
    k15 *= half;
    g7 *= half;
    resabs *= half;
    resasc *= half;
    if (!std::isfinite(k15)) {
        return {a, b, 0.0, kInf};
    }
    // QUADPACK error model: sharpen the G7/K15 gap only as far as the panel's
    // roughness measure allows, floored at roundoff level.
    double err = std::abs(k15 - g7);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    const double round_floor = 50.0 * kEps * resabs;
    err = std::max(err, round_floor);
    if (!std::isfinite(err)) err = kInf;
    return {a, b, k15, err};
}

}  // namespace

void Tolerances::validate() const {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("Tolerances: abs_tol must be > 0");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("Tolerances: rel_tol must be > 0");
    if (max_steps < 1) throw std::invalid_argument("Tolerances: max_steps must be >= 1");
}

QuadratureResult integrate_adaptive(const RealFn& f, double a, double b, const Tolerances& tol) {
    tol.validate();
    if (!(a <= b)) throw std::invalid_argument("integrate_adaptive: requires a <= b");
    if (a == b) return {0.0, 0.0, 1};

    std::vector<Panel> heap;
    heap.push_back(gk15(f, a, b));
    long panels = 1;
    double frozen_value = 0.0;
    double frozen_error = 0.0;
    double heap_value = heap[0].value;
    double heap_error = heap[0].error;

    auto refresh_sums = [&]() {
        heap_value = 0.0;
        heap_error = 0.0;
        for (const Panel& p : heap) {
            heap_value += p.value;
            heap_error += p.error;
        }
    };

    const PanelWorse worse;
    long iter = 0;
    while (true) {
        if ((++iter & 1023) == 0) refresh_sums();  // keep running sums from drifting
        const double value = frozen_value + heap_value;
        const double error = frozen_error + heap_error;
        const double target = std::max(tol.abs_tol, tol.rel_tol * std::abs(value));
        if (error <= target) {
            return {value, error, 15 * panels};
        }
        if (heap.empty() || panels >= tol.max_steps) {
            throw BudgetExceededError("integrate_adaptive: tolerance not reached within budget",
                                      {value, error, 15 * panels});
        }
        std::pop_heap(heap.begin(), heap.end(), worse);
        Panel top = heap.back();
        heap.pop_back();
        heap_value -= top.value;
        heap_error -= top.error;
        const double mid = 0.5 * (top.a + top.b);
        const double min_width = 64.0 * kEps * std::max(1.0, std::abs(mid));
        if (top.b - top.a <= min_width) {
            frozen_value += top.value;
            frozen_error += top.error;
            if (!std::isfinite(frozen_error)) {
                refresh_sums();
                throw BudgetExceededError(
                    "integrate_adaptive: non-integrable point at machine resolution",
                    {frozen_value + heap_value, frozen_error + heap_error, 15 * panels});
            }
            continue;
        }
        for (const Panel& child : {gk15(f, top.a, mid), gk15(f, mid, top.b)}) {
            heap_value += child.value;
            heap_error += child.error;
            heap.push_back(child);
            std::push_heap(heap.begin(), heap.end(), worse);
        }
        panels += 2;
    }
}

namespace {

// One singular end mapped away by u = end -+ s^2; integrand g(s) = 2 s f(...).
QuadratureResult integrate_one_singular(const SingularFn& f, double a, double b, bool left,
                                        const Tolerances& tol) {
    const double w = std::sqrt(b - a);
    auto g = [&f, a, b, left](double s) {
        const double dist = s * s;
        const double u = left ? a + dist : b - dist;
        return 2.0 * s * f(u, dist);
    };
    // Divergence probe: for an integrable (at worst inverse-square-root) endpoint
    // g stays bounded as s -> 0; persistent decade-over-decade growth means the
    // original integrand diverges faster than (distance)^(-1/2).
    const double s1 = w * 1e-3;
    const double s2 = w * 3.162277660168379e-5;
    const double s3 = w * 1e-6;
    const double g1 = std::abs(g(s1));
    const double g2 = std::abs(g(s2));
    const double g3 = std::abs(g(s3));
    const double floor = 1e-12 * (1.0 + g1);
    if ((g2 > 8.0 * g1 + floor && g3 > 8.0 * g2) || !std::isfinite(g2)) {
        throw DivergenceError("integrate_singular_endpoint: endpoint is non-integrable");
    }
    QuadratureResult r = integrate_adaptive(g, 0.0, w, tol);
    r.evaluations += 3;
    return r;
}

}  // namespace

QuadratureResult integrate_singular_endpoint(const SingularFn& f, double a, double b,
                                             SingularEnd end, const Tolerances& tol) {
    tol.validate();
    if (!(a <= b)) throw std::invalid_argument("integrate_singular_endpoint: requires a <= b");
    if (a == b) return {0.0, 0.0, 1};

    Tolerances half_tol = tol;
    switch (end) {
        case SingularEnd::left:
            return integrate_one_singular(f, a, b, true, tol);
        case SingularEnd::right:
            return integrate_one_singular(f, a, b, false, tol);
        case SingularEnd::both: {
            half_tol.abs_tol = 0.5 * tol.abs_tol;
            const double mid = 0.5 * (a + b);
            QuadratureResult l = integrate_one_singular(f, a, mid, true, half_tol);
            QuadratureResult r = integrate_one_singular(f, mid, b, false, half_tol);
            return {l.value + r.value, l.error_estimate + r.error_estimate,
                    l.evaluations + r.evaluations};
        }
    }
    throw std::invalid_argument("integrate_singular_endpoint: bad SingularEnd");
}

QuadratureResult integrate_singular_endpoint(const RealFn& f, double a, double b,
                                             SingularEnd end, const Tolerances& tol) {
    return integrate_singular_endpoint(
        SingularFn([&f](double u, double) { return f(u); }), a, b, end, tol);
}

double find_root_bracketed(const RealFn& f, double lo, double hi, const Tolerances& tol) {
    tol.validate();
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) {
        throw BracketError("find_root_bracketed: no sign change over [lo, hi]");
    }

    // Brent's method.
    double c = a, fc = fa;
    double d = b - a, e = b - a;
    const long iter_cap = std::min<long>(tol.max_steps, 200);
    for (long it = 0; it < iter_cap; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol.abs_tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= tol.abs_tol) {
            return b;
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if (std::abs(d) > tol1) {
            b += d;
        } else {
            b += (xm > 0.0 ? tol1 : -tol1);
        }
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    throw BudgetExceededError("find_root_bracketed: iteration budget exceeded",
                              {b, std::abs(fb), iter_cap});
}

// ---------------------------------------------------------------------------
// DenseTrajectory

DenseTrajectory DenseTrajectory::from_hermite(std::vector<double> times,
                                              const std::vector<std::vector<double>>& states,
                                              const std::vector<std::vector<double>>& derivs) {
    if (times.size() < 1 || states.size() != times.size() || derivs.size() != times.size()) {
        throw std::invalid_argument("DenseTrajectory::from_hermite: inconsistent node data");
    }
    DenseTrajectory tr;
    tr.start(states.front().size(), times.front(),
             std::span<const double>(states.front().data(), states.front().size()));
    const std::size_t dim = tr.dim_;
    std::vector<double> coeffs(dim * kCoeffs);
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double h = times[i] - times[i - 1];
        if (!(h > 0.0)) throw std::invalid_argument("DenseTrajectory::from_hermite: times not increasing");
        for (std::size_t j = 0; j < dim; ++j) {
            const double y0 = states[i - 1][j];
            const double y1 = states[i][j];
            const double d0 = h * derivs[i - 1][j];
            const double d1 = h * derivs[i][j];
            const double dy = y1 - y0;
            double* c = coeffs.data() + j * kCoeffs;
            c[0] = y0;
            c[1] = d0;
            c[2] = 3.0 * dy - 2.0 * d0 - d1;
            c[3] = -2.0 * dy + d0 + d1;
            c[4] = 0.0;
        }
        tr.push_interval(times[i], std::span<const double>(states[i].data(), dim), coeffs);
    }
    return tr;
}

void DenseTrajectory::start(std::size_t dim, double t0, std::span<const double> y0) {
    dim_ = dim;
    times_.assign(1, t0);
    states_.assign(y0.begin(), y0.end());
    coeffs_.clear();
}

void DenseTrajectory::push_interval(double t1, std::span<const double> y1,
                                    std::span<const double> coeffs) {
    times_.push_back(t1);
    states_.insert(states_.end(), y1.begin(), y1.end());
    coeffs_.insert(coeffs_.end(), coeffs.begin(), coeffs.end());
}

std::size_t DenseTrajectory::locate(double t) const {
    const double slack = 16.0 * kEps * (1.0 + std::abs(t_begin()) + std::abs(t_end()));
    if (t < t_begin() - slack || t > t_end() + slack) {
        throw std::out_of_range("DenseTrajectory: evaluation time outside span");
    }
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t idx = (it == times_.begin()) ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
    if (idx >= times_.size() - 1) idx = times_.size() - 2;
    return idx;
}

void DenseTrajectory::eval(double t, std::span<double> out) const {
    if (times_.size() == 1) {
        if (std::abs(t - times_[0]) > 16.0 * kEps * (1.0 + std::abs(times_[0]))) {
            throw std::out_of_range("DenseTrajectory: evaluation time outside span");
        }
        for (std::size_t j = 0; j < dim_; ++j) out[j] = states_[j];
        return;
    }
    const std::size_t i = locate(t);
    if (t == times_[i] || t == times_[i + 1]) {
        const std::size_t node = (t == times_[i]) ? i : i + 1;
        for (std::size_t j = 0; j < dim_; ++j) out[j] = states_[node * dim_ + j];
        return;
    }
    const double h = times_[i + 1] - times_[i];
    const double th = (t - times_[i]) / h;
    const double* base = coeffs_.data() + i * dim_ * kCoeffs;
    for (std::size_t j = 0; j < dim_; ++j) {
        const double* c = base + j * kCoeffs;
        out[j] = c[0] + th * (c[1] + th * (c[2] + th * (c[3] + th * c[4])));
    }
}

void DenseTrajectory::eval_derivative(double t, std::span<double> out) const {
    if (times_.size() == 1) {
        throw std::out_of_range("DenseTrajectory: derivative of a single-node trajectory");
    }
    std::size_t i = locate(t);
    const double h = times_[i + 1] - times_[i];
    const double th = std::clamp((t - times_[i]) / h, 0.0, 1.0);
    const double* base = coeffs_.data() + i * dim_ * kCoeffs;
    for (std::size_t j = 0; j < dim_; ++j) {
        const double* c = base + j * kCoeffs;
        out[j] = (c[1] + th * (2.0 * c[2] + th * (3.0 * c[3] + th * 4.0 * c[4]))) / h;
    }
}

double DenseTrajectory::eval_component(double t, std::size_t comp) const {
    std::vector<double> buf(dim_);
    eval(t, buf);
    return buf[comp];
}

double DenseTrajectory::eval_component_derivative(double t, std::size_t comp) const {
    std::vector<double> buf(dim_);
    eval_derivative(t, buf);
    return buf[comp];
}

void DenseTrajectory::transform_affine(std::span<const double> m, std::span<const double> b) {
    if (m.size() != dim_ * dim_ || b.size() != dim_) {
        throw std::invalid_argument("DenseTrajectory::transform_affine: bad dimensions");
    }
    std::vector<double> tmp(dim_);
    auto apply = [&](double* vec, bool add_offset) {
        for (std::size_t r = 0; r < dim_; ++r) {
            double acc = add_offset ? b[r] : 0.0;
            for (std::size_t c = 0; c < dim_; ++c) acc += m[r * dim_ + c] * vec[c];
            tmp[r] = acc;
        }
        std::copy(tmp.begin(), tmp.end(), vec);
    };
    for (std::size_t i = 0; i < node_count(); ++i) apply(states_.data() + i * dim_, true);
    const std::size_t intervals = node_count() == 0 ? 0 : node_count() - 1;
    std::vector<double> col(dim_);
    for (std::size_t i = 0; i < intervals; ++i) {
        double* base = coeffs_.data() + i * dim_ * kCoeffs;
        for (std::size_t p = 0; p < kCoeffs; ++p) {
            for (std::size_t j = 0; j < dim_; ++j) col[j] = base[j * kCoeffs + p];
            for (std::size_t r = 0; r < dim_; ++r) {
                double acc = (p == 0) ? b[r] : 0.0;
                for (std::size_t c = 0; c < dim_; ++c) acc += m[r * dim_ + c] * col[c];
                tmp[r] = acc;
            }
            for (std::size_t j = 0; j < dim_; ++j) base[j * kCoeffs + p] = tmp[j];
        }
    }
}

void DenseTrajectory::scale_time(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("DenseTrajectory::scale_time: s must be > 0");
    for (double& t : times_) t *= s;
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)

namespace {

constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0, kA74 = 125.0 / 192.0,
                 kA75 = -2187.0 / 6784.0, kA76 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
constexpr double kD1 = -12715105075.0 / 11282082432.0, kD3 = 87487479700.0 / 32700410799.0,
                 kD4 = -10690763975.0 / 1880347072.0, kD5 = 701980252875.0 / 199316789632.0,
                 kD6 = -1453857185.0 / 822651844.0, kD7 = 69997945.0 / 29380423.0;

// Interpolation quality factor: step acceptance runs this much tighter than the
// requested tolerance so dense output (and finite differences of it) stays clean.
constexpr double kDenseSafety = 1e-3;

}  // namespace

DenseTrajectory integrate_ode(const OdeField& field, std::span<const double> y0, double t0,
                              double t1, const Tolerances& tol) {
    tol.validate();
    if (t1 < t0) throw std::invalid_argument("integrate_ode: requires t1 >= t0");

    const std::size_t n = y0.size();
    DenseTrajectory out;
    out.start(n, t0, y0);
    if (t1 == t0) return out;

    const double atol = std::max(tol.abs_tol * kDenseSafety, 1e-14);
    const double rtol = std::max(tol.rel_tol * kDenseSafety, 1e-14);

    std::vector<double> y(y0.begin(), y0.end());
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> ytmp(n), ynew(n), coeffs(n * DenseTrajectory::kCoeffs);

    double t = t0;
    field(t, y, k1);
    double h = std::min((t1 - t0) * 1e-2, 0.1);
    if (!(h > 0.0)) h = (t1 - t0) * 1e-2;
    double err_prev = 1.0;
    long steps = 0;

    while (t < t1) {
        if (steps++ > tol.max_steps) {
            throw BudgetExceededError("integrate_ode: step budget exceeded",
                                      {std::numeric_limits<double>::quiet_NaN(), 0.0, steps});
        }
        const double h_min = 16.0 * kEps * std::max(1.0, std::abs(t));
        if (h < h_min) {
            throw SingularStepError("integrate_ode: step size underflow", std::move(out));
        }
        if (t + h > t1) h = t1 - t;

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * kA21 * k1[i];
        field(t + kC2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
        field(t + kC3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
        field(t + kC4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
        field(t + kC5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] +
                                  kA65 * k5[i]);
        field(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (kA71 * k1[i] + kA73 * k3[i] + kA74 * k4[i] + kA75 * k5[i] +
                                  kA76 * k6[i]);
        field(t + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                                  kE6 * k6[i] + kE7 * k7[i]);
            const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double q = e / sc;
            err += q * q;
        }
        err = std::sqrt(err / static_cast<double>(n));

        if (err <= 1.0 || !std::isfinite(err)) {
            if (!std::isfinite(err)) {
                // Non-finite stage: shrink hard; treated as a rejected step.
                h *= 0.1;
                continue;
            }
            // Dense output coefficients (quartic in theta).
            for (std::size_t i = 0; i < n; ++i) {
                const double dy = ynew[i] - y[i];
                const double bspl = h * k1[i] - dy;
                const double r1 = y[i];
                const double r2 = dy;
                const double r3 = bspl;
                const double r4 = dy - h * k7[i] - bspl;
                const double r5 = h * (kD1 * k1[i] + kD3 * k3[i] + kD4 * k4[i] + kD5 * k5[i] +
                                       kD6 * k6[i] + kD7 * k7[i]);
                double* c = coeffs.data() + i * DenseTrajectory::kCoeffs;
                c[0] = r1;
                c[1] = r2 + r3;
                c[2] = -r3 + r4 + r5;
                c[3] = -r4 - 2.0 * r5;
                c[4] = r5;
            }
            t += h;
            out.push_interval(t, ynew, coeffs);
            std::swap(y, ynew);
            std::swap(k1, k7);  // FSAL

            const double fac = 0.9 * std::pow(err > 0.0 ? err : 1e-10, -0.2) *
                               std::pow(err_prev, 0.08);
            h *= std::clamp(fac, 0.2, 6.0);
            err_prev = std::max(err, 1e-10);
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }
    return out;
}

}  // namespace balloon
