#include "tsost/calculus.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace tsost {

void QuadratureSettings::validate() const {
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol) || !(rel_tol > 0.0) ||
        !std::isfinite(rel_tol)) {
        throw Error(ErrorKind::MalformedSpec, "quadrature tolerances must be finite and positive");
    }
    if (max_subdivisions < 1) {
        throw Error(ErrorKind::MalformedSpec, "max_subdivisions must be at least 1");
    }
}

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        carry_ += (sum_ - t) + x;
    } else {
        carry_ += (x - t) + sum_;
    }
    sum_ = t;
}

namespace {

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
    double abs_value;

    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk15(const std::function<double(double)>& g, double lo, double hi) {
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
    using Gauss = boost::math::quadrature::gauss<double, 7>;
    static const auto& kx = Kronrod::abscissa();
    static const auto& kw = Kronrod::weights();
    static const auto& gw = Gauss::weights();

    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    const double f0 = g(mid);
    double kronrod = kw[0] * f0;
    double gauss = gw[0] * f0;
    double abs_k = kw[0] * std::abs(f0);
    for (std::size_t i = 1; i < kx.size(); ++i) {
        const double dx = half * kx[i];
        const double fl = g(mid - dx);
        const double fr = g(mid + dx);
        kronrod += kw[i] * (fl + fr);
        abs_k += kw[i] * (std::abs(fl) + std::abs(fr));
        // Gauss nodes sit at the even Kronrod indices.
        if (i % 2 == 0) {
            gauss += gw[i / 2] * (fl + fr);
        }
    }
    return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half), abs_k * std::abs(half)};
}

} // namespace

double integrate_dense(const std::function<double(double)>& g, double lo, double hi,
                       const QuadratureSettings& settings) {
    if (lo == hi) {
        return 0.0;
    }
    constexpr double kRoundoff = 50.0 * std::numeric_limits<double>::epsilon();

    std::priority_queue<Panel> panels;
    auto first = gk15(g, lo, hi);
    double total = first.value;
    double total_err = first.error;
    double total_abs = first.abs_value;
    panels.push(first);

    int subdivisions = 0;
    for (;;) {
        const double tol = std::max({settings.abs_tol, settings.rel_tol * std::abs(total),
                                     kRoundoff * total_abs});
        if (total_err <= tol) {
            return total;
        }
        if (subdivisions >= settings.max_subdivisions) {
            throw Error(ErrorKind::QuadratureFailure,
                        "no convergence on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                            "] after " + std::to_string(subdivisions) +
                            " subdivisions (error estimate " + std::to_string(total_err) + ")");
        }
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Panel left = gk15(g, worst.lo, mid);
        const Panel right = gk15(g, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_abs += left.abs_value + right.abs_value - worst.abs_value;
        panels.push(left);
        panels.push(right);
        ++subdivisions;
        if (!std::isfinite(total)) {
            throw Error(ErrorKind::QuadratureFailure, "integrand produced a non-finite value");
        }
    }
}

DeltaDerivative::DeltaDerivative(const TimeScale& scale, ExprFunc f)
    : scale_(&scale), f_(std::move(f)), df_(f_.derivative()) {}

double DeltaDerivative::at(double t, double sigma) const {
    if (sigma > t) {
        return (f_(sigma) - f_(t)) / (sigma - t);
    }
    if (!f_.smooth()) {
        throw Error(ErrorKind::NotDifferentiable,
                    "f = " + f_.to_string() + " is outside the smooth subset at dense point");
    }
    return df_(t);
}

double DeltaDerivative::operator()(double t) const {
    t = scale_->require_member(t);
    if (!scale_->in_kappa(t)) {
        throw Error(ErrorKind::NotInKappa, "f^Δ is undefined at a left-scattered maximum");
    }
    return at(t, scale_->sigma(t));
}

double delta_derivative(const TimeScale& scale, const ExprFunc& f, double t) {
    return DeltaDerivative(scale, f)(t);
}

double delta_integral(const TimeScale& scale, const ExprFunc& f, double a, double b,
                      const QuadratureSettings& settings) {
    settings.validate();
    return delta_integrate(
        scale, a, b, [&](double t, double) { return f(t); }, settings);
}

double delta_integral_sigma(const TimeScale& scale, const ExprFunc& f, double a, double b,
                            const QuadratureSettings& settings) {
    settings.validate();
    return delta_integrate(
        scale, a, b, [&](double, double sigma) { return f(sigma); }, settings);
}

double h2_exact(const TimeScale& scale, double t, double s) {
    t = scale.require_member(t);
    s = scale.require_member(s);
    if (t == s) {
        return 0.0;
    }
    const double lo = std::min(t, s);
    const double hi = std::max(t, s);
    const double v = delta_decompose(
        scale, lo, hi,
        [s](double l, double r) { return (r - l) * (0.5 * (r + l) - s); },
        [s](double tau, double) { return tau - s; });
    return t > s ? v : -v;
}

namespace {

void check_degree(int k) {
    if (k < 0) {
        throw Error(ErrorKind::OutOfRange, "monomial degree must be non-negative");
    }
    if (k > kMaxMonomialDegree) {
        throw Error(ErrorKind::DepthExceeded,
                    "monomial degree " + std::to_string(k) + " exceeds the depth limit " +
                        std::to_string(kMaxMonomialDegree));
    }
}

double generic_h(const TimeScale& scale, int k, double t, double s,
                 const QuadratureSettings& settings) {
    switch (k) {
    case 0: return 1.0;
    case 1: return t - s;
    case 2: return h2_exact(scale, t, s);
    default:
        return delta_integrate(
            scale, s, t,
            [&](double tau, double) { return generic_h(scale, k - 1, tau, s, settings); },
            settings);
    }
}

} // namespace

double monomial_h_generic(const TimeScale& scale, int k, double t, double s,
                          const QuadratureSettings& settings) {
    check_degree(k);
    settings.validate();
    t = scale.require_member(t);
    s = scale.require_member(s);
    return generic_h(scale, k, t, s, settings);
}

std::optional<double> monomial_h_closed_form(const TimeScale& scale, int k, double t, double s) {
    check_degree(k);
    t = scale.require_member(t);
    s = scale.require_member(s);

    const auto family = scale.family();
    if (family == ScaleFamily::Continuous || scale.single_interval()) {
        double v = 1.0;
        for (int i = 1; i <= k; ++i) {
            v *= (t - s) / i;
        }
        return v;
    }
    double step = 0.0;
    if (family == ScaleFamily::Integers || scale.unit_integer_grid()) {
        step = 1.0;
    } else if (family == ScaleFamily::HGrid) {
        step = scale.parameter();
    }
    if (step > 0.0) {
        // h^k * binomial((t-s)/h, k) written as a product to stay exact on Z.
        double v = 1.0;
        for (int i = 0; i < k; ++i) {
            v *= (t - s - i * step) / (i + 1);
        }
        return v;
    }
    if (family == ScaleFamily::QLattice) {
        const double q = scale.parameter();
        double v = 1.0;
        double q_pow = 1.0;
        double q_sum = 0.0;
        for (int nu = 0; nu < k; ++nu) {
            q_sum += q_pow;
            v *= (t - q_pow * s) / q_sum;
            q_pow *= q;
        }
        return v;
    }
    return std::nullopt;
}

double monomial_h(const TimeScale& scale, int k, double t, double s,
                  const QuadratureSettings& settings) {
    const double generic = monomial_h_generic(scale, k, t, s, settings);
    const auto closed = monomial_h_closed_form(scale, k, t, s);
    if (!closed) {
        return generic;
    }
    if (std::abs(*closed - generic) > 1e-9 * (1.0 + std::abs(*closed))) {
        throw Error(ErrorKind::QuadratureFailure,
                    "closed-form h_" + std::to_string(k) + " disagrees with the recursion (" +
                        std::to_string(*closed) + " vs " + std::to_string(generic) + ")");
    }
    return *closed;
}

} // namespace tsost
