#ifndef TSOST_CALCULUS_HPP
#define TSOST_CALCULUS_HPP

#include <algorithm>
#include <functional>
#include <optional>

#include "tsost/expr.hpp"
#include "tsost/timescale.hpp"

namespace tsost {

/// Controls the adaptive Gauss-Kronrod quadrature used on dense segments.
struct QuadratureSettings {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 10'000;

    void validate() const;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Classical integral of g over [lo, hi] by adaptive G7/K15.
double integrate_dense(const std::function<double(double)>& g, double lo, double hi,
                       const QuadratureSettings& settings);

/// Walks [a, b] ∩ T for members a <= b: dense_part(lo, hi) is called for each
/// maximal non-degenerate piece, jump_part(t, sigma) for every right-scattered
/// t in [a, b) and is weighted by mu(t) = sigma - t.
template <class DensePart, class JumpPart>
double delta_decompose(const TimeScale& scale, double a, double b, DensePart&& dense_part,
                       JumpPart&& jump_part) {
    CompensatedSum acc;
    const auto segs = scale.segments();
    const auto first = scale.segment_index(a);
    const auto last = scale.segment_index(b);
    for (auto i = first; i <= last; ++i) {
        const double lo = std::max(segs[i].left, a);
        const double hi = std::min(segs[i].right, b);
        if (hi > lo) {
            acc.add(dense_part(lo, hi));
        }
        if (i < last) {
            const double t = segs[i].right;
            const double sigma = segs[i + 1].left;
            acc.add((sigma - t) * jump_part(t, sigma));
        }
    }
    return acc.value();
}

/// Δ-integral of a pointwise integrand g(t, sigma(t)) from a to b. On dense
/// pieces g is called with sigma == t.
template <class Integrand>
double delta_integrate(const TimeScale& scale, double a, double b, Integrand&& g,
                       const QuadratureSettings& settings = {}) {
    a = scale.require_member(a);
    b = scale.require_member(b);
    if (a == b) {
        return 0.0;
    }
    const bool flip = a > b;
    if (flip) {
        std::swap(a, b);
    }
    const double v = delta_decompose(
        scale, a, b,
        [&](double lo, double hi) {
            return integrate_dense([&](double t) { return g(t, t); }, lo, hi, settings);
        },
        [&](double t, double sigma) { return g(t, sigma); });
    return flip ? -v : v;
}

/// f^Δ with the classical derivative precomputed.
class DeltaDerivative {
public:
    DeltaDerivative(const TimeScale& scale, ExprFunc f);

    /// Value at a member t whose forward jump is sigma (sigma == t when dense).
    double at(double t, double sigma) const;
    double operator()(double t) const;

    const ExprFunc& function() const noexcept { return f_; }
    const ExprFunc& classical() const noexcept { return df_; }

private:
    const TimeScale* scale_;
    ExprFunc f_;
    ExprFunc df_;
};

double delta_derivative(const TimeScale& scale, const ExprFunc& f, double t);

double delta_integral(const TimeScale& scale, const ExprFunc& f, double a, double b,
                      const QuadratureSettings& settings = {});

/// ∫_a^b f(σ(t)) Δt
double delta_integral_sigma(const TimeScale& scale, const ExprFunc& f, double a, double b,
                            const QuadratureSettings& settings = {});

inline constexpr int kMaxMonomialDegree = 4;

/// h_2(t, s) by exact per-segment antiderivatives plus jump terms.
double h2_exact(const TimeScale& scale, double t, double s);

/// h_k(t, s) from the recursive definition alone (h_2 exact, h_3 and h_4 by
/// nested Δ-integration). Never consults a closed form.
double monomial_h_generic(const TimeScale& scale, int k, double t, double s,
                          const QuadratureSettings& settings = {});

/// Closed form for the canonical families: (t-s)^k/k! on an interval,
/// generalized binomials on grids, the q-product on q-lattices.
std::optional<double> monomial_h_closed_form(const TimeScale& scale, int k, double t, double s);

/// Generalized monomial h_k(t, s), k <= 4. Uses the closed form when the
/// scale has one, after cross-checking it against the recursion.
double monomial_h(const TimeScale& scale, int k, double t, double s,
                  const QuadratureSettings& settings = {});

} // namespace tsost

#endif // TSOST_CALCULUS_HPP
