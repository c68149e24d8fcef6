#ifndef TSOST_OSTROWSKI_HPP
#define TSOST_OSTROWSKI_HPP

#include <optional>
#include <string>
#include <vector>

#include "tsost/calculus.hpp"
#include "tsost/expr.hpp"
#include "tsost/timescale.hpp"

namespace tsost {

/// Division a = x_0 < ... < x_k = b of [a, b] ∩ T together with the weight
/// points alpha_0 = a, alpha_i ∈ [x_{i-1}, x_i], alpha_{k+1} = b. Every point is
/// a member of the scale.
class Partition {
public:
    /// Validates and snaps (within the membership tolerance) every point.
    /// Throws MembershipViolation or OrderViolation.
    Partition(TimeScale scale, std::vector<double> xs, std::vector<double> alphas);

    const TimeScale& scale() const noexcept { return scale_; }
    const std::vector<double>& xs() const noexcept { return xs_; }
    const std::vector<double>& alphas() const noexcept { return alphas_; }
    std::size_t k() const noexcept { return xs_.size() - 1; }
    double a() const noexcept { return xs_.front(); }
    double b() const noexcept { return xs_.back(); }

    /// Quadrature weights alpha_{i+1} - alpha_i, i = 0..k.
    std::vector<double> weights() const;

private:
    TimeScale scale_;
    std::vector<double> xs_;
    std::vector<double> alphas_;
};

struct QuadReport {
    double q_value;
    double integral_sigma;
    double abs_error;
    double bound;
    double m_used;
    double tightness;
};

struct MontgomeryTerms {
    double quadrature;
    double integral_sigma;
    double kernel_integral;
    double residual;
};

struct SupSettings {
    int samples_per_segment = 1024;
    double safety_factor = 1.0 + 1e-9;
};

/// Piecewise-linear Montgomery kernel: t - alpha_{i+1} on [x_i, x_{i+1}).
double kernel_K(const Partition& p, double t);

/// sum_{i=0}^{k} (alpha_{i+1} - alpha_i) f(x_i)
double quadrature(const Partition& p, const ExprFunc& f);

MontgomeryTerms montgomery_terms(const Partition& p, const ExprFunc& f,
                                 const QuadratureSettings& settings = {});
/// quadrature - ∫ f^σ Δt - ∫ K f^Δ Δt; zero up to rounding when the identity holds.
double montgomery_residual(const Partition& p, const ExprFunc& f,
                           const QuadratureSettings& settings = {});

/// sup |f^Δ| over T^κ ∩ [a, b). Exact at right-scattered points; sampled with
/// golden-section refinement on dense pieces.
double sup_delta_derivative(const TimeScale& scale, const ExprFunc& f, double a, double b,
                            const SupSettings& sup = {});

/// M * sum_{i<k} (h_2(x_i, alpha_{i+1}) + h_2(x_{i+1}, alpha_{i+1}))
double error_bound(const Partition& p, double M, const QuadratureSettings& settings = {});

QuadReport evaluate_rule(const Partition& p, const ExprFunc& f,
                         const QuadratureSettings& settings = {}, const SupSettings& sup = {});

/// Specialised bound on a single interval (squared-distance form) or on a
/// unit integer grid (extra linear term). WrongScaleKind otherwise.
double closed_form_bound(const Partition& p, double M);

enum class RuleKind {
    Rectangle,
    LeftRectangle,
    RightRectangle,
    Trapezoid,
    ThreePoint,
    OstrowskiPoint,
    Midpoint,
    Simpson,
    AvgMidTrap,
    Custom,
};

std::string_view to_string(RuleKind kind) noexcept;
std::optional<RuleKind> rule_kind_from_string(std::string_view name) noexcept;

struct RuleSpec {
    RuleKind kind = RuleKind::Trapezoid;
    std::optional<double> alpha;   // rectangle
    std::optional<double> x;       // three_point, ostrowski_point, simpson
    std::optional<double> alpha1;  // three_point
    std::optional<double> alpha2;  // three_point
    std::vector<double> xs;        // custom
    std::vector<double> alphas;    // custom
};

struct Relocation {
    std::string role;
    double requested;
    double used;
};

struct RuleBuild {
    Partition partition;
    std::vector<Relocation> relocations;
};

/// Partition realising a named rule on [a, b] ∩ T. Required points must be
/// members (MembershipViolation) unless snap is set, in which case they move
/// to the nearest scale point and each move is reported.
RuleBuild build_rule(const TimeScale& scale, double a, double b, const RuleSpec& rule,
                     bool snap = false);

Partition make_rule(const TimeScale& scale, double a, double b, const RuleSpec& rule);

} // namespace tsost

#endif // TSOST_OSTROWSKI_HPP
