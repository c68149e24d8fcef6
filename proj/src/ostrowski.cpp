#include "tsost/ostrowski.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tsost {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

double member_or_violation(const TimeScale& scale, double t, const std::string& role) {
    auto p = scale.snap(t);
    if (!p) {
        throw Error(ErrorKind::MembershipViolation,
                    role + " = " + fmt(t) + " is not a member of " + scale.describe());
    }
    return *p;
}

} // namespace

Partition::Partition(TimeScale scale, std::vector<double> xs, std::vector<double> alphas)
    : scale_(std::move(scale)), xs_(std::move(xs)), alphas_(std::move(alphas)) {
    if (xs_.size() < 2) {
        throw Error(ErrorKind::OrderViolation, "a partition needs k >= 1 (at least two x points)");
    }
    if (alphas_.size() != xs_.size() + 1) {
        throw Error(ErrorKind::OrderViolation,
                    "a partition with " + std::to_string(xs_.size()) + " x points needs " +
                        std::to_string(xs_.size() + 1) + " alpha points");
    }
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        xs_[i] = member_or_violation(scale_, xs_[i], "x_" + std::to_string(i));
    }
    for (std::size_t i = 0; i < alphas_.size(); ++i) {
        alphas_[i] = member_or_violation(scale_, alphas_[i], "alpha_" + std::to_string(i));
    }
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        if (!(xs_[i - 1] < xs_[i])) {
            throw Error(ErrorKind::OrderViolation, "x points must be strictly increasing");
        }
    }
    if (alphas_.front() != xs_.front() || alphas_.back() != xs_.back()) {
        throw Error(ErrorKind::OrderViolation, "alpha_0 must equal a and alpha_{k+1} must equal b");
    }
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        if (alphas_[i] < xs_[i - 1] || alphas_[i] > xs_[i]) {
            throw Error(ErrorKind::OrderViolation,
                        "alpha_" + std::to_string(i) + " = " + fmt(alphas_[i]) +
                            " lies outside [x_" + std::to_string(i - 1) + ", x_" +
                            std::to_string(i) + "]");
        }
    }
}

std::vector<double> Partition::weights() const {
    std::vector<double> w(xs_.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = alphas_[i + 1] - alphas_[i];
    }
    return w;
}

double kernel_K(const Partition& p, double t) {
    if (!(t >= p.a() && t <= p.b())) {
        throw Error(ErrorKind::OutOfRange, "t = " + fmt(t) + " lies outside [a, b]");
    }
    const auto& xs = p.xs();
    auto it = std::upper_bound(xs.begin(), xs.end(), t);
    auto i = static_cast<std::size_t>(it - xs.begin()) - 1;
    i = std::min(i, p.k() - 1);
    return t - p.alphas()[i + 1];
}

double quadrature(const Partition& p, const ExprFunc& f) {
    CompensatedSum acc;
    const auto& xs = p.xs();
    const auto& al = p.alphas();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double w = al[i + 1] - al[i];
        if (w != 0.0) {
            acc.add(w * f(xs[i]));
        }
    }
    return acc.value();
}

MontgomeryTerms montgomery_terms(const Partition& p, const ExprFunc& f,
                                 const QuadratureSettings& settings) {
    settings.validate();
    const auto& scale = p.scale();
    const DeltaDerivative fd(scale, f);

    MontgomeryTerms out{};
    out.quadrature = quadrature(p, f);
    out.integral_sigma = delta_integral_sigma(scale, f, p.a(), p.b(), settings);

    CompensatedSum kernel;
    const auto& xs = p.xs();
    const auto& al = p.alphas();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double alpha = al[i + 1];
        kernel.add(delta_integrate(
            scale, xs[i], xs[i + 1],
            [&](double t, double sigma) { return (t - alpha) * fd.at(t, sigma); }, settings));
    }
    out.kernel_integral = kernel.value();

    CompensatedSum r;
    r.add(out.quadrature);
    r.add(-out.integral_sigma);
    r.add(-out.kernel_integral);
    out.residual = r.value();
    return out;
}

double montgomery_residual(const Partition& p, const ExprFunc& f,
                           const QuadratureSettings& settings) {
    return montgomery_terms(p, f, settings).residual;
}

namespace {

// Maximise g on [lo, hi] by golden-section search.
double golden_max(const std::function<double(double)>& g, double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double c = hi - kInvPhi * (hi - lo);
    double d = lo + kInvPhi * (hi - lo);
    double gc = g(c);
    double gd = g(d);
    double best = std::max(gc, gd);
    for (int iter = 0; iter < 80 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++iter) {
        if (gc > gd) {
            hi = d;
            d = c;
            gd = gc;
            c = hi - kInvPhi * (hi - lo);
            gc = g(c);
            best = std::max(best, gc);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + kInvPhi * (hi - lo);
            gd = g(d);
            best = std::max(best, gd);
        }
    }
    return best;
}

bool is_constant(const ExprFunc& f) { return f.root()->op == ExprOp::Const; }

} // namespace

double sup_delta_derivative(const TimeScale& scale, const ExprFunc& f, double a, double b,
                            const SupSettings& sup) {
    a = scale.require_member(a);
    b = scale.require_member(b);
    if (!(a < b)) {
        throw Error(ErrorKind::OrderViolation, "sup of |f^Δ| needs a < b");
    }
    if (sup.samples_per_segment < 2 || !(sup.safety_factor >= 1.0)) {
        throw Error(ErrorKind::MalformedSpec, "sampling needs >= 2 points and safety factor >= 1");
    }
    const DeltaDerivative fd(scale, f);
    const auto& df = fd.classical();

    double exact = 0.0;
    for (double t : scale.right_scattered_points(a, b)) {
        exact = std::max(exact, std::abs(fd.at(t, scale.sigma(t))));
    }

    double sampled = 0.0;
    bool any_sampled = false;
    for (const auto& seg : scale.segments()) {
        const double lo = std::max(seg.left, a);
        const double hi = std::min(seg.right, b);
        if (!(hi > lo)) {
            continue;
        }
        if (!f.smooth()) {
            throw Error(ErrorKind::NotDifferentiable,
                        "f = " + f.to_string() + " is outside the smooth subset on a dense segment");
        }
        const auto abs_df = [&](double t) { return std::abs(df(t)); };
        if (is_constant(df.derivative())) {
            // f' is constant: the endpoint value is the exact supremum.
            exact = std::max({exact, abs_df(lo), abs_df(hi)});
            continue;
        }
        const int n = sup.samples_per_segment;
        const double step = (hi - lo) / (n - 1);
        int best_j = 0;
        double best = -1.0;
        for (int j = 0; j < n; ++j) {
            const double t = j == n - 1 ? hi : lo + j * step;
            const double v = abs_df(t);
            if (v > best) {
                best = v;
                best_j = j;
            }
        }
        const double left = std::max(lo, lo + (best_j - 1) * step);
        const double right = std::min(hi, lo + (best_j + 1) * step);
        best = std::max(best, golden_max(abs_df, left, right));
        sampled = std::max(sampled, best);
        any_sampled = true;
    }
    if (any_sampled) {
        sampled *= sup.safety_factor;
    }
    return std::max(exact, sampled);
}

double error_bound(const Partition& p, double M, const QuadratureSettings& settings) {
    settings.validate();
    if (!(M >= 0.0) || !std::isfinite(M)) {
        throw Error(ErrorKind::OutOfRange, "M must be finite and non-negative");
    }
    if (M == 0.0) {
        return 0.0;
    }
    CompensatedSum acc;
    const auto& xs = p.xs();
    const auto& al = p.alphas();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        acc.add(h2_exact(p.scale(), xs[i], al[i + 1]));
        acc.add(h2_exact(p.scale(), xs[i + 1], al[i + 1]));
    }
    return M * std::max(0.0, acc.value());
}

QuadReport evaluate_rule(const Partition& p, const ExprFunc& f,
                         const QuadratureSettings& settings, const SupSettings& sup) {
    settings.validate();
    QuadReport r{};
    r.q_value = quadrature(p, f);
    r.integral_sigma = delta_integral_sigma(p.scale(), f, p.a(), p.b(), settings);
    r.abs_error = std::abs(r.q_value - r.integral_sigma);
    r.m_used = sup_delta_derivative(p.scale(), f, p.a(), p.b(), sup);
    r.bound = error_bound(p, r.m_used, settings);
    r.tightness = r.bound > 0.0 ? r.abs_error / r.bound : 0.0;
    return r;
}

double closed_form_bound(const Partition& p, double M) {
    const auto& scale = p.scale();
    const bool continuous = scale.single_interval();
    const bool integer = scale.unit_integer_grid();
    if (!continuous && !integer) {
        throw Error(ErrorKind::WrongScaleKind,
                    "closed-form bound needs a single interval or a unit integer grid, got " +
                        scale.describe());
    }
    if (!(M >= 0.0) || !std::isfinite(M)) {
        throw Error(ErrorKind::OutOfRange, "M must be finite and non-negative");
    }
    const auto& xs = p.xs();
    const auto& al = p.alphas();
    double spread = 0.0;
    double offset_sq = 0.0;
    double offset = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double len = xs[i + 1] - xs[i];
        const double d = al[i + 1] - 0.5 * (xs[i] + xs[i + 1]);
        spread += len * len;
        offset_sq += d * d;
        offset += d;
    }
    double total = 0.25 * spread + offset_sq;
    if (integer) {
        total += offset;
    }
    return M * total;
}

std::string_view to_string(RuleKind kind) noexcept {
    switch (kind) {
    case RuleKind::Rectangle: return "rectangle";
    case RuleKind::LeftRectangle: return "left_rectangle";
    case RuleKind::RightRectangle: return "right_rectangle";
    case RuleKind::Trapezoid: return "trapezoid";
    case RuleKind::ThreePoint: return "three_point";
    case RuleKind::OstrowskiPoint: return "ostrowski_point";
    case RuleKind::Midpoint: return "midpoint";
    case RuleKind::Simpson: return "simpson";
    case RuleKind::AvgMidTrap: return "avg_mid_trap";
    case RuleKind::Custom: return "custom";
    }
    return "unknown";
}

std::optional<RuleKind> rule_kind_from_string(std::string_view name) noexcept {
    for (auto k : {RuleKind::Rectangle, RuleKind::LeftRectangle, RuleKind::RightRectangle,
                   RuleKind::Trapezoid, RuleKind::ThreePoint, RuleKind::OstrowskiPoint,
                   RuleKind::Midpoint, RuleKind::Simpson, RuleKind::AvgMidTrap,
                   RuleKind::Custom}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

namespace {

class RuleBuilder {
public:
    RuleBuilder(const TimeScale& scale, bool snap) : scale_(scale), snap_(snap) {}

    double point(double t, const std::string& role) {
        if (auto p = scale_.snap(t)) {
            return *p;
        }
        if (!snap_) {
            throw Error(ErrorKind::MembershipViolation,
                        role + " = " + fmt(t) + " is not a member of " + scale_.describe());
        }
        const double used = *scale_.snap(t, std::numeric_limits<double>::infinity());
        relocations_.push_back({role, t, used});
        return used;
    }

    std::vector<Relocation> take_relocations() { return std::move(relocations_); }

private:
    const TimeScale& scale_;
    bool snap_;
    std::vector<Relocation> relocations_;
};

double required(const std::optional<double>& v, const char* name, RuleKind kind) {
    if (!v) {
        throw Error(ErrorKind::MalformedSpec,
                    std::string(to_string(kind)) + " rule needs parameter '" + name + "'");
    }
    return *v;
}

} // namespace

RuleBuild build_rule(const TimeScale& scale, double a, double b, const RuleSpec& rule,
                     bool snap) {
    RuleBuilder pts(scale, snap);
    a = pts.point(a, "a");
    b = pts.point(b, "b");
    if (!(a < b)) {
        throw Error(ErrorKind::OrderViolation, "rule needs a < b");
    }

    auto rectangle = [&](double alpha) {
        return Partition(scale, {a, b}, {a, pts.point(alpha, "alpha"), b});
    };
    // k = 2 rule with interior node x. With x at an endpoint the empty
    // sub-interval carries zero weight and zero bound, so it collapses to k = 1.
    auto three_point = [&](double x, double alpha1, double alpha2) {
        x = pts.point(x, "x");
        alpha1 = pts.point(alpha1, "alpha1");
        alpha2 = pts.point(alpha2, "alpha2");
        if (x == a && alpha1 == a) {
            return Partition(scale, {a, b}, {a, alpha2, b});
        }
        if (x == b && alpha2 == b) {
            return Partition(scale, {a, b}, {a, alpha1, b});
        }
        return Partition(scale, {a, x, b}, {a, alpha1, alpha2, b});
    };
    const double mid = 0.5 * (a + b);

    std::optional<Partition> part;
    switch (rule.kind) {
    case RuleKind::Rectangle:
        part = rectangle(required(rule.alpha, "alpha", rule.kind));
        break;
    case RuleKind::LeftRectangle:
        part = rectangle(b);
        break;
    case RuleKind::RightRectangle:
        part = rectangle(a);
        break;
    case RuleKind::Trapezoid:
        part = rectangle(mid);
        break;
    case RuleKind::ThreePoint:
        part = three_point(required(rule.x, "x", rule.kind),
                           required(rule.alpha1, "alpha1", rule.kind),
                           required(rule.alpha2, "alpha2", rule.kind));
        break;
    case RuleKind::OstrowskiPoint:
        part = three_point(required(rule.x, "x", rule.kind), a, b);
        break;
    case RuleKind::Midpoint:
        part = three_point(mid, a, b);
        break;
    case RuleKind::Simpson:
        part = three_point(rule.x.value_or(mid), (5.0 * a + b) / 6.0, (a + 5.0 * b) / 6.0);
        break;
    case RuleKind::AvgMidTrap:
        part = three_point(mid, (3.0 * a + b) / 4.0, (a + 3.0 * b) / 4.0);
        break;
    case RuleKind::Custom: {
        if (rule.xs.size() < 2 || rule.alphas.size() != rule.xs.size() + 1) {
            throw Error(ErrorKind::MalformedSpec,
                        "custom rule needs xs (>= 2 points) and alphas (one more than xs)");
        }
        std::vector<double> xs;
        std::vector<double> alphas;
        for (std::size_t i = 0; i < rule.xs.size(); ++i) {
            xs.push_back(pts.point(rule.xs[i], "xs[" + std::to_string(i) + "]"));
        }
        for (std::size_t i = 0; i < rule.alphas.size(); ++i) {
            alphas.push_back(pts.point(rule.alphas[i], "alphas[" + std::to_string(i) + "]"));
        }
        part = Partition(scale, std::move(xs), std::move(alphas));
        break;
    }
    }
    return {std::move(*part), pts.take_relocations()};
}

Partition make_rule(const TimeScale& scale, double a, double b, const RuleSpec& rule) {
    return build_rule(scale, a, b, rule, false).partition;
}

} // namespace tsost
