#include "tsost/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace tsost {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// Points of random scales sit on a 1/64 grid inside [-2, 2].
constexpr double kWindow = 2.0;
constexpr double kQuantum = 1.0 / 64.0;

double quantized(Rng& rng, double lo, double hi) {
    const auto a = static_cast<std::int64_t>(std::ceil(lo / kQuantum));
    const auto b = static_cast<std::int64_t>(std::floor(hi / kQuantum));
    return static_cast<double>(rng.uniform_int(a, b)) * kQuantum;
}

TimeScale random_mixed(Rng& rng, int max_segments) {
    for (;;) {
        const auto count = rng.uniform_int(1, max_segments);
        std::vector<double> ends;
        for (std::int64_t i = 0; i < 2 * count; ++i) {
            ends.push_back(quantized(rng, -kWindow, kWindow));
        }
        std::sort(ends.begin(), ends.end());
        ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
        std::vector<Segment> segs;
        for (std::size_t i = 0; i + 1 < ends.size(); i += 2) {
            if (rng.chance(0.5)) {
                segs.push_back({ends[i], ends[i + 1]});
            } else {
                segs.push_back({ends[i], ends[i]});
                if (rng.chance(0.5)) {
                    segs.push_back({ends[i + 1], ends[i + 1]});
                }
            }
        }
        if (segs.size() > static_cast<std::size_t>(max_segments)) {
            segs.resize(static_cast<std::size_t>(max_segments));
        }
        try {
            return TimeScale::from_segments(std::move(segs));
        } catch (const Error&) {
            // fewer than two points; draw again
        }
    }
}

} // namespace

Rng::Rng(std::uint64_t seed) {
    for (auto& w : s_) {
        w = splitmix64(seed);
    }
}

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t state = seed;
    const std::uint64_t mixed = splitmix64(state) ^ (trial * 0xD1B54A32D192ED03ULL + 1);
    return Rng(mixed);
}

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
}

bool Rng::chance(double p) { return uniform01() < p; }

void VerifyConfig::validate() const {
    if (trials < 1) {
        throw Error(ErrorKind::MalformedSpec, "trials must be >= 1");
    }
    if (max_segments < 1 || max_k < 1 || max_poly_degree < 0 || threads < 0) {
        throw Error(ErrorKind::MalformedSpec, "max_segments, max_k must be >= 1");
    }
    for (double tol : {identity_tol, discrete_identity_tol, inequality_tol, closed_form_tol}) {
        if (!(tol > 0.0) || !std::isfinite(tol)) {
            throw Error(ErrorKind::MalformedSpec, "tolerances must be finite and positive");
        }
    }
}

TimeScale random_timescale(Rng& rng, int max_segments, ScaleChoice choice) {
    if (max_segments < 1) {
        throw Error(ErrorKind::MalformedSpec, "max_segments must be >= 1");
    }
    if (choice == ScaleChoice::Any) {
        const double u = rng.uniform01();
        choice = u < 0.15   ? ScaleChoice::Continuous
                 : u < 0.30 ? ScaleChoice::Integers
                 : u < 0.40 ? ScaleChoice::QLattice
                 : u < 0.50 ? ScaleChoice::HGrid
                            : ScaleChoice::Mixed;
    }
    // discrete families need two points, i.e. two segments
    const auto cap = static_cast<std::int64_t>(max_segments);
    if (cap < 2 && (choice == ScaleChoice::Integers || choice == ScaleChoice::QLattice ||
                    choice == ScaleChoice::HGrid)) {
        choice = ScaleChoice::Continuous;
    }
    switch (choice) {
    case ScaleChoice::Continuous: {
        const double a = quantized(rng, -kWindow, 0.0);
        const double b = quantized(rng, a + 0.25, std::min(kWindow, a + 2.5));
        return TimeScale::continuous(a, b);
    }
    case ScaleChoice::Integers: {
        const auto a = rng.uniform_int(-2, 1);
        const auto b = rng.uniform_int(a + 1, std::min<std::int64_t>(2, a + cap - 1));
        return TimeScale::integers(static_cast<double>(a), static_cast<double>(b));
    }
    case ScaleChoice::QLattice: {
        if (rng.chance(0.5)) {
            const auto n = static_cast<int>(rng.uniform_int(0, 1));
            const auto m = static_cast<int>(rng.uniform_int(std::max<std::int64_t>(n - 4, n - cap + 1), n - 1));
            return TimeScale::qlattice(2.0, m, n);
        }
        return TimeScale::qlattice(3.0, static_cast<int>(rng.uniform_int(std::max<std::int64_t>(-3, 1 - cap), -1)), 0);
    }
    case ScaleChoice::HGrid: {
        const double h = rng.chance(0.5) ? 0.25 : 0.5;
        const auto points = rng.uniform_int(2, std::min<std::int64_t>(9, cap));
        const double a = quantized(rng, -kWindow, kWindow - h * static_cast<double>(points - 1));
        return TimeScale::hgrid(a, a + h * static_cast<double>(points - 1), h);
    }
    case ScaleChoice::Mixed:
    case ScaleChoice::Any:
        break;
    }
    return random_mixed(rng, max_segments);
}

namespace {

// Random member of T ∩ [lo, hi]; endpoints of segments are favoured so that
// scattered points show up often.
double random_member(const TimeScale& scale, double lo, double hi, Rng& rng) {
    std::vector<Segment> pieces;
    for (const auto& s : scale.segments()) {
        const double l = std::max(s.left, lo);
        const double r = std::min(s.right, hi);
        if (l <= r) {
            pieces.push_back({l, r});
        }
    }
    const auto& piece = pieces[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(pieces.size()) - 1))];
    if (piece.degenerate()) {
        return piece.left;
    }
    const double u = rng.uniform01();
    if (u < 0.15) {
        return piece.left;
    }
    if (u < 0.30) {
        return piece.right;
    }
    return rng.uniform(piece.left, piece.right);
}

} // namespace

Partition random_partition(const TimeScale& scale, int max_k, Rng& rng) {
    if (max_k < 1) {
        throw Error(ErrorKind::MalformedSpec, "max_k must be >= 1");
    }
    const double a = scale.min();
    const double b = scale.max();
    auto k = static_cast<int>(rng.uniform_int(1, max_k));
    if (scale.purely_discrete()) {
        k = std::min<int>(k, static_cast<int>(scale.segments().size()) - 1);
    }
    std::vector<double> xs;
    for (int attempt = 0;; ++attempt) {
        xs = {a, b};
        for (int i = 1; i < k; ++i) {
            xs.push_back(random_member(scale, a, b, rng));
        }
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        if (static_cast<int>(xs.size()) == k + 1) {
            break;
        }
        // Degenerate draw: retry, shrinking k after a few collisions.
        if (attempt % 4 == 3 && k > 1) {
            --k;
        }
    }
    std::vector<double> alphas{a};
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        alphas.push_back(random_member(scale, xs[i], xs[i + 1], rng));
    }
    alphas.push_back(b);
    return Partition(scale, std::move(xs), std::move(alphas));
}

ExprFunc random_function(Rng& rng, int max_degree, bool transcendental) {
    const auto degree = rng.uniform_int(0, max_degree);
    std::vector<double> coeffs;
    for (std::int64_t i = 0; i <= degree; ++i) {
        coeffs.push_back(rng.uniform(-3.0, 3.0));
    }
    auto poly = ExprFunc::polynomial(coeffs);
    if (!transcendental) {
        return poly;
    }
    const double c1 = rng.uniform(-3.0, 3.0);
    const double c2 = rng.uniform(-1.0, 1.0);
    const double w = rng.uniform(0.5, 3.0);
    auto text = "(" + poly.to_string() + ") + " + std::to_string(c1) + "*sin(" +
                std::to_string(w) + "*t) + " + std::to_string(c2) + "*exp(t)";
    return parse_expr(text);
}

SharpnessResult sharpness_check(const TimeScale& scale) {
    const double a = scale.min();
    const double b = scale.max();
    const Partition p(scale, {a, b}, {a, b, b});
    const auto f = ExprFunc::variable();
    const auto report = evaluate_rule(p, f);
    SharpnessResult r;
    r.scale = scale.describe();
    r.abs_error = report.abs_error;
    r.bound = report.bound;
    r.gap = std::abs(report.abs_error - report.bound);
    r.relative_gap = report.bound > 0.0 ? r.gap / report.bound : r.gap;
    r.predicted = b * (b - a) - delta_integral(scale, f, a, b);
    return r;
}

std::vector<SharpnessResult> sharpness_suite() {
    std::vector<SharpnessResult> out;
    out.push_back(sharpness_check(TimeScale::continuous(0.0, 1.0)));
    for (double n : {2.0, 5.0, 10.0}) {
        out.push_back(sharpness_check(TimeScale::integers(0.0, n)));
    }
    out.push_back(sharpness_check(TimeScale::qlattice(2.0, 0, 3)));
    out.push_back(sharpness_check(TimeScale::from_segments({{0.0, 1.0}, {2.0, 2.0}, {3.0, 4.0}})));
    return out;
}

namespace {

struct TrialOutcome {
    bool discrete = false;
    double residual = 0.0;
    double excess = 0.0;
    std::optional<double> closed_form_diff;
    std::optional<std::string> error;
};

TrialOutcome run_trial(const VerifyConfig& config, std::uint64_t index) {
    TrialOutcome out;
    Rng rng = Rng::for_trial(config.seed, index);
    try {
        const auto scale = random_timescale(rng, config.max_segments);
        const auto part = random_partition(scale, config.max_k, rng);
        const auto f = random_function(rng, config.max_poly_degree, config.transcendental);
        out.discrete = scale.purely_discrete();
        out.residual = std::abs(montgomery_residual(part, f));
        const auto report = evaluate_rule(part, f);
        out.excess = report.abs_error - report.bound;
        if (scale.single_interval() || scale.unit_integer_grid()) {
            out.closed_form_diff =
                std::abs(closed_form_bound(part, report.m_used) - report.bound);
        }
    } catch (const std::exception& e) {
        out.error = "trial " + std::to_string(index) + ": " + e.what();
    }
    return out;
}

} // namespace

VerifyReport run_verification(const VerifyConfig& config) {
    config.validate();
    const auto n = static_cast<std::size_t>(config.trials);
    std::vector<TrialOutcome> outcomes(n);

    unsigned threads = config.threads == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                           : static_cast<unsigned>(config.threads);
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            outcomes[i] = run_trial(config, i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    outcomes[i] = run_trial(config, i);
                }
            });
        }
    }

    VerifyReport report;
    report.seed = config.seed;
    report.generator = Rng::kName;
    report.config = config;
    for (const auto& o : outcomes) {
        ++report.trials_run;
        if (o.error) {
            ++report.trial_errors;
            report.error_messages.push_back(*o.error);
            continue;
        }
        const double tol = o.discrete ? config.discrete_identity_tol : config.identity_tol;
        if (o.residual > tol) {
            ++report.identity_failures;
        }
        report.max_identity_residual = std::max(report.max_identity_residual, o.residual);
        if (o.discrete) {
            ++report.discrete_trials;
            report.max_identity_residual_discrete =
                std::max(report.max_identity_residual_discrete, o.residual);
        }
        if (o.excess > config.inequality_tol) {
            ++report.inequality_failures;
        }
        report.max_excess = std::max(report.max_excess, o.excess);
        if (o.closed_form_diff) {
            ++report.closed_form_checks;
            if (*o.closed_form_diff > config.closed_form_tol) {
                ++report.closed_form_failures;
            }
            report.max_closed_form_diff = std::max(report.max_closed_form_diff, *o.closed_form_diff);
        }
    }
    report.sharpness_results = sharpness_suite();
    return report;
}

} // namespace tsost
