#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support/oracles.hpp"
#include "tsost/calculus.hpp"
#include "tsost/verify.hpp"

using tsost::ErrorKind;
using tsost::ExprFunc;
using tsost::parse_expr;
using tsost::TimeScale;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const tsost::Error& e) {
        return e.kind();
    }
    FAIL("expected tsost::Error");
    return ErrorKind::Degenerate;
}

std::vector<double> points_of(const TimeScale& T) {
    std::vector<double> out;
    for (const auto& s : T.segments()) {
        out.push_back(s.left);
    }
    return out;
}

// Random member of T, favouring segment endpoints.
double random_point(const TimeScale& T, tsost::Rng& rng) {
    const auto segs = T.segments();
    const auto& s = segs[static_cast<std::size_t>(rng.uniform_int(0, segs.size() - 1))];
    const double u = rng.uniform01();
    if (s.degenerate() || u < 0.3) {
        return s.left;
    }
    return u < 0.5 ? s.right : rng.uniform(s.left, s.right);
}

} // namespace

TEST_CASE("delta derivative examples") {
    const auto sq = parse_expr("t^2");
    // (4 - 1) / 1
    CHECK(tsost::delta_derivative(TimeScale::integers(0, 3), sq, 1) == 3);
    CHECK(tsost::delta_derivative(TimeScale::continuous(0, 1), sq, 0.5) == 1.0);
    // (16 - 4) / 2
    CHECK(tsost::delta_derivative(TimeScale::qlattice(2, 0, 3), sq, 2) == 6);
}

TEST_CASE("delta derivative errors") {
    const auto z = TimeScale::integers(0, 3);
    const auto sq = parse_expr("t^2");
    CHECK(kind_of([&] { tsost::delta_derivative(z, sq, 3); }) == ErrorKind::NotInKappa);
    CHECK(kind_of([&] { tsost::delta_derivative(z, sq, 0.5); }) == ErrorKind::NotInScale);
    CHECK(kind_of([&] {
              tsost::delta_derivative(TimeScale::continuous(1, 2), parse_expr("1/t"), 1.5);
          }) == ErrorKind::NotDifferentiable);
    // scattered points only need f values
    CHECK(tsost::delta_derivative(z, parse_expr("1/(t+1)"), 1) == doctest::Approx(1.0 / 3 - 0.5));
}

TEST_CASE("(t^2)^Δ = t + sigma(t) on every scale") {
    const auto sq = parse_expr("t^2");
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        tsost::Rng rng(seed);
        const auto T = tsost::random_timescale(rng, 6);
        for (int i = 0; i < 10; ++i) {
            const double t = random_point(T, rng);
            if (!T.in_kappa(t)) {
                continue;
            }
            CHECK(tsost::delta_derivative(T, sq, t) == doctest::Approx(t + T.sigma(t)).epsilon(1e-13));
        }
    }
}

TEST_CASE("delta integral examples") {
    const auto id = parse_expr("t");
    // 0 + 1 + 2
    CHECK(tsost::delta_integral(TimeScale::integers(0, 3), id, 0, 3) == 3);
    CHECK(tsost::delta_integral(TimeScale::continuous(0, 1), id, 0, 1) == doctest::Approx(0.5).epsilon(1e-14));
    // 0.5 + mu(1) f(1)
    CHECK(tsost::delta_integral(TimeScale::from_segments({{0, 1}, {2, 2}}), id, 0, 2) ==
          doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("sigma integral examples") {
    const auto id = parse_expr("t");
    const auto z3 = TimeScale::integers(0, 3);
    // sigma(0) + sigma(1) + sigma(2)
    CHECK(tsost::delta_integral_sigma(z3, id, 0, 3) == 6);
    // cross-check: b^2 - a^2 - ∫ t Δt
    CHECK(9 - tsost::delta_integral(z3, id, 0, 3) == 6);
    CHECK(tsost::delta_integral_sigma(TimeScale::continuous(0, 1), id, 0, 1) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(tsost::delta_integral_sigma(TimeScale::integers(0, 2), parse_expr("t^2"), 0, 2) == 5);
}

TEST_CASE("integral against independent oracles") {
    // discrete: jump-sum oracle; continuous: exact antiderivative oracle
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        tsost::Rng rng(seed);
        std::vector<double> c;
        for (int i = 0; i <= 5; ++i) {
            c.push_back(rng.uniform(-3, 3));
        }
        const auto f = ExprFunc::polynomial(c);
        auto g = [&](double t) { return oracle::poly_eval(c, t); };

        const auto q = tsost::random_timescale(rng, 6, tsost::ScaleChoice::QLattice);
        const auto pts = points_of(q);
        CHECK(tsost::delta_integral(q, f, q.min(), q.max()) ==
              doctest::Approx(oracle::discrete_integral(pts, q.min(), q.max(), g)).epsilon(1e-13));

        const auto cont = tsost::random_timescale(rng, 1, tsost::ScaleChoice::Continuous);
        CHECK(tsost::delta_integral(cont, f, cont.min(), cont.max()) ==
              doctest::Approx(oracle::poly_integral(c, cont.min(), cont.max())).epsilon(1e-12));
    }
}

TEST_CASE("purely discrete scales integrate exactly") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        tsost::Rng rng(seed);
        auto T = tsost::random_timescale(rng, 6);
        if (!T.purely_discrete()) {
            continue;
        }
        const auto f = tsost::random_function(rng, 6, false);
        const auto pts = points_of(T);
        const double expect = oracle::discrete_integral(pts, T.min(), T.max(), [&](double t) { return f(t); });
        CHECK(std::abs(tsost::delta_integral(T, f, T.min(), T.max()) - expect) <= 1e-12);
    }
}

TEST_CASE("integration laws: linearity, additivity, orientation, by parts") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        tsost::Rng rng(seed);
        const auto T = tsost::random_timescale(rng, 6);
        const auto f = tsost::random_function(rng, 4, false);
        const auto g = tsost::random_function(rng, 4, false);
        const double al = rng.uniform(-2, 2);
        const double be = rng.uniform(-2, 2);
        const double a = random_point(T, rng);
        const double b = random_point(T, rng);
        const double c = random_point(T, rng);

        const auto combo = parse_expr(std::to_string(al) + "*(" + f.to_string() + ") + " +
                                      std::to_string(be) + "*(" + g.to_string() + ")");
        const double al_exact = std::stod(std::to_string(al));
        const double be_exact = std::stod(std::to_string(be));
        const double lhs = tsost::delta_integral(T, combo, a, b);
        const double rhs = al_exact * tsost::delta_integral(T, f, a, b) +
                           be_exact * tsost::delta_integral(T, g, a, b);
        CHECK(std::abs(lhs - rhs) <= 1e-9);

        CHECK(std::abs(tsost::delta_integral(T, f, a, b) -
                       (tsost::delta_integral(T, f, a, c) + tsost::delta_integral(T, f, c, b))) <= 1e-9);
        CHECK(std::abs(tsost::delta_integral(T, f, a, b) + tsost::delta_integral(T, f, b, a)) <= 1e-12);
        CHECK(tsost::delta_integral(T, f, a, a) == 0.0);

        // ∫ f g^Δ = (fg)(b) - (fg)(a) - ∫ f^Δ g^σ
        const double lo = std::min(a, b);
        const double hi = std::max(a, b);
        if (lo == hi) {
            continue;
        }
        const tsost::DeltaDerivative fd(T, f);
        const tsost::DeltaDerivative gd(T, g);
        const double lhs_parts = tsost::delta_integrate(
            T, lo, hi, [&](double t, double s) { return f(t) * gd.at(t, s); });
        const double rhs_parts =
            f(hi) * g(hi) - f(lo) * g(lo) -
            tsost::delta_integrate(T, lo, hi, [&](double t, double s) { return fd.at(t, s) * g(s); });
        CHECK(std::abs(lhs_parts - rhs_parts) <= 1e-9);
    }
}

TEST_CASE("adaptive quadrature") {
    tsost::QuadratureSettings s;
    CHECK(tsost::integrate_dense([](double t) { return std::exp(t); }, 0, 1, s) ==
          doctest::Approx(std::exp(1.0) - 1).epsilon(1e-13));
    // oscillatory: needs subdivision
    CHECK(tsost::integrate_dense([](double t) { return std::sin(50 * t); }, 0, 3, s) ==
          doctest::Approx((1 - std::cos(150.0)) / 50).epsilon(1e-10));
    // integral zero: absolute tolerance terminates
    CHECK(std::abs(tsost::integrate_dense([](double t) { return t; }, -1, 1, s)) <= 1e-15);

    s.max_subdivisions = 2;
    CHECK(kind_of([&] {
              tsost::integrate_dense([](double t) { return std::sin(500 * t); }, 0, 10, s);
          }) == ErrorKind::QuadratureFailure);
    s = {};
    s.abs_tol = 0;
    CHECK(kind_of([&] { s.validate(); }) == ErrorKind::MalformedSpec);
}

TEST_CASE("monomial examples") {
    // numeric recursion vs (t-s)^2/2
    const auto R = TimeScale::continuous(0, 5);
    CHECK(tsost::monomial_h_generic(R, 2, 3, 1) == doctest::Approx(2).epsilon(1e-15));
    CHECK(tsost::monomial_h(R, 2, 3, 1) == 2);
    // 0 + 1 + 2
    const auto Z = TimeScale::integers(0, 6);
    CHECK(tsost::monomial_h_generic(Z, 2, 5, 2) == 3);
    CHECK(tsost::monomial_h(Z, 2, 5, 2) == oracle::binomial(3, 2));
    // mu(1)(1-1) + mu(2)(2-1)
    const auto Q = TimeScale::qlattice(2, 0, 3);
    CHECK(tsost::monomial_h_generic(Q, 2, 4, 1) == 2);
    CHECK(tsost::monomial_h(Q, 2, 4, 1) == 2);

    for (int k = 1; k <= 4; ++k) {
        CHECK(tsost::monomial_h(Z, k, 3, 3) == 0);
        CHECK(tsost::monomial_h(R, k, 2.5, 2.5) == 0);
    }
    CHECK(tsost::monomial_h(Z, 0, 1, 4) == 1);
    CHECK(kind_of([&] { tsost::monomial_h(Z, 5, 1, 2); }) == ErrorKind::DepthExceeded);
    CHECK(kind_of([&] { tsost::monomial_h(Z, 2, 1.5, 2); }) == ErrorKind::NotInScale);
}

TEST_CASE("higher monomials: recursion matches closed forms") {
    const auto Z = TimeScale::integers(-2, 6);
    const auto H = TimeScale::hgrid(0, 3, 0.5);
    const auto R = TimeScale::continuous(-1, 3);
    const auto Q = TimeScale::qlattice(3, -2, 2);
    for (int k = 0; k <= 4; ++k) {
        for (auto [t, s] : {std::pair{5.0, -1.0}, std::pair{0.0, 4.0}, std::pair{2.0, 2.0}}) {
            CHECK(tsost::monomial_h_generic(Z, k, t, s) == doctest::Approx(oracle::binomial(t - s, k)));
            CHECK(tsost::monomial_h_generic(H, k, t / 2, s / 2 + 0.5) ==
                  doctest::Approx(*tsost::monomial_h_closed_form(H, k, t / 2, s / 2 + 0.5)));
        }
        CHECK(tsost::monomial_h_generic(R, k, 2.5, -0.5) ==
              doctest::Approx(std::pow(3.0, k) / std::tgamma(k + 1.0)).epsilon(1e-10));
        CHECK(tsost::monomial_h_generic(Q, k, 9, 1.0 / 3) ==
              doctest::Approx(*tsost::monomial_h_closed_form(Q, k, 9, 1.0 / 3)).epsilon(1e-12));
    }
    CHECK_FALSE(tsost::monomial_h_closed_form(TimeScale::from_segments({{0, 1}, {2, 2}}), 2, 2, 0));
}

TEST_CASE("h_2 is non-negative in both argument orders") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        tsost::Rng rng(seed);
        const auto T = tsost::random_timescale(rng, 6);
        const double t = random_point(T, rng);
        const double s = random_point(T, rng);
        CHECK(tsost::h2_exact(T, t, s) >= 0.0);
        CHECK(tsost::h2_exact(T, s, t) >= 0.0);
    }
}
