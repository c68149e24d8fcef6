// Test-only reference computations. Nothing here calls into the
// decomposition code paths it is used to check.
#ifndef TSOST_TESTS_ORACLES_HPP
#define TSOST_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

/// Sorted point list of a purely discrete scale given as raw values.
inline std::vector<double> sorted_points(std::vector<double> pts) {
    std::sort(pts.begin(), pts.end());
    return pts;
}

/// inf{s in pts : s > t}, or t if none.
inline double next_point(const std::vector<double>& pts, double t) {
    for (double p : pts) {
        if (p > t) {
            return p;
        }
    }
    return t;
}

inline double prev_point(const std::vector<double>& pts, double t) {
    double best = t;
    for (double p : pts) {
        if (p < t) {
            best = p;
        }
    }
    return best;
}

/// ∫_a^b g Δt on a finite point set, a <= b, straight from the jump sum.
inline double discrete_integral(const std::vector<double>& pts, double a, double b,
                                const std::function<double(double)>& g) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i] >= a && pts[i] < b) {
            s += (pts[i + 1] - pts[i]) * g(pts[i]);
        }
    }
    return s;
}

/// Exact ∫_lo^hi of sum c_i t^i via the antiderivative.
inline double poly_integral(const std::vector<double>& c, double lo, double hi) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        s += c[i] * (std::pow(hi, n) - std::pow(lo, n)) / n;
    }
    return s;
}

inline double poly_eval(const std::vector<double>& c, double t) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) {
        v = v * t + c[i];
    }
    return v;
}

inline double central_difference(const std::function<double(double)>& f, double t, double h) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

/// Generalized binomial x(x-1)...(x-k+1)/k!.
inline double binomial(double x, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) {
        v = v * (x - i) / (i + 1);
    }
    return v;
}

} // namespace oracle

#endif
