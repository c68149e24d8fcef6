#include "tsost/timescale.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tsost {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw Error(ErrorKind::MalformedSpec, std::string(what) + " must be finite");
    }
}

} // namespace

std::vector<Segment> TimeScale::normalize(std::vector<Segment> segments) {
    if (segments.empty()) {
        throw Error(ErrorKind::EmptyScale, "time scale has no points");
    }
    for (const auto& s : segments) {
        require_finite(s.left, "segment endpoint");
        require_finite(s.right, "segment endpoint");
        if (s.left > s.right) {
            throw Error(ErrorKind::MalformedSpec,
                        "segment [" + fmt(s.left) + ", " + fmt(s.right) + "] has left > right");
        }
    }
    std::sort(segments.begin(), segments.end(),
              [](const Segment& x, const Segment& y) {
                  return x.left < y.left || (x.left == y.left && x.right < y.right);
              });

    std::vector<Segment> out;
    out.reserve(segments.size());
    for (const auto& s : segments) {
        if (!out.empty()) {
            auto& last = out.back();
            if (s.left < last.right || s == last) {
                throw Error(ErrorKind::MalformedSpec,
                            "segments [" + fmt(last.left) + ", " + fmt(last.right) + "] and [" +
                                fmt(s.left) + ", " + fmt(s.right) + "] overlap");
            }
            if (s.left == last.right) {
                last.right = s.right;
                continue;
            }
        }
        out.push_back(s);
    }
    if (!(out.front().left < out.back().right)) {
        throw Error(ErrorKind::MalformedSpec, "time scale needs at least two points");
    }
    return out;
}

TimeScale TimeScale::continuous(double a, double b) {
    require_finite(a, "a");
    require_finite(b, "b");
    if (!(a < b)) {
        throw Error(ErrorKind::MalformedSpec, "continuous scale needs a < b");
    }
    return TimeScale({{a, b}}, ScaleFamily::Continuous, 0.0);
}

TimeScale TimeScale::integers(double a, double b) {
    require_finite(a, "a");
    require_finite(b, "b");
    if (!(a < b)) {
        throw Error(ErrorKind::MalformedSpec, "integer scale needs a < b");
    }
    const double lo = std::ceil(a);
    const double hi = std::floor(b);
    if (lo > hi) {
        throw Error(ErrorKind::EmptyScale, "no integers in [" + fmt(a) + ", " + fmt(b) + "]");
    }
    if (lo == hi) {
        throw Error(ErrorKind::MalformedSpec, "integer scale needs at least two points");
    }
    std::vector<Segment> segs;
    for (double k = lo; k <= hi; k += 1.0) {
        segs.push_back({k, k});
    }
    return TimeScale(std::move(segs), ScaleFamily::Integers, 1.0);
}

TimeScale TimeScale::hgrid(double a, double b, double h) {
    require_finite(a, "a");
    require_finite(b, "b");
    require_finite(h, "h");
    if (!(h > 0.0)) {
        throw Error(ErrorKind::MalformedSpec, "grid step h must be positive");
    }
    if (!(a < b)) {
        throw Error(ErrorKind::MalformedSpec, "grid scale needs a < b");
    }
    const auto steps = static_cast<long long>(std::floor((b - a) / h + 1e-9));
    if (steps < 1) {
        throw Error(ErrorKind::MalformedSpec, "grid scale needs at least two points");
    }
    std::vector<Segment> segs;
    segs.reserve(static_cast<std::size_t>(steps) + 1);
    for (long long i = 0; i <= steps; ++i) {
        const double p = a + static_cast<double>(i) * h;
        segs.push_back({p, p});
    }
    auto family = h == 1.0 ? ScaleFamily::Integers : ScaleFamily::HGrid;
    if (family == ScaleFamily::Integers && a != std::floor(a)) {
        family = ScaleFamily::HGrid;
    }
    return TimeScale(std::move(segs), family, h);
}

TimeScale TimeScale::qlattice(double q, int m, int n) {
    require_finite(q, "q");
    if (!(q > 1.0)) {
        throw Error(ErrorKind::MalformedSpec, "q-lattice needs q > 1");
    }
    if (m >= n) {
        throw Error(ErrorKind::MalformedSpec, "q-lattice needs m < n");
    }
    std::vector<Segment> segs;
    for (int k = m; k <= n; ++k) {
        const double p = std::pow(q, k);
        segs.push_back({p, p});
    }
    return TimeScale(std::move(segs), ScaleFamily::QLattice, q);
}

TimeScale TimeScale::from_segments(std::vector<Segment> segments) {
    auto norm = normalize(std::move(segments));
    return TimeScale(std::move(norm), ScaleFamily::Segments, 0.0);
}

bool TimeScale::purely_discrete() const noexcept {
    return std::all_of(segments_.begin(), segments_.end(),
                       [](const Segment& s) { return s.degenerate(); });
}

bool TimeScale::single_interval() const noexcept {
    return segments_.size() == 1 && !segments_.front().degenerate();
}

bool TimeScale::unit_integer_grid() const noexcept {
    if (!purely_discrete()) {
        return false;
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const double p = segments_[i].left;
        if (p != std::floor(p)) {
            return false;
        }
        if (i > 0 && p - segments_[i - 1].left != 1.0) {
            return false;
        }
    }
    return true;
}

std::optional<double> TimeScale::snap(double t, double tol) const {
    if (!std::isfinite(t)) {
        return std::nullopt;
    }
    // First segment whose right end is >= t - tol.
    auto it = std::lower_bound(segments_.begin(), segments_.end(), t - tol,
                               [](const Segment& s, double v) { return s.right < v; });
    std::optional<double> best;
    double best_dist = 0.0;
    for (; it != segments_.end() && it->left <= t + tol; ++it) {
        const double p = std::clamp(t, it->left, it->right);
        const double d = std::abs(p - t);
        if (d <= tol && (!best || d < best_dist)) {
            best = p;
            best_dist = d;
        }
    }
    return best;
}

double TimeScale::require_member(double t, double tol) const {
    auto p = snap(t, tol);
    if (!p) {
        throw Error(ErrorKind::NotInScale, fmt(t) + " is not a member of " + describe());
    }
    return *p;
}

std::size_t TimeScale::segment_index(double t) const {
    auto it = std::lower_bound(segments_.begin(), segments_.end(), t,
                               [](const Segment& s, double v) { return s.right < v; });
    if (it == segments_.end() || t < it->left) {
        throw Error(ErrorKind::NotInScale, fmt(t) + " is not a member of " + describe());
    }
    return static_cast<std::size_t>(it - segments_.begin());
}

double TimeScale::sigma(double t) const {
    t = require_member(t);
    const auto i = segment_index(t);
    if (t < segments_[i].right) {
        return t;
    }
    return i + 1 < segments_.size() ? segments_[i + 1].left : t;
}

double TimeScale::rho(double t) const {
    t = require_member(t);
    const auto i = segment_index(t);
    if (t > segments_[i].left) {
        return t;
    }
    return i > 0 ? segments_[i - 1].right : t;
}

JumpValues TimeScale::jumps(double t) const {
    t = require_member(t);
    const double s = sigma(t);
    const double r = rho(t);
    return {s, r, s - t, t - r};
}

PointClass TimeScale::classify(double t) const {
    t = require_member(t);
    const auto j = jumps(t);
    PointClass pc{};
    pc.right_scattered = j.sigma > t;
    pc.right_dense = !pc.right_scattered;
    pc.left_scattered = j.rho < t;
    pc.left_dense = !pc.left_scattered;
    return pc;
}

bool TimeScale::in_kappa(double t) const {
    t = require_member(t);
    return !(t == max() && rho(t) < t);
}

std::vector<double> TimeScale::right_scattered_points(double a, double b) const {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
        const double r = segments_[i].right;
        if (r >= a && r < b) {
            out.push_back(r);
        }
    }
    return out;
}

std::string TimeScale::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (family_) {
    case ScaleFamily::Continuous:
        os << "continuous[" << min() << ", " << max() << "]";
        return os.str();
    case ScaleFamily::Integers:
        os << "integers[" << min() << ", " << max() << "]";
        return os.str();
    case ScaleFamily::HGrid:
        os << "hgrid[" << min() << ", " << max() << "; h=" << parameter_ << "]";
        return os.str();
    case ScaleFamily::QLattice:
        os << "qlattice[q=" << parameter_ << "; " << min() << ", " << max() << "]";
        return os.str();
    case ScaleFamily::Segments:
        break;
    }
    os << "segments{";
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (i) {
            os << ", ";
        }
        if (segments_[i].degenerate()) {
            os << segments_[i].left;
        } else {
            os << "[" << segments_[i].left << ", " << segments_[i].right << "]";
        }
    }
    os << "}";
    return os.str();
}

JumpValues jump_operators(const TimeScale& scale, double t) { return scale.jumps(t); }
PointClass classify(const TimeScale& scale, double t) { return scale.classify(t); }
bool in_kappa(const TimeScale& scale, double t) { return scale.in_kappa(t); }

} // namespace tsost
