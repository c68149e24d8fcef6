#ifndef TSOST_TIMESCALE_HPP
#define TSOST_TIMESCALE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsost/error.hpp"

namespace tsost {

/// Closed segment [left, right]; left == right encodes an isolated point.
struct Segment {
    double left;
    double right;

    bool degenerate() const noexcept { return left == right; }
    bool operator==(const Segment&) const = default;
};

/// Which constructor family produced a scale. Closed forms for h_k and the
/// specialised Ostrowski bounds key off this.
enum class ScaleFamily { Continuous, Integers, HGrid, QLattice, Segments };

struct JumpValues {
    double sigma;
    double rho;
    double mu;
    double nu;
};

struct PointClass {
    bool right_dense;
    bool right_scattered;
    bool left_dense;
    bool left_scattered;

    bool isolated() const noexcept { return right_scattered && left_scattered; }
    bool dense() const noexcept { return right_dense && left_dense; }
};

inline constexpr double kDefaultMembershipTol = 1e-12;

/// A bounded time scale: a finite, ordered union of disjoint closed segments.
/// Immutable once built.
class TimeScale {
public:
    static TimeScale continuous(double a, double b);
    static TimeScale integers(double a, double b);
    static TimeScale hgrid(double a, double b, double h);
    /// q^Z ∩ [q^m, q^n] for integers m < n, q > 1.
    static TimeScale qlattice(double q, int m, int n);
    /// Sorts, merges touching segments and rejects overlaps.
    static TimeScale from_segments(std::vector<Segment> segments);

    std::span<const Segment> segments() const noexcept { return segments_; }
    double min() const noexcept { return segments_.front().left; }
    double max() const noexcept { return segments_.back().right; }
    ScaleFamily family() const noexcept { return family_; }
    /// Grid step for Integers/HGrid, ratio for QLattice, 0 otherwise.
    double parameter() const noexcept { return parameter_; }

    bool purely_discrete() const noexcept;
    /// A single non-degenerate segment, whatever constructor built it.
    bool single_interval() const noexcept;
    /// Every point isolated, integer valued, consecutive points 1 apart.
    bool unit_integer_grid() const noexcept;

    /// Nearest scale point within tol of t, if any.
    std::optional<double> snap(double t, double tol = kDefaultMembershipTol) const;
    bool contains(double t, double tol = kDefaultMembershipTol) const {
        return snap(t, tol).has_value();
    }
    /// Snapped member or NotInScale.
    double require_member(double t, double tol = kDefaultMembershipTol) const;

    /// Index of the segment holding the member t (t must already be snapped).
    std::size_t segment_index(double t) const;

    double sigma(double t) const;
    double rho(double t) const;
    JumpValues jumps(double t) const;
    PointClass classify(double t) const;
    bool in_kappa(double t) const;

    /// All right-scattered members in [a, b).
    std::vector<double> right_scattered_points(double a, double b) const;

    std::string describe() const;

    bool operator==(const TimeScale& other) const {
        return segments_ == other.segments_;
    }

private:
    TimeScale(std::vector<Segment> segments, ScaleFamily family, double parameter)
        : segments_(std::move(segments)), family_(family), parameter_(parameter) {}

    static std::vector<Segment> normalize(std::vector<Segment> segments);

    std::vector<Segment> segments_;
    ScaleFamily family_;
    double parameter_;
};

/// Free-function forms mirroring the member API.
JumpValues jump_operators(const TimeScale& scale, double t);
PointClass classify(const TimeScale& scale, double t);
bool in_kappa(const TimeScale& scale, double t);

} // namespace tsost

#endif // TSOST_TIMESCALE_HPP
