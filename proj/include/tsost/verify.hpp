#ifndef TSOST_VERIFY_HPP
#define TSOST_VERIFY_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tsost/expr.hpp"
#include "tsost/ostrowski.hpp"
#include "tsost/timescale.hpp"

namespace tsost {

/// xoshiro256** seeded through splitmix64. Doubles are built from the top 53
/// bits so sequences are identical on every platform.
class Rng {
public:
    static constexpr const char* kName = "xoshiro256ss-splitmix64/v1";

    explicit Rng(std::uint64_t seed);
    /// Independent stream for one trial of a run.
    static Rng for_trial(std::uint64_t seed, std::uint64_t trial);

    std::uint64_t next();
    double uniform01();
    double uniform(double lo, double hi);
    /// Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    bool chance(double p);

private:
    std::array<std::uint64_t, 4> s_;
};

enum class ScaleChoice { Any, Continuous, Integers, HGrid, QLattice, Mixed };

struct VerifyConfig {
    std::uint64_t seed = 0;
    int trials = 1000;
    int max_segments = 6;
    int max_k = 5;
    int max_poly_degree = 6;
    double identity_tol = 1e-9;
    double discrete_identity_tol = 1e-12;
    double inequality_tol = 1e-9;
    double closed_form_tol = 1e-12;
    bool transcendental = false;
    int threads = 1;  // 0 = hardware concurrency

    void validate() const;
};

struct SharpnessResult {
    std::string scale;
    double abs_error;
    double bound;
    double gap;           // |abs_error - bound|
    double relative_gap;  // gap / bound
    double predicted;     // b(b-a) - ∫ t Δt
};

struct VerifyReport {
    std::uint64_t seed;
    std::string generator;
    VerifyConfig config;
    int trials_run = 0;
    int identity_failures = 0;
    int inequality_failures = 0;
    int closed_form_checks = 0;
    int closed_form_failures = 0;
    int trial_errors = 0;
    int discrete_trials = 0;
    double max_identity_residual = 0.0;
    double max_identity_residual_discrete = 0.0;
    double max_excess = -std::numeric_limits<double>::infinity();
    double max_closed_form_diff = 0.0;
    std::vector<SharpnessResult> sharpness_results;
    std::vector<std::string> error_messages;
};

TimeScale random_timescale(Rng& rng, int max_segments, ScaleChoice choice = ScaleChoice::Any);
Partition random_partition(const TimeScale& scale, int max_k, Rng& rng);
ExprFunc random_function(Rng& rng, int max_degree, bool transcendental);

/// f(t) = t with xs = (a, b), alphas = (a, b, b): the configuration where the
/// bound is attained.
SharpnessResult sharpness_check(const TimeScale& scale);
std::vector<SharpnessResult> sharpness_suite();

VerifyReport run_verification(const VerifyConfig& config);

} // namespace tsost

#endif // TSOST_VERIFY_HPP
