#ifndef DIFFRED_METRICS_HPP
#define DIFFRED_METRICS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "diffred/matrix.hpp"
#include "diffred/random.hpp"

namespace diffred {

/// |1 - ||At||_F^2 / ||A||_F^2|.
double m1(const Matrix& A, const Matrix& A_tilde);

/// Signed variant 1 - ||At||_F^2 / ||A||_F^2, for diagnostics.
double m1_signed(const Matrix& A, const Matrix& A_tilde);

/// Normalized RMS of pairwise distance distortion over unordered pairs,
/// with compensated summation. O(n^2).
double stress_exact(const Matrix& A, const Matrix& A_tilde, int threads = 0);

struct SampledStress {
    double estimate = 0.0;
    double standard_error = 0.0;
    bool exact = false; // true when the exhaustive fallback kicked in
};

/// Ratio-of-sums estimate over uniformly sampled unordered pairs;
/// standard error via the delta method. Falls back to the exact value
/// when pair_count covers all pairs and the fallback is allowed.
SampledStress stress_sampled(const Matrix& A, const Matrix& A_tilde, std::size_t pair_count,
                             RandomStream stream, bool exhaustive_fallback = true);

struct IdentityCheck {
    double lhs = 0.0; // brute-force pair sum
    double rhs = 0.0; // n * ||A||_F^2
    double relative_gap = 0.0;
};

/// Checks sum_{j<i} ||x_i - x_j||^2 = n ||A||_F^2, which holds exactly
/// for column-centered data.
IdentityCheck pairwise_energy_identity_check(const Matrix& A);

/// (sqrt(a^2+b^2) - sqrt(a^2+c^2))^2 <= (b-c)^2 + 1e-12 for nonneg inputs.
bool triangle_bound_check(double a, double b, double c);

struct GridCell {
    Index d = 0;
    Index k1 = 0;
    Index k2 = 0;
    double m1 = 0.0;
};

/// Average over target dimensions of the population variance of M1
/// across the (k1, k2) cells at that dimension. Needs at least two
/// cells per dimension.
double beta_sensitivity(const std::vector<GridCell>& grid);

struct StressMode {
    bool exact = true;
    std::size_t pair_count = 0;
    std::uint64_t seed = 0;

    std::string describe() const;
};

struct MetricReport {
    double m1 = 0.0;
    double stress = 0.0;
    StressMode stress_mode;
    std::optional<double> bound_value;
    double wall_time_ms = 0.0;
    nlohmann::ordered_json provenance;

    nlohmann::ordered_json to_json() const;
};

} // namespace diffred

#endif
