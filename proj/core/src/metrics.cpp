#include "diffred/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "diffred/parallel.hpp"

namespace diffred {

namespace {

/// Kahan compensated accumulator.
struct Kahan {
    double sum = 0.0;
    double c = 0.0;

    void add(double v) {
        double y = v - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

void check_rows(const Matrix& A, const Matrix& At, const char* who) {
    if (A.rows() != At.rows()) {
        throw ConfigError(std::string(who) + ": row counts differ (" +
                          std::to_string(A.rows()) + " vs " + std::to_string(At.rows()) + ")");
    }
}

} // namespace

double m1(const Matrix& A, const Matrix& A_tilde) {
    return std::abs(m1_signed(A, A_tilde));
}

double m1_signed(const Matrix& A, const Matrix& A_tilde) {
    check_rows(A, A_tilde, "m1");
    double energy = A.squaredNorm();
    if (energy == 0.0) {
        throw NumericError("m1: zero-energy data matrix");
    }
    return 1.0 - A_tilde.squaredNorm() / energy;
}

double stress_exact(const Matrix& A, const Matrix& A_tilde, int threads) {
    check_rows(A, A_tilde, "stress_exact");
    const Index n = A.rows();
    if (n < 2) {
        throw ConfigError("stress_exact: need at least 2 points");
    }

    std::size_t total = static_cast<std::size_t>(n);
    std::vector<Kahan> num_parts(256), den_parts(256);
    std::size_t nblocks = 0;

    parallel_blocks(total, threads, [&](std::size_t block, std::size_t begin, std::size_t end) {
        Kahan num, den;
        for (std::size_t i = begin; i < end; ++i) {
            auto xi = A.row(static_cast<Index>(i));
            auto yi = A_tilde.row(static_cast<Index>(i));
            for (std::size_t j = 0; j < i; ++j) {
                double d = (xi - A.row(static_cast<Index>(j))).norm();
                double dt = (yi - A_tilde.row(static_cast<Index>(j))).norm();
                num.add((d - dt) * (d - dt));
                den.add(d * d);
            }
        }
        num_parts[block] = num;
        den_parts[block] = den;
    });
    nblocks = std::min<std::size_t>(total, 256);

    Kahan num, den;
    for (std::size_t b = 0; b < nblocks; ++b) {
        num.add(num_parts[b].sum);
        den.add(den_parts[b].sum);
    }
    if (den.sum <= 0.0) {
        throw NumericError("stress_exact: all points identical, zero distance denominator");
    }
    return std::sqrt(num.sum / den.sum);
}

SampledStress stress_sampled(const Matrix& A, const Matrix& A_tilde, std::size_t pair_count,
                             RandomStream stream, bool exhaustive_fallback) {
    check_rows(A, A_tilde, "stress_sampled");
    const auto n = static_cast<std::size_t>(A.rows());
    if (pair_count < 100) {
        throw ConfigError("stress_sampled: pair_count must be at least 100");
    }
    std::size_t all_pairs = n * (n - 1) / 2;
    if (exhaustive_fallback && pair_count >= all_pairs) {
        SampledStress out;
        out.estimate = stress_exact(A, A_tilde);
        out.standard_error = 0.0;
        out.exact = true;
        return out;
    }

    std::vector<double> xs(pair_count), ys(pair_count);
    Kahan sx, sy;
    for (std::size_t k = 0; k < pair_count; ++k) {
        std::size_t i = stream.next_u64() % n;
        std::size_t j = stream.next_u64() % (n - 1);
        if (j >= i) {
            ++j;
        }
        double d = (A.row(static_cast<Index>(i)) - A.row(static_cast<Index>(j))).norm();
        double dt = (A_tilde.row(static_cast<Index>(i)) - A_tilde.row(static_cast<Index>(j))).norm();
        xs[k] = (d - dt) * (d - dt);
        ys[k] = d * d;
        sx.add(xs[k]);
        sy.add(ys[k]);
    }
    if (sy.sum <= 0.0) {
        throw NumericError("stress_sampled: all sampled original distances are zero");
    }
    const auto m = static_cast<double>(pair_count);
    double ratio = sx.sum / sy.sum;
    double ybar = sy.sum / m;

    // Delta method on the ratio of means.
    Kahan resid;
    for (std::size_t k = 0; k < pair_count; ++k) {
        double r = xs[k] - ratio * ys[k];
        resid.add(r * r);
    }
    double var_ratio = resid.sum / (m - 1.0) / (m * ybar * ybar);

    SampledStress out;
    out.estimate = std::sqrt(ratio);
    out.standard_error =
        ratio > 0.0 ? std::sqrt(var_ratio) / (2.0 * std::sqrt(ratio)) : std::sqrt(var_ratio);
    return out;
}

IdentityCheck pairwise_energy_identity_check(const Matrix& A) {
    const Index n = A.rows();
    Kahan lhs;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < i; ++j) {
            lhs.add((A.row(i) - A.row(j)).squaredNorm());
        }
    }
    IdentityCheck out;
    out.lhs = lhs.sum;
    out.rhs = static_cast<double>(n) * A.squaredNorm();
    out.relative_gap = std::abs(out.lhs - out.rhs) / std::max(out.rhs, 1e-300);
    return out;
}

bool triangle_bound_check(double a, double b, double c) {
    double lhs = std::sqrt(a * a + b * b) - std::sqrt(a * a + c * c);
    return lhs * lhs <= (b - c) * (b - c) + 1e-12;
}

double beta_sensitivity(const std::vector<GridCell>& grid) {
    std::map<Index, std::vector<double>> by_d;
    for (const auto& cell : grid) {
        by_d[cell.d].push_back(cell.m1);
    }
    if (by_d.empty()) {
        throw ConfigError("beta_sensitivity: empty grid");
    }
    double acc = 0.0;
    for (const auto& [d, values] : by_d) {
        if (values.size() < 2) {
            throw ConfigError("beta_sensitivity: need at least 2 cells per target dimension, d=" +
                              std::to_string(d) + " has " + std::to_string(values.size()));
        }
        double mean = 0.0;
        for (double v : values) {
            mean += v;
        }
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) {
            var += (v - mean) * (v - mean);
        }
        var /= static_cast<double>(values.size()); // population variance
        acc += var;
    }
    return acc / static_cast<double>(by_d.size());
}

std::string StressMode::describe() const {
    if (exact) {
        return "EXACT";
    }
    return "SAMPLED(" + std::to_string(pair_count) + "," + std::to_string(seed) + ")";
}

nlohmann::ordered_json MetricReport::to_json() const {
    nlohmann::ordered_json j;
    j["m1"] = m1;
    j["stress"] = stress;
    j["stress_mode"] = stress_mode.describe();
    if (bound_value) {
        j["bound_value"] = *bound_value;
    } else {
        j["bound_value"] = nullptr;
    }
    j["wall_time_ms"] = wall_time_ms;
    j["provenance"] = provenance;
    return j;
}

} // namespace diffred
