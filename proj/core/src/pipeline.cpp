#include "diffred/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "diffred/metrics.hpp"
#include "diffred/parallel.hpp"

namespace diffred {

const char* to_string(EmbeddingMethod m) {
    switch (m) {
    case EmbeddingMethod::DiffRed: return "DIFFRED";
    case EmbeddingMethod::Pca: return "PCA";
    case EmbeddingMethod::RMap: return "RMAP";
    case EmbeddingMethod::External: return "EXTERNAL";
    }
    return "UNKNOWN";
}

namespace {

void check_dims(const DataMatrix& A, Index d) {
    Index m = std::min(A.rows(), A.cols());
    if (d < 1 || d > m) {
        throw ConfigError("target dimension d=" + std::to_string(d) +
                          " out of range [1, " + std::to_string(m) + "]");
    }
}

} // namespace

EmbeddingMatrix diffred_embed(const DataMatrix& A, const DiffRedConfig& cfg) {
    if (cfg.k1 > 0) {
        SpectralSummary s = truncated_svd(A, cfg.k1, cfg.svd_tol, cfg.svd_max_iter);
        return diffred_embed(A, s, cfg);
    }
    SpectralSummary empty;
    empty.frob_sq = A.frob_sq();
    empty.converged = true;
    return diffred_embed(A, empty, cfg);
}

EmbeddingMatrix diffred_embed(const DataMatrix& A, const SpectralSummary& summary,
                              const DiffRedConfig& cfg) {
    if (!A.flags.column_centered) {
        throw ConfigError("diffred_embed: input must be column-centered (run preprocess)");
    }
    if (cfg.k1 < 0 || cfg.k2 < 0 || (cfg.k1 == 0 && cfg.k2 == 0)) {
        throw ConfigError("diffred_embed: need k1 + k2 >= 1 with nonnegative parts");
    }
    check_dims(A, cfg.d());
    if (cfg.k1 > summary.k) {
        throw ConfigError("diffred_embed: summary too shallow for k1");
    }

    EmbeddingMatrix out;
    out.method = EmbeddingMethod::DiffRed;
    out.params = cfg;
    out.svd_converged = (cfg.k1 == 0) || summary.converged;
    out.values.resize(A.rows(), cfg.d());

    Matrix a_star;
    if (cfg.k1 > 0) {
        ResidualPair rp = residual(A, summary, cfg.k1);
        out.values.leftCols(cfg.k1) = A.values * summary.V.leftCols(cfg.k1);
        a_star = std::move(rp.A_star);
    } else {
        a_star = A.values;
    }

    if (cfg.k2 > 0) {
        RandomStream master(cfg.seed, StreamPurpose::GaussianMap, 0);
        double res_energy = a_star.squaredNorm();
        if (res_energy <= 1e-300 || res_energy <= 1e-24 * A.frob_sq()) {
            // Data is exactly rank-k1; nothing left to project.
            out.values.rightCols(cfg.k2).setZero();
            out.zero_residual = true;
        } else {
            out.mc = monte_carlo_best(a_star, cfg.k2, cfg.eta, master, cfg.threads);
            out.values.rightCols(cfg.k2) = out.mc.T_min;
        }
    }
    return out;
}

EmbeddingMatrix pca_embed(const DataMatrix& A, Index d, double svd_tol, int svd_max_iter) {
    check_dims(A, d);
    SpectralSummary s = truncated_svd(A, d, svd_tol, svd_max_iter);
    EmbeddingMatrix out;
    out.method = EmbeddingMethod::Pca;
    out.params.k1 = d;
    out.params.k2 = 0;
    out.params.svd_tol = svd_tol;
    out.params.svd_max_iter = svd_max_iter;
    out.svd_converged = s.converged;
    out.values = A.values * s.V;
    return out;
}

RmapReport rmap_embed(const DataMatrix& A, Index d, std::size_t alpha, std::uint64_t seed,
                      int threads) {
    check_dims(A, d);
    if (alpha < 1) {
        throw ConfigError("rmap_embed: alpha must be at least 1");
    }
    if (A.frob_sq() == 0.0) {
        throw NumericError("rmap_embed: zero-energy data matrix");
    }

    RandomStream master(seed, StreamPurpose::RmapBaseline, 0);
    RmapReport report;
    report.runs.resize(alpha);

    parallel_blocks(alpha, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            GaussianMap g = sample_map(A.cols(), d, master.derived(i));
            RmapRun& run = report.runs[i];
            run.embedding.values = project(A.values, g);
            run.embedding.method = EmbeddingMethod::RMap;
            run.embedding.params.k1 = 0;
            run.embedding.params.k2 = d;
            run.embedding.params.seed = seed;
            run.m1 = m1(A.values, run.embedding.values);
            run.stress = stress_exact(A.values, run.embedding.values, 1);
        }
    });

    auto mean_ci = [alpha](auto getter, const std::vector<RmapRun>& runs, double& mean,
                           double& ci_half) {
        mean = 0.0;
        for (const auto& r : runs) {
            mean += getter(r);
        }
        mean /= static_cast<double>(alpha);
        if (alpha < 2) {
            ci_half = 0.0;
            return;
        }
        double var = 0.0;
        for (const auto& r : runs) {
            double dlt = getter(r) - mean;
            var += dlt * dlt;
        }
        var /= static_cast<double>(alpha - 1);
        ci_half = 1.959963984540054 * std::sqrt(var / static_cast<double>(alpha));
    };
    mean_ci([](const RmapRun& r) { return r.m1; }, report.runs, report.m1_mean, report.m1_ci_half);
    mean_ci([](const RmapRun& r) { return r.stress; }, report.runs, report.stress_mean,
            report.stress_ci_half);
    report.ci_defined = alpha >= 2;
    return report;
}

double stress_bound(double p, Index k2) {
    if (k2 < 1) {
        throw ConfigError("stress_bound: k2 must be at least 1");
    }
    return std::sqrt(std::max(0.0, 1.0 - p) / static_cast<double>(k2));
}

HyperparameterChoice select_hyperparameters(const SpectralSummary& summary, Index d) {
    if (d < 1) {
        throw ConfigError("select_hyperparameters: d must be at least 1");
    }
    if (summary.k < d) {
        throw ConfigError("select_hyperparameters: summary depth " + std::to_string(summary.k) +
                          " < d = " + std::to_string(d));
    }
    HyperparameterChoice choice;
    choice.bound_value = std::numeric_limits<double>::infinity();
    for (Index k1 = 0; k1 < d; ++k1) {
        Index k2 = d - k1;
        HyperparameterChoice::Cell cell;
        cell.k1 = k1;
        cell.k2 = k2;
        cell.p = explained_variance(summary, k1);
        cell.bound_value = stress_bound(cell.p, k2);
        choice.scan.push_back(cell);
        if (cell.bound_value < choice.bound_value) {
            choice.k1 = k1;
            choice.k2 = k2;
            choice.p = cell.p;
            choice.bound_value = cell.bound_value;
        }
    }
    return choice;
}

EmbeddingMatrix energy_match(const EmbeddingMatrix& embedding, const DataMatrix& A) {
    double e = embedding.values.squaredNorm();
    if (e == 0.0) {
        throw NumericError("energy_match: zero embedding");
    }
    EmbeddingMatrix out = embedding;
    out.values *= std::sqrt(A.frob_sq() / e);
    return out;
}

} // namespace diffred
