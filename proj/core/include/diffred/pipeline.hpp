#ifndef DIFFRED_PIPELINE_HPP
#define DIFFRED_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "diffred/matrix.hpp"
#include "diffred/projection.hpp"
#include "diffred/spectral.hpp"

namespace diffred {

struct DiffRedConfig {
    Index k1 = 0;
    Index k2 = 0;
    std::size_t eta = 100;
    std::uint64_t seed = 0;
    double svd_tol = 1e-10;
    int svd_max_iter = 1000;
    int threads = 0; // 0 = auto

    Index d() const { return k1 + k2; }
};

enum class EmbeddingMethod { DiffRed, Pca, RMap, External };

const char* to_string(EmbeddingMethod m);

struct EmbeddingMatrix {
    Matrix values;
    EmbeddingMethod method = EmbeddingMethod::External;
    DiffRedConfig params;
    bool svd_converged = true;
    bool zero_residual = false; // k2 > 0 but the residual had no energy; R zero-filled
    MonteCarloResult mc;        // populated for DiffRed with k2 > 0

    Index rows() const { return values.rows(); }
    Index cols() const { return values.cols(); }
};

/// Embedding = [A V_k1 | best-of-eta random projection of the residual].
/// k1 = 0 degenerates to a pure best-of-eta random map, k2 = 0 to PCA.
/// The input must be column-centered.
EmbeddingMatrix diffred_embed(const DataMatrix& A, const DiffRedConfig& cfg);

/// Variant that reuses an already computed spectral summary (k >= k1).
EmbeddingMatrix diffred_embed(const DataMatrix& A, const SpectralSummary& summary,
                              const DiffRedConfig& cfg);

EmbeddingMatrix pca_embed(const DataMatrix& A, Index d, double svd_tol = 1e-10,
                          int svd_max_iter = 1000);

struct RmapRun {
    EmbeddingMatrix embedding;
    double m1 = 0.0;
    double stress = 0.0;
};

struct RmapReport {
    std::vector<RmapRun> runs;
    double m1_mean = 0.0;
    double m1_ci_half = 0.0;
    double stress_mean = 0.0;
    double stress_ci_half = 0.0;
    bool ci_defined = false; // needs alpha >= 2; normal approximation
};

/// alpha independent Gaussian maps applied to A (no PCA step, no
/// Monte-Carlo selection), with per-map metrics and a normal 95% CI.
RmapReport rmap_embed(const DataMatrix& A, Index d, std::size_t alpha, std::uint64_t seed,
                      int threads = 0);

/// sqrt((1 - p) / k2), the theoretical Stress bound used for selection.
double stress_bound(double p, Index k2);

struct HyperparameterChoice {
    struct Cell {
        Index k1 = 0;
        Index k2 = 0;
        double p = 0.0;
        double bound_value = 0.0;
    };

    Index k1 = 0;
    Index k2 = 0;
    double p = 0.0;
    double bound_value = 0.0;
    std::vector<Cell> scan;
};

/// Scans every split k1 + k2 = d with k2 >= 1 and returns the one with
/// the least bound value; ties go to the smaller k1.
HyperparameterChoice select_hyperparameters(const SpectralSummary& summary, Index d);

/// Rescales the embedding so its Frobenius energy matches the data's.
EmbeddingMatrix energy_match(const EmbeddingMatrix& embedding, const DataMatrix& A);

} // namespace diffred

#endif
