#ifndef DIFFRED_SPECTRAL_HPP
#define DIFFRED_SPECTRAL_HPP

#include <utility>
#include <vector>

#include "diffred/matrix.hpp"

namespace diffred {

/// Top-k spectral data of a matrix: descending singular values, the
/// right singular basis, and the exact total energy ||A||_F^2 (computed
/// from A directly, not from the truncated spectrum).
struct SpectralSummary {
    Index k = 0;
    std::vector<double> sigma;
    Matrix V; // D x k, orthonormal columns
    double frob_sq = 0.0;
    bool converged = false;
    int iterations_used = 0;
};

/// Block subspace iteration with re-orthogonalization and oversampling,
/// run on the Gram side of smaller dimension. Convergence when the top-k
/// singular estimates change relatively less than tol between sweeps;
/// on non-convergence the best estimate is returned with converged=false.
/// Each V column is oriented so its largest-magnitude entry is positive.
SpectralSummary truncated_svd(const DataMatrix& A, Index k, double tol = 1e-10,
                              int max_iter = 1000);

struct ResidualPair {
    Matrix A_k1;   // rank-k1 approximation
    Matrix A_star; // A - A_k1
};

/// A_k1 = (A V_k1) V_k1^T; never forms U.
ResidualPair residual(const DataMatrix& A, const SpectralSummary& summary, Index k1);

/// ||A||_F^2 / sigma1^2.
double stable_rank(double frob_sq, double sigma1);

/// p = sum_{i<=k1} sigma_i^2 / ||A||_F^2.
double explained_variance(const SpectralSummary& summary, Index k1);

/// (k1, stable rank of the residual after removing k1 components) for
/// k1 = 0..k1_max. Truncated early if the residual energy vanishes.
std::vector<std::pair<Index, double>> residual_stable_rank_curve(const DataMatrix& A,
                                                                 Index k1_max,
                                                                 double tol = 1e-10,
                                                                 int max_iter = 1000);

} // namespace diffred

#endif
