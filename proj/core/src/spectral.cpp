#include "diffred/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "diffred/random.hpp"

namespace diffred {

namespace {

constexpr std::uint64_t kSvdInitSeed = 0xd1ffedc0ffee5eedULL;

Matrix thin_q(const Matrix& x) {
    Eigen::HouseholderQR<Matrix> qr(x);
    return qr.householderQ() * Matrix::Identity(x.rows(), x.cols());
}

// Two-pass modified Gram-Schmidt; keeps column order. Columns that turn
// out linearly dependent are replaced with deterministic random fill.
void reorthonormalize(Matrix& v, RandomStream& fill) {
    const Index cols = v.cols();
    for (int pass = 0; pass < 2; ++pass) {
        for (Index j = 0; j < cols; ++j) {
            for (Index i = 0; i < j; ++i) {
                v.col(j) -= v.col(i).dot(v.col(j)) * v.col(i);
            }
            double norm = v.col(j).norm();
            if (norm < 1e-12) {
                for (Index r = 0; r < v.rows(); ++r) {
                    v(r, j) = fill.next_gaussian();
                }
                for (Index i = 0; i < j; ++i) {
                    v.col(j) -= v.col(i).dot(v.col(j)) * v.col(i);
                }
                norm = v.col(j).norm();
            }
            v.col(j) /= norm;
        }
    }
}

void fix_signs(Matrix& v) {
    for (Index j = 0; j < v.cols(); ++j) {
        Index imax = 0;
        v.col(j).cwiseAbs().maxCoeff(&imax);
        if (v(imax, j) < 0.0) {
            v.col(j) = -v.col(j);
        }
    }
}

} // namespace

SpectralSummary truncated_svd(const DataMatrix& A, Index k, double tol, int max_iter) {
    const Index n = A.rows();
    const Index D = A.cols();
    const Index m = std::min(n, D);
    if (k < 1 || k > m) {
        throw ConfigError("truncated_svd: k=" + std::to_string(k) +
                          " out of range [1, " + std::to_string(m) + "]");
    }
    if (!(tol > 0.0)) {
        throw ConfigError("truncated_svd: tol must be positive");
    }
    const Matrix& a = A.values;
    const bool right_side = (D <= n); // iterate in R^D, on A^T A

    const Index l = std::min(k + std::min<Index>(10, m - k), m);

    RandomStream init(kSvdInitSeed, StreamPurpose::SvdInit, 0);
    Matrix x(right_side ? D : n, l);
    for (Index i = 0; i < x.rows(); ++i) {
        for (Index j = 0; j < l; ++j) {
            x(i, j) = init.next_gaussian();
        }
    }
    x = thin_q(x);

    std::vector<double> sigma(static_cast<std::size_t>(l), 0.0);
    std::vector<double> prev(static_cast<std::size_t>(l), -1.0);
    bool converged = false;
    int iters = 0;

    for (iters = 1; iters <= max_iter; ++iters) {
        if (right_side) {
            x = thin_q(a.transpose() * (a * x));
        } else {
            x = thin_q(a * (a.transpose() * x));
        }
        // Rayleigh-Ritz on the iterated subspace.
        Matrix b = right_side ? Matrix(a * x) : Matrix(a.transpose() * x);
        Matrix g = b.transpose() * b;
        Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
        // ascending eigenvalues; reverse to descending
        Matrix w(l, l);
        for (Index j = 0; j < l; ++j) {
            w.col(j) = eig.eigenvectors().col(l - 1 - j);
            sigma[static_cast<std::size_t>(j)] =
                std::sqrt(std::max(0.0, eig.eigenvalues()(l - 1 - j)));
        }
        x = x * w;

        double denom = std::max(sigma[0], 1e-300);
        double change = 0.0;
        for (Index j = 0; j < k; ++j) {
            change = std::max(change, std::abs(sigma[static_cast<std::size_t>(j)] -
                                               prev[static_cast<std::size_t>(j)]) / denom);
        }
        prev = sigma;
        if (change < tol) {
            converged = true;
            break;
        }
    }
    if (iters > max_iter) {
        iters = max_iter;
    }

    SpectralSummary out;
    out.k = k;
    out.frob_sq = a.squaredNorm();
    out.converged = converged;
    out.iterations_used = iters;
    out.sigma.assign(sigma.begin(), sigma.begin() + k);

    RandomStream fill(kSvdInitSeed, StreamPurpose::SvdInit, 1);
    if (right_side) {
        out.V = x.leftCols(k);
        reorthonormalize(out.V, fill);
    } else {
        // x holds left singular vectors; recover V = A^T u_i / sigma_i.
        Matrix v_raw = a.transpose() * x.leftCols(k);
        out.V.resize(D, k);
        double scale = std::max(sigma[0], 1e-300);
        for (Index j = 0; j < k; ++j) {
            double norm = v_raw.col(j).norm();
            if (norm > 1e-13 * scale) {
                out.V.col(j) = v_raw.col(j) / norm;
            } else {
                for (Index r = 0; r < D; ++r) {
                    out.V(r, j) = fill.next_gaussian();
                }
            }
        }
        reorthonormalize(out.V, fill);
    }
    fix_signs(out.V);
    return out;
}

ResidualPair residual(const DataMatrix& A, const SpectralSummary& summary, Index k1) {
    if (k1 < 0 || k1 > summary.k) {
        throw ConfigError("residual: k1=" + std::to_string(k1) + " exceeds computed k=" +
                          std::to_string(summary.k));
    }
    ResidualPair out;
    if (k1 == 0) {
        out.A_k1 = Matrix::Zero(A.rows(), A.cols());
        out.A_star = A.values;
        return out;
    }
    auto v = summary.V.leftCols(k1);
    out.A_k1 = (A.values * v) * v.transpose();
    out.A_star = A.values - out.A_k1;
    return out;
}

double stable_rank(double frob_sq, double sigma1) {
    if (!(sigma1 > 0.0)) {
        throw NumericError("stable_rank: zero matrix (sigma1 = 0)");
    }
    if (frob_sq < sigma1 * sigma1 * (1.0 - 1e-12)) {
        throw NumericError("stable_rank: frob_sq < sigma1^2");
    }
    return frob_sq / (sigma1 * sigma1);
}

double explained_variance(const SpectralSummary& summary, Index k1) {
    if (k1 < 0 || k1 > summary.k) {
        throw ConfigError("explained_variance: k1 out of range");
    }
    if (k1 == 0) {
        return 0.0;
    }
    double num = 0.0;
    for (Index i = 0; i < k1; ++i) {
        num += summary.sigma[static_cast<std::size_t>(i)] * summary.sigma[static_cast<std::size_t>(i)];
    }
    return std::clamp(num / summary.frob_sq, 0.0, 1.0);
}

std::vector<std::pair<Index, double>> residual_stable_rank_curve(const DataMatrix& A,
                                                                 Index k1_max,
                                                                 double tol, int max_iter) {
    const Index m = std::min(A.rows(), A.cols());
    if (k1_max < 0 || k1_max > m - 1) {
        throw ConfigError("residual_stable_rank_curve: k1_max out of range");
    }
    SpectralSummary s = truncated_svd(A, k1_max + 1, tol, max_iter);
    std::vector<std::pair<Index, double>> curve;
    double res_energy = s.frob_sq;
    for (Index k1 = 0; k1 <= k1_max; ++k1) {
        double sig = s.sigma[static_cast<std::size_t>(k1)];
        if (res_energy <= 1e-12 * s.frob_sq || sig <= 1e-9 * s.sigma[0]) {
            break; // residual numerically zero; curve truncated
        }
        curve.emplace_back(k1, res_energy / (sig * sig));
        res_energy -= sig * sig;
    }
    return curve;
}

} // namespace diffred
