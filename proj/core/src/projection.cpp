#include "diffred/projection.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "diffred/parallel.hpp"

namespace diffred {

GaussianMap sample_map(Index D, Index k2, RandomStream stream) {
    if (D < 1 || k2 < 1) {
        throw ConfigError("sample_map: D and k2 must be at least 1");
    }
    GaussianMap g;
    g.D = D;
    g.k2 = k2;
    g.master_seed = stream.master_seed();
    g.stream_index = stream.stream_index();
    g.values.resize(D, k2);
    const double scale = 1.0 / std::sqrt(static_cast<double>(k2));
    for (Index i = 0; i < D; ++i) {
        for (Index j = 0; j < k2; ++j) {
            g.values(i, j) = stream.next_gaussian() * scale;
        }
    }
    return g;
}

Matrix project(const Matrix& A, const GaussianMap& G) {
    if (A.cols() != G.D) {
        throw ConfigError("project: A has " + std::to_string(A.cols()) +
                          " columns but map expects " + std::to_string(G.D));
    }
    return A * G.values;
}

MonteCarloResult monte_carlo_best(const Matrix& A_star, Index k2, std::size_t eta,
                                  const RandomStream& master, int threads) {
    if (eta < 1) {
        throw ConfigError("monte_carlo_best: eta must be at least 1");
    }
    const double energy = A_star.squaredNorm();
    if (energy == 0.0) {
        throw NumericError("monte_carlo_best: zero residual matrix, M1 undefined");
    }

    MonteCarloResult out;
    out.m1_per_iteration.assign(eta, std::numeric_limits<double>::infinity());

    // Each iteration owns its derived stream, so blocks can run in any
    // order; the scalar trace is merged by index afterwards.
    parallel_blocks(eta, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            GaussianMap g = sample_map(A_star.cols(), k2, master.derived(i));
            double t_energy = (A_star * g.values).squaredNorm();
            out.m1_per_iteration[i] = std::abs(1.0 - t_energy / energy);
        }
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < eta; ++i) {
        if (out.m1_per_iteration[i] < out.m1_per_iteration[best]) {
            best = i;
        }
    }
    out.iteration_of_min = best;
    out.m1_min = out.m1_per_iteration[best];
    out.T_min = project(A_star, sample_map(A_star.cols(), k2, master.derived(best)));
    return out;
}

} // namespace diffred
