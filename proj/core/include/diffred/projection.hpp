#ifndef DIFFRED_PROJECTION_HPP
#define DIFFRED_PROJECTION_HPP

#include <cstdint>
#include <vector>

#include "diffred/matrix.hpp"
#include "diffred/random.hpp"

namespace diffred {

/// D x k2 matrix of i.i.d. N(0,1) entries scaled by 1/sqrt(k2).
struct GaussianMap {
    Index D = 0;
    Index k2 = 0;
    Matrix values;
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

GaussianMap sample_map(Index D, Index k2, RandomStream stream);

/// T = A G.
Matrix project(const Matrix& A, const GaussianMap& G);

struct MonteCarloResult {
    Matrix T_min;
    double m1_min = 0.0;
    std::size_t iteration_of_min = 0;
    std::vector<double> m1_per_iteration;
};

/// Runs eta draw-project-evaluate iterations, iteration i drawing from
/// master.derived(i), and keeps the projection with least M1 distortion
/// against A_star. First index wins ties; the result does not depend on
/// the thread count.
MonteCarloResult monte_carlo_best(const Matrix& A_star, Index k2, std::size_t eta,
                                  const RandomStream& master, int threads = 0);

} // namespace diffred

#endif
