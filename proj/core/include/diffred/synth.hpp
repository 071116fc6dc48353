#ifndef DIFFRED_SYNTH_HPP
#define DIFFRED_SYNTH_HPP

#include <vector>

#include "diffred/matrix.hpp"
#include "diffred/random.hpp"

namespace diffred {

/// Target singular values for synthesis, descending-or-equal, all positive.
struct SpectrumProfile {
    std::vector<double> values;

    explicit SpectrumProfile(std::vector<double> v);

    std::size_t size() const { return values.size(); }
    double energy() const; // sum of squares
};

/// Builds A = U diag(profile) V^T with U, V orthonormal factors obtained
/// by QR-orthogonalizing Gaussian matrices from the stream, so the
/// singular values of A equal the profile.
DataMatrix synth_spiked(Index n, Index D, const SpectrumProfile& profile, RandomStream stream);

} // namespace diffred

#endif
