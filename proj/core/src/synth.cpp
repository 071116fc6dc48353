#include "diffred/synth.hpp"

#include <algorithm>
#include <string>

#include <Eigen/QR>

namespace diffred {

SpectrumProfile::SpectrumProfile(std::vector<double> v) : values(std::move(v)) {
    if (values.empty()) {
        throw ConfigError("spectrum profile is empty");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0)) {
            throw ConfigError("spectrum profile entries must be positive");
        }
        if (i > 0 && values[i] > values[i - 1]) {
            throw ConfigError("spectrum profile must be non-increasing");
        }
    }
}

double SpectrumProfile::energy() const {
    double e = 0.0;
    for (double v : values) {
        e += v * v;
    }
    return e;
}

namespace {

Matrix random_orthonormal(Index rows, Index cols, RandomStream& stream) {
    Matrix g(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            g(i, j) = stream.next_gaussian();
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    return q;
}

} // namespace

DataMatrix synth_spiked(Index n, Index D, const SpectrumProfile& profile, RandomStream stream) {
    auto r = static_cast<Index>(profile.size());
    if (r > std::min(n, D)) {
        throw ConfigError("profile length " + std::to_string(r) + " exceeds min(n, D) = " +
                          std::to_string(std::min(n, D)));
    }
    Matrix u = random_orthonormal(n, r, stream);
    Matrix v = random_orthonormal(D, r, stream);
    Eigen::Map<const Vector> s(profile.values.data(), r);
    Matrix a = u * s.asDiagonal() * v.transpose();
    return DataMatrix(std::move(a));
}

} // namespace diffred
