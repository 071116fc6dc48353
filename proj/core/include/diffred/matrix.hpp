#ifndef DIFFRED_MATRIX_HPP
#define DIFFRED_MATRIX_HPP

#include <Eigen/Dense>

#include "diffred/errors.hpp"

namespace diffred {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Records which preprocessing steps have been applied, in order:
/// row normalization (if any) always precedes column centering.
struct Preprocessing {
    bool row_normalized = false;
    bool column_centered = false;
};

/// Dense n x D data matrix; rows are data points.
struct DataMatrix {
    Matrix values;
    Preprocessing flags;

    DataMatrix() = default;
    explicit DataMatrix(Matrix m, Preprocessing f = {}) : values(std::move(m)), flags(f) {}

    Index rows() const { return values.rows(); }
    Index cols() const { return values.cols(); }
    double frob_sq() const { return values.squaredNorm(); }
};

/// Throws NumericError if any entry is NaN or infinite.
inline void check_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) {
        throw NumericError(std::string(what) + ": non-finite entry encountered");
    }
}

} // namespace diffred

#endif
