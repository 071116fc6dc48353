#include "diffred/preprocess.hpp"

#include <string>
#include <vector>

namespace diffred {

DataMatrix preprocess(const DataMatrix& A, ZeroRowPolicy policy) {
    if (A.rows() < 2) {
        throw ConfigError("preprocess needs at least 2 rows, got " + std::to_string(A.rows()));
    }
    check_finite(A.values, "preprocess input");

    std::vector<Index> keep;
    keep.reserve(static_cast<std::size_t>(A.rows()));
    for (Index i = 0; i < A.rows(); ++i) {
        double norm = A.values.row(i).norm();
        if (norm == 0.0) {
            if (policy == ZeroRowPolicy::Abort) {
                throw NumericError("zero row at index " + std::to_string(i));
            }
            continue;
        }
        keep.push_back(i);
    }
    if (keep.size() < 2) {
        throw NumericError("fewer than 2 nonzero rows remain after dropping");
    }

    Matrix out(static_cast<Index>(keep.size()), A.cols());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        auto row = A.values.row(keep[r]);
        out.row(static_cast<Index>(r)) = row / row.norm();
    }
    out.rowwise() -= out.colwise().mean();

    return DataMatrix(std::move(out), Preprocessing{true, true});
}

} // namespace diffred
