#ifndef DIFFRED_PREPROCESS_HPP
#define DIFFRED_PREPROCESS_HPP

#include "diffred/matrix.hpp"

namespace diffred {

enum class ZeroRowPolicy { Abort, DropRow };

/// Scales every row to unit Euclidean norm, then subtracts the column
/// means. Centering runs last so the centered-data pairwise identity
/// holds exactly; row norms may drift from 1 afterwards.
/// A zero row aborts (NumericError with the row index) or is dropped,
/// per policy.
DataMatrix preprocess(const DataMatrix& A, ZeroRowPolicy policy = ZeroRowPolicy::Abort);

} // namespace diffred

#endif
