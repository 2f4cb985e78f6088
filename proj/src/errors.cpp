#include "panelfact/errors.hpp"

namespace panelfact {

std::string to_string(NumericalFailure kind) {
    switch (kind) {
    case NumericalFailure::NotPositiveDefinite: return "not positive-definite";
    case NumericalFailure::SingularLeadingMinor: return "singular leading minor";
    case NumericalFailure::RankDeficient: return "rank deficient";
    }
    return "numerical failure";
}

NumericalError::NumericalError(NumericalFailure kind, std::size_t column)
    : std::runtime_error(to_string(kind) + " at column " + std::to_string(column)),
      kind_(kind),
      column_(column) {}

} // namespace panelfact
