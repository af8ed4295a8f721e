#include "paulikern/error.hpp"

#include <sstream>

namespace paulikern {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::empty_span: return "EmptySpan";
    case Errc::dim_mismatch: return "DimMismatch";
    case Errc::rank_zero: return "RankZero";
    case Errc::not_symmetric: return "NotSymmetric";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::diverged: return "Diverged";
    case Errc::empty_kernel: return "EmptyKernel";
    case Errc::invalid_overlap: return "InvalidOverlap";
    case Errc::bad_ranks: return "BadRanks";
    case Errc::quadrature_failure: return "QuadratureFailure";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::overflow: return "Overflow";
    case Errc::schema: return "SchemaError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

namespace {
std::string diverged_message(long long at_power, double norm) {
  std::ostringstream os;
  os << "(1-P)^" << at_power << " has Frobenius norm " << norm
     << "; the spectrum of P reaches 2 or beyond";
  return os.str();
}
}  // namespace

DivergedError::DivergedError(long long at_power, double norm)
    : Error(Errc::diverged, diverged_message(at_power, norm)), at_power_(at_power), norm_(norm) {}

}  // namespace paulikern
