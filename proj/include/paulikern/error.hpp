#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace paulikern {

enum class Errc {
  empty_span,
  dim_mismatch,
  rank_zero,
  not_symmetric,
  index_out_of_range,
  diverged,
  empty_kernel,
  invalid_overlap,
  bad_ranks,
  quadrature_failure,
  invalid_argument,
  overflow,
  schema,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised by power_limit when ||(1-P)^j||_F outgrows the guard, i.e. some
/// eigenvalue of P sits above 2 and the power sequence blows up.
class DivergedError : public Error {
 public:
  DivergedError(long long at_power, double norm);

  long long at_power() const noexcept { return at_power_; }
  double norm() const noexcept { return norm_; }

 private:
  long long at_power_;
  double norm_;
};

}  // namespace paulikern
