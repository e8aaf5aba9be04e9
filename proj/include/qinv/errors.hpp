#pragma once

#include <stdexcept>
#include <string>

namespace qinv {

/// Error categories shared by all modules. The CLI maps these onto exit codes.
enum class errc {
  division_by_zero,
  field_mismatch,
  not_integral,
  non_invertible_denominator,
  rank_not_found,
  degenerate_datum,
  quantum_integer_zero,
  malformed_diagram,
  color_out_of_range,
  width_overflow,
  arity_mismatch,
  invalid_coloring,
  not_symmetric,
  singular_at_omega,
  precision_failure,
  freeness_failed,
  parse_error,
  invalid_argument,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::division_by_zero: return "DivisionByZero";
    case errc::field_mismatch: return "FieldMismatch";
    case errc::not_integral: return "NotIntegral";
    case errc::non_invertible_denominator: return "NonInvertibleDenominator";
    case errc::rank_not_found: return "RankNotFound";
    case errc::degenerate_datum: return "DegenerateDatum";
    case errc::quantum_integer_zero: return "QuantumIntegerZero";
    case errc::malformed_diagram: return "MalformedDiagram";
    case errc::color_out_of_range: return "ColorOutOfRange";
    case errc::width_overflow: return "WidthOverflow";
    case errc::arity_mismatch: return "ArityMismatch";
    case errc::invalid_coloring: return "InvalidColoring";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::singular_at_omega: return "SingularAtOmega";
    case errc::precision_failure: return "PrecisionFailure";
    case errc::freeness_failed: return "FreenessFailed";
    case errc::parse_error: return "ParseError";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

/// Exception carrying the error category plus the "module.operation" where it
/// originated, so diagnostics always name their source.
class error : public std::runtime_error {
 public:
  error(errc c, const std::string& origin, const std::string& detail)
      : std::runtime_error(origin + ": " + std::string(errc_name(c)) + ": " + detail),
        code_(c),
        origin_(origin) {}

  errc code() const noexcept { return code_; }
  const std::string& origin() const noexcept { return origin_; }

 private:
  errc code_;
  std::string origin_;
};

}  // namespace qinv
