#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace christoffel {

enum class ErrorKind {
  InvalidPolygon,
  DegenerateInput,
  NumericalFailure,
  AtOrigin,
  Outside,
  TooCloseToBoundary,
  ChartFailure,
  NotCase3,
  DegreeTooLarge,
  IllConditioned,
  OutOfRegime,
  GridTooLarge,
  CompressionFailed,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPolygon: return "InvalidPolygon";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::AtOrigin: return "AtOrigin";
    case ErrorKind::Outside: return "Outside";
    case ErrorKind::TooCloseToBoundary: return "TooCloseToBoundary";
    case ErrorKind::ChartFailure: return "ChartFailure";
    case ErrorKind::NotCase3: return "NotCase3";
    case ErrorKind::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::OutOfRegime: return "OutOfRegime";
    case ErrorKind::GridTooLarge: return "GridTooLarge";
    case ErrorKind::CompressionFailed: return "CompressionFailed";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  /// Failures of the numerics (as opposed to bad input).
  [[nodiscard]] bool is_numerical() const noexcept {
    return kind_ == ErrorKind::NumericalFailure || kind_ == ErrorKind::IllConditioned ||
           kind_ == ErrorKind::CompressionFailed || kind_ == ErrorKind::ChartFailure;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace christoffel
