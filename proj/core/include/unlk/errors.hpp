#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace unlk {

// One validation finding. `index` is a breakpoint index when the finding
// concerns a profile breakpoint; `subject` is an edge or vertex id when known.
struct Diagnostic {
  std::string code;
  std::string subject;
  std::optional<std::size_t> index;
  std::string message;
};

std::string format_diagnostic(const Diagnostic& d);

// Base of all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input: unparsable JSON/CSV/binary, wrong document shape.
struct ParseError : Error {
  using Error::Error;
};

// A model failed validation. Carries the full diagnostic list.
struct ValidationError : Error {
  std::vector<Diagnostic> diagnostics;
  explicit ValidationError(std::vector<Diagnostic> diags);
};

// A computation could not be carried out on otherwise valid data.
struct ComputeError : Error {
  using Error::Error;
};

struct OutOfRangeError : ComputeError {
  using ComputeError::ComputeError;
};
struct DegenerateProfileError : ComputeError {
  using ComputeError::ComputeError;
};
struct InvalidTreeError : ComputeError {
  using ComputeError::ComputeError;
};
struct InvalidPointError : ComputeError {
  using ComputeError::ComputeError;
};
struct TooLargeError : ComputeError {
  using ComputeError::ComputeError;
};
struct EmptyCoreError : ComputeError {
  using ComputeError::ComputeError;
};
struct UnknownCellError : ComputeError {
  using ComputeError::ComputeError;
};
struct OverlapError : ComputeError {
  using ComputeError::ComputeError;
};
struct TrackingAmbiguousError : ComputeError {
  using ComputeError::ComputeError;
};
struct CollisionError : ComputeError {
  double sigma;
  CollisionError(double sigma_, const std::string& what_arg)
      : ComputeError(what_arg), sigma(sigma_) {}
};
struct HypothesisViolatedError : ComputeError {
  using ComputeError::ComputeError;
};
struct ConstructionFailedError : ComputeError {
  using ComputeError::ComputeError;
};
struct NonMorseGridError : ComputeError {
  using ComputeError::ComputeError;
};
struct InvalidOrbitError : ComputeError {
  using ComputeError::ComputeError;
};
struct NotInSpectrumError : ComputeError {
  using ComputeError::ComputeError;
};

}  // namespace unlk
