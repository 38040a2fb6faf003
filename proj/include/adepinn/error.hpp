#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adepinn {

/// Failure categories raised across the library.
enum class ErrorKind {
  unsupported_primitive,
  non_finite,
  shape_mismatch,
  empty_sample_set,
  unknown_preset,
  face_mismatch,
  rejection_stall,
  no_such_face,
  length_mismatch,
  empty_input,
  zero_denominator,
  singular_system,
  invalid_config,
  io_failure,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::unsupported_primitive: return "UnsupportedPrimitive";
    case ErrorKind::non_finite: return "NonFinite";
    case ErrorKind::shape_mismatch: return "ShapeMismatch";
    case ErrorKind::empty_sample_set: return "EmptySampleSet";
    case ErrorKind::unknown_preset: return "UnknownPreset";
    case ErrorKind::face_mismatch: return "FaceMismatch";
    case ErrorKind::rejection_stall: return "RejectionStall";
    case ErrorKind::no_such_face: return "NoSuchFace";
    case ErrorKind::length_mismatch: return "LengthMismatch";
    case ErrorKind::empty_input: return "EmptyInput";
    case ErrorKind::zero_denominator: return "ZeroDenominator";
    case ErrorKind::singular_system: return "SingularSystem";
    case ErrorKind::invalid_config: return "InvalidConfig";
    case ErrorKind::io_failure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace adepinn
