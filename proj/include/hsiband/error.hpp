#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hsiband {

enum class ErrorKind {
  invalid_argument,
  dimension_mismatch,
  label_out_of_range,
  degenerate_gt,
  non_finite,
  length_mismatch,
  empty_input,
  bad_magic,
  truncated_payload,
  unknown_dtype,
  ragged_rows,
  negative_label,
  parse_error,
  io_error,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::label_out_of_range: return "label-out-of-range";
    case ErrorKind::degenerate_gt: return "degenerate-gt";
    case ErrorKind::non_finite: return "non-finite";
    case ErrorKind::length_mismatch: return "length-mismatch";
    case ErrorKind::empty_input: return "empty-input";
    case ErrorKind::bad_magic: return "bad-magic";
    case ErrorKind::truncated_payload: return "truncated-payload";
    case ErrorKind::unknown_dtype: return "unknown-dtype";
    case ErrorKind::ragged_rows: return "ragged-rows";
    case ErrorKind::negative_label: return "negative-label";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace hsiband
