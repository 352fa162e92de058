#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tssnet {

// Error categories. The C API in tssnet.h mirrors these one-to-one as
// status codes, so every throw site picks the category deliberately.
enum class ErrorCode {
  invalid_argument,
  invalid_shape,
  shape_mismatch,
  out_of_bounds,
  invalid_config,
  kernel_too_large,
  stale_cache,
  io,
  parse,
  empty_input,
  too_short,
  degenerate_sample,
  all_degenerate,
  non_finite_loss,
  version_mismatch,
  corrupt_checkpoint,
  all_trials_failed,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define TSSNET_ERROR_TYPE(Name, code_value)       \
  class Name : public Error {                     \
   public:                                        \
    explicit Name(const std::string& what)        \
        : Error(ErrorCode::code_value, what) {}   \
  };

TSSNET_ERROR_TYPE(InvalidArgument, invalid_argument)
TSSNET_ERROR_TYPE(InvalidShape, invalid_shape)
TSSNET_ERROR_TYPE(ShapeMismatch, shape_mismatch)
TSSNET_ERROR_TYPE(OutOfBounds, out_of_bounds)
TSSNET_ERROR_TYPE(InvalidConfig, invalid_config)
TSSNET_ERROR_TYPE(KernelTooLarge, kernel_too_large)
TSSNET_ERROR_TYPE(StaleCache, stale_cache)
TSSNET_ERROR_TYPE(IoError, io)
TSSNET_ERROR_TYPE(EmptyInput, empty_input)
TSSNET_ERROR_TYPE(TooShort, too_short)
TSSNET_ERROR_TYPE(DegenerateSample, degenerate_sample)
TSSNET_ERROR_TYPE(AllDegenerate, all_degenerate)
TSSNET_ERROR_TYPE(NonFiniteLoss, non_finite_loss)
TSSNET_ERROR_TYPE(VersionMismatch, version_mismatch)
TSSNET_ERROR_TYPE(CorruptCheckpoint, corrupt_checkpoint)
TSSNET_ERROR_TYPE(AllTrialsFailed, all_trials_failed)

#undef TSSNET_ERROR_TYPE

// Parse failures keep the 1-based location so CLI users can find the cell.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : Error(ErrorCode::parse, what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

}  // namespace tssnet
