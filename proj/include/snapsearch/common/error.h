#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace snapsearch {

// Root of every error the library raises. `position` is a line number for
// text inputs or a byte offset / sequence number for binary ones, when known.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::optional<std::uint64_t> position = std::nullopt)
      : std::runtime_error(what), position_(position) {}

  std::optional<std::uint64_t> position() const { return position_; }

 private:
  std::optional<std::uint64_t> position_;
};

#define SNAPSEARCH_DEFINE_ERROR(Name)     \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

// Malformed textual input (corpus line, date, JSON record).
SNAPSEARCH_DEFINE_ERROR(ParseError);
// Data violates an invariant: duplicate ids, out-of-range dates, bad ordering.
SNAPSEARCH_DEFINE_ERROR(IntegrityError);
// Binary stream cannot be decoded (truncated vbyte, bad magic, trailing bytes).
SNAPSEARCH_DEFINE_ERROR(CodecError);
SNAPSEARCH_DEFINE_ERROR(RangeError);
SNAPSEARCH_DEFINE_ERROR(ParameterError);
SNAPSEARCH_DEFINE_ERROR(UnsupportedModeError);
SNAPSEARCH_DEFINE_ERROR(ShardUnavailableError);
SNAPSEARCH_DEFINE_ERROR(UndefinedRatioError);
SNAPSEARCH_DEFINE_ERROR(InfeasibleBudgetError);
SNAPSEARCH_DEFINE_ERROR(EstimationError);
SNAPSEARCH_DEFINE_ERROR(ComparabilityError);
SNAPSEARCH_DEFINE_ERROR(IoError);

// Change-log errors.
SNAPSEARCH_DEFINE_ERROR(OrderingError);
SNAPSEARCH_DEFINE_ERROR(SequenceError);
SNAPSEARCH_DEFINE_ERROR(AppendError);
SNAPSEARCH_DEFINE_ERROR(ChecksumError);
SNAPSEARCH_DEFINE_ERROR(LogIntegrityError);

#undef SNAPSEARCH_DEFINE_ERROR

}  // namespace snapsearch
