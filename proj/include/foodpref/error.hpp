#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace foodpref {

enum class Errc {
  kMalformedCsv,
  kMissingColumn,
  kMalformedRow,
  kDuplicateFoodCode,
  kEmptyPhrase,
  kDimensionMismatch,
  kEmptyStore,
  kZeroNorm,
  kEmptyIndex,
  kEmptyCandidateSet,
  kMissingAnnotation,
  kUnknownGroup,
  kInvalidArgument,
  kIo,
};

std::string_view errc_name(Errc code);

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace foodpref
