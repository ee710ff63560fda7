#include "foodpref/error.hpp"

namespace foodpref {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kMalformedCsv: return "MalformedCsv";
    case Errc::kMissingColumn: return "MissingColumn";
    case Errc::kMalformedRow: return "MalformedRow";
    case Errc::kDuplicateFoodCode: return "DuplicateFoodCode";
    case Errc::kEmptyPhrase: return "EmptyPhrase";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kEmptyStore: return "EmptyStore";
    case Errc::kZeroNorm: return "ZeroNorm";
    case Errc::kEmptyIndex: return "EmptyIndex";
    case Errc::kEmptyCandidateSet: return "EmptyCandidateSet";
    case Errc::kMissingAnnotation: return "MissingAnnotation";
    case Errc::kUnknownGroup: return "UnknownGroup";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

}  // namespace foodpref
