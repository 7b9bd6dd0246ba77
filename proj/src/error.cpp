#include "esnc/error.hpp"

namespace esnc {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonSquare: return "NonSquare";
    case Errc::NonFinite: return "NonFinite";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::ZeroDimension: return "ZeroDimension";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::TooShort: return "TooShort";
    case Errc::SingularGram: return "SingularGram";
    case Errc::DegenerateW0: return "DegenerateW0";
    case Errc::EmptyStates: return "EmptyStates";
    case Errc::NonPositiveAperture: return "NonPositiveAperture";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::ChannelMismatch: return "ChannelMismatch";
    case Errc::BadDegree: return "BadDegree";
    case Errc::NonPowerOfTwoFrame: return "NonPowerOfTwoFrame";
    case Errc::EmptyClass: return "EmptyClass";
    case Errc::SingleClass: return "SingleClass";
    case Errc::TooFewSamplesPerClass: return "TooFewSamplesPerClass";
    case Errc::EmptyTestSet: return "EmptyTestSet";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::MissingFile: return "MissingFile";
    case Errc::ParseError: return "ParseError";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::BadSpec: return "BadSpec";
    case Errc::BadArgument: return "BadArgument";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace esnc
