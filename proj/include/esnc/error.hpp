#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace esnc {

enum class Errc {
  NonSquare,
  NonFinite,
  NotPositiveDefinite,
  NoConvergence,
  ZeroDimension,
  DimensionMismatch,
  TooShort,
  SingularGram,
  DegenerateW0,
  EmptyStates,
  NonPositiveAperture,
  EmptyInput,
  ChannelMismatch,
  BadDegree,
  NonPowerOfTwoFrame,
  EmptyClass,
  SingleClass,
  TooFewSamplesPerClass,
  EmptyTestSet,
  InsufficientData,
  EmptyDataset,
  MissingFile,
  ParseError,
  SchemaMismatch,
  UnsupportedFormat,
  BadSpec,
  BadArgument,
  Io,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace esnc
