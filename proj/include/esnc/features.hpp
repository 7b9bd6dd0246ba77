#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "esnc/series.hpp"

namespace esnc {

/// v' = (v + shift) * scale per channel.
struct NormalizationParams {
  std::vector<double> shift;
  std::vector<double> scale;

  std::size_t channels() const noexcept { return shift.size(); }
  static NormalizationParams identity(std::size_t channels);
};

/// Per-channel min-max over every training series. A channel whose range is
/// below 1e-12 keeps scale 1 and maps to 0.
NormalizationParams fit_normalization(std::span<const LabeledSeries> train);

/// No clipping: test data may land outside [0, 1].
LabeledSeries apply_normalization(const NormalizationParams& params, const LabeledSeries& series);

enum class ResampleMode { polynomial, linear, none };

std::string_view to_string(ResampleMode m) noexcept;
std::optional<ResampleMode> parse_resample_mode(std::string_view text) noexcept;

struct ResampleConfig {
  ResampleMode mode = ResampleMode::none;
  std::size_t k_points = 4;
  std::size_t degree = 3;
};

/// Resamples each channel at k equidistant points of normalized time
/// t in [0, 1], sample i of L sitting at t = i / (L - 1).
///   polynomial: least-squares polynomial fit of the given degree (capped at
///               L - 1 so the fit stays determined), evaluated at the k points
///   linear:     piecewise-linear interpolation
///   none:       input returned unchanged
/// Throws TooShort (L < 2 or k < 2) and BadDegree (degree < 1).
LabeledSeries resample(const LabeledSeries& series, const ResampleConfig& cfg);

}  // namespace esnc
