#pragma once

#include <optional>
#include <string>

#include "esnc/matrix.hpp"

namespace esnc {

/// Multivariate time series: values is channels x steps.
struct LabeledSeries {
  Matrix values;
  std::optional<int> label;
  std::optional<double> sample_rate_hz;
  std::string id;

  std::size_t channels() const noexcept { return values.rows(); }
  std::size_t steps() const noexcept { return values.cols(); }
};

}  // namespace esnc
