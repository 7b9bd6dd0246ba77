#include "esnc/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "esnc/error.hpp"
#include "esnc/linalg.hpp"

namespace esnc {

NormalizationParams NormalizationParams::identity(std::size_t channels) {
  return {std::vector<double>(channels, 0.0), std::vector<double>(channels, 1.0)};
}

NormalizationParams fit_normalization(std::span<const LabeledSeries> train) {
  if (train.empty()) throw Error(Errc::EmptyInput, "fit_normalization: no training series");
  const std::size_t d = train.front().channels();
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (const auto& s : train) {
    if (s.channels() != d) {
      throw Error(Errc::ChannelMismatch, "series '" + s.id + "' has " +
                                             std::to_string(s.channels()) + " channels, expected " +
                                             std::to_string(d));
    }
    for (std::size_t c = 0; c < d; ++c) {
      for (double v : s.values.row(c)) {
        lo[c] = std::min(lo[c], v);
        hi[c] = std::max(hi[c], v);
      }
    }
  }
  NormalizationParams p{std::vector<double>(d), std::vector<double>(d)};
  for (std::size_t c = 0; c < d; ++c) {
    if (!std::isfinite(lo[c])) {
      // every series was empty in this channel
      p.shift[c] = 0.0;
      p.scale[c] = 1.0;
      continue;
    }
    const double range = hi[c] - lo[c];
    p.shift[c] = -lo[c];
    p.scale[c] = range < 1e-12 ? 1.0 : 1.0 / range;
  }
  return p;
}

LabeledSeries apply_normalization(const NormalizationParams& params, const LabeledSeries& series) {
  if (series.channels() != params.channels()) {
    throw Error(Errc::ChannelMismatch, "series '" + series.id + "' has " +
                                           std::to_string(series.channels()) +
                                           " channels, normalization expects " +
                                           std::to_string(params.channels()));
  }
  LabeledSeries out = series;
  for (std::size_t c = 0; c < out.channels(); ++c) {
    for (double& v : out.values.row(c)) v = (v + params.shift[c]) * params.scale[c];
  }
  return out;
}

std::string_view to_string(ResampleMode m) noexcept {
  switch (m) {
    case ResampleMode::polynomial: return "polynomial";
    case ResampleMode::linear: return "linear";
    case ResampleMode::none: return "none";
  }
  return "none";
}

std::optional<ResampleMode> parse_resample_mode(std::string_view text) noexcept {
  if (text == "polynomial") return ResampleMode::polynomial;
  if (text == "linear") return ResampleMode::linear;
  if (text == "none") return ResampleMode::none;
  return std::nullopt;
}

namespace {

double sample_time(std::size_t i, std::size_t count) {
  return static_cast<double>(i) / static_cast<double>(count - 1);
}

std::vector<double> linear_at(std::span<const double> y, std::size_t points) {
  const std::size_t len = y.size();
  std::vector<double> out(points);
  for (std::size_t k = 0; k < points; ++k) {
    // integer numerator keeps grid-aligned positions exact
    const double pos = static_cast<double>(k * (len - 1)) / static_cast<double>(points - 1);
    std::size_t i = static_cast<std::size_t>(std::floor(pos));
    if (i >= len - 1) {
      out[k] = y[len - 1];
      continue;
    }
    const double frac = pos - static_cast<double>(i);
    out[k] = frac == 0.0 ? y[i] : y[i] + frac * (y[i + 1] - y[i]);
  }
  return out;
}

// Least-squares fit in u = 2t - 1 (better conditioned than t on [0, 1]).
std::vector<double> polynomial_at(std::span<const double> y, std::size_t degree,
                                  std::span<const double> ts) {
  const std::size_t len = y.size();
  const std::size_t terms = degree + 1;
  Matrix normal(terms, terms);
  Matrix rhs(terms, 1);
  std::vector<double> powers(2 * degree + 1);
  for (std::size_t i = 0; i < len; ++i) {
    const double u = 2.0 * sample_time(i, len) - 1.0;
    double p = 1.0;
    for (auto& pw : powers) {
      pw = p;
      p *= u;
    }
    for (std::size_t a = 0; a < terms; ++a) {
      rhs(a, 0) += powers[a] * y[i];
      for (std::size_t b = 0; b < terms; ++b) normal(a, b) += powers[a + b];
    }
  }
  const Matrix coef = solve_spd(normal, rhs);
  std::vector<double> out(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double u = 2.0 * ts[k] - 1.0;
    double acc = 0.0;
    for (std::size_t a = terms; a-- > 0;) acc = acc * u + coef(a, 0);
    out[k] = acc;
  }
  return out;
}

}  // namespace

LabeledSeries resample(const LabeledSeries& series, const ResampleConfig& cfg) {
  if (cfg.mode == ResampleMode::none) return series;
  const std::size_t len = series.steps();
  if (len < 2) {
    throw Error(Errc::TooShort, "series '" + series.id + "' has " + std::to_string(len) +
                                    " steps; resampling needs >= 2");
  }
  if (cfg.k_points < 2) throw Error(Errc::TooShort, "resampling needs k_points >= 2");
  if (cfg.mode == ResampleMode::polynomial && cfg.degree < 1) {
    throw Error(Errc::BadDegree, "polynomial degree must be >= 1");
  }

  std::vector<double> ts(cfg.k_points);
  for (std::size_t k = 0; k < ts.size(); ++k) ts[k] = sample_time(k, cfg.k_points);

  LabeledSeries out = series;
  out.values = Matrix(series.channels(), cfg.k_points);
  out.sample_rate_hz.reset();
  const std::size_t degree = std::min(cfg.degree, len - 1);
  for (std::size_t c = 0; c < series.channels(); ++c) {
    const auto y = series.values.row(c);
    const auto v = cfg.mode == ResampleMode::linear ? linear_at(y, cfg.k_points) : polynomial_at(y, degree, ts);
    std::copy(v.begin(), v.end(), out.values.row(c).begin());
  }
  return out;
}

}  // namespace esnc
