#include "esnc/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "esnc/error.hpp"
#include "esnc/kernels.hpp"

namespace esnc {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

namespace {

void transform(std::span<std::complex<double>> a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_power_of_two(n)) {
    throw Error(Errc::NonPowerOfTwoFrame, "FFT size " + std::to_string(n) + " is not a power of two");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      const std::complex<double> w =
          std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len));
      for (std::size_t i = k; i < n; i += len) {
        const std::complex<double> u = a[i];
        const std::complex<double> v = a[i + half] * w;
        a[i] = u + v;
        a[i + half] = u - v;
      }
    }
  }
}

std::vector<double> resample_linear(std::span<const double> x, std::size_t count) {
  std::vector<double> out(count);
  if (x.empty()) return out;
  if (count == 1 || x.size() == 1) {
    std::fill(out.begin(), out.end(), x[0]);
    return out;
  }
  for (std::size_t k = 0; k < count; ++k) {
    const double pos = static_cast<double>(k * (x.size() - 1)) / static_cast<double>(count - 1);
    const std::size_t i = std::min(static_cast<std::size_t>(pos), x.size() - 2);
    const double frac = pos - static_cast<double>(i);
    out[k] = x[i] + frac * (x[i + 1] - x[i]);
  }
  return out;
}

}  // namespace

void fft(std::span<std::complex<double>> data) { transform(data, false); }

void ifft(std::span<std::complex<double>> data) {
  transform(data, true);
  const double inv = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= inv;
}

double hz_to_mel(double hz) noexcept { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) noexcept { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

void MfccConfig::validate() const {
  if (!is_power_of_two(frame_length)) {
    throw Error(Errc::NonPowerOfTwoFrame,
                "frame_length " + std::to_string(frame_length) + " is not a power of two");
  }
  if (hop_length == 0) throw Error(Errc::BadArgument, "hop_length must be >= 1");
  if (n_mels < 2) throw Error(Errc::BadArgument, "n_mels must be >= 2");
  const std::size_t needed = keep_c0 ? n_coeffs : n_coeffs + 1;
  if (n_coeffs == 0 || needed > n_mels) {
    throw Error(Errc::BadArgument, "n_coeffs " + std::to_string(n_coeffs) +
                                       " does not fit in n_mels " + std::to_string(n_mels));
  }
  if (!(log_floor > 0.0)) throw Error(Errc::BadArgument, "log_floor must be > 0");
  if (fmin_hz < 0.0) throw Error(Errc::BadArgument, "fmin_hz must be >= 0");
}

std::size_t frame_count(std::size_t samples, const MfccConfig& cfg) noexcept {
  if (samples < cfg.frame_length || cfg.hop_length == 0) return 0;
  return (samples - cfg.frame_length) / cfg.hop_length + 1;
}

Matrix mel_filterbank(const MfccConfig& cfg, double sample_rate) {
  const std::size_t bins = cfg.frame_length / 2 + 1;
  const double fmax = cfg.fmax_hz.value_or(sample_rate / 2.0);
  if (!(fmax > cfg.fmin_hz)) throw Error(Errc::BadArgument, "fmax must exceed fmin");
  const double mlo = hz_to_mel(cfg.fmin_hz);
  const double mhi = hz_to_mel(fmax);

  std::vector<double> edges(cfg.n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mlo + (mhi - mlo) * static_cast<double>(i) /
                                   static_cast<double>(cfg.n_mels + 1));
  }

  Matrix fb(cfg.n_mels, bins);
  for (std::size_t j = 0; j < cfg.n_mels; ++j) {
    const double left = edges[j], centre = edges[j + 1], right = edges[j + 2];
    for (std::size_t b = 0; b < bins; ++b) {
      const double f = static_cast<double>(b) * sample_rate / static_cast<double>(cfg.frame_length);
      const double rise = (f - left) / (centre - left);
      const double fall = (right - f) / (right - centre);
      fb(j, b) = std::max(0.0, std::min(rise, fall));
    }
  }
  return fb;
}

std::vector<double> dct2(std::span<const double> x) {
  const std::size_t m = x.size();
  std::vector<double> out(m);
  const double md = static_cast<double>(m);
  // Basis rows k >= 1 sum to zero, so they see x - x[0]: same result in
  // exact arithmetic, and exactly zero for a constant input.
  for (std::size_t k = 0; k < m; ++k) {
    const double offset = k == 0 || m == 0 ? 0.0 : x[0];
    double s = 0.0;
    for (std::size_t n = 0; n < m; ++n) {
      s += (x[n] - offset) * std::cos(std::numbers::pi * static_cast<double>(k) *
                           (2.0 * static_cast<double>(n) + 1.0) / (2.0 * md));
    }
    out[k] = s * std::sqrt((k == 0 ? 1.0 : 2.0) / md);
  }
  return out;
}

LabeledSeries mfcc(std::span<const double> audio, double sample_rate, const MfccConfig& cfg) {
  cfg.validate();
  if (!(sample_rate > 0.0)) throw Error(Errc::BadArgument, "sample_rate must be > 0");

  std::vector<double> resampled;
  double rate = sample_rate;
  if (cfg.utterance_samples > 0) {
    resampled = resample_linear(audio, cfg.utterance_samples);
    rate = sample_rate * static_cast<double>(cfg.utterance_samples) /
           static_cast<double>(std::max<std::size_t>(audio.size(), 1));
    audio = resampled;
  }

  const std::size_t frames = frame_count(audio.size(), cfg);
  if (frames == 0) {
    throw Error(Errc::TooShort, std::to_string(audio.size()) + " samples, frame length " +
                                    std::to_string(cfg.frame_length));
  }

  const std::size_t len = cfg.frame_length;
  const std::size_t bins = len / 2 + 1;
  const Matrix fb = mel_filterbank(cfg, rate);

  std::vector<double> window(len);
  for (std::size_t i = 0; i < len; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(len));
  }

  const std::size_t first = cfg.keep_c0 ? 0 : 1;
  LabeledSeries out;
  out.values = Matrix(cfg.n_coeffs, frames);
  out.sample_rate_hz = rate / static_cast<double>(cfg.hop_length);

  const auto& k = kernels::active();
  std::vector<std::complex<double>> buf(len);
  std::vector<double> power(bins), mel(cfg.n_mels);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * cfg.hop_length;
    for (std::size_t i = 0; i < len; ++i) buf[i] = {audio[start + i] * window[i], 0.0};
    fft(buf);
    for (std::size_t b = 0; b < bins; ++b) power[b] = std::norm(buf[b]);
    k.gemv(fb.data().data(), cfg.n_mels, bins, power.data(), mel.data());
    for (double& e : mel) e = std::log(e + cfg.log_floor);
    const auto c = dct2(mel);
    for (std::size_t i = 0; i < cfg.n_coeffs; ++i) out.values(i, f) = c[first + i];
  }
  return out;
}

}  // namespace esnc
