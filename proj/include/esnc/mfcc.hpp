#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "esnc/matrix.hpp"
#include "esnc/series.hpp"

namespace esnc {

/// In-place iterative radix-2 FFT. Size must be a power of two.
void fft(std::span<std::complex<double>> data);
/// Inverse of fft, including the 1/n scaling.
void ifft(std::span<std::complex<double>> data);

bool is_power_of_two(std::size_t n) noexcept;

/// HTK mel scale: m = 2595 log10(1 + f / 700).
double hz_to_mel(double hz) noexcept;
double mel_to_hz(double mel) noexcept;

struct MfccConfig {
  std::size_t frame_length = 512;
  std::size_t hop_length = 128;
  std::size_t n_mels = 26;
  std::size_t n_coeffs = 12;
  double fmin_hz = 0.0;
  std::optional<double> fmax_hz;  // defaults to sample_rate / 2
  double log_floor = 1e-10;
  bool keep_c0 = false;  // true: output c0..c(n-1); false: c1..cn
  /// When nonzero the waveform is first linearly resampled to this many
  /// samples (the "each utterance has 512 points" reading); frame and hop
  /// then apply to the resampled signal.
  std::size_t utterance_samples = 0;

  void validate() const;
};

/// floor((samples - frame) / hop) + 1 for samples >= frame, else 0.
std::size_t frame_count(std::size_t samples, const MfccConfig& cfg) noexcept;

/// Triangular filters with unit peak, equally spaced in mel between fmin and
/// fmax, sampled on the frame_length/2 + 1 FFT bin frequencies.
/// Result is n_mels x (frame_length/2 + 1).
Matrix mel_filterbank(const MfccConfig& cfg, double sample_rate);

/// Orthonormal DCT-II of x.
std::vector<double> dct2(std::span<const double> x);

/// Frames (Hann window, periodic) -> power spectrum -> mel energies ->
/// log(e + floor) -> DCT-II. Output is coefficients x frames with sample
/// rate sample_rate / hop. Throws TooShort, NonPowerOfTwoFrame.
LabeledSeries mfcc(std::span<const double> audio, double sample_rate, const MfccConfig& cfg);

}  // namespace esnc
