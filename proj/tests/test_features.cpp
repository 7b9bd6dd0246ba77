#include <doctest.h>

#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <numbers>

#include "esnc/error.hpp"
#include "esnc/features.hpp"
#include "esnc/mfcc.hpp"
#include "esnc/rng.hpp"
#include "esnc/wav.hpp"
#include "support.hpp"

using namespace esnc;

namespace {

LabeledSeries series(Matrix m) {
  LabeledSeries s;
  s.values = std::move(m);
  return s;
}

LabeledSeries row_series(const std::vector<double>& v) {
  Matrix m(1, v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m(0, i) = v[i];
  return series(std::move(m));
}

LabeledSeries sampled(std::size_t len, const std::function<double(double)>& f) {
  std::vector<double> v(len);
  for (std::size_t i = 0; i < len; ++i) v[i] = f(static_cast<double>(i) / static_cast<double>(len - 1));
  return row_series(v);
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no esnc::Error thrown");
  return Errc::Io;
}

std::vector<double> tone(double hz, double rate, std::size_t n, double amp = 0.5) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = amp * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / rate);
  return v;
}

}  // namespace

TEST_CASE("fit_normalization examples") {
  const std::vector<LabeledSeries> ramp = {row_series({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10})};
  const NormalizationParams p = fit_normalization(ramp);
  CHECK(p.shift == std::vector<double>{0.0});
  CHECK(p.scale[0] == doctest::Approx(0.1));

  const std::vector<LabeledSeries> flat = {row_series({5, 5, 5})};
  const NormalizationParams q = fit_normalization(flat);
  CHECK(q.shift[0] == -5.0);
  CHECK(q.scale[0] == 1.0);
  const LabeledSeries mapped = apply_normalization(q, flat[0]);
  for (double v : mapped.values.data()) CHECK(v == 0.0);
}

TEST_CASE("fit_normalization pools min and max across series (flat scan oracle)") {
  Rng rng(3);
  std::vector<LabeledSeries> train;
  for (int i = 0; i < 5; ++i) train.push_back(series(random_matrix(3, 4 + rng.below(10), Distribution::standard_normal, rng)));
  const NormalizationParams p = fit_normalization(train);
  for (std::size_t c = 0; c < 3; ++c) {
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (const auto& s : train) {
      for (double v : s.values.row(c)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    CHECK(p.shift[c] == -lo);
    CHECK(p.scale[c] == doctest::Approx(1.0 / (hi - lo)));
  }
  for (const auto& s : train) {
    const LabeledSeries n = apply_normalization(p, s);
    for (double v : n.values.data()) {
      CHECK(v >= -1e-12);
      CHECK(v <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("apply_normalization examples and errors") {
  const LabeledSeries s = row_series({20, -3});
  CHECK(apply_normalization(NormalizationParams::identity(1), s).values == s.values);
  const NormalizationParams p{{0.0}, {0.1}};
  CHECK(apply_normalization(p, row_series({20})).values(0, 0) == doctest::Approx(2.0));
  CHECK(code_of([&] { apply_normalization(NormalizationParams::identity(2), s); }) == Errc::ChannelMismatch);
  CHECK(code_of([] { fit_normalization({}); }) == Errc::EmptyInput);
  const std::vector<LabeledSeries> mixed = {row_series({1, 2}), series(Matrix(2, 2))};
  CHECK(code_of([&] { fit_normalization(mixed); }) == Errc::ChannelMismatch);
}

TEST_CASE("resample: affine data is reproduced by every mode") {
  const LabeledSeries ramp = sampled(37, [](double t) { return 3.0 - 2.0 * t; });
  for (ResampleMode m : {ResampleMode::polynomial, ResampleMode::linear}) {
    const LabeledSeries r = resample(ramp, {m, 4, 3});
    REQUIRE(r.steps() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(r.values(0, i) == doctest::Approx(3.0 - 2.0 * static_cast<double>(i) / 3.0).epsilon(1e-12));
  }
  CHECK(resample(ramp, {ResampleMode::none, 4, 3}).values == ramp.values);
}

TEST_CASE("resample: constant channel") {
  const LabeledSeries c = row_series(std::vector<double>(9, 2.5));
  for (ResampleMode m : {ResampleMode::polynomial, ResampleMode::linear}) {
    const LabeledSeries r = resample(c, {m, 6, 3});
    CHECK(r.steps() == 6);
    for (double v : r.values.data()) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));
  }
}

TEST_CASE("resample: cubic fit reproduces t^2 exactly at five points") {
  const LabeledSeries q = sampled(50, [](double t) { return t * t; });
  const LabeledSeries r = resample(q, {ResampleMode::polynomial, 5, 3});
  for (std::size_t i = 0; i < 5; ++i) {
    const double t = static_cast<double>(i) / 4.0;
    CHECK(std::abs(r.values(0, i) - t * t) < 1e-9);
  }
}

TEST_CASE("resample: polynomial least squares against normal equations on noisy data") {
  // degree-1 fit of arbitrary data: slope and intercept by the textbook formulas
  Rng rng(4);
  std::vector<double> v(20);
  for (double& x : v) x = rng.normal();
  const LabeledSeries s = row_series(v);
  const LabeledSeries r = resample(s, {ResampleMode::polynomial, 3, 1});
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    const double t = static_cast<double>(i) / 19.0;
    st += t;
    sy += v[i];
    stt += t * t;
    sty += t * v[i];
  }
  const double slope = (20 * sty - st * sy) / (20 * stt - st * st);
  const double icpt = (sy - slope * st) / 20;
  for (std::size_t i = 0; i < 3; ++i) CHECK(r.values(0, i) == doctest::Approx(icpt + slope * (static_cast<double>(i) / 2.0)).epsilon(1e-10));
}

TEST_CASE("resample: linear mode is idempotent on k points") {
  Rng rng(5);
  const LabeledSeries s = series(random_matrix(3, 4, Distribution::standard_normal, rng));
  const LabeledSeries r = resample(s, {ResampleMode::linear, 4, 3});
  CHECK(max_abs_diff(r.values, s.values) <= 1e-12);
}

TEST_CASE("resample keeps metadata and handles short input") {
  LabeledSeries s = row_series({1.0, 4.0});
  s.label = 3;
  s.id = "x";
  const LabeledSeries r = resample(s, {ResampleMode::polynomial, 4, 3});
  CHECK(r.label == 3);
  CHECK(r.id == "x");
  // degree capped at L - 1: two points give the line through them
  CHECK(r.values(0, 1) == doctest::Approx(2.0));
  CHECK(code_of([] { resample(row_series({1.0}), {ResampleMode::linear, 4, 3}); }) == Errc::TooShort);
  CHECK(code_of([] { resample(row_series({1.0, 2.0}), {ResampleMode::linear, 1, 3}); }) == Errc::TooShort);
  CHECK(code_of([] { resample(row_series({1.0, 2.0}), {ResampleMode::polynomial, 4, 0}); }) == Errc::BadDegree);
}

TEST_CASE("resample mode names") {
  CHECK(parse_resample_mode("polynomial") == ResampleMode::polynomial);
  CHECK(parse_resample_mode("none") == ResampleMode::none);
  CHECK(!parse_resample_mode("cubic"));
  CHECK(to_string(ResampleMode::linear) == "linear");
}

TEST_CASE("FFT matches a naive DFT") {
  Rng rng(6);
  for (std::size_t n : {1u, 2u, 4u, 8u, 64u, 512u}) {
    std::vector<std::complex<double>> x(n);
    for (auto& v : x) v = {rng.normal(), rng.normal()};
    std::vector<std::complex<double>> ref(n);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(k * j % n) / static_cast<double>(n);
        ref[k] += x[j] * std::polar(1.0, ang);
      }
    }
    auto y = x;
    fft(y);
    double scale = 0.0;
    for (const auto& v : ref) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(y[k] - ref[k]) <= 1e-12 * (1.0 + scale));
  }
}

TEST_CASE("FFT round trip recovers random frames") {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::complex<double>> x(512);
    for (auto& v : x) v = {rng.normal(), 0.0};
    auto y = x;
    fft(y);
    ifft(y);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      num += std::norm(y[i] - x[i]);
      den += std::norm(x[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-9);
  }
  std::vector<std::complex<double>> bad(6);
  CHECK(code_of([&] { fft(bad); }) == Errc::NonPowerOfTwoFrame);
  CHECK(is_power_of_two(1));
  CHECK(!is_power_of_two(0));
  CHECK(!is_power_of_two(12));
}

TEST_CASE("dct2 is the orthonormal DCT-II") {
  Rng rng(8);
  for (std::size_t n : {1u, 2u, 5u, 26u}) {
    std::vector<double> x(n);
    for (double& v : x) v = rng.normal();
    const std::vector<double> y = dct2(x);
    double ex = 0, ey = 0;
    for (std::size_t k = 0; k < n; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        s += x[j] * std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * static_cast<double>(j) + 1.0) /
                             (2.0 * static_cast<double>(n)));
      }
      s *= std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
      CHECK(y[k] == doctest::Approx(s).epsilon(1e-12));
      ex += x[k] * x[k];
      ey += y[k] * y[k];
    }
    CHECK(ey == doctest::Approx(ex).epsilon(1e-12));
  }
  const std::vector<double> c = dct2(std::vector<double>(26, -23.0));
  for (std::size_t k = 1; k < 26; ++k) CHECK(c[k] == 0.0);
}

TEST_CASE("mel scale") {
  CHECK(hz_to_mel(0.0) == 0.0);
  CHECK(hz_to_mel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)));
  for (double f : {10.0, 440.0, 4000.0, 8000.0}) CHECK(mel_to_hz(hz_to_mel(f)) == doctest::Approx(f).epsilon(1e-12));
}

TEST_CASE("mel filterbank shape and unit peaks") {
  MfccConfig cfg;
  const Matrix fb = mel_filterbank(cfg, 16000.0);
  CHECK(fb.rows() == 26);
  CHECK(fb.cols() == 257);
  for (std::size_t m = 0; m < fb.rows(); ++m) {
    double peak = 0.0;
    for (double v : fb.row(m)) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      peak = std::max(peak, v);
    }
    CHECK(peak > 0.0);
  }
}

TEST_CASE("frame count arithmetic") {
  MfccConfig cfg;
  CHECK(frame_count(16000, cfg) == 122);
  CHECK(frame_count(512, cfg) == 1);
  CHECK(frame_count(511, cfg) == 0);
  CHECK(frame_count(640, cfg) == 2);
  std::vector<double> audio = tone(440, 16000, 16000);
  const LabeledSeries m = mfcc(audio, 16000.0, cfg);
  CHECK(m.steps() == 122);
  CHECK(m.channels() == 12);
  CHECK(m.sample_rate_hz == doctest::Approx(125.0));
}

TEST_CASE("mfcc of digital silence is zero") {
  const LabeledSeries m = mfcc(std::vector<double>(4096, 0.0), 16000.0, MfccConfig{});
  CHECK(max_abs(m.values) <= 1e-9);
}

TEST_CASE("mfcc of a stationary tone is frame-stationary") {
  MfccConfig cfg;
  const double rate = 16000.0;
  // centre of the 10th filter
  const double lo = hz_to_mel(0.0), hi = hz_to_mel(rate / 2);
  const double centre = mel_to_hz(lo + (hi - lo) * 10.0 / 27.0);
  // whole number of cycles per hop keeps every frame phase-aligned
  const double hz = std::round(centre * 128.0 / rate) * rate / 128.0;
  const LabeledSeries m = mfcc(tone(hz, rate, 8192), rate, cfg);
  for (std::size_t f = 1; f < m.steps(); ++f) {
    for (std::size_t c = 0; c < m.channels(); ++c) CHECK(std::abs(m.values(c, f) - m.values(c, 0)) < 1e-6);
  }
}

TEST_CASE("mfcc is gain invariant once c0 is dropped") {
  Rng rng(9);
  std::vector<double> a(4096);
  for (double& v : a) v = 0.2 * rng.normal();
  std::vector<double> b = a;
  for (double& v : b) v *= 2.0;
  const MfccConfig cfg;
  CHECK(max_abs_diff(mfcc(a, 16000.0, cfg).values, mfcc(b, 16000.0, cfg).values) < 1e-6);

  MfccConfig with_c0 = cfg;
  with_c0.keep_c0 = true;
  const Matrix ca = mfcc(a, 16000.0, with_c0).values, cb = mfcc(b, 16000.0, with_c0).values;
  // c0 carries log(4) * sqrt(n_mels)
  CHECK(cb(0, 0) - ca(0, 0) == doctest::Approx(std::log(4.0) * std::sqrt(26.0)).epsilon(1e-6));
}

TEST_CASE("mfcc utterance resampling and errors") {
  MfccConfig cfg;
  cfg.utterance_samples = 512;
  cfg.frame_length = 128;
  cfg.hop_length = 64;
  const LabeledSeries m = mfcc(tone(300, 8000, 3000), 8000.0, cfg);
  CHECK(m.steps() == 7);

  MfccConfig bad;
  bad.frame_length = 500;
  CHECK(code_of([&] { mfcc(std::vector<double>(1000, 0.1), 16000.0, bad); }) == Errc::NonPowerOfTwoFrame);
  CHECK(code_of([] { mfcc(std::vector<double>(100, 0.1), 16000.0, MfccConfig{}); }) == Errc::TooShort);
  MfccConfig many;
  many.n_coeffs = 30;
  CHECK_THROWS_AS(mfcc(std::vector<double>(1000, 0.1), 16000.0, many), Error);
}

TEST_CASE("WAV round trip and errors") {
  esnc::test::TempDir dir;
  Audio a;
  a.sample_rate = 8000.0;
  Rng rng(10);
  for (int i = 0; i < 1000; ++i) a.samples.push_back(rng.uniform(-0.9, 0.9));
  a.samples.push_back(1.5);  // clipped
  write_wav(dir / "a.wav", a);
  const Audio b = read_wav(dir / "a.wav");
  CHECK(b.sample_rate == 8000.0);
  REQUIRE(b.samples.size() == a.samples.size());
  for (std::size_t i = 0; i + 1 < a.samples.size(); ++i) CHECK(std::abs(b.samples[i] - a.samples[i]) <= 1.0 / 32768.0);
  CHECK(b.samples.back() == doctest::Approx(32767.0 / 32768.0));

  {
    std::ofstream f(dir / "junk.wav", std::ios::binary);
    f << "not a wave file at all";
  }
  CHECK(code_of([&] { read_wav(dir / "junk.wav"); }) == Errc::ParseError);
  CHECK(code_of([&] { read_wav(dir / "missing.wav"); }) == Errc::MissingFile);
}

TEST_CASE("WAV stereo downmix and unsupported formats") {
  esnc::test::TempDir dir;
  auto put16 = [](std::ofstream& f, std::uint16_t v) { f.put(static_cast<char>(v & 0xff)).put(static_cast<char>(v >> 8)); };
  auto put32 = [&](std::ofstream& f, std::uint32_t v) {
    put16(f, static_cast<std::uint16_t>(v & 0xffff));
    put16(f, static_cast<std::uint16_t>(v >> 16));
  };
  auto write = [&](const std::filesystem::path& p, std::uint16_t format, std::uint16_t channels, std::uint16_t bits,
                   const std::vector<std::int16_t>& data) {
    std::ofstream f(p, std::ios::binary);
    const std::uint32_t bytes = static_cast<std::uint32_t>(data.size() * 2);
    f << "RIFF";
    put32(f, 36 + bytes);
    f << "WAVEfmt ";
    put32(f, 16);
    put16(f, format);
    put16(f, channels);
    put32(f, 16000);
    put32(f, 16000u * channels * bits / 8);
    put16(f, static_cast<std::uint16_t>(channels * bits / 8));
    put16(f, bits);
    f << "data";
    put32(f, bytes);
    for (std::int16_t v : data) put16(f, static_cast<std::uint16_t>(v));
  };
  write(dir / "st.wav", 1, 2, 16, {16384, 0, -16384, -16384});
  const Audio st = read_wav(dir / "st.wav");
  REQUIRE(st.samples.size() == 2);
  CHECK(st.samples[0] == doctest::Approx(0.25));
  CHECK(st.samples[1] == doctest::Approx(-0.5));

  write(dir / "float.wav", 3, 1, 16, {0, 0});
  CHECK(code_of([&] { read_wav(dir / "float.wav"); }) == Errc::UnsupportedFormat);
  write(dir / "b8.wav", 1, 1, 8, {0});
  CHECK(code_of([&] { read_wav(dir / "b8.wav"); }) == Errc::UnsupportedFormat);
}
