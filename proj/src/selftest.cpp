#include "esnc/selftest.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>

#include "esnc/classify.hpp"
#include "esnc/conceptor.hpp"
#include "esnc/kernels.hpp"
#include "esnc/linalg.hpp"
#include "esnc/mfcc.hpp"
#include "esnc/rng.hpp"

namespace esnc {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Correlation random_correlation(std::size_t n, Rng& rng) {
  const Matrix x = random_matrix(n, 4 * n, Distribution::standard_normal, rng);
  return {(1.0 / static_cast<double>(x.cols())) * gram(x), x.cols()};
}

SelftestCheck check(std::string name, const std::function<std::string(bool&)>& body) {
  SelftestCheck c{std::move(name), false, {}};
  try {
    c.detail = body(c.passed);
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = std::string("threw: ") + e.what();
  }
  return c;
}

}  // namespace

std::vector<SelftestCheck> run_selftest(std::uint64_t seed) {
  std::vector<SelftestCheck> out;
  Rng rng(seed);

  out.push_back(check("kernels: scalar and vector paths agree", [&](bool& ok) {
    const auto* simd = kernels::table_for(kernels::Isa::avx2);
    if (!simd) {
      ok = true;
      return std::string("no vector path on this machine");
    }
    const auto& ref = kernels::detail::scalar_table;
    const Matrix a = random_matrix(13, 37, Distribution::standard_normal, rng);
    Matrix g1(13, 13), g2(13, 13);
    ref.gram(a.data().data(), 13, 37, g1.data().data());
    simd->gram(a.data().data(), 13, 37, g2.data().data());
    const double err = max_abs_diff(g1, g2);
    ok = err < 1e-12 * (1.0 + max_abs(g1));
    return "max |diff| " + sci(err);
  }));

  out.push_back(check("conceptor: spectrum follows s = sigma / (sigma + a^-2)", [&](bool& ok) {
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const Correlation r = random_correlation(5, rng);
      const double a = std::pow(10.0, rng.uniform(-1.0, 2.0));
      const auto sig = sym_eig(r.r).eigenvalues;
      const auto s = sym_eig(from_correlation(r, a).c).eigenvalues;
      for (std::size_t i = 0; i < s.size(); ++i) {
        worst = std::max(worst, std::abs(s[i] - sig[i] / (sig[i] + 1.0 / (a * a))));
      }
    }
    ok = worst < 1e-8;
    return "max error " + sci(worst);
  }));

  out.push_back(check("conceptor: NOT NOT, AND/OR commutativity", [&](bool& ok) {
    double worst = 0.0;
    bool exact = true;
    for (int t = 0; t < 10; ++t) {
      const Conceptor c1 = from_correlation(random_correlation(4, rng), 2.0);
      const Conceptor c2 = from_correlation(random_correlation(4, rng), 3.0);
      exact = exact && conceptor_not(conceptor_not(c1)).c == c1.c;
      worst = std::max(worst, max_abs_diff(conceptor_and(c1, c2).c, conceptor_and(c2, c1).c));
      worst = std::max(worst, max_abs_diff(conceptor_or(c1, c2).c, conceptor_or(c2, c1).c));
    }
    ok = exact && worst < 1e-8;
    return std::string(exact ? "double negation exact" : "double negation NOT exact") +
           ", commutativity error " + sci(worst);
  }));

  out.push_back(check("mfcc: FFT round trip", [&](bool& ok) {
    std::vector<std::complex<double>> x(256), y;
    for (auto& v : x) v = {rng.normal(), rng.normal()};
    y = x;
    fft(y);
    ifft(y);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    ok = worst < 1e-9;
    return "max error " + sci(worst);
  }));

  out.push_back(check("mfcc: silence gives zero coefficients", [&](bool& ok) {
    const std::vector<double> silence(2048, 0.0);
    const LabeledSeries s = mfcc(silence, 16000.0, MfccConfig{});
    ok = s.steps() == frame_count(silence.size(), MfccConfig{}) && max_abs(s.values) == 0.0;
    return std::to_string(s.steps()) + " frames, max |c| " + sci(max_abs(s.values));
  }));

  out.push_back(check("classify: separable sinusoids, training accuracy", [&](bool& ok) {
    SynthSpec spec;
    spec.task = SynthTask::sinusoid;
    spec.classes = 4;
    spec.train_per_class = 6;
    spec.test_per_class = 1;
    spec.noise_std = 0.05;
    spec.seed = seed;
    const Dataset ds = synthesize(spec);
    TrainConfig cfg;
    cfg.reservoir.n_neurons = 20;
    cfg.reservoir.seed = seed;
    const ClassifierModel model = train(ds.train, ds.class_names, cfg);
    const Metrics m = evaluate(model, ds.train);
    bool sums = true;
    for (const auto& s : ds.train) {
      const EvidenceReport r = evidences(model, s);
      for (std::size_t j = 0; j < r.combined.size(); ++j) sums = sums && r.combined[j] == r.pos[j] + r.neg[j];
    }
    ok = sums && m.error_rate <= 0.05;
    return "training error " + sci(m.error_rate);
  }));

  return out;
}

}  // namespace esnc
