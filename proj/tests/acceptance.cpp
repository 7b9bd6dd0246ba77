// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "esnc/classify.hpp"
#include "esnc/conceptor.hpp"
#include "esnc/datasets.hpp"
#include "esnc/linalg.hpp"
#include "esnc/mfcc.hpp"
#include "esnc/rng.hpp"
#include "support.hpp"

using namespace esnc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Conceptor plain(Matrix c) { return Conceptor{std::move(c), std::nullopt, nullptr}; }

// Plain-array gradient descent on mean ||x - C x||^2 + a^-2 ||C||_F^2 over
// the sampled states, kept independent of the library's matrix code.
std::vector<double> descend(const std::vector<double>& r, std::size_t n, double aperture) {
  const double reg = 1.0 / (aperture * aperture);
  std::vector<double> c(n * n, 0.0), g(n * n);
  for (int step = 0; step < 100000; ++step) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double cr = 0.0;
        for (std::size_t k = 0; k < n; ++k) cr += c[i * n + k] * r[k * n + j];
        g[i * n + j] = 2.0 * (cr - r[i * n + j] + reg * c[i * n + j]);
      }
    }
    for (std::size_t i = 0; i < n * n; ++i) c[i] -= 1e-3 * g[i];
  }
  return c;
}

Outcome ac1() {
  const auto t0 = Clock::now();
  Rng rng(101);
  const std::size_t sizes[] = {2, 3, 5};
  double worst = 0.0;
  std::size_t runs = 0;
  for (std::size_t t = 0; t < 20; ++t) {
    const std::size_t n = sizes[t % 3];
    const Matrix x = random_matrix(n, 50, Distribution::standard_normal, rng);
    std::vector<double> r(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < 50; ++l) r[i * n + j] += x(i, l) * x(j, l) / 50.0;
      }
    }
    const Correlation corr{Matrix(n, n, r), 50};
    for (double aperture : {0.5, 1.0, 10.0}) {
      const std::vector<double> gd = descend(r, n, aperture);
      const Matrix c = from_correlation(corr, aperture).c;
      double fro = 0.0;
      for (std::size_t i = 0; i < n * n; ++i) fro += std::pow(c.data()[i] - gd[i], 2);
      worst = std::max(worst, std::sqrt(fro));
      ++runs;
    }
  }
  const double secs = since(t0);
  return {worst <= 1e-4 && secs < 30.0,
          std::to_string(runs) + " runs, worst Frobenius gap " + fmt("%.2e", worst) + ", " + fmt("%.1f", secs) + " s"};
}

Outcome ac2() {
  Rng rng(102);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.below(12);
    const Correlation r = test::random_correlation(n, rng, 1 + rng.below(2 * n));  // rank deficient at times
    const double aperture = std::pow(10.0, rng.uniform(-1.0, 3.0));
    std::vector<double> sig = sym_eig(r.r).eigenvalues, s = sym_eig(from_correlation(r, aperture).c).eigenvalues;
    std::sort(sig.begin(), sig.end());
    std::sort(s.begin(), s.end());
    const double reg = 1.0 / (aperture * aperture);
    for (std::size_t i = 0; i < n; ++i) {
      const double g = std::max(sig[i], 0.0);
      worst = std::max(worst, std::abs(s[i] - g / (g + reg)));
    }
  }
  return {worst <= 1e-8, "100 pairs, worst eigenvalue gap " + fmt("%.2e", worst)};
}

Outcome ac3() {
  Rng rng(103);
  double comm = 0.0, ident = 0.0, neutral = 0.0;
  bool exact = true;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.below(10);
    const Conceptor a = test::random_conceptor(n, rng), b = test::random_conceptor(n, rng);
    exact = exact && conceptor_not(conceptor_not(a)).c == a.c;
    exact = exact && conceptor_not(conceptor_or(a, b)).c == conceptor_and(conceptor_not(a), conceptor_not(b)).c;
    comm = std::max({comm, max_abs_diff(conceptor_and(a, b).c, conceptor_and(b, a).c),
                     max_abs_diff(conceptor_or(a, b).c, conceptor_or(b, a).c)});
    ident = std::max(ident, max_abs_diff(conceptor_and(a, plain(Matrix::identity(n))).c, a.c));
    neutral = std::max(neutral, max_abs_diff(conceptor_or(a, plain(Matrix(n, n))).c, a.c));
  }
  const Matrix i3 = Matrix::identity(3);
  const Conceptor half = plain(0.5 * i3);
  const bool examples = conceptor_not(plain(Matrix(3, 3))).c == i3 && max_abs(conceptor_not(plain(i3)).c) == 0.0 &&
                        conceptor_not(half).c == 0.5 * i3 &&
                        max_abs_diff(conceptor_and(half, half).c, (1.0 / 3.0) * i3) < 1e-9 &&
                        max_abs_diff(conceptor_or(half, half).c, (2.0 / 3.0) * i3) < 1e-9;
  return {exact && examples && comm <= 1e-8 && ident <= 1e-8 && neutral <= 1e-6,
          std::string("50 pairs, double negation and de Morgan ") + (exact ? "exact" : "NOT exact") +
              ", commutativity " + fmt("%.1e", comm) + ", C AND I " + fmt("%.1e", ident) + ", C OR 0 " +
              fmt("%.1e", neutral) + (examples ? ", examples ok" : ", examples FAILED")};
}

TrainConfig maneuver_config() {
  TrainConfig cfg;
  cfg.reservoir.n_neurons = 10;
  cfg.preprocessing.resample = {ResampleMode::polynomial, 4, 3};
  return cfg;
}

Dataset maneuver_data() {
  SynthSpec spec;
  spec.task = SynthTask::maneuver;
  spec.classes = 7;
  spec.train_per_class = 8;
  spec.test_per_class = 6;
  spec.seed = 1;
  return synthesize(spec);
}

double test_mean(const SweepReport& rep, std::size_t value, Variant v = Variant::original) {
  return rep.find(value, v)->stats[1][static_cast<int>(Family::combined)][0].mean;
}

Outcome ac4() {
  const auto t0 = Clock::now();
  SweepConfig cfg;
  cfg.axis = SweepAxis::reservoir_size;
  cfg.grid = {2, 10, 60};
  cfg.trials = 20;
  cfg.base = maneuver_config();
  const SweepReport rep = sweep(maneuver_data(), cfg);
  const double a2 = test_mean(rep, 2), a10 = test_mean(rep, 10), a60 = test_mean(rep, 60);
  const double secs = since(t0);
  return {a10 >= 90.0 && a60 >= a2 - 5.0 && secs < 60.0,
          "N=2 " + fmt("%.2f", a2) + "%, N=10 " + fmt("%.2f", a10) + "%, N=60 " + fmt("%.2f", a60) + "%, " +
              fmt("%.1f", secs) + " s"};
}

Outcome ac5() {
  SweepConfig cfg;
  cfg.axis = SweepAxis::training_size;
  cfg.grid = {2};
  cfg.trials = 20;
  cfg.base = maneuver_config();
  const double a = test_mean(sweep(maneuver_data(), cfg), 2);
  return {a >= 65.0, "n=2 per class, mean combined accuracy " + fmt("%.2f", a) + "%"};
}

Outcome ac6() {
  SweepConfig cfg;
  cfg.axis = SweepAxis::ablation;
  cfg.grid = {10};
  cfg.trials = 100;
  cfg.base = maneuver_config();
  const SweepReport rep = sweep(maneuver_data(), cfg);
  const double orig = test_mean(rep, 10);
  const double d_lin = orig - test_mean(rep, 10, Variant::linear);
  const double d_interp = orig - test_mean(rep, 10, Variant::no_interp);
  return {std::abs(d_lin) <= 10.0 && std::abs(d_interp) <= 10.0,
          "original " + fmt("%.2f", orig) + "%, delta linear " + fmt("%+.2f", d_lin) + ", delta no-interp " +
              fmt("%+.2f", d_interp) + " (100 paired trials)"};
}

Outcome ac7() {
  SynthSpec spec;
  spec.task = SynthTask::sinusoid;
  spec.classes = 8;
  spec.seed = 1;
  const Dataset ds = synthesize(spec);
  TrainConfig cfg;
  cfg.reservoir.n_neurons = 20;
  cfg.preprocessing.resample.mode = ResampleMode::none;
  const Metrics m = evaluate(train(ds.train, ds.class_names, cfg), ds.test);
  const double baseline = shuffle_baseline_error(ds.test, 1000, 1);
  return {m.error_rate <= 0.5 * baseline,
          "8-class sinusoid error " + fmt("%.4f", m.error_rate) + " vs shuffle baseline " + fmt("%.4f", baseline)};
}

Outcome ac8() {
  SynthSpec spec;
  spec.task = SynthTask::sinusoid;
  spec.classes = 8;
  spec.train_per_class = 110;
  spec.test_per_class = 10;
  const Dataset ds = synthesize(spec);
  TrainConfig cfg;
  cfg.reservoir.n_neurons = 10;
  cfg.preprocessing.resample.mode = ResampleMode::none;  // every raw step drives the reservoir
  const auto t0 = Clock::now();
  const ClassifierModel model = train(ds.train, ds.class_names, cfg);
  const double train_s = since(t0);
  const auto t1 = Clock::now();
  int sink = 0;
  for (const auto& s : ds.test) sink += predict(model, s);
  const double per_ms = 1e3 * since(t1) / static_cast<double>(ds.test.size());
  return {train_s < 2.0 && per_ms < 10.0 && sink >= 0,
          std::to_string(ds.train.size()) + " series trained in " + fmt("%.3f", train_s) + " s, " +
              fmt("%.4f", per_ms) + " ms per classification"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int quiet_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

Outcome ac9() {
  test::TempDir dir;
  bool ok = true;
  for (int k = 0; k < 2; ++k) {
    const std::string tag = std::to_string(k);
    ok = ok && quiet_run({"train", "--seed", "1", "--model", (dir / ("model" + tag)).string()}) == 0;
    ok = ok && quiet_run({"sweep", "--axis", "reservoir-size", "--grid", "2,10,60", "--trials", "20", "--seed", "1",
                          "--out", (dir / ("sweep" + tag)).string()}) == 0;
    ok = ok && quiet_run({"sweep", "--axis", "ablation", "--trials", "5", "--seed", "1", "--jobs", k == 0 ? "1" : "2",
                          "--out", (dir / ("ablation" + tag)).string()}) == 0;
  }
  const bool model_same = slurp(dir / "model0") == slurp(dir / "model1") && !slurp(dir / "model0").empty();
  const bool sweep_same = slurp(dir / "sweep0") == slurp(dir / "sweep1") && !slurp(dir / "sweep0").empty();
  const bool abl_same = slurp(dir / "ablation0") == slurp(dir / "ablation1");
  return {ok && model_same && sweep_same && abl_same,
          std::string("model ") + (model_same ? "identical" : "DIFFERS") + ", sweep CSV " +
              (sweep_same ? "identical" : "DIFFERS") + ", ablation across --jobs " +
              (abl_same ? "identical" : "DIFFERS")};
}

Outcome ac10() {
  Rng rng(110);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    std::vector<std::complex<double>> x(512);
    for (auto& v : x) v = {rng.normal(), 0.0};
    auto y = x;
    fft(y);
    ifft(y);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      num += std::norm(y[i] - x[i]);
      den += std::norm(x[i]);
    }
    worst = std::max(worst, std::sqrt(num / den));
  }
  const MfccConfig cfg;
  const double silence = max_abs(mfcc(std::vector<double>(16000, 0.0), 16000.0, cfg).values);
  const std::size_t frames = mfcc(std::vector<double>(16000, 0.25), 16000.0, cfg).steps();
  return {worst < 1e-9 && silence <= 1e-9 && frames == 122 && frame_count(16000, cfg) == 122,
          "FFT round trip " + fmt("%.1e", worst) + ", silence max |c| " + fmt("%.1e", silence) + ", 1 s at 16 kHz -> " +
              std::to_string(frames) + " frames"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 ", ac1}, {"AC2 ", ac2}, {"AC3 ", ac3}, {"AC4 ", ac4}, {"AC5 ", ac5},
      {"AC6 ", ac6}, {"AC7 ", ac7}, {"AC8 ", ac8}, {"AC9 ", ac9}, {"AC10", ac10}};
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("[%s] %s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("acceptance: %d/%zu passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
