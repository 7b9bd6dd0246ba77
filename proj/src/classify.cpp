#include "esnc/classify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "esnc/error.hpp"
#include "esnc/rng.hpp"
#include "text_io.hpp"

namespace esnc {

std::string_view to_string(FeatureKind f) noexcept { return f == FeatureKind::raw ? "raw" : "mfcc"; }

std::optional<FeatureKind> parse_feature_kind(std::string_view text) noexcept {
  if (text == "raw") return FeatureKind::raw;
  if (text == "mfcc") return FeatureKind::mfcc;
  return std::nullopt;
}

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::pos: return "pos";
    case Family::neg: return "neg";
    case Family::combined: return "combined";
  }
  return "combined";
}

namespace {

LabeledSeries featurize(const Preprocessing& pre, const LabeledSeries& s) {
  if (pre.feature == FeatureKind::raw) return s;
  if (s.channels() != 1) {
    throw Error(Errc::ChannelMismatch,
                s.id + ": MFCC features need a single audio channel, got " + std::to_string(s.channels()));
  }
  if (!s.sample_rate_hz) throw Error(Errc::BadArgument, s.id + ": audio series has no sample rate");
  LabeledSeries out = mfcc(s.values.row(0), *s.sample_rate_hz, pre.mfcc);
  out.label = s.label;
  out.id = s.id;
  return out;
}

LabeledSeries finish(const Preprocessing& pre, const NormalizationParams& norm, LabeledSeries s) {
  if (s.channels() != norm.channels()) {
    throw Error(Errc::ChannelMismatch, s.id + ": " + std::to_string(s.channels()) +
                                           " feature channels, model expects " +
                                           std::to_string(norm.channels()));
  }
  if (pre.normalize) s = apply_normalization(norm, s);
  return resample(s, pre.resample);
}

struct PreparedSet {
  NormalizationParams norm;
  std::vector<LabeledSeries> series;
};

PreparedSet prepare_training(std::span<const LabeledSeries> set, const Preprocessing& pre) {
  PreparedSet out;
  std::vector<LabeledSeries> feats;
  feats.reserve(set.size());
  for (const auto& s : set) feats.push_back(featurize(pre, s));
  out.norm = pre.normalize ? fit_normalization(feats) : NormalizationParams::identity(feats.front().channels());
  out.series.reserve(feats.size());
  for (auto& f : feats) out.series.push_back(finish(pre, out.norm, std::move(f)));
  return out;
}

void check_classes(std::span<const LabeledSeries> set, std::size_t m) {
  if (m < 2) throw Error(Errc::SingleClass, "need at least two classes, got " + std::to_string(m));
  std::vector<std::size_t> counts(m, 0);
  for (const auto& s : set) {
    if (!s.label || *s.label < 0 || static_cast<std::size_t>(*s.label) >= m) {
      throw Error(Errc::BadArgument, s.id + ": label missing or outside [0, " + std::to_string(m) + ")");
    }
    ++counts[static_cast<std::size_t>(*s.label)];
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (counts[j] == 0) throw Error(Errc::EmptyClass, "class " + std::to_string(j) + " has no training samples");
  }
}

std::vector<Correlation> class_correlations(const std::vector<StateSequence>& states,
                                            std::span<const LabeledSeries> labels, std::size_t m) {
  std::vector<std::vector<StateSequence>> per_class(m);
  for (std::size_t i = 0; i < states.size(); ++i) {
    per_class[static_cast<std::size_t>(*labels[i].label)].push_back(states[i]);
  }
  std::vector<Correlation> out;
  out.reserve(m);
  for (const auto& group : per_class) out.push_back(correlation(group));
  return out;
}

void build_conceptors(ClassifierModel& model, const std::vector<Correlation>& corr) {
  model.positive.clear();
  for (const auto& r : corr) model.positive.push_back(from_correlation(r, model.aperture));
  model.negative = negative_conceptors(model.positive);
}

std::size_t label_of(const LabeledSeries& s) { return static_cast<std::size_t>(*s.label); }

}  // namespace

std::vector<Conceptor> negative_conceptors(std::span<const Conceptor> positive) {
  const std::size_t m = positive.size();
  std::vector<Conceptor> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::optional<Conceptor> acc;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == j) continue;
      acc = acc ? conceptor_or(*acc, positive[i]) : positive[i];
    }
    out.push_back(conceptor_not(*acc));
  }
  return out;
}

ClassifierModel train(std::span<const LabeledSeries> train_set,
                      const std::vector<std::string>& class_names, const TrainConfig& cfg) {
  check_classes(train_set, class_names.size());
  cfg.reservoir.validate();
  if (!(cfg.aperture > 0.0) || !std::isfinite(cfg.aperture)) {
    throw Error(Errc::NonPositiveAperture, "aperture must be finite and > 0");
  }

  PreparedSet prepared = prepare_training(train_set, cfg.preprocessing);
  ClassifierModel model;
  model.classes = class_names;
  model.aperture = cfg.aperture;
  model.preprocessing = cfg.preprocessing;
  model.normalization = prepared.norm;
  model.evidence = cfg.evidence;
  model.reservoir = generate(cfg.reservoir, prepared.norm.channels());

  std::vector<StateSequence> states;
  states.reserve(prepared.series.size());
  for (const auto& s : prepared.series) states.push_back(drive(model.reservoir, s));
  build_conceptors(model, class_correlations(states, prepared.series, class_names.size()));
  return model;
}

LabeledSeries preprocess(const ClassifierModel& model, const LabeledSeries& sample) {
  return finish(model.preprocessing, model.normalization, featurize(model.preprocessing, sample));
}

int argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return static_cast<int>(best);
}

EvidenceReport evidences_from_states(const ClassifierModel& model, const StateSequence& states) {
  const std::size_t m = model.num_classes();
  EvidenceReport r;
  r.pos.resize(m);
  r.neg.resize(m);
  r.combined.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    r.pos[j] = evidence(model.positive[j], states, model.evidence);
    r.neg[j] = evidence(model.negative[j], states, model.evidence);
    r.combined[j] = r.pos[j] + r.neg[j];
  }
  r.decided = argmax(r.combined);
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    if (static_cast<int>(j) != r.decided) second = std::max(second, r.combined[j]);
  }
  r.margin = m > 1 ? r.combined[static_cast<std::size_t>(r.decided)] - second : 0.0;
  return r;
}

EvidenceReport evidences(const ClassifierModel& model, const LabeledSeries& sample) {
  return evidences_from_states(model, drive(model.reservoir, preprocess(model, sample)));
}

int predict(const ClassifierModel& model, const LabeledSeries& sample, std::optional<double> threshold) {
  const EvidenceReport r = evidences(model, sample);
  if (threshold && r.combined[static_cast<std::size_t>(r.decided)] < *threshold) return kReject;
  return r.decided;
}

int predict(const ClassifierModel& model, const LabeledSeries& sample, std::span<const double> thresholds) {
  if (thresholds.size() != model.num_classes()) {
    throw Error(Errc::DimensionMismatch, "need one threshold per class");
  }
  const EvidenceReport r = evidences(model, sample);
  const auto best = static_cast<std::size_t>(r.decided);
  return r.combined[best] < thresholds[best] ? kReject : r.decided;
}

std::vector<double> calibrate_thresholds(const ClassifierModel& model,
                                         std::span<const LabeledSeries> train_set, double percentile) {
  if (!(percentile >= 0.0 && percentile <= 100.0)) {
    throw Error(Errc::BadArgument, "percentile must lie in [0, 100]");
  }
  const std::size_t m = model.num_classes();
  std::vector<std::vector<double>> own(m);
  for (const auto& s : train_set) {
    if (!s.label || static_cast<std::size_t>(*s.label) >= m) continue;
    own[label_of(s)].push_back(evidences(model, s).combined[label_of(s)]);
  }
  std::vector<double> out(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    auto& v = own[j];
    if (v.empty()) throw Error(Errc::EmptyClass, "class " + std::to_string(j) + " has no calibration samples");
    std::sort(v.begin(), v.end());
    const double pos = percentile / 100.0 * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    out[j] = v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  }
  return out;
}

namespace {

struct Tally {
  std::size_t m = 0;
  std::size_t total = 0;
  std::array<std::size_t, 3> correct{};
  std::array<std::vector<std::size_t>, 3> class_correct;
  std::vector<std::size_t> class_total;
  std::vector<std::vector<std::size_t>> confusion;

  explicit Tally(std::size_t classes) : m(classes), class_total(classes, 0),
                                        confusion(classes, std::vector<std::size_t>(classes, 0)) {
    for (auto& c : class_correct) c.assign(classes, 0);
  }

  void add(std::size_t truth, const EvidenceReport& r) {
    ++total;
    ++class_total[truth];
    const std::array<int, 3> d = {argmax(r.pos), argmax(r.neg), r.decided};
    for (std::size_t f = 0; f < 3; ++f) {
      if (static_cast<std::size_t>(d[f]) == truth) {
        ++correct[f];
        ++class_correct[f][truth];
      }
    }
    ++confusion[truth][static_cast<std::size_t>(r.decided)];
  }

  Metrics metrics() const {
    Metrics out;
    out.total = total;
    out.confusion = confusion;
    for (std::size_t f = 0; f < 3; ++f) {
      out.accuracy[f] = 100.0 * static_cast<double>(correct[f]) / static_cast<double>(total);
      out.class_accuracy[f].resize(m);
      for (std::size_t j = 0; j < m; ++j) {
        out.class_accuracy[f][j] = class_total[j] == 0
                                       ? std::numeric_limits<double>::quiet_NaN()
                                       : 100.0 * static_cast<double>(class_correct[f][j]) /
                                             static_cast<double>(class_total[j]);
      }
    }
    std::size_t diag = 0;
    for (std::size_t j = 0; j < m; ++j) diag += confusion[j][j];
    out.error_rate = static_cast<double>(total - diag) / static_cast<double>(total);
    return out;
  }
};

}  // namespace

Metrics evaluate(const ClassifierModel& model, std::span<const LabeledSeries> test_set) {
  if (test_set.empty()) throw Error(Errc::EmptyTestSet, "test set is empty");
  Tally tally(model.num_classes());
  for (const auto& s : test_set) {
    if (!s.label || static_cast<std::size_t>(*s.label) >= model.num_classes()) {
      throw Error(Errc::BadArgument, s.id + ": label missing or unknown to the model");
    }
    tally.add(label_of(s), evidences(model, s));
  }
  return tally.metrics();
}

double shuffle_baseline_error(std::span<const LabeledSeries> test_set, std::size_t draws, std::uint64_t seed) {
  if (test_set.empty()) throw Error(Errc::EmptyTestSet, "test set is empty");
  if (draws == 0) throw Error(Errc::BadArgument, "draws must be >= 1");
  std::vector<int> truth;
  truth.reserve(test_set.size());
  for (const auto& s : test_set) truth.push_back(s.label.value_or(-1));
  Rng rng(seed);
  std::vector<int> guess = truth;
  double sum = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    rng.shuffle(std::span<int>(guess));
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) wrong += guess[i] != truth[i];
    sum += static_cast<double>(wrong) / static_cast<double>(truth.size());
  }
  return sum / static_cast<double>(draws);
}

// ---- aperture cross-validation ---------------------------------------------------

std::vector<double> default_aperture_grid() {
  std::vector<double> g(20);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = std::pow(10.0, -2.0 + 6.0 * static_cast<double>(i) / 19.0);
  }
  return g;
}

CrossValidation cross_validate_aperture(std::span<const LabeledSeries> train_set,
                                        const std::vector<std::string>& class_names,
                                        const TrainConfig& cfg, std::vector<double> grid,
                                        std::size_t folds) {
  if (grid.empty()) throw Error(Errc::BadArgument, "aperture grid is empty");
  if (folds < 2) throw Error(Errc::BadArgument, "folds must be >= 2");
  for (double a : grid) {
    if (!(a > 0.0) || !std::isfinite(a)) throw Error(Errc::NonPositiveAperture, "grid apertures must be > 0");
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const std::size_t m = class_names.size();
  check_classes(train_set, m);
  std::vector<std::size_t> fold_of(train_set.size());
  std::vector<std::size_t> seen(m, 0);
  for (std::size_t i = 0; i < train_set.size(); ++i) fold_of[i] = seen[label_of(train_set[i])]++ % folds;
  for (std::size_t j = 0; j < m; ++j) {
    if (seen[j] < folds) {
      throw Error(Errc::TooFewSamplesPerClass, "class '" + class_names[j] + "' has " +
                                                   std::to_string(seen[j]) + " samples, need " +
                                                   std::to_string(folds));
    }
  }

  std::vector<double> acc_sum(grid.size(), 0.0);
  std::optional<Reservoir> reservoir;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<LabeledSeries> fit, held;
    for (std::size_t i = 0; i < train_set.size(); ++i) {
      (fold_of[i] == f ? held : fit).push_back(train_set[i]);
    }
    PreparedSet prepared = prepare_training(fit, cfg.preprocessing);
    if (!reservoir) reservoir = generate(cfg.reservoir, prepared.norm.channels());

    ClassifierModel model;
    model.reservoir = *reservoir;
    model.classes = class_names;
    model.preprocessing = cfg.preprocessing;
    model.normalization = prepared.norm;
    model.evidence = cfg.evidence;

    std::vector<StateSequence> fit_states;
    for (const auto& s : prepared.series) fit_states.push_back(drive(model.reservoir, s));
    const auto corr = class_correlations(fit_states, prepared.series, m);
    std::vector<StateSequence> held_states;
    for (const auto& s : held) held_states.push_back(drive(model.reservoir, preprocess(model, s)));

    for (std::size_t g = 0; g < grid.size(); ++g) {
      model.aperture = grid[g];
      build_conceptors(model, corr);
      std::size_t correct = 0;
      for (std::size_t i = 0; i < held.size(); ++i) {
        correct += static_cast<std::size_t>(evidences_from_states(model, held_states[i]).decided) ==
                   label_of(held[i]);
      }
      acc_sum[g] += 100.0 * static_cast<double>(correct) / static_cast<double>(held.size());
    }
  }

  CrossValidation cv;
  std::size_t best = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    cv.table.push_back({grid[g], acc_sum[g] / static_cast<double>(folds)});
    if (cv.table[g].accuracy > cv.table[best].accuracy) best = g;
  }
  cv.best = grid[best];
  return cv;
}

// ---- sweeps -------------------------------------------------------------------

std::string_view to_string(SweepAxis a) noexcept {
  switch (a) {
    case SweepAxis::reservoir_size: return "reservoir-size";
    case SweepAxis::training_size: return "training-size";
    case SweepAxis::ablation: return "ablation";
  }
  return "reservoir-size";
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view text) noexcept {
  if (text == "reservoir-size") return SweepAxis::reservoir_size;
  if (text == "training-size") return SweepAxis::training_size;
  if (text == "ablation") return SweepAxis::ablation;
  return std::nullopt;
}

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::original: return "original";
    case Variant::linear: return "linear";
    case Variant::no_interp: return "no-interp";
    case Variant::linear_no_interp: return "linear+no-interp";
  }
  return "original";
}

std::vector<std::size_t> default_sweep_grid(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::reservoir_size: return {2, 4, 6, 8, 10, 20, 30, 40, 60};
    case SweepAxis::training_size: return {2, 3, 4, 5, 6, 7, 8};
    case SweepAxis::ablation: return {};
  }
  return {};
}

const SweepCell* SweepReport::find(std::size_t value, Variant variant) const noexcept {
  for (const auto& c : cells) {
    if (c.value == value && c.variant == variant) return &c;
  }
  return nullptr;
}

namespace {

struct TrialResult {
  Metrics train;
  Metrics test;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
};

struct Task {
  std::size_t cell;       // index into report.cells
  std::size_t grid_index; // seed key, shared by the variants of one value
  std::size_t trial;
};

TrainConfig variant_config(TrainConfig cfg, Variant v) {
  if (v == Variant::linear || v == Variant::linear_no_interp) cfg.reservoir.activation = Activation::identity;
  if (v == Variant::no_interp || v == Variant::linear_no_interp) cfg.preprocessing.resample.mode = ResampleMode::none;
  return cfg;
}

Stat summarize(const std::vector<double>& v) {
  Stat s;
  double sum = 0.0;
  s.min = v.front();
  s.max = v.front();
  for (double x : v) {
    sum += x;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean = sum / static_cast<double>(v.size());
  return s;
}

}  // namespace

SweepReport sweep(const Dataset& dataset, const SweepConfig& cfg) {
  if (cfg.trials == 0) throw Error(Errc::BadArgument, "trials must be >= 1");
  const std::size_t m = dataset.num_classes();
  std::vector<std::size_t> grid = cfg.grid;
  if (grid.empty()) grid = default_sweep_grid(cfg.axis);
  if (grid.empty()) grid = {cfg.base.reservoir.n_neurons};
  for (std::size_t v : grid) {
    if (v == 0) throw Error(Errc::BadArgument, "grid values must be >= 1");
  }

  std::vector<std::vector<const LabeledSeries*>> by_class(m);
  for (const auto& s : dataset.train) {
    if (!s.label || static_cast<std::size_t>(*s.label) >= m) {
      throw Error(Errc::BadArgument, s.id + ": label missing or outside the class list");
    }
    by_class[label_of(s)].push_back(&s);
  }
  if (cfg.axis == SweepAxis::training_size) {
    const std::size_t need = *std::max_element(grid.begin(), grid.end());
    for (std::size_t j = 0; j < m; ++j) {
      if (by_class[j].size() < need) {
        throw Error(Errc::InsufficientData, "class '" + dataset.class_names[j] + "' has " +
                                                std::to_string(by_class[j].size()) +
                                                " training series, grid needs " + std::to_string(need));
      }
    }
  }
  if (cfg.axis != SweepAxis::training_size && dataset.test.empty()) {
    throw Error(Errc::InsufficientData, "dataset has no test split");
  }

  SweepReport report;
  report.axis = cfg.axis;
  report.classes = dataset.class_names;
  report.trials = cfg.trials;
  std::vector<Task> tasks;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto variants = cfg.axis == SweepAxis::ablation ? std::vector<Variant>(kVariants.begin(), kVariants.end())
                                                          : std::vector<Variant>{Variant::original};
    for (Variant v : variants) {
      SweepCell cell;
      cell.value = grid[g];
      cell.variant = v;
      for (std::size_t t = 0; t < cfg.trials; ++t) tasks.push_back({report.cells.size(), g, t});
      report.cells.push_back(std::move(cell));
    }
  }

  // Split per training-size value; other axes use the dataset as given.
  const auto split_for = [&](std::size_t value) {
    std::pair<std::vector<LabeledSeries>, std::vector<LabeledSeries>> sets;
    if (cfg.axis != SweepAxis::training_size) {
      sets.first = dataset.train;
      sets.second = dataset.test;
      return sets;
    }
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < by_class[j].size(); ++i) {
        (i < value ? sets.first : sets.second).push_back(*by_class[j][i]);
      }
    }
    sets.second.insert(sets.second.end(), dataset.test.begin(), dataset.test.end());
    return sets;
  };
  std::vector<std::pair<std::vector<LabeledSeries>, std::vector<LabeledSeries>>> splits;
  for (std::size_t v : grid) splits.push_back(split_for(v));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (splits[g].second.empty()) {
      throw Error(Errc::InsufficientData, "no test series left for grid value " + std::to_string(grid[g]));
    }
  }

  std::vector<TrialResult> results(tasks.size());
  const auto run_task = [&](std::size_t k) {
    const Task& task = tasks[k];
    const SweepCell& cell = report.cells[task.cell];
    TrainConfig tc = variant_config(cfg.base, cell.variant);
    tc.reservoir.seed = derive_seed(cfg.seed, task.grid_index, task.trial);
    if (cfg.axis != SweepAxis::training_size) tc.reservoir.n_neurons = cell.value;
    const auto& [train_set, test_set] = splits[task.grid_index];

    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const ClassifierModel model = train(train_set, dataset.class_names, tc);
    const auto t1 = clock::now();
    TrialResult r;
    r.test = evaluate(model, test_set);
    const auto t2 = clock::now();
    r.train = evaluate(model, train_set);
    r.train_seconds = std::chrono::duration<double>(t1 - t0).count();
    r.test_seconds = std::chrono::duration<double>(t2 - t1).count() / static_cast<double>(test_set.size());
    results[k] = std::move(r);
  };

  std::size_t jobs = cfg.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.jobs;
  jobs = std::min(jobs, tasks.size());
  if (jobs <= 1) {
    for (std::size_t k = 0; k < tasks.size(); ++k) run_task(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < tasks.size() && !failed; k = next++) {
          try {
            run_task(k);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  // Aggregate in task order so the report does not depend on scheduling.
  for (std::size_t c = 0; c < report.cells.size(); ++c) {
    SweepCell& cell = report.cells[c];
    std::vector<const TrialResult*> mine;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      if (tasks[k].cell == c) mine.push_back(&results[k]);
    }
    double train_s = 0.0, test_s = 0.0;
    for (const auto* r : mine) {
      train_s += r->train_seconds;
      test_s += r->test_seconds;
    }
    cell.train_seconds = train_s / static_cast<double>(mine.size());
    cell.test_seconds = test_s / static_cast<double>(mine.size());
    for (std::size_t set = 0; set < 2; ++set) {
      for (std::size_t f = 0; f < 3; ++f) {
        auto& out = cell.stats[set][f];
        out.resize(m + 1);
        std::vector<double> v(mine.size());
        for (std::size_t i = 0; i < mine.size(); ++i) {
          v[i] = (set == 0 ? mine[i]->train : mine[i]->test).accuracy[f];
        }
        out[0] = summarize(v);
        for (std::size_t j = 0; j < m; ++j) {
          for (std::size_t i = 0; i < mine.size(); ++i) {
            v[i] = (set == 0 ? mine[i]->train : mine[i]->test).class_accuracy[f][j];
          }
          out[j + 1] = summarize(v);
        }
      }
    }
  }
  return report;
}

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string format_sweep_csv(const SweepReport& report) {
  std::ostringstream os;
  os << "axis,value,variant,set,family,class,mean,min,max,delta\n";
  for (const auto& cell : report.cells) {
    const SweepCell* original = report.axis == SweepAxis::ablation ? report.find(cell.value) : nullptr;
    for (std::size_t set = 0; set < 2; ++set) {
      for (std::size_t f = 0; f < 3; ++f) {
        const auto& stats = cell.stats[set][f];
        for (std::size_t k = 0; k < stats.size(); ++k) {
          const Stat& s = stats[k];
          os << to_string(report.axis) << ',' << cell.value << ',' << to_string(cell.variant) << ','
             << (set == 0 ? "train" : "test") << ',' << to_string(kFamilies[f]) << ','
             << (k == 0 ? std::string("all") : report.classes[k - 1]) << ',' << fixed(s.mean) << ','
             << fixed(s.min) << ',' << fixed(s.max) << ',';
          if (original) os << fixed(original->stats[set][f][k].mean - s.mean);
          os << '\n';
        }
      }
    }
  }
  return os.str();
}

std::string format_sweep_table(const SweepReport& report) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %-18s %8s %8s %8s %8s %8s %8s %10s %10s\n", "value", "variant",
                "comb", "min", "max", "pos", "neg", "train", "train_s", "test_ms");
  os << line;
  for (const auto& c : report.cells) {
    const auto& test = c.stats[1];
    std::snprintf(line, sizeof line, "%-8zu %-18s %8.2f %8.2f %8.2f %8.2f %8.2f %8.2f %10.4f %10.4f\n", c.value,
                  std::string(to_string(c.variant)).c_str(), test[2][0].mean, test[2][0].min, test[2][0].max,
                  test[0][0].mean, test[1][0].mean, c.stats[0][2][0].mean, c.train_seconds,
                  1e3 * c.test_seconds);
    os << line;
  }
  return os.str();
}

// ---- model file -----------------------------------------------------------------

void write_model(std::ostream& os, const ClassifierModel& model) {
  const auto& pre = model.preprocessing;
  const auto& mf = pre.mfcc;
  os << "esnc-model " << model.version << '\n';
  os << "classes=" << model.classes.size() << '\n';
  for (const auto& name : model.classes) os << "class=" << name << '\n';
  os << "aperture=" << format_double(model.aperture) << '\n';
  os << "feature=" << to_string(pre.feature) << '\n';
  os << "mfcc.frame_length=" << mf.frame_length << '\n';
  os << "mfcc.hop_length=" << mf.hop_length << '\n';
  os << "mfcc.n_mels=" << mf.n_mels << '\n';
  os << "mfcc.n_coeffs=" << mf.n_coeffs << '\n';
  os << "mfcc.fmin_hz=" << format_double(mf.fmin_hz) << '\n';
  os << "mfcc.fmax_hz=" << (mf.fmax_hz ? format_double(*mf.fmax_hz) : std::string("none")) << '\n';
  os << "mfcc.log_floor=" << format_double(mf.log_floor) << '\n';
  os << "mfcc.keep_c0=" << (mf.keep_c0 ? 1 : 0) << '\n';
  os << "mfcc.utterance_samples=" << mf.utterance_samples << '\n';
  os << "normalize=" << (pre.normalize ? 1 : 0) << '\n';
  os << "resample.mode=" << to_string(pre.resample.mode) << '\n';
  os << "resample.k_points=" << pre.resample.k_points << '\n';
  os << "resample.degree=" << pre.resample.degree << '\n';
  os << "evidence.aggregation=" << to_string(model.evidence.aggregation) << '\n';
  os << "evidence.normalize_states=" << (model.evidence.normalize_states ? 1 : 0) << '\n';
  os << "normalization\n";
  Matrix norm(2, model.normalization.channels());
  std::copy(model.normalization.shift.begin(), model.normalization.shift.end(), norm.row(0).begin());
  std::copy(model.normalization.scale.begin(), model.normalization.scale.end(), norm.row(1).begin());
  write_matrix(os, norm);
  if (model.thresholds) {
    os << "thresholds=per-class\n";
    write_matrix(os, Matrix(1, model.thresholds->size(), *model.thresholds));
  } else {
    os << "thresholds=none\n";
  }
  write_reservoir(os, model.reservoir);
  for (std::size_t j = 0; j < model.positive.size(); ++j) {
    os << "positive " << j << '\n';
    write_conceptor(os, model.positive[j]);
  }
  for (std::size_t j = 0; j < model.negative.size(); ++j) {
    os << "negative " << j << '\n';
    write_conceptor(os, model.negative[j]);
  }
  os << "end-model\n";
}

std::string format_model(const ClassifierModel& model) {
  std::ostringstream os;
  write_model(os, model);
  return os.str();
}

namespace {

bool parse_flag(const std::string& text, std::string_view key) {
  if (text == "1") return true;
  if (text == "0") return false;
  throw Error(Errc::ParseError, std::string(key) + " must be 0 or 1, got '" + text + "'");
}

template <class T, class F>
T parse_enum(const std::string& text, std::string_view key, F parse) {
  const auto v = parse(text);
  if (!v) throw Error(Errc::ParseError, "unknown " + std::string(key) + " '" + text + "'");
  return *v;
}

}  // namespace

ClassifierModel read_model(std::istream& is) {
  using namespace textio;
  const std::string head = next_line(is, "model header");
  if (head.rfind("esnc-model ", 0) != 0) throw Error(Errc::ParseError, "not a model file");
  ClassifierModel model;
  model.version = static_cast<int>(parse_count(head.substr(11)));
  if (model.version != kModelVersion) {
    throw Error(Errc::ParseError, "unsupported model version " + std::to_string(model.version));
  }
  const std::size_t m = parse_count(expect_key(is, "classes"));
  for (std::size_t j = 0; j < m; ++j) model.classes.push_back(expect_key(is, "class"));
  model.aperture = parse_double(expect_key(is, "aperture"));
  auto& pre = model.preprocessing;
  auto& mf = pre.mfcc;
  pre.feature = parse_enum<FeatureKind>(expect_key(is, "feature"), "feature", parse_feature_kind);
  mf.frame_length = parse_count(expect_key(is, "mfcc.frame_length"));
  mf.hop_length = parse_count(expect_key(is, "mfcc.hop_length"));
  mf.n_mels = parse_count(expect_key(is, "mfcc.n_mels"));
  mf.n_coeffs = parse_count(expect_key(is, "mfcc.n_coeffs"));
  mf.fmin_hz = parse_double(expect_key(is, "mfcc.fmin_hz"));
  const std::string fmax = expect_key(is, "mfcc.fmax_hz");
  if (fmax != "none") mf.fmax_hz = parse_double(fmax);
  mf.log_floor = parse_double(expect_key(is, "mfcc.log_floor"));
  mf.keep_c0 = parse_flag(expect_key(is, "mfcc.keep_c0"), "mfcc.keep_c0");
  mf.utterance_samples = parse_count(expect_key(is, "mfcc.utterance_samples"));
  pre.normalize = parse_flag(expect_key(is, "normalize"), "normalize");
  pre.resample.mode = parse_enum<ResampleMode>(expect_key(is, "resample.mode"), "resample mode", parse_resample_mode);
  pre.resample.k_points = parse_count(expect_key(is, "resample.k_points"));
  pre.resample.degree = parse_count(expect_key(is, "resample.degree"));
  model.evidence.aggregation =
      parse_enum<EvidenceAggregation>(expect_key(is, "evidence.aggregation"), "aggregation", parse_aggregation);
  model.evidence.normalize_states = parse_flag(expect_key(is, "evidence.normalize_states"), "evidence.normalize_states");

  const Matrix norm = read_tagged_matrix(is, "normalization");
  if (norm.rows() != 2) throw Error(Errc::ParseError, "normalization block must have 2 rows");
  model.normalization.shift.assign(norm.row(0).begin(), norm.row(0).end());
  model.normalization.scale.assign(norm.row(1).begin(), norm.row(1).end());
  const std::string th = expect_key(is, "thresholds");
  if (th == "per-class") {
    const Matrix t = read_matrix(is);
    if (t.rows() != 1 || t.cols() != m) throw Error(Errc::ParseError, "threshold row must have one value per class");
    model.thresholds = std::vector<double>(t.row(0).begin(), t.row(0).end());
  } else if (th != "none") {
    throw Error(Errc::ParseError, "thresholds must be none or per-class");
  }
  model.reservoir = read_reservoir(is);
  for (std::size_t j = 0; j < m; ++j) {
    expect_line(is, "positive " + std::to_string(j));
    model.positive.push_back(read_conceptor(is));
  }
  for (std::size_t j = 0; j < m; ++j) {
    expect_line(is, "negative " + std::to_string(j));
    model.negative.push_back(read_conceptor(is));
  }
  expect_line(is, "end-model");

  const std::size_t n = model.reservoir.size();
  for (const auto* list : {&model.positive, &model.negative}) {
    for (const auto& c : *list) {
      if (c.dim() != n) throw Error(Errc::ParseError, "conceptor dimension disagrees with reservoir size");
    }
  }
  if (model.normalization.channels() != model.reservoir.input_dim()) {
    throw Error(Errc::ParseError, "normalization channel count disagrees with reservoir input");
  }
  return model;
}

}  // namespace esnc
