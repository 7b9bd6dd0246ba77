#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "esnc/conceptor.hpp"
#include "esnc/datasets.hpp"
#include "esnc/features.hpp"
#include "esnc/mfcc.hpp"
#include "esnc/reservoir.hpp"

namespace esnc {

enum class FeatureKind { raw, mfcc };

std::string_view to_string(FeatureKind f) noexcept;
std::optional<FeatureKind> parse_feature_kind(std::string_view text) noexcept;

/// Applied per series in this order: feature extraction, min-max
/// normalization (fitted on the training set), resampling.
struct Preprocessing {
  FeatureKind feature = FeatureKind::raw;
  MfccConfig mfcc;
  bool normalize = true;
  ResampleConfig resample;
};

struct TrainConfig {
  ReservoirParams reservoir;
  double aperture = 10.0;
  Preprocessing preprocessing;
  EvidenceOptions evidence;
};

inline constexpr int kModelVersion = 1;

struct ClassifierModel {
  Reservoir reservoir;
  std::vector<std::string> classes;
  std::vector<Conceptor> positive;  // C^j
  std::vector<Conceptor> negative;  // N^j = NOT(OR of the other classes)
  double aperture = 0.0;
  Preprocessing preprocessing;
  NormalizationParams normalization;
  EvidenceOptions evidence;
  /// Per-class open-set thresholds, when calibrated.
  std::optional<std::vector<double>> thresholds;
  int version = kModelVersion;

  std::size_t num_classes() const noexcept { return classes.size(); }
};

/// Labels must lie in [0, class_names.size()). Throws SingleClass (fewer
/// than two classes) and EmptyClass (a class without samples).
ClassifierModel train(std::span<const LabeledSeries> train_set,
                      const std::vector<std::string>& class_names, const TrainConfig& cfg);

/// N^j for every j: the other classes OR-ed left to right in class order,
/// then negated.
std::vector<Conceptor> negative_conceptors(std::span<const Conceptor> positive);

/// Feature, normalization and resampling with the model's stored
/// parameters. Throws ChannelMismatch, TooShort.
LabeledSeries preprocess(const ClassifierModel& model, const LabeledSeries& sample);

struct EvidenceReport {
  std::vector<double> pos;
  std::vector<double> neg;
  std::vector<double> combined;
  int decided = 0;
  double margin = 0.0;  // combined[best] - combined[second]; 0 for one class
};

/// Index of the largest value; the lowest index wins ties.
int argmax(std::span<const double> v);

EvidenceReport evidences(const ClassifierModel& model, const LabeledSeries& sample);
/// Evidence for an already driven state sequence.
EvidenceReport evidences_from_states(const ClassifierModel& model, const StateSequence& states);

inline constexpr int kReject = -1;

/// Closed set without a threshold; otherwise kReject when combined[best]
/// falls below the threshold.
int predict(const ClassifierModel& model, const LabeledSeries& sample,
            std::optional<double> threshold = std::nullopt);
/// Uses thresholds[best] for the winning class.
int predict(const ClassifierModel& model, const LabeledSeries& sample,
            std::span<const double> thresholds);

/// Per class, the q-th percentile (linear interpolation) of the combined
/// evidence that training samples of that class get for their own class.
std::vector<double> calibrate_thresholds(const ClassifierModel& model,
                                         std::span<const LabeledSeries> train_set,
                                         double percentile = 5.0);

/// Decision families: argmax over pos alone, over neg alone, over combined.
enum class Family { pos = 0, neg = 1, combined = 2 };
inline constexpr std::array<Family, 3> kFamilies = {Family::pos, Family::neg, Family::combined};
std::string_view to_string(Family f) noexcept;

struct Metrics {
  std::size_t total = 0;
  double error_rate = 0.0;  // combined decisions
  /// confusion[true][decided], combined decisions
  std::vector<std::vector<std::size_t>> confusion;
  /// Percent per family: overall, and per class (NaN for a class absent
  /// from the test set).
  std::array<double, 3> accuracy{};
  std::array<std::vector<double>, 3> class_accuracy;
};

/// Throws EmptyTestSet.
Metrics evaluate(const ClassifierModel& model, std::span<const LabeledSeries> test_set);

/// Mean error of decisions drawn by shuffling the true labels, over `draws`
/// permutations. Approaches 1 - sum p_j^2 (0.875 for 8 balanced classes).
double shuffle_baseline_error(std::span<const LabeledSeries> test_set, std::size_t draws,
                              std::uint64_t seed);

struct ApertureScore {
  double aperture = 0.0;
  double accuracy = 0.0;  // percent, mean over folds
};

struct CrossValidation {
  double best = 0.0;
  std::vector<ApertureScore> table;  // ascending aperture
};

/// 20 log-spaced values from 1e-2 to 1e4.
std::vector<double> default_aperture_grid();

/// Stratified k-fold: the i-th sample of each class goes to fold i mod k.
/// The grid is sorted and deduplicated; ties go to the smaller aperture.
/// Throws BadArgument for an empty grid or folds < 2 and
/// TooFewSamplesPerClass when a class has fewer than `folds` samples.
CrossValidation cross_validate_aperture(std::span<const LabeledSeries> train_set,
                                        const std::vector<std::string>& class_names,
                                        const TrainConfig& cfg, std::vector<double> grid,
                                        std::size_t folds = 5);

// ---- sweeps -------------------------------------------------------------------

enum class SweepAxis { reservoir_size, training_size, ablation };

std::string_view to_string(SweepAxis a) noexcept;
std::optional<SweepAxis> parse_sweep_axis(std::string_view text) noexcept;

/// Ablation variants, run paired on the same reservoirs.
enum class Variant { original, linear, no_interp, linear_no_interp };
inline constexpr std::array<Variant, 4> kVariants = {Variant::original, Variant::linear,
                                                     Variant::no_interp, Variant::linear_no_interp};
std::string_view to_string(Variant v) noexcept;

std::vector<std::size_t> default_sweep_grid(SweepAxis axis);

struct SweepConfig {
  SweepAxis axis = SweepAxis::reservoir_size;
  /// reservoir_size and ablation: reservoir sizes; training_size: series per
  /// class. Empty means default_sweep_grid(axis) (ablation: the base size).
  std::vector<std::size_t> grid;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  /// Reservoir size used when the grid is not over reservoir sizes.
  TrainConfig base;
  /// 0 = hardware concurrency. Results do not depend on it.
  std::size_t jobs = 0;
};

struct Stat {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct SweepCell {
  std::size_t value = 0;
  Variant variant = Variant::original;
  /// [set: 0 train, 1 test][family][0 overall, 1 + class]
  std::array<std::array<std::vector<Stat>, 3>, 2> stats;
  double train_seconds = 0.0;  // mean per trial
  double test_seconds = 0.0;
};

struct SweepReport {
  SweepAxis axis = SweepAxis::reservoir_size;
  std::vector<std::string> classes;
  std::size_t trials = 0;
  std::vector<SweepCell> cells;

  const SweepCell* find(std::size_t value, Variant variant = Variant::original) const noexcept;
};

/// Every (grid value, variant) cell is trained and evaluated `trials` times,
/// trial t at grid position c using reservoir seed derive_seed(seed, c, t).
/// Training-size cells train on the first n training series per class and
/// test on the remaining ones plus the test split. Throws InsufficientData.
SweepReport sweep(const Dataset& dataset, const SweepConfig& cfg);

/// Rows: axis,value,variant,set,family,class,mean,min,max,delta. delta is
/// original minus variant for ablation rows and empty otherwise. Runtimes
/// are left out so that reruns compare byte for byte.
std::string format_sweep_csv(const SweepReport& report);
/// Aligned text table of test-set means plus per-cell runtimes.
std::string format_sweep_table(const SweepReport& report);

// ---- model file -----------------------------------------------------------------

void write_model(std::ostream& os, const ClassifierModel& model);
ClassifierModel read_model(std::istream& is);
std::string format_model(const ClassifierModel& model);

}  // namespace esnc
