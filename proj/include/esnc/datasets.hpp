#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esnc/rng.hpp"
#include "esnc/series.hpp"

namespace esnc {

enum class Split { train, test };
enum class EntryKind { csv, wav };

std::string_view to_string(Split s) noexcept;
std::string_view to_string(EntryKind k) noexcept;

struct Dataset {
  std::vector<std::string> class_names;
  std::vector<std::string> channel_names;
  std::vector<LabeledSeries> train;
  std::vector<LabeledSeries> test;

  std::size_t num_classes() const noexcept { return class_names.size(); }
  std::size_t channels() const noexcept { return channel_names.size(); }
};

// ---- manifest -------------------------------------------------------------
//
//   #schema: channels=4 names=lat|long|grav|speed
//   #classes: stop,straight_ahead,...        (optional; else first-seen order)
//   path,label,split,kind                    (optional column header)
//   series/stop_000.csv,stop,train,csv
//
// Paths are relative to the manifest's directory. Other '#' lines are
// comments.

struct ManifestEntry {
  std::string path;
  std::string label;
  Split split = Split::train;
  EntryKind kind = EntryKind::csv;
};

struct Manifest {
  std::size_t channels = 0;
  std::vector<std::string> channel_names;  // may be empty
  std::vector<std::string> classes;
  std::vector<ManifestEntry> entries;
  std::filesystem::path root;
};

/// Parses manifest text. Errors carry the 1-based line number.
Manifest parse_manifest(std::istream& in, const std::filesystem::path& root);
std::string format_manifest(const Manifest& m);

/// Reads the manifest and every file it references. Throws EmptyDataset,
/// MissingFile (naming the path), ParseError, SchemaMismatch.
Dataset load_manifest(const std::filesystem::path& path);

/// Writes one CSV (or WAV, for single-channel audio with a sample rate) per
/// series under dir/series/ plus dir/manifest.csv. Returns the manifest path.
std::filesystem::path write_dataset(const std::filesystem::path& dir, const Dataset& ds,
                                    EntryKind kind = EntryKind::csv);

// ---- CSV series -------------------------------------------------------------
//
// Header row of channel names, then one row per time step. Values use 17
// significant digits so a written series reloads bit-identically.

LabeledSeries parse_csv_series(std::istream& in, const std::string& where,
                               std::vector<std::string>* channel_names = nullptr);
LabeledSeries read_csv_series(const std::filesystem::path& path,
                              std::vector<std::string>* channel_names = nullptr);
std::string format_csv_series(const LabeledSeries& s, const std::vector<std::string>& channel_names);

// ---- synthetic corpora ------------------------------------------------------

enum class SynthTask { sinusoid, maneuver };

std::string_view to_string(SynthTask t) noexcept;
std::optional<SynthTask> parse_synth_task(std::string_view text) noexcept;

struct SynthSpec {
  SynthTask task = SynthTask::maneuver;
  std::size_t classes = 7;
  std::size_t train_per_class = 8;
  std::size_t test_per_class = 6;
  double noise_std = 0.1;
  std::size_t min_length = 20;  // steps
  std::size_t max_length = 100;
  std::uint64_t seed = 1;
  // sinusoid only
  double sample_rate_hz = 100.0;
  double base_frequency_hz = 4.0;
  std::size_t lift_dim = 1;  // >1: fixed random linear lift to this many channels

  void validate() const;
};

/// Class j: sin(2 pi (j+1) f0 t + phase) plus N(0, noise_std); random phase
/// and length per sample. Up to 8 classes.
Dataset synth_sinusoid(const SynthSpec& spec);

/// Noise-free sinusoid sample of class j (before lift and noise).
Matrix sinusoid_wave(const SynthSpec& spec, std::size_t cls, double phase, std::size_t length);

enum class Maneuver { stop, straight_ahead, start_up, slow_down, full_braking, left_turn, right_turn };

inline constexpr std::size_t kManeuverCount = 7;
inline constexpr double kManeuverRateHz = 10.0;
inline constexpr double kGravity = 9.81;

std::string_view to_string(Maneuver m) noexcept;

/// 4 x length series: lateral, longitudinal, gravitational acceleration
/// (m/s^2) and speed (m/s) at 10 Hz, plus N(0, noise_std) on each channel.
Matrix maneuver_sample(Maneuver kind, std::size_t length, double noise_std, Rng& rng);

/// Classes follow the Maneuver order, truncated to spec.classes (<= 7).
Dataset synth_maneuver(const SynthSpec& spec);

Dataset synthesize(const SynthSpec& spec);

}  // namespace esnc
