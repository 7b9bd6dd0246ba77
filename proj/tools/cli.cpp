#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "esnc/classify.hpp"
#include "esnc/datasets.hpp"
#include "esnc/error.hpp"
#include "esnc/io.hpp"
#include "esnc/kernels.hpp"
#include "esnc/mfcc.hpp"
#include "esnc/selftest.hpp"
#include "esnc/wav.hpp"

namespace esnc::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  // data source
  std::string manifest;
  std::string task = "maneuver";
  std::size_t classes = 0;  // 0: every class the task defines
  std::size_t train_per_class = 8;
  std::size_t test_per_class = 6;
  double noise = 0.1;
  std::size_t min_length = 20;
  std::size_t max_length = 100;
  std::size_t lift_dim = 1;
  double sample_rate = 100.0;
  double base_frequency = 4.0;
  std::optional<std::uint64_t> data_seed;

  // reservoir
  std::size_t reservoir_size = 10;
  double spectral_radius = 0.9;
  double input_scaling = 1.0;
  double bias_scaling = 0.2;
  std::string activation = "tanh";
  std::size_t washout = 0;

  // conceptors
  double aperture = 10.0;
  bool cv = false;
  std::vector<double> cv_grid;
  std::size_t folds = 5;
  std::string evidence_mode = "mean";
  bool raw_states = false;

  // preprocessing
  std::string feature = "raw";
  bool no_normalize = false;
  std::string resample = "polynomial";
  std::size_t support_points = 4;
  std::size_t degree = 3;
  std::size_t frame = 512;
  std::size_t hop = 128;
  std::size_t mels = 26;
  std::size_t coeffs = 12;
  bool keep_c0 = false;
  std::size_t utterance_samples = 0;

  // run
  std::uint64_t seed = 1;
  std::string out;
  std::string model;
  std::string format = "csv";
  std::vector<std::string> inputs;
  std::optional<double> threshold;
  bool open_set = false;
  std::optional<double> calibrate;
  std::string axis = "reservoir-size";
  std::vector<std::size_t> grid;
  std::size_t trials = 20;
  std::size_t jobs = 0;
  bool table = false;
  std::size_t baseline_draws = 1000;
  std::string isa;
};

void add_data_options(CLI::App* app, Options& o) {
  app->add_option("--manifest", o.manifest, "Dataset manifest; without it a synthetic set is generated");
  app->add_option("--task", o.task, "Synthetic task")->check(CLI::IsMember({"maneuver", "sinusoid"}));
  app->add_option("--classes", o.classes, "Synthetic classes (0 = all the task defines)");
  app->add_option("--train-per-class", o.train_per_class,
                  "Training series per class (synthetic count; truncates a manifest's train split)");
  app->add_option("--test-per-class", o.test_per_class, "Synthetic test series per class");
  app->add_option("--noise", o.noise, "Synthetic noise standard deviation");
  app->add_option("--min-length", o.min_length, "Shortest synthetic series (steps)");
  app->add_option("--max-length", o.max_length, "Longest synthetic series (steps)");
  app->add_option("--lift-dim", o.lift_dim, "Sinusoid channels after a fixed random lift");
  app->add_option("--sample-rate", o.sample_rate, "Sinusoid sample rate (Hz)");
  app->add_option("--base-frequency", o.base_frequency, "Sinusoid class-1 frequency (Hz)");
  app->add_option("--data-seed", o.data_seed, "Seed of the synthetic data (default: --seed)");
}

void add_reservoir_options(CLI::App* app, Options& o) {
  app->add_option("--reservoir-size", o.reservoir_size, "Reservoir neurons N")->check(CLI::PositiveNumber);
  app->add_option("--spectral-radius", o.spectral_radius, "Target spectral radius, in (0, 1)");
  app->add_option("--input-scaling", o.input_scaling, "Input weight scale");
  app->add_option("--bias-scaling", o.bias_scaling, "Bias scale");
  app->add_option("--activation", o.activation, "Reservoir activation")
      ->check(CLI::IsMember({"tanh", "linear"}));
  app->add_option("--washout", o.washout, "Initial states dropped per series");
  app->add_option("--aperture", o.aperture, "Conceptor aperture")->check(CLI::PositiveNumber);
  app->add_option("--evidence-mode", o.evidence_mode, "Evidence aggregation over states")
      ->check(CLI::IsMember({"mean", "sum"}));
  app->add_flag("--raw-states", o.raw_states, "Do not scale states to unit length before evidence");
}

void add_preprocessing_options(CLI::App* app, Options& o) {
  app->add_option("--feature", o.feature, "Input features")->check(CLI::IsMember({"raw", "mfcc"}));
  app->add_flag("--no-normalize", o.no_normalize, "Skip per-channel min-max normalization");
  app->add_option("--resample", o.resample, "Resampling to support points")
      ->check(CLI::IsMember({"polynomial", "linear", "none"}));
  app->add_option("--support-points", o.support_points, "Resampled points per series");
  app->add_option("--degree", o.degree, "Polynomial degree");
  app->add_option("--frame", o.frame, "MFCC frame length (power of two)");
  app->add_option("--hop", o.hop, "MFCC hop length");
  app->add_option("--mels", o.mels, "Mel filters");
  app->add_option("--coeffs", o.coeffs, "Cepstral coefficients kept");
  app->add_flag("--keep-c0", o.keep_c0, "Keep c0 (default drops it)");
  app->add_option("--utterance-samples", o.utterance_samples,
                  "Resample each waveform to this many samples before framing (0 = off)");
}

void add_seed_option(CLI::App* app, Options& o) {
  app->add_option("--seed", o.seed, "Base seed")->envname("ESNC_SEED");
}

ResampleMode resample_mode(const std::string& s) { return *parse_resample_mode(s); }

MfccConfig mfcc_config(const Options& o) {
  MfccConfig m;
  m.frame_length = o.frame;
  m.hop_length = o.hop;
  m.n_mels = o.mels;
  m.n_coeffs = o.coeffs;
  m.keep_c0 = o.keep_c0;
  m.utterance_samples = o.utterance_samples;
  return m;
}

TrainConfig train_config(const Options& o) {
  TrainConfig c;
  c.reservoir.n_neurons = o.reservoir_size;
  c.reservoir.spectral_radius_target = o.spectral_radius;
  c.reservoir.input_scaling = o.input_scaling;
  c.reservoir.bias_scaling = o.bias_scaling;
  c.reservoir.activation = *parse_activation(o.activation);
  c.reservoir.washout = o.washout;
  c.reservoir.seed = o.seed;
  c.aperture = o.aperture;
  c.preprocessing.feature = *parse_feature_kind(o.feature);
  c.preprocessing.mfcc = mfcc_config(o);
  c.preprocessing.normalize = !o.no_normalize;
  c.preprocessing.resample = {resample_mode(o.resample), o.support_points, o.degree};
  c.evidence.aggregation = *parse_aggregation(o.evidence_mode);
  c.evidence.normalize_states = !o.raw_states;
  return c;
}

SynthSpec synth_spec(const Options& o) {
  SynthSpec s;
  s.task = *parse_synth_task(o.task);
  s.classes = o.classes != 0 ? o.classes : (s.task == SynthTask::sinusoid ? 8 : kManeuverCount);
  s.train_per_class = o.train_per_class;
  s.test_per_class = o.test_per_class;
  s.noise_std = o.noise;
  s.min_length = o.min_length;
  s.max_length = o.max_length;
  s.seed = o.data_seed.value_or(o.seed);
  s.sample_rate_hz = o.sample_rate;
  s.base_frequency_hz = o.base_frequency;
  s.lift_dim = o.lift_dim;
  return s;
}

/// Manifest data (train split truncated to --train-per-class when the flag
/// was given) or a synthetic set.
Dataset load_data(const Options& o, const CLI::App* app) {
  if (o.manifest.empty()) return synthesize(synth_spec(o));
  Dataset ds = load_manifest(o.manifest);
  if (app->count("--train-per-class") > 0) {
    std::vector<LabeledSeries> kept;
    std::map<int, std::size_t> seen;
    for (auto& s : ds.train) {
      if (seen[*s.label]++ < o.train_per_class) kept.push_back(std::move(s));
    }
    ds.train = std::move(kept);
  }
  return ds;
}

LabeledSeries read_series(const fs::path& path) {
  LabeledSeries s;
  if (path.extension() == ".wav") {
    Audio a = read_wav(path);
    const std::size_t n = a.samples.size();
    s.values = Matrix(1, n, std::move(a.samples));
    s.sample_rate_hz = a.sample_rate;
  } else {
    s = read_csv_series(path);
  }
  s.id = path.string();
  return s;
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", v);
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
}

// ---- commands -----------------------------------------------------------------

int cmd_synth(const Options& o, std::ostream& out) {
  const SynthSpec spec = synth_spec(o);
  const Dataset ds = synthesize(spec);
  const EntryKind kind = o.format == "wav" ? EntryKind::wav : EntryKind::csv;
  const fs::path manifest = write_dataset(o.out, ds, kind);
  out << "synth: " << to_string(spec.task) << ", " << ds.num_classes() << " classes, "
      << ds.train.size() << " train + " << ds.test.size() << " test series -> " << manifest.string() << '\n';
  return kExitOk;
}

int cmd_features(const Options& o, std::ostream& out) {
  const MfccConfig cfg = mfcc_config(o);
  if (!o.manifest.empty()) {
    Dataset ds = load_manifest(o.manifest);
    std::size_t frames = 0;
    for (auto* split : {&ds.train, &ds.test}) {
      for (auto& s : *split) {
        if (s.channels() != 1 || !s.sample_rate_hz) {
          throw Error(Errc::ChannelMismatch, s.id + ": MFCC features need single-channel audio");
        }
        LabeledSeries f = mfcc(s.values.row(0), *s.sample_rate_hz, cfg);
        f.label = s.label;
        f.id = fs::path(s.id).stem().string();
        frames += f.steps();
        s = std::move(f);
      }
    }
    ds.channel_names.clear();
    const std::size_t first = cfg.keep_c0 ? 0 : 1;
    for (std::size_t k = 0; k < cfg.n_coeffs; ++k) ds.channel_names.push_back("c" + std::to_string(first + k));
    const fs::path manifest = write_dataset(o.out, ds, EntryKind::csv);
    out << "features: " << ds.train.size() + ds.test.size() << " series, " << frames << " frames, "
        << ds.channels() << " coefficients -> " << manifest.string() << '\n';
    return kExitOk;
  }
  if (o.inputs.size() != 1) throw CLI::ValidationError("--input", "features needs exactly one --input or a --manifest");
  LabeledSeries s = read_series(o.inputs.front());
  if (s.channels() != 1) throw Error(Errc::ChannelMismatch, s.id + ": MFCC features need one channel");
  const double rate = s.sample_rate_hz.value_or(o.sample_rate);
  const LabeledSeries f = mfcc(s.values.row(0), rate, cfg);
  std::vector<std::string> names;
  const std::size_t first = cfg.keep_c0 ? 0 : 1;
  for (std::size_t k = 0; k < cfg.n_coeffs; ++k) names.push_back("c" + std::to_string(first + k));
  emit(o.out, format_csv_series(f, names), out);
  if (!o.out.empty() && o.out != "-") {
    out << "features: " << f.steps() << " frames x " << f.channels() << " coefficients -> " << o.out << '\n';
  }
  return kExitOk;
}

int cmd_train(const Options& o, const CLI::App* app, std::ostream& out, std::ostream& err) {
  const Dataset ds = load_data(o, app);
  TrainConfig cfg = train_config(o);
  if (o.cv) {
    const auto grid = o.cv_grid.empty() ? default_aperture_grid() : o.cv_grid;
    const CrossValidation cv = cross_validate_aperture(ds.train, ds.class_names, cfg, grid, o.folds);
    for (const auto& row : cv.table) err << "cv: aperture=" << num(row.aperture) << " accuracy=" << percent(row.accuracy) << '\n';
    cfg.aperture = cv.best;
  }
  const auto t0 = std::chrono::steady_clock::now();
  ClassifierModel model = train(ds.train, ds.class_names, cfg);
  const double train_s = seconds_since(t0);
  if (o.calibrate) model.thresholds = calibrate_thresholds(model, ds.train, *o.calibrate);
  const Metrics fit = evaluate(model, ds.train);
  write_file_atomic(o.model, format_model(model));
  out << "train: " << ds.num_classes() << " classes, " << ds.train.size() << " series, N=" << cfg.reservoir.n_neurons
      << ", aperture=" << num(cfg.aperture) << ", train accuracy " << percent(fit.accuracy[2]) << ", "
      << num(train_s) << " s -> " << o.model << '\n';
  return kExitOk;
}

ClassifierModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::MissingFile, path);
  try {
    return read_model(in);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

int cmd_predict(const Options& o, std::ostream& out) {
  const ClassifierModel model = load_model(o.model);
  if (o.open_set && !model.thresholds) {
    throw Error(Errc::BadArgument, o.model + ": --open-set needs a model trained with --calibrate");
  }
  std::ostringstream csv;
  csv << "input,decided,class,margin,combined\n";
  std::size_t rejected = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& path : o.inputs) {
    const LabeledSeries s = read_series(path);
    const EvidenceReport r = evidences(model, s);
    const auto best = static_cast<std::size_t>(r.decided);
    const double bar = o.threshold ? *o.threshold
                       : o.open_set ? (*model.thresholds)[best]
                                    : -std::numeric_limits<double>::infinity();
    const bool reject = r.combined[best] < bar;
    rejected += reject;
    csv << path << ',' << (reject ? kReject : r.decided) << ',' << (reject ? "REJECT" : model.classes[best]) << ','
        << format_double(r.margin) << ',' << format_double(r.combined[best]) << '\n';
  }
  const double per_sample_ms = 1e3 * seconds_since(t0) / static_cast<double>(o.inputs.size());
  emit(o.out, csv.str(), out);
  out << "predict: " << o.inputs.size() << " inputs, " << rejected << " rejected, " << num(per_sample_ms)
      << " ms per sample\n";
  return kExitOk;
}

int cmd_eval(const Options& o, const CLI::App* app, std::ostream& out) {
  const ClassifierModel model = load_model(o.model);
  const Dataset ds = load_data(o, app);
  if (ds.class_names != model.classes) {
    throw Error(Errc::SchemaMismatch, "dataset classes differ from the model's class list");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const Metrics m = evaluate(model, ds.test);
  const double ms = 1e3 * seconds_since(t0) / static_cast<double>(ds.test.size());
  const double baseline = shuffle_baseline_error(ds.test, o.baseline_draws, o.seed);

  std::ostringstream csv;
  csv << "metric,family,class,value\n";
  csv << "error_rate,combined,all," << format_double(m.error_rate) << '\n';
  csv << "baseline_error,shuffle,all," << format_double(baseline) << '\n';
  for (std::size_t f = 0; f < 3; ++f) {
    csv << "accuracy," << to_string(kFamilies[f]) << ",all," << format_double(m.accuracy[f]) << '\n';
    for (std::size_t j = 0; j < model.num_classes(); ++j) {
      csv << "accuracy," << to_string(kFamilies[f]) << ',' << model.classes[j] << ','
          << format_double(m.class_accuracy[f][j]) << '\n';
    }
  }
  for (std::size_t t = 0; t < model.num_classes(); ++t) {
    for (std::size_t d = 0; d < model.num_classes(); ++d) {
      csv << "confusion," << model.classes[t] << ',' << model.classes[d] << ',' << m.confusion[t][d] << '\n';
    }
  }
  emit(o.out, csv.str(), out);
  out << "eval: " << m.total << " test series, error " << num(m.error_rate) << " (shuffle baseline "
      << num(baseline) << "), accuracy pos " << percent(m.accuracy[0]) << " neg " << percent(m.accuracy[1])
      << " combined " << percent(m.accuracy[2]) << ", " << num(ms) << " ms per sample\n";
  return kExitOk;
}

int cmd_sweep(const Options& o, const CLI::App* app, std::ostream& out) {
  const Dataset ds = load_data(o, app);
  SweepConfig cfg;
  cfg.axis = *parse_sweep_axis(o.axis);
  cfg.grid = o.grid;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.base = train_config(o);
  cfg.jobs = o.jobs;
  const auto t0 = std::chrono::steady_clock::now();
  const SweepReport report = sweep(ds, cfg);
  const double total = seconds_since(t0);
  if (!o.out.empty()) write_file_atomic(o.out, format_sweep_csv(report));
  if (o.table || o.out.empty()) {
    if (o.out.empty()) out << format_sweep_csv(report);
    if (o.table) out << format_sweep_table(report);
  }
  out << "sweep: axis " << o.axis << ", " << report.cells.size() << " cells x " << report.trials << " trials, "
      << num(total) << " s" << (o.out.empty() ? "" : " -> " + o.out) << '\n';
  return kExitOk;
}

int cmd_selftest(const Options& o, std::ostream& out) {
  std::size_t failed = 0;
  const auto checks = run_selftest(o.seed);
  for (const auto& c : checks) {
    out << (c.passed ? "[ok]   " : "[FAIL] ") << c.name << " (" << c.detail << ")\n";
    failed += !c.passed;
  }
  out << "selftest: " << checks.size() - failed << "/" << checks.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitData;
}

/// Top-level and active-subcommand lines of the CLI11 config dump; the
/// result can be passed back through --config.
std::string effective_config(const CLI::App& app, const std::string& command) {
  std::istringstream all(app.config_to_str(true, false));
  std::string out, line;
  const std::string prefix = command + ".";
  while (std::getline(all, line)) {
    const auto eq = line.find('=');
    const std::string key = line.substr(0, eq);
    const std::string value = eq == std::string::npos ? "" : line.substr(eq + 1);
    if (key == "config" || key == "save-config" || value == "\"\"" || value == "\"{}\"") continue;
    if (key.find('.') == std::string::npos || key.rfind(prefix, 0) == 0) out += line + '\n';
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Echo state network and conceptor time-series classifier", "esnc"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "Read options from a key=value file");
  std::string save_config;
  app.add_option("--save-config", save_config, "Write the effective configuration to this file");
  app.add_option("--isa", o.isa, "Kernel variant (default: best available)")->check(CLI::IsMember({"scalar", "avx2"}));

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  add_data_options(synth, o);
  add_seed_option(synth, o);
  synth->add_option("--out", o.out, "Output directory")->required();
  synth->add_option("--format", o.format, "Series file format (wav: single-channel sinusoids)")
      ->check(CLI::IsMember({"csv", "wav"}));

  auto* features = app.add_subcommand("features", "Extract MFCC features from audio");
  features->add_option("--manifest", o.manifest, "Manifest of WAV entries");
  features->add_option("--input", o.inputs, "Single WAV (or one-channel CSV) file");
  features->add_option("--sample-rate", o.sample_rate, "Sample rate for CSV input (Hz)");
  features->add_option("--out", o.out, "Output CSV file, or directory with --manifest")->required();
  features->add_option("--frame", o.frame, "Frame length (power of two)");
  features->add_option("--hop", o.hop, "Hop length");
  features->add_option("--mels", o.mels, "Mel filters");
  features->add_option("--coeffs", o.coeffs, "Cepstral coefficients kept");
  features->add_flag("--keep-c0", o.keep_c0, "Keep c0");
  features->add_option("--utterance-samples", o.utterance_samples, "Resample each waveform first (0 = off)");

  auto* train_cmd = app.add_subcommand("train", "Train a conceptor classifier");
  add_data_options(train_cmd, o);
  add_reservoir_options(train_cmd, o);
  add_preprocessing_options(train_cmd, o);
  add_seed_option(train_cmd, o);
  train_cmd->add_flag("--cv", o.cv, "Choose the aperture by stratified cross-validation");
  train_cmd->add_option("--cv-grid", o.cv_grid, "Aperture grid (default: 20 log-spaced in [1e-2, 1e4])")
      ->delimiter(',');
  train_cmd->add_option("--folds", o.folds, "Cross-validation folds");
  train_cmd->add_option("--calibrate", o.calibrate,
                        "Store per-class open-set thresholds at this percentile of training evidence");
  train_cmd->add_option("--model", o.model, "Model file to write")->required();

  auto* predict_cmd = app.add_subcommand("predict", "Classify series with a trained model");
  predict_cmd->add_option("--model", o.model, "Model file")->required();
  predict_cmd->add_option("--input", o.inputs, "CSV or WAV series (repeatable)")->required();
  auto* thr = predict_cmd->add_option("--threshold", o.threshold, "Reject when the best combined evidence is below this");
  predict_cmd->add_flag("--open-set", o.open_set, "Reject using the model's calibrated per-class thresholds")
      ->excludes(thr);
  predict_cmd->add_option("--out", o.out, "CSV of decisions (default: stdout)");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on a test split");
  eval_cmd->add_option("--model", o.model, "Model file")->required();
  add_data_options(eval_cmd, o);
  add_seed_option(eval_cmd, o);
  eval_cmd->add_option("--baseline-draws", o.baseline_draws, "Label shuffles for the baseline error")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out", o.out, "Metrics CSV (default: stdout)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run the reservoir-size, training-size or ablation protocol");
  add_data_options(sweep_cmd, o);
  add_reservoir_options(sweep_cmd, o);
  add_preprocessing_options(sweep_cmd, o);
  add_seed_option(sweep_cmd, o);
  sweep_cmd->add_option("--axis", o.axis, "Swept axis")
      ->check(CLI::IsMember({"reservoir-size", "training-size", "ablation"}));
  sweep_cmd->add_option("--grid", o.grid, "Grid values (reservoir sizes or series per class)")->delimiter(',');
  sweep_cmd->add_option("--trials", o.trials, "Random reservoirs per cell")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");
  sweep_cmd->add_flag("--table", o.table, "Print a text table of test means and runtimes");
  sweep_cmd->add_option("--out", o.out, "Report CSV (default: stdout)");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");
  add_seed_option(selftest, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (!o.isa.empty()) kernels::select(*kernels::parse_isa(o.isa));
    const CLI::App* cmd = app.get_subcommands().front();
    const std::string config = effective_config(app, cmd->get_name());
    err << "# effective configuration\n" << config;
    if (!save_config.empty()) write_file_atomic(save_config, config);

    const std::string name = cmd->get_name();
    if (name == "synth") return cmd_synth(o, out);
    if (name == "features") return cmd_features(o, out);
    if (name == "train") return cmd_train(o, cmd, out, err);
    if (name == "predict") return cmd_predict(o, out);
    if (name == "eval") return cmd_eval(o, cmd, out);
    if (name == "sweep") return cmd_sweep(o, cmd, out);
    if (name == "selftest") return cmd_selftest(o, out);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace esnc::cli
