#include "esnc/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "esnc/error.hpp"
#include "esnc/io.hpp"
#include "esnc/wav.hpp"

namespace esnc {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

[[noreturn]] void parse_fail(const std::string& where, std::size_t line, const std::string& what) {
  throw Error(Errc::ParseError, where + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

std::string_view to_string(Split s) noexcept { return s == Split::train ? "train" : "test"; }
std::string_view to_string(EntryKind k) noexcept { return k == EntryKind::csv ? "csv" : "wav"; }

// ---- CSV series -------------------------------------------------------------

LabeledSeries parse_csv_series(std::istream& in, const std::string& where,
                               std::vector<std::string>* channel_names) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(line, ',');
      break;
    }
  }
  if (header.empty()) parse_fail(where, line_no, "missing header row");
  const std::size_t d = header.size();

  std::vector<std::vector<double>> cols(d);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split(line, ',');
    if (cells.size() != d) {
      parse_fail(where, line_no, "row " + std::to_string(row) + " has " +
                                     std::to_string(cells.size()) + " cells, header has " +
                                     std::to_string(d));
    }
    for (std::size_t c = 0; c < d; ++c) {
      double v = 0.0;
      try {
        v = parse_double(cells[c]);
      } catch (const Error&) {
        parse_fail(where, line_no, "row " + std::to_string(row) + ", column " +
                                       std::to_string(c + 1) + ": non-numeric cell '" + cells[c] +
                                       "'");
      }
      if (!std::isfinite(v)) {
        parse_fail(where, line_no, "row " + std::to_string(row) + ", column " +
                                       std::to_string(c + 1) + ": non-finite value");
      }
      cols[c].push_back(v);
    }
  }
  if (row < 2) parse_fail(where, line_no, "need at least 2 data rows, found " + std::to_string(row));

  LabeledSeries s;
  s.values = Matrix(d, row);
  for (std::size_t c = 0; c < d; ++c) std::copy(cols[c].begin(), cols[c].end(), s.values.row(c).begin());
  s.id = where;
  if (channel_names) *channel_names = header;
  return s;
}

LabeledSeries read_csv_series(const std::filesystem::path& path,
                              std::vector<std::string>* channel_names) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::MissingFile, path.string());
  return parse_csv_series(in, path.string(), channel_names);
}

std::string format_csv_series(const LabeledSeries& s, const std::vector<std::string>& channel_names) {
  std::string out;
  if (channel_names.size() == s.channels()) {
    out = join(channel_names, ',');
  } else {
    std::vector<std::string> names;
    for (std::size_t c = 0; c < s.channels(); ++c) names.push_back("ch" + std::to_string(c));
    out = join(names, ',');
  }
  out.push_back('\n');
  for (std::size_t t = 0; t < s.steps(); ++t) {
    for (std::size_t c = 0; c < s.channels(); ++c) {
      if (c) out.push_back(',');
      out += format_double(s.values(c, t));
    }
    out.push_back('\n');
  }
  return out;
}

// ---- manifest ---------------------------------------------------------------

Manifest parse_manifest(std::istream& in, const std::filesystem::path& root) {
  Manifest m;
  m.root = root;
  const std::string where = (root / "manifest").string();
  bool have_schema = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.rfind("#schema:", 0) == 0) {
      for (const auto& field : split(trim(t.substr(8)), ' ')) {
        if (field.empty()) continue;
        const auto eq = field.find('=');
        if (eq == std::string::npos) parse_fail(where, line_no, "bad schema field '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "channels") {
          try {
            m.channels = std::stoul(value);
          } catch (const std::exception&) {
            parse_fail(where, line_no, "bad channel count '" + value + "'");
          }
        } else if (key == "names") {
          m.channel_names = split(value, '|');
        } else {
          parse_fail(where, line_no, "unknown schema field '" + key + "'");
        }
      }
      if (m.channels == 0) parse_fail(where, line_no, "schema needs channels >= 1");
      if (!m.channel_names.empty() && m.channel_names.size() != m.channels) {
        throw Error(Errc::SchemaMismatch, where + ":" + std::to_string(line_no) +
                                              ": names list disagrees with channel count");
      }
      have_schema = true;
      continue;
    }
    if (t.rfind("#classes:", 0) == 0) {
      m.classes = split(trim(t.substr(9)), ',');
      continue;
    }
    if (t[0] == '#') continue;
    if (t == "path,label,split,kind") continue;

    const auto cells = split(t, ',');
    if (cells.size() != 4) parse_fail(where, line_no, "expected path,label,split,kind");
    ManifestEntry e;
    e.path = cells[0];
    e.label = cells[1];
    if (cells[2] == "train") {
      e.split = Split::train;
    } else if (cells[2] == "test") {
      e.split = Split::test;
    } else {
      parse_fail(where, line_no, "split must be train or test, got '" + cells[2] + "'");
    }
    if (cells[3] == "csv") {
      e.kind = EntryKind::csv;
    } else if (cells[3] == "wav") {
      e.kind = EntryKind::wav;
    } else {
      parse_fail(where, line_no, "kind must be csv or wav, got '" + cells[3] + "'");
    }
    if (e.path.empty() || e.label.empty()) parse_fail(where, line_no, "empty path or label");
    m.entries.push_back(std::move(e));
  }
  if (!have_schema) parse_fail(where, line_no, "missing '#schema:' header");
  return m;
}

std::string format_manifest(const Manifest& m) {
  std::ostringstream os;
  os << "#schema: channels=" << m.channels;
  if (!m.channel_names.empty()) os << " names=" << join(m.channel_names, '|');
  os << '\n';
  if (!m.classes.empty()) os << "#classes: " << join(m.classes, ',') << '\n';
  os << "path,label,split,kind\n";
  for (const auto& e : m.entries) {
    os << e.path << ',' << e.label << ',' << to_string(e.split) << ',' << to_string(e.kind) << '\n';
  }
  return os.str();
}

Dataset load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::MissingFile, path.string());
  const auto root = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  Manifest m = parse_manifest(in, root);
  if (m.entries.empty()) throw Error(Errc::EmptyDataset, path.string() + ": no entries");

  Dataset ds;
  ds.class_names = m.classes;
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < ds.class_names.size(); ++i) index[ds.class_names[i]] = static_cast<int>(i);
  const bool declared = !ds.class_names.empty();

  std::set<std::string> seen_paths;
  std::vector<std::size_t> per_class(ds.class_names.size(), 0);
  for (const auto& e : m.entries) {
    if (!seen_paths.insert(e.path).second) {
      throw Error(Errc::SchemaMismatch, path.string() + ": '" + e.path + "' listed twice");
    }
    auto it = index.find(e.label);
    if (it == index.end()) {
      if (declared) {
        throw Error(Errc::SchemaMismatch,
                    path.string() + ": label '" + e.label + "' not in #classes");
      }
      it = index.emplace(e.label, static_cast<int>(ds.class_names.size())).first;
      ds.class_names.push_back(e.label);
      per_class.push_back(0);
    }
    ++per_class[static_cast<std::size_t>(it->second)];

    const auto file = m.root / e.path;
    if (!std::filesystem::exists(file)) throw Error(Errc::MissingFile, file.string());
    LabeledSeries s;
    std::vector<std::string> names;
    if (e.kind == EntryKind::csv) {
      s = read_csv_series(file, &names);
    } else {
      Audio a = read_wav(file);
      const std::size_t n = a.samples.size();
      s.values = Matrix(1, n, std::move(a.samples));
      s.sample_rate_hz = a.sample_rate;
      names = {"audio"};
    }
    if (s.channels() != m.channels) {
      throw Error(Errc::SchemaMismatch, file.string() + ": " + std::to_string(s.channels()) +
                                            " channels, schema says " + std::to_string(m.channels));
    }
    if (ds.channel_names.empty()) ds.channel_names = m.channel_names.empty() ? names : m.channel_names;
    s.id = e.path;
    s.label = it->second;
    (e.split == Split::train ? ds.train : ds.test).push_back(std::move(s));
  }
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    if (per_class[c] == 0) {
      throw Error(Errc::SchemaMismatch,
                  path.string() + ": class '" + ds.class_names[c] + "' has no entries");
    }
  }
  return ds;
}

std::filesystem::path write_dataset(const std::filesystem::path& dir, const Dataset& ds,
                                    EntryKind kind) {
  Manifest m;
  m.channels = ds.channels();
  m.channel_names = ds.channel_names;
  m.classes = ds.class_names;
  std::set<std::string> seen;
  const auto emit = [&](const LabeledSeries& s, Split split) {
    std::string stem = s.id;
    std::replace(stem.begin(), stem.end(), '/', '_');
    const std::string rel = "series/" + stem + (kind == EntryKind::csv ? ".csv" : ".wav");
    if (stem.empty() || !seen.insert(rel).second) {
      throw Error(Errc::BadArgument, "series id '" + s.id + "' is empty or maps to a file already written");
    }
    if (kind == EntryKind::csv) {
      write_file_atomic(dir / rel, format_csv_series(s, ds.channel_names));
    } else {
      if (s.channels() != 1 || !s.sample_rate_hz) {
        throw Error(Errc::BadArgument, "WAV output needs single-channel series with a sample rate");
      }
      write_wav(dir / rel, Audio{std::vector<double>(s.values.data().begin(), s.values.data().end()),
                                 *s.sample_rate_hz});
    }
    m.entries.push_back({rel, ds.class_names.at(static_cast<std::size_t>(s.label.value())), split, kind});
  };
  for (const auto& s : ds.train) emit(s, Split::train);
  for (const auto& s : ds.test) emit(s, Split::test);
  const auto manifest = dir / "manifest.csv";
  write_file_atomic(manifest, format_manifest(m));
  return manifest;
}

// ---- synthetic corpora ------------------------------------------------------

std::string_view to_string(SynthTask t) noexcept {
  return t == SynthTask::sinusoid ? "sinusoid" : "maneuver";
}

std::optional<SynthTask> parse_synth_task(std::string_view text) noexcept {
  if (text == "sinusoid") return SynthTask::sinusoid;
  if (text == "maneuver") return SynthTask::maneuver;
  return std::nullopt;
}

void SynthSpec::validate() const {
  const std::size_t max_classes = task == SynthTask::sinusoid ? 8 : kManeuverCount;
  if (classes < 1 || classes > max_classes) {
    throw Error(Errc::BadSpec, "classes must be in [1, " + std::to_string(max_classes) + "]");
  }
  if (min_length < 2 || max_length < min_length) {
    throw Error(Errc::BadSpec, "length range must satisfy 2 <= min <= max");
  }
  if (!(noise_std >= 0.0)) throw Error(Errc::BadSpec, "noise_std must be >= 0");
  if (task == SynthTask::sinusoid) {
    if (!(sample_rate_hz > 0.0) || !(base_frequency_hz > 0.0)) {
      throw Error(Errc::BadSpec, "sample rate and base frequency must be > 0");
    }
    if (static_cast<double>(classes) * base_frequency_hz >= sample_rate_hz / 2.0) {
      throw Error(Errc::BadSpec, "highest class frequency reaches Nyquist");
    }
    if (lift_dim < 1) throw Error(Errc::BadSpec, "lift_dim must be >= 1");
  }
}

namespace {

// Per-sample streams keyed by (split, class, index) so a sample does not
// depend on how many others were generated before it.
Rng sample_rng(const SynthSpec& spec, Split split, std::size_t cls, std::size_t index) {
  const std::uint64_t key = (static_cast<std::uint64_t>(split == Split::test) << 32) | cls;
  return Rng(derive_seed(spec.seed, key, index));
}

std::size_t draw_length(const SynthSpec& spec, Rng& rng) {
  return spec.min_length +
         static_cast<std::size_t>(rng.below(spec.max_length - spec.min_length + 1));
}

std::string sample_id(std::string_view task, std::string_view cls, Split split, std::size_t i) {
  char num[24];
  std::snprintf(num, sizeof num, "%03zu", i);
  return std::string(task) + "/" + std::string(cls) + "/" + std::string(to_string(split)) + "/" + num;
}

}  // namespace

Matrix sinusoid_wave(const SynthSpec& spec, std::size_t cls, double phase, std::size_t length) {
  Matrix m(1, length);
  const double f = static_cast<double>(cls + 1) * spec.base_frequency_hz;
  for (std::size_t n = 0; n < length; ++n) {
    const double t = static_cast<double>(n) / spec.sample_rate_hz;
    m(0, n) = std::sin(2.0 * std::numbers::pi * f * t + phase);
  }
  return m;
}

Dataset synth_sinusoid(const SynthSpec& spec) {
  spec.validate();
  Dataset ds;
  for (std::size_t j = 0; j < spec.classes; ++j) {
    ds.class_names.push_back("f" + std::to_string(j + 1));
  }
  Matrix lift;
  if (spec.lift_dim > 1) {
    Rng lift_rng(derive_seed(spec.seed, 0x6c696674ULL));
    lift = Matrix(spec.lift_dim, 1);
    for (double& v : lift.data()) v = lift_rng.normal();
    for (std::size_t c = 0; c < spec.lift_dim; ++c) ds.channel_names.push_back("x" + std::to_string(c));
  } else {
    ds.channel_names = {"x"};
  }

  for (Split split : {Split::train, Split::test}) {
    const std::size_t count = split == Split::train ? spec.train_per_class : spec.test_per_class;
    for (std::size_t j = 0; j < spec.classes; ++j) {
      for (std::size_t i = 0; i < count; ++i) {
        Rng rng = sample_rng(spec, split, j, i);
        const std::size_t len = draw_length(spec, rng);
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        Matrix wave = sinusoid_wave(spec, j, phase, len);
        if (spec.lift_dim > 1) wave = lift * wave;
        for (double& v : wave.data()) v += spec.noise_std * rng.normal();

        LabeledSeries s;
        s.values = std::move(wave);
        s.label = static_cast<int>(j);
        s.sample_rate_hz = spec.sample_rate_hz;
        s.id = sample_id("sinusoid", ds.class_names[j], split, i);
        (split == Split::train ? ds.train : ds.test).push_back(std::move(s));
      }
    }
  }
  return ds;
}

std::string_view to_string(Maneuver m) noexcept {
  switch (m) {
    case Maneuver::stop: return "stop";
    case Maneuver::straight_ahead: return "straight_ahead";
    case Maneuver::start_up: return "start_up";
    case Maneuver::slow_down: return "slow_down";
    case Maneuver::full_braking: return "full_braking";
    case Maneuver::left_turn: return "left_turn";
    case Maneuver::right_turn: return "right_turn";
  }
  return "unknown";
}

Matrix maneuver_sample(Maneuver kind, std::size_t length, double noise_std, Rng& rng) {
  enum { kLat = 0, kLong = 1, kGrav = 2, kSpeed = 3 };
  Matrix m(4, length);
  const double dt = 1.0 / kManeuverRateHz;
  const double duration = static_cast<double>(length - 1) * dt;

  // Longitudinal profile: ramp to `accel` over `ramp` seconds, then hold.
  // Speed is its integral from v0, floored at zero (the car stops).
  const auto longitudinal = [&](double accel, double ramp, double v0) {
    const double stop_time = accel < 0.0 ? (v0 + accel * ramp / 2.0) / -accel + ramp
                                         : std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < length; ++n) {
      const double t = static_cast<double>(n) * dt;
      if (t >= stop_time) {
        m(kLong, n) = 0.0;
        m(kSpeed, n) = 0.0;
        continue;
      }
      const double a = accel * std::min(1.0, t / ramp);
      const double dv = t < ramp ? accel * t * t / (2.0 * ramp) : accel * (ramp / 2.0 + (t - ramp));
      m(kLong, n) = a;
      m(kSpeed, n) = std::max(0.0, v0 + dv);
    }
  };

  switch (kind) {
    case Maneuver::stop:
      break;
    case Maneuver::straight_ahead: {
      const double v = rng.uniform(8.0, 25.0);
      for (std::size_t n = 0; n < length; ++n) m(kSpeed, n) = v;
      break;
    }
    case Maneuver::start_up:
      longitudinal(rng.uniform(1.5, 3.5), rng.uniform(0.5, 1.5), 0.0);
      break;
    case Maneuver::slow_down: {
      const double a = rng.uniform(1.0, 2.5);
      longitudinal(-a, rng.uniform(0.5, 1.5), a * duration + rng.uniform(3.0, 10.0));
      break;
    }
    case Maneuver::full_braking:
      longitudinal(-rng.uniform(7.0, 9.5), rng.uniform(0.2, 0.5), rng.uniform(15.0, 30.0));
      break;
    case Maneuver::left_turn:
    case Maneuver::right_turn: {
      const double amp = rng.uniform(2.0, 5.0) * (kind == Maneuver::left_turn ? 1.0 : -1.0);
      const double v = rng.uniform(5.0, 15.0);
      for (std::size_t n = 0; n < length; ++n) {
        const double t = static_cast<double>(n) * dt;
        m(kLat, n) = amp * std::sin(std::numbers::pi * t / duration);
        m(kSpeed, n) = v;
      }
      break;
    }
  }
  for (std::size_t n = 0; n < length; ++n) m(kGrav, n) = kGravity;
  if (noise_std > 0.0) {
    for (double& v : m.data()) v += noise_std * rng.normal();
  }
  return m;
}

Dataset synth_maneuver(const SynthSpec& spec) {
  spec.validate();
  Dataset ds;
  ds.channel_names = {"lat_accel", "long_accel", "grav_accel", "speed"};
  for (std::size_t j = 0; j < spec.classes; ++j) {
    ds.class_names.emplace_back(to_string(static_cast<Maneuver>(j)));
  }
  for (Split split : {Split::train, Split::test}) {
    const std::size_t count = split == Split::train ? spec.train_per_class : spec.test_per_class;
    for (std::size_t j = 0; j < spec.classes; ++j) {
      for (std::size_t i = 0; i < count; ++i) {
        Rng rng = sample_rng(spec, split, j, i);
        const std::size_t len = draw_length(spec, rng);
        LabeledSeries s;
        s.values = maneuver_sample(static_cast<Maneuver>(j), len, spec.noise_std, rng);
        s.label = static_cast<int>(j);
        s.sample_rate_hz = kManeuverRateHz;
        s.id = sample_id("maneuver", ds.class_names[j], split, i);
        (split == Split::train ? ds.train : ds.test).push_back(std::move(s));
      }
    }
  }
  return ds;
}

Dataset synthesize(const SynthSpec& spec) {
  return spec.task == SynthTask::sinusoid ? synth_sinusoid(spec) : synth_maneuver(spec);
}

}  // namespace esnc
