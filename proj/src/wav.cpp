#include "esnc/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "esnc/error.hpp"
#include "esnc/io.hpp"

namespace esnc {

namespace {

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xfffe;

}  // namespace

Audio read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::MissingFile, path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  const std::string where = path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(Errc::ParseError, where + ": not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t len = le32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min(len, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw Error(Errc::ParseError, where + ": fmt chunk too short");
      const unsigned char* f = bytes.data() + body;
      format = le16(f);
      channels = le16(f + 2);
      rate = le32(f + 4);
      bits = le16(f + 14);
      if (format == kFormatExtensible) {
        // sub-format GUID starts at offset 24; its first two bytes are the tag
        if (avail < 26) throw Error(Errc::ParseError, where + ": extensible fmt chunk too short");
        format = le16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = avail;
    }
    pos = body + len + (len & 1);
  }

  if (!have_fmt) throw Error(Errc::ParseError, where + ": missing fmt chunk");
  if (data == nullptr) throw Error(Errc::ParseError, where + ": missing data chunk");
  if (format != kFormatPcm) {
    throw Error(Errc::UnsupportedFormat,
                where + ": format tag " + std::to_string(format) + " (only PCM is supported)");
  }
  if (bits != 16) {
    throw Error(Errc::UnsupportedFormat, where + ": " + std::to_string(bits) + "-bit samples");
  }
  if (channels == 0 || rate == 0) throw Error(Errc::ParseError, where + ": bad fmt fields");

  const std::size_t frame_bytes = 2u * channels;
  const std::size_t frames = data_len / frame_bytes;
  Audio out;
  out.sample_rate = rate;
  out.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      acc += static_cast<std::int16_t>(le16(data + i * frame_bytes + 2 * c));
    }
    out.samples[i] = acc / (32768.0 * channels);
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const Audio& audio) {
  if (!(audio.sample_rate > 0.0)) throw Error(Errc::BadArgument, "sample_rate must be > 0");
  const auto rate = static_cast<std::uint32_t>(std::lround(audio.sample_rate));
  const auto data_len = static_cast<std::uint32_t>(2 * audio.samples.size());
  std::string out;
  out.reserve(44 + data_len);
  out += "RIFF";
  put32(out, 36 + data_len);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, rate);
  put32(out, rate * 2);
  put16(out, 2);
  put16(out, 16);
  out += "data";
  put32(out, data_len);
  for (double s : audio.samples) {
    const double clipped = std::clamp(s, -1.0, 1.0);
    const long q = std::clamp(std::lround(clipped * 32768.0), -32768L, 32767L);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  write_file_atomic(path, out);
}

}  // namespace esnc
