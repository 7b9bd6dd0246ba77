#pragma once

#include <filesystem>
#include <vector>

namespace esnc {

struct Audio {
  std::vector<double> samples;  // mono, in [-1, 1)
  double sample_rate = 0.0;
};

/// RIFF/WAVE, PCM 16-bit little-endian. Stereo (or more channels) is
/// downmixed by averaging. Compressed or non-16-bit formats raise
/// UnsupportedFormat; structural problems raise ParseError.
Audio read_wav(const std::filesystem::path& path);

/// Writes 16-bit mono PCM, clipping samples to [-1, 1].
void write_wav(const std::filesystem::path& path, const Audio& audio);

}  // namespace esnc
