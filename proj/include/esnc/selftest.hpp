#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace esnc {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick invariant suite over random inputs: kernel agreement, conceptor
/// spectrum and Boolean laws, FFT round trip, a small train/evaluate run.
std::vector<SelftestCheck> run_selftest(std::uint64_t seed);

}  // namespace esnc
