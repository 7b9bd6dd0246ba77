#pragma once

// Shared generators and comparison helpers for the test binaries.

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include "esnc/conceptor.hpp"
#include "esnc/linalg.hpp"
#include "esnc/matrix.hpp"
#include "esnc/rng.hpp"

namespace esnc::test {

/// Sample correlation of `samples` Gaussian vectors: SPD when samples >= n.
inline Correlation random_correlation(std::size_t n, Rng& rng, std::size_t samples = 0) {
  if (samples == 0) samples = 10 * n;
  const Matrix x = random_matrix(n, samples, Distribution::standard_normal, rng);
  return {(1.0 / static_cast<double>(samples)) * gram(x), samples};
}

/// Conceptor from a random full-rank correlation and a log-uniform aperture
/// in [0.3, 30].
inline Conceptor random_conceptor(std::size_t n, Rng& rng) {
  const double aperture = std::pow(10.0, rng.uniform(std::log10(0.3), std::log10(30.0)));
  return from_correlation(random_correlation(n, rng), aperture);
}

/// Random symmetric matrix with prescribed eigenvalues.
inline Matrix with_spectrum(const std::vector<double>& eig, Rng& rng) {
  const std::size_t n = eig.size();
  const SymEig q = sym_eig(random_matrix(n, n, Distribution::standard_normal, rng) +
                           transpose(random_matrix(n, n, Distribution::standard_normal, rng)));
  return spectral_map(SymEig{eig, q.eigenvectors}, [](double v) { return v; });
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("esnc_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace esnc::test
