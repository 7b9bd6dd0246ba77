#pragma once

// Dense double-precision inner loops used by the matrix and reservoir code.
//
// Each kernel exists as a scalar reference implementation and, where the
// build and CPU allow it, an AVX2+FMA variant. The active table is chosen
// once at first use (the best supported ISA) and can be switched with
// select(). Vector variants reorder additions, so results agree with the
// scalar path to rounding, not bit-for-bit.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace esnc::kernels {

enum class Isa { scalar, avx2 };

struct Table {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = A x, A row-major rows x cols
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // out = X X^T, X row-major rows x cols, out rows x rows (full, symmetric)
  void (*gram)(const double* x, std::size_t rows, std::size_t cols, double* out);
};

std::string_view name(Isa isa) noexcept;
std::optional<Isa> parse_isa(std::string_view text) noexcept;

/// True when the variant was compiled in and the running CPU supports it.
bool supported(Isa isa) noexcept;

/// Kernel table for a specific ISA; nullptr when unsupported.
const Table* table_for(Isa isa) noexcept;

/// Currently selected table.
const Table& active() noexcept;

/// Switch the process-wide selection. Throws esnc::Error(BadArgument) when
/// the ISA is unsupported.
void select(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

namespace detail {
extern const Table scalar_table;
#if defined(ESNC_HAVE_AVX2)
extern const Table avx2_table;
#endif
}  // namespace detail

}  // namespace esnc::kernels
