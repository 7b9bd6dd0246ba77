#include "esnc/kernels.hpp"

namespace esnc::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(a + r * cols, x, cols);
}

void gram_scalar(const double* x, std::size_t rows, std::size_t cols, double* out) {
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = i; j < rows; ++j) {
      const double v = dot_scalar(x + i * cols, x + j * cols, cols);
      out[i * rows + j] = v;
      out[j * rows + i] = v;
    }
  }
}

}  // namespace

namespace detail {
const Table scalar_table{Isa::scalar, dot_scalar, axpy_scalar, gemv_scalar, gram_scalar};
}

}  // namespace esnc::kernels
