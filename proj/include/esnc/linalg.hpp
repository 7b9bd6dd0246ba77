#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "esnc/matrix.hpp"
#include "esnc/rng.hpp"

namespace esnc {

struct SymEig {
  std::vector<double> eigenvalues;  // descending
  Matrix eigenvectors;              // column i pairs with eigenvalues[i]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. The input is
/// symmetrized as (A + A^T)/2 first. Throws NonSquare, NonFinite.
SymEig sym_eig(const Matrix& a);

/// V diag(f(lambda)) V^T
Matrix spectral_map(const SymEig& eig, const std::function<double(double)>& f);

/// Lower Cholesky factor L with A = L L^T. Throws NotPositiveDefinite when a
/// pivot is <= 0.
Matrix cholesky(const Matrix& a);

/// Solves A X = B for symmetric positive definite A via Cholesky.
Matrix solve_spd(const Matrix& a, const Matrix& b);

/// Inverse of an SPD matrix, symmetrized.
Matrix inverse_spd(const Matrix& a);

/// Eigenvalues of a general real square matrix, in no particular order:
/// balancing, Householder reduction to upper Hessenberg form, then Francis
/// double-shift QR. Throws NonSquare, NonFinite, NoConvergence.
std::vector<std::complex<double>> eigenvalues(const Matrix& a);

/// max |lambda| over eigenvalues(w).
double spectral_radius(const Matrix& w);

enum class Distribution { standard_normal, uniform_pm1 };

Matrix random_matrix(std::size_t rows, std::size_t cols, Distribution dist, Rng& rng);

}  // namespace esnc
