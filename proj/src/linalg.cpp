#include "esnc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "esnc/error.hpp"
#include "esnc/kernels.hpp"

namespace esnc {

namespace {

void require_square(const Matrix& a, const char* op) {
  if (!a.square()) {
    throw Error(Errc::NonSquare, std::string(op) + ": " + std::to_string(a.rows()) + "x" +
                                     std::to_string(a.cols()));
  }
}

void require_finite(const Matrix& a, const char* op) {
  if (!a.all_finite()) throw Error(Errc::NonFinite, op);
}

double off_diagonal_sq(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return 2.0 * s;
}

}  // namespace

SymEig sym_eig(const Matrix& input) {
  require_square(input, "sym_eig");
  require_finite(input, "sym_eig");
  const std::size_t n = input.rows();
  Matrix a = symmetrize(input);
  Matrix v = Matrix::identity(n);

  const double total = std::max(frobenius_norm(a), 1e-300);
  const double stop = std::pow(1e-17 * total, 2);
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_sq(a) <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  SymEig out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }
  return out;
}

Matrix spectral_map(const SymEig& eig, const std::function<double(double)>& f) {
  const std::size_t n = eig.eigenvalues.size();
  const Matrix& v = eig.eigenvectors;
  // Scale columns of V, then multiply by V^T.
  Matrix scaled = v;
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(eig.eigenvalues[k]);
    for (std::size_t r = 0; r < n; ++r) scaled(r, k) *= fk;
  }
  return symmetrize(scaled * transpose(v));
}

Matrix cholesky(const Matrix& a) {
  require_square(a, "cholesky");
  require_finite(a, "cholesky");
  const std::size_t n = a.rows();
  Matrix l(n, n);
  const auto& k = kernels::active();
  for (std::size_t j = 0; j < n; ++j) {
    const double d = a(j, j) - k.dot(l.row(j).data(), l.row(j).data(), j);
    if (!(d > 0.0)) {
      throw Error(Errc::NotPositiveDefinite,
                  "pivot " + std::to_string(j) + " is " + format_double(d));
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - k.dot(l.row(i).data(), l.row(j).data(), j)) / ljj;
    }
  }
  return l;
}

Matrix solve_spd(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(Errc::DimensionMismatch, "solve_spd: rhs has " + std::to_string(b.rows()) +
                                             " rows, system " + std::to_string(a.rows()));
  }
  const Matrix l = cholesky(a);
  const std::size_t n = a.rows();
  // Work on columns of B transposed so each solve is contiguous.
  Matrix xt = transpose(b);
  for (std::size_t c = 0; c < xt.rows(); ++c) {
    std::span<double> x = xt.row(c);
    for (std::size_t i = 0; i < n; ++i) {
      double s = x[i];
      for (std::size_t p = 0; p < i; ++p) s -= l(i, p) * x[p];
      x[i] = s / l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = x[i];
      for (std::size_t p = i + 1; p < n; ++p) s -= l(p, i) * x[p];
      x[i] = s / l(i, i);
    }
  }
  return transpose(xt);
}

Matrix inverse_spd(const Matrix& a) { return symmetrize(solve_spd(a, Matrix::identity(a.rows()))); }

namespace {

// Diagonal similarity by powers of two so row and column norms are
// comparable; keeps the QR iteration accurate for badly scaled input.
void balance(Matrix& a) {
  const std::size_t n = a.rows();
  constexpr double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double g = r / radix, f = 1.0;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        for (std::size_t j = 0; j < n; ++j) a(i, j) /= f;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

void to_hessenberg(Matrix& a) {
  const std::size_t n = a.rows();
  std::vector<double> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) norm = std::hypot(norm, a(k + 1 + i, k));
    if (norm == 0.0) continue;
    const double alpha = a(k + 1, k) > 0.0 ? -norm : norm;
    for (std::size_t i = 0; i < m; ++i) v[i] = a(k + 1 + i, k);
    v[0] -= alpha;
    double vn = 0.0;
    for (std::size_t i = 0; i < m; ++i) vn = std::hypot(vn, v[i]);
    if (vn == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) v[i] /= vn;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += v[i] * a(k + 1 + i, j);
      for (std::size_t i = 0; i < m; ++i) a(k + 1 + i, j) -= 2.0 * v[i] * s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += a(r, k + 1 + i) * v[i];
      for (std::size_t i = 0; i < m; ++i) a(r, k + 1 + i) -= 2.0 * s * v[i];
    }
    a(k + 1, k) = alpha;
    for (std::size_t i = 1; i < m; ++i) a(k + 1 + i, k) = 0.0;
  }
}

double with_sign(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix (the classic hqr
// deflation scheme), eigenvalues only.
std::vector<std::complex<double>> hessenberg_eigenvalues(Matrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
  auto at = [&](int i, int j) -> double& {
    return a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };
  double anorm = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(at(i, j));
  }

  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(at(l, l - 1)) + s == s) {
          at(l, l - 1) = 0.0;
          break;
        }
      }
      double x = at(nn, nn);
      if (l == nn) {
        out[static_cast<std::size_t>(nn)] = {x + t, 0.0};
        --nn;
        continue;
      }
      double y = at(nn - 1, nn - 1);
      double w = at(nn, nn - 1) * at(nn - 1, nn);
      if (l == nn - 1) {
        const double p = 0.5 * (y - x);
        const double q = p * p + w;
        double z = std::sqrt(std::abs(q));
        x += t;
        if (q >= 0.0) {
          z = p + with_sign(z, p);
          const double hi = x + z;
          const double lo = z != 0.0 ? x - w / z : hi;
          out[static_cast<std::size_t>(nn - 1)] = {hi, 0.0};
          out[static_cast<std::size_t>(nn)] = {lo, 0.0};
        } else {
          out[static_cast<std::size_t>(nn - 1)] = {x + p, -z};
          out[static_cast<std::size_t>(nn)] = {x + p, z};
        }
        nn -= 2;
        continue;
      }
      if (its == 60) throw Error(Errc::NoConvergence, "QR iteration did not converge");
      if (its == 10 || its == 20 || its == 40) {
        // exceptional shift
        t += x;
        for (int i = 0; i <= nn; ++i) at(i, i) -= x;
        const double s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      ++its;
      int m = nn - 2;
      double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
      for (; m >= l; --m) {
        z = at(m, m);
        r = x - z;
        const double s0 = y - z;
        p = (r * s0 - w) / at(m + 1, m) + at(m, m + 1);
        q = at(m + 1, m + 1) - z - r - s0;
        r = at(m + 2, m + 1);
        const double s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        const double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
        const double v = std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) + std::abs(at(m + 1, m + 1)));
        if (u + v == v) break;
      }
      for (int i = m + 2; i <= nn; ++i) {
        at(i, i - 2) = 0.0;
        if (i != m + 2) at(i, i - 3) = 0.0;
      }
      for (int k = m; k <= nn - 1; ++k) {
        if (k != m) {
          p = at(k, k - 1);
          q = at(k + 1, k - 1);
          r = k != nn - 1 ? at(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x != 0.0) {
            p /= x;
            q /= x;
            r /= x;
          }
        }
        const double s = with_sign(std::sqrt(p * p + q * q + r * r), p);
        if (s == 0.0) continue;
        if (k == m) {
          if (l != m) at(k, k - 1) = -at(k, k - 1);
        } else {
          at(k, k - 1) = -s * x;
        }
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;
        for (int j = k; j <= nn; ++j) {
          p = at(k, j) + q * at(k + 1, j);
          if (k != nn - 1) {
            p += r * at(k + 2, j);
            at(k + 2, j) -= p * z;
          }
          at(k + 1, j) -= p * y;
          at(k, j) -= p * x;
        }
        const int mmin = std::min(nn, k + 3);
        for (int i = l; i <= mmin; ++i) {
          p = x * at(i, k) + y * at(i, k + 1);
          if (k != nn - 1) {
            p += z * at(i, k + 2);
            at(i, k + 2) -= p * r;
          }
          at(i, k + 1) -= p * q;
          at(i, k) -= p;
        }
      }
    } while (l < nn - 1);
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Matrix& w) {
  require_square(w, "eigenvalues");
  require_finite(w, "eigenvalues");
  if (w.rows() == 0) throw Error(Errc::ZeroDimension, "eigenvalues of empty matrix");
  Matrix a = w;
  balance(a);
  to_hessenberg(a);
  return hessenberg_eigenvalues(a);
}

double spectral_radius(const Matrix& w) {
  double rho = 0.0;
  for (const auto& z : eigenvalues(w)) rho = std::max(rho, std::abs(z));
  return rho;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, Distribution dist, Rng& rng) {
  if (rows == 0 || cols == 0) {
    throw Error(Errc::ZeroDimension,
                "random_matrix " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  Matrix m(rows, cols);
  for (double& x : m.data()) {
    x = dist == Distribution::standard_normal ? rng.normal() : rng.uniform_pm1();
  }
  return m;
}

}  // namespace esnc
