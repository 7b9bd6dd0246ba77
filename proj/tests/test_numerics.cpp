#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "esnc/error.hpp"
#include "esnc/linalg.hpp"
#include "esnc/matrix.hpp"
#include "esnc/rng.hpp"
#include "support.hpp"

using namespace esnc;

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  }
  return e;
}

double eigen_spectral_radius(const Matrix& m) {
  return to_eigen(m).eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("matrix arithmetic matches hand-computed values") {
  const Matrix a{{1, 2}, {3, 4}};
  const Matrix b{{0, 1}, {1, 0}};
  CHECK(a * b == Matrix{{2, 1}, {4, 3}});
  CHECK(a + b == Matrix{{1, 3}, {4, 4}});
  CHECK(a - b == Matrix{{1, 1}, {2, 4}});
  CHECK(2.0 * a == Matrix{{2, 4}, {6, 8}});
  CHECK(transpose(a) == Matrix{{1, 3}, {2, 4}});
  CHECK(gram(a) == Matrix{{5, 11}, {11, 25}});
  CHECK(symmetrize(a) == Matrix{{1, 2.5}, {2.5, 4}});
  CHECK(hconcat(a, b) == Matrix{{1, 2, 0, 1}, {3, 4, 1, 0}});
  const std::vector<double> x = {1, -1};
  CHECK(multiply(a, x) == std::vector<double>{-1, -1});
  CHECK(frobenius_norm(a) == doctest::Approx(std::sqrt(30.0)));
  CHECK(max_abs_diff(a, b) == 4.0);
  CHECK_THROWS_AS(a * Matrix(3, 1), Error);
}

TEST_CASE("matrix products agree with Eigen on random shapes") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const std::size_t r = 1 + rng.below(17), k = 1 + rng.below(17), c = 1 + rng.below(17);
    const Matrix a = random_matrix(r, k, Distribution::standard_normal, rng);
    const Matrix b = random_matrix(k, c, Distribution::standard_normal, rng);
    const Eigen::MatrixXd ref = to_eigen(a) * to_eigen(b);
    const Eigen::MatrixXd refg = to_eigen(a) * to_eigen(a).transpose();
    CHECK((to_eigen(a * b) - ref).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((to_eigen(gram(a)) - refg).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("matrix text form round-trips bit-identically") {
  Rng rng(3);
  Matrix m = random_matrix(4, 5, Distribution::standard_normal, rng);
  m(0, 0) = 1e-300;
  m(1, 1) = -0.0;
  m(2, 2) = 1.0 / 3.0;
  std::stringstream ss;
  write_matrix(ss, m);
  const Matrix back = read_matrix(ss);
  CHECK(back == m);
  CHECK(std::signbit(back(1, 1)));
}

TEST_CASE("matrix parsing rejects malformed input") {
  std::stringstream bad_header("matriz 1 1\n1\n");
  CHECK_THROWS_AS(read_matrix(bad_header), Error);
  std::stringstream short_row("matrix 2 2\n1 2\n3\n");
  CHECK_THROWS_AS(read_matrix(short_row), Error);
  std::stringstream nan("matrix 1 1\nnan\n");
  CHECK_THROWS_AS(read_matrix(nan), Error);
  CHECK_THROWS_AS(parse_double("1.5x"), Error);
  CHECK(parse_double("-2.5e3") == -2500.0);
}

TEST_CASE("SplitMix64 and xoshiro256** reproduce the reference bitstream") {
  // SplitMix64 from state 1234567, the published reference sequence.
  const std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
  CHECK(mix64(1234567 + golden) == 6457827717110365317ULL);
  CHECK(mix64(1234567 + 2 * golden) == 3203168211198807973ULL);
  // xoshiro256** seeded by four SplitMix64 steps from 1234567.
  Rng rng(1234567);
  CHECK(rng.next_u64() == 3504822795582309479ULL);
  CHECK(rng.next_u64() == 1819558768956484042ULL);
  CHECK(rng.next_u64() == 1250851346055027673ULL);
}

TEST_CASE("derived seeds are distinct across cells and trials") {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t c = 0; c < 20; ++c) {
    for (std::uint64_t t = 0; t < 50; ++t) seeds.push_back(derive_seed(1, c, t));
  }
  std::sort(seeds.begin(), seeds.end());
  CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}

TEST_CASE("uniform and integer draws stay in range") {
  Rng rng(5);
  std::vector<int> counts(6, 0);
  for (int i = 0; i < 60000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    ++counts[static_cast<std::size_t>(rng.below(6))];
  }
  // each bucket expects 10000; 5 sigma is about 456
  for (int c : counts) CHECK(std::abs(c - 10000) < 460);
}

TEST_CASE("random_matrix examples") {
  Rng a(7), b(7);
  CHECK(random_matrix(2, 2, Distribution::standard_normal, a) ==
        random_matrix(2, 2, Distribution::standard_normal, b));

  Rng rng(99);
  const Matrix g = random_matrix(1000, 1, Distribution::standard_normal, rng);
  double mean = 0.0;
  for (double v : g.data()) mean += v;
  mean /= 1000.0;
  double var = 0.0;
  for (double v : g.data()) var += (v - mean) * (v - mean);
  var /= 999.0;
  CHECK(mean > -0.15);
  CHECK(mean < 0.15);
  CHECK(var > 0.8);
  CHECK(var < 1.2);

  const Matrix u = random_matrix(3, 3, Distribution::uniform_pm1, rng);
  for (double v : u.data()) {
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
  }
  CHECK_THROWS_AS(random_matrix(0, 3, Distribution::uniform_pm1, rng), Error);
}

TEST_CASE("sym_eig matches Eigen's self-adjoint solver") {
  Rng rng(21);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng.below(20);
    const Matrix x = random_matrix(n, n, Distribution::standard_normal, rng);
    const Matrix a = symmetrize(x);
    const SymEig mine = sym_eig(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(to_eigen(a));
    const Eigen::VectorXd ev = ref.eigenvalues();  // ascending
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(mine.eigenvalues[i] == doctest::Approx(ev(static_cast<Eigen::Index>(n - 1 - i))).epsilon(1e-10).scale(1.0));
    }
    // A V = V diag(lambda), V orthogonal
    const Matrix av = a * mine.eigenvectors;
    double resid = 0.0, ortho = 0.0;
    const Matrix vtv = transpose(mine.eigenvectors) * mine.eigenvectors;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        resid = std::max(resid, std::abs(av(i, j) - mine.eigenvectors(i, j) * mine.eigenvalues[j]));
        ortho = std::max(ortho, std::abs(vtv(i, j) - (i == j ? 1.0 : 0.0)));
      }
    }
    CHECK(resid < 1e-10);
    CHECK(ortho < 1e-12);
  }
}

TEST_CASE("sym_eig: PSD input has no eigenvalue below -1e-10") {
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng.below(10);
    // rank-deficient on purpose
    const Matrix x = random_matrix(n, n / 2 + 1, Distribution::standard_normal, rng);
    for (double v : sym_eig(gram(x)).eigenvalues) CHECK(v >= -1e-10);
  }
}

TEST_CASE("sym_eig orders eigenvalues descending and handles diagonal input") {
  const std::vector<double> d = {0.5, 3.0, -1.0};
  const SymEig e = sym_eig(Matrix::diagonal(d));
  CHECK(e.eigenvalues == std::vector<double>{3.0, 0.5, -1.0});
  CHECK_THROWS_AS(sym_eig(Matrix(2, 3)), Error);
}

TEST_CASE("cholesky solves: examples and residual") {
  const Matrix b{{1}, {2}};
  CHECK(solve_spd(Matrix::identity(2), b) == b);
  const std::vector<double> d = {2, 4};
  const Matrix x = solve_spd(Matrix::diagonal(d), Matrix{{2}, {4}});
  CHECK(x(0, 0) == doctest::Approx(1.0));
  CHECK(x(1, 0) == doctest::Approx(1.0));

  Rng rng(8);
  const Matrix g = random_matrix(6, 12, Distribution::standard_normal, rng);
  const Matrix a = gram(g);
  const Matrix rhs = random_matrix(6, 3, Distribution::standard_normal, rng);
  const Matrix sol = solve_spd(a, rhs);
  CHECK(frobenius_norm(a * sol - rhs) / frobenius_norm(rhs) < 1e-8);

  CHECK_THROWS_AS(cholesky(Matrix{{1, 2}, {2, 1}}), Error);
  try {
    cholesky(Matrix{{0, 0}, {0, 1}});
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotPositiveDefinite);
  }
}

TEST_CASE("solve_spd recovers x0 for condition numbers up to 1e6") {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + rng.below(8);
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = std::pow(10.0, -6.0 * static_cast<double>(i) / static_cast<double>(n - 1));
    const Matrix a = test::with_spectrum(eig, rng);
    const Matrix x0 = random_matrix(n, 1, Distribution::standard_normal, rng);
    const Matrix x = solve_spd(a, a * x0);
    CHECK(frobenius_norm(x - x0) / frobenius_norm(x0) < 1e-7);
  }
}

TEST_CASE("inverse_spd against Eigen") {
  Rng rng(13);
  const Matrix a = gram(random_matrix(5, 9, Distribution::standard_normal, rng));
  const Matrix inv = inverse_spd(a);
  const Eigen::MatrixXd ref = to_eigen(a).inverse();
  CHECK((to_eigen(inv) - ref).cwiseAbs().maxCoeff() < 1e-10 * ref.cwiseAbs().maxCoeff());
  CHECK(inv == transpose(inv));
}

TEST_CASE("spectral radius examples") {
  CHECK(spectral_radius(Matrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectral_radius(Matrix{{0, 2}, {0, 0}}) < 1e-6);
  const std::vector<double> d = {0.3, -0.9};
  CHECK(spectral_radius(Matrix::diagonal(d)) == doctest::Approx(0.9).epsilon(1e-12));
  // rotation-like: complex pair of modulus 2
  CHECK(spectral_radius(Matrix{{0, -2}, {2, 0}}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(spectral_radius(Matrix(2, 3)), Error);
}

TEST_CASE("spectral radius of c I is |c| within 1e-9") {
  for (double c : {-3.5, -1.0, 0.0, 1e-3, 0.9, 7.0}) {
    for (std::size_t n : {1u, 3u, 10u}) {
      CHECK(std::abs(spectral_radius(c * Matrix::identity(n)) - std::abs(c)) <= 1e-9);
    }
  }
}

TEST_CASE("spectral radius agrees with Eigen's general eigensolver") {
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(60);
    Matrix w = random_matrix(n, n, t % 2 ? Distribution::standard_normal : Distribution::uniform_pm1, rng);
    if (t % 5 == 0) {
      // badly scaled rows and columns
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) w(i, j) *= std::pow(10.0, static_cast<double>((i + 2 * j) % 5) - 2.0);
      }
    }
    const double ref = eigen_spectral_radius(w);
    CHECK(std::abs(spectral_radius(w) - ref) <= 1e-9 * std::max(1.0, ref));
  }
}

TEST_CASE("general eigenvalues match Eigen as multisets") {
  Rng rng(18);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng.below(15);
    const Matrix w = random_matrix(n, n, Distribution::standard_normal, rng);
    auto mine = eigenvalues(w);
    const Eigen::VectorXcd ev = to_eigen(w).eigenvalues();
    std::vector<std::complex<double>> ref(ev.data(), ev.data() + ev.size());
    const auto key = [](const std::complex<double>& a, const std::complex<double>& b) {
      if (std::abs(a.real() - b.real()) > 1e-8) return a.real() < b.real();
      return a.imag() < b.imag();
    };
    std::sort(mine.begin(), mine.end(), key);
    std::sort(ref.begin(), ref.end(), key);
    REQUIRE(mine.size() == ref.size());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(mine[i] - ref[i]) < 1e-8);
  }
}

TEST_CASE("spectral radius self-consistency: W0 / rho(W0) has radius 1 within 1e-6") {
  Rng rng(19);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.below(60);
    const Matrix w0 = random_matrix(n, n, Distribution::standard_normal, rng);
    const Matrix w1 = (1.0 / spectral_radius(w0)) * w0;
    CHECK(std::abs(spectral_radius(w1) - 1.0) <= 1e-6);
  }
}
