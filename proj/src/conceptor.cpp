#include "esnc/conceptor.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "esnc/error.hpp"
#include "esnc/kernels.hpp"
#include "esnc/linalg.hpp"
#include "text_io.hpp"

namespace esnc {

namespace {

void require_same_dim(const Conceptor& a, const Conceptor& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw Error(Errc::DimensionMismatch, std::string(op) + ": conceptor dimensions " +
                                             std::to_string(a.dim()) + " and " +
                                             std::to_string(b.dim()));
  }
}

// (C + delta I)^-1. Cholesky handles the usual case; a conceptor whose
// smallest eigenvalue sits at or slightly below zero goes through the
// eigendecomposition with the spectrum clipped to [0, 1] first.
Matrix regularized_inverse(const Matrix& c) {
  Matrix shifted = c;
  for (std::size_t i = 0; i < c.rows(); ++i) shifted(i, i) += kAndRegularizer;
  try {
    return inverse_spd(shifted);
  } catch (const Error& e) {
    if (e.code() != Errc::NotPositiveDefinite) throw;
  }
  return spectral_map(sym_eig(c), [](double l) {
    return 1.0 / (std::clamp(l, 0.0, 1.0) + kAndRegularizer);
  });
}

}  // namespace

Correlation correlation(const StateSequence& states) {
  return correlation(std::span<const StateSequence>(&states, 1));
}

Correlation correlation(std::span<const StateSequence> sequences) {
  std::size_t total = 0;
  std::size_t n = 0;
  for (const auto& s : sequences) {
    if (total == 0 && s.length() > 0) n = s.neurons();
    if (s.length() > 0 && s.neurons() != n) {
      throw Error(Errc::DimensionMismatch, "state sequences differ in neuron count");
    }
    total += s.length();
  }
  if (total == 0) throw Error(Errc::EmptyStates, "correlation needs at least one state");

  Correlation out{Matrix(n, n), total};
  for (const auto& s : sequences) {
    if (s.length() > 0) out.r += gram(s.states);
  }
  out.r *= 1.0 / static_cast<double>(total);
  out.r = symmetrize(out.r);
  return out;
}

Conceptor from_correlation(const Correlation& r, double aperture) {
  if (!(aperture > 0.0) || !std::isfinite(aperture)) {
    throw Error(Errc::NonPositiveAperture, "aperture must be > 0, got " + format_double(aperture));
  }
  const double reg = 1.0 / (aperture * aperture);
  Matrix a = r.r;
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += reg;
  // R and (R + reg I) commute, so R (R + reg I)^-1 = (R + reg I)^-1 R.
  return Conceptor{symmetrize(solve_spd(a, r.r)), aperture, nullptr};
}

Conceptor conceptor_not(const Conceptor& c) {
  if (c.complement_of) return *c.complement_of;
  Matrix out = Matrix::identity(c.dim());
  out -= c.c;
  return Conceptor{std::move(out), std::nullopt, std::make_shared<const Conceptor>(c)};
}

Conceptor conceptor_and(const Conceptor& a, const Conceptor& b) {
  require_same_dim(a, b, "and");
  Matrix m = regularized_inverse(a.c);
  m += regularized_inverse(b.c);
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= 1.0;
  Matrix out = spectral_map(sym_eig(m), [](double mu) {
    return mu > 0.0 ? std::min(1.0 / mu, 1.0) : 1.0;
  });
  return Conceptor{std::move(out), std::nullopt, nullptr};
}

Conceptor conceptor_or(const Conceptor& a, const Conceptor& b) {
  require_same_dim(a, b, "or");
  return conceptor_not(conceptor_and(conceptor_not(a), conceptor_not(b)));
}

std::string_view to_string(EvidenceAggregation a) noexcept {
  return a == EvidenceAggregation::mean ? "mean" : "sum";
}

std::optional<EvidenceAggregation> parse_aggregation(std::string_view text) noexcept {
  if (text == "mean") return EvidenceAggregation::mean;
  if (text == "sum") return EvidenceAggregation::sum;
  return std::nullopt;
}

double evidence(const Conceptor& c, const StateSequence& states, const EvidenceOptions& opts) {
  const std::size_t n = c.dim();
  if (states.neurons() != n) {
    throw Error(Errc::DimensionMismatch, "conceptor dim " + std::to_string(n) + " vs states " +
                                             std::to_string(states.neurons()));
  }
  const std::size_t len = states.length();
  if (len == 0) throw Error(Errc::EmptyStates, "evidence over an empty state sequence");

  const auto& k = kernels::active();
  const Matrix xt = transpose(states.states);
  std::vector<double> cx(n);
  double total = 0.0;
  for (std::size_t t = 0; t < len; ++t) {
    const double* x = xt.row(t).data();
    k.gemv(c.c.data().data(), n, n, x, cx.data());
    double q = k.dot(x, cx.data(), n);
    if (opts.normalize_states) {
      const double sq = k.dot(x, x, n);
      q = sq > 0.0 ? q / sq : 0.0;
    }
    total += q;
  }
  // Rounding can leave a PSD form a hair below zero.
  total = std::max(total, 0.0);
  return opts.aggregation == EvidenceAggregation::mean ? total / static_cast<double>(len) : total;
}

void write_conceptor(std::ostream& os, const Conceptor& c) {
  os << "aperture=" << (c.aperture ? format_double(*c.aperture) : std::string("none")) << '\n';
  write_matrix(os, c.c);
}

Conceptor read_conceptor(std::istream& is) {
  const std::string ap = textio::expect_key(is, "aperture");
  Conceptor c;
  if (ap != "none") c.aperture = parse_double(ap);
  c.c = read_matrix(is);
  if (!c.c.square()) throw Error(Errc::ParseError, "conceptor matrix is not square");
  return c;
}

}  // namespace esnc
