#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include "esnc/matrix.hpp"
#include "esnc/reservoir.hpp"

namespace esnc {

/// R = X X^T / L over reservoir states.
struct Correlation {
  Matrix r;
  std::size_t sample_count = 0;
};

/// Symmetric PSD matrix with spectrum in [0, 1]. Boolean combinations carry
/// no aperture.
struct Conceptor {
  Matrix c;
  std::optional<double> aperture;
  /// Set on the result of NOT: the operand it was computed from, so that a
  /// second NOT hands back the original bits instead of I - (I - C).
  std::shared_ptr<const Conceptor> complement_of;

  std::size_t dim() const noexcept { return c.rows(); }
};

Correlation correlation(const StateSequence& states);
/// Pools every sequence into one R, weighting each state equally.
Correlation correlation(std::span<const StateSequence> sequences);

/// C = R (R + aperture^-2 I)^-1, computed as the SPD solve
/// (R + aperture^-2 I) C = R and symmetrized.
Conceptor from_correlation(const Correlation& r, double aperture);

/// Regularizer added to each operand of AND before inversion.
inline constexpr double kAndRegularizer = 1e-10;

Conceptor conceptor_not(const Conceptor& c);
/// (C1^-1 + C2^-1 - I)^-1 with C_i + delta I in place of C_i; the result's
/// eigenvalues are clipped to [0, 1].
Conceptor conceptor_and(const Conceptor& a, const Conceptor& b);
/// NOT(NOT a AND NOT b)
Conceptor conceptor_or(const Conceptor& a, const Conceptor& b);

enum class EvidenceAggregation { mean, sum };

struct EvidenceOptions {
  EvidenceAggregation aggregation = EvidenceAggregation::mean;
  /// Scale each state to unit length before the quadratic form. Zero states
  /// contribute 0.
  bool normalize_states = true;
};

std::string_view to_string(EvidenceAggregation a) noexcept;
std::optional<EvidenceAggregation> parse_aggregation(std::string_view text) noexcept;

/// Quadratic-form evidence x^T C x aggregated over the sequence.
double evidence(const Conceptor& c, const StateSequence& states, const EvidenceOptions& opts = {});

void write_conceptor(std::ostream& os, const Conceptor& c);
Conceptor read_conceptor(std::istream& is);

}  // namespace esnc
