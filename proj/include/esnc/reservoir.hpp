#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "esnc/matrix.hpp"
#include "esnc/series.hpp"

namespace esnc {

enum class Activation { tanh, identity };

std::string_view to_string(Activation a) noexcept;
std::optional<Activation> parse_activation(std::string_view text) noexcept;

struct ReservoirParams {
  std::size_t n_neurons = 10;
  double spectral_radius_target = 0.9;  // must lie in (0, 1)
  double input_scaling = 1.0;
  double bias_scaling = 0.2;
  Activation activation = Activation::tanh;
  std::size_t washout = 0;
  std::uint64_t seed = 1;

  /// Throws BadArgument on out-of-range values.
  void validate() const;
};

/// Fixed random recurrent network x(n+1) = f(W_res x(n) + W_in p(n+1) + b).
struct Reservoir {
  Matrix w_res;               // N x N
  Matrix w_in;                // N x d
  std::vector<double> bias;   // N
  ReservoirParams params;

  std::size_t size() const noexcept { return w_res.rows(); }
  std::size_t input_dim() const noexcept { return w_in.cols(); }
};

/// Reservoir states as columns: states is N x L, column n is x(n + 1 + washout).
struct StateSequence {
  Matrix states;
  std::size_t washout_dropped = 0;

  std::size_t neurons() const noexcept { return states.rows(); }
  std::size_t length() const noexcept { return states.cols(); }
};

/// Builds a reservoir from the seed:
///   W0 ~ N(0,1)^{N x N};  W_res = target * W0 / rho(W0);
///   W_in ~ N(0,1)^{N x d} * input_scaling;  b ~ N(0,1)^N * bias_scaling.
/// All draws come from Rng(derive_seed(seed, attempt)) in that order. When
/// rho(W0) < 1e-12 the next attempt is tried, up to five retries, then
/// DegenerateW0 is thrown.
Reservoir generate(const ReservoirParams& params, std::size_t input_dim);

/// Runs the update from x(0) = 0 (or the given initial state) and returns
/// the states after dropping params.washout of them.
StateSequence drive(const Reservoir& res, const Matrix& input,
                    std::span<const double> initial_state = {});
inline StateSequence drive(const Reservoir& res, const LabeledSeries& input) {
  return drive(res, input.values);
}

/// Ridge regression readout: argmin_W ||W X - Y||^2 + ridge ||W||^2.
/// targets is d x L. Throws SingularGram when ridge == 0 and X X^T is singular.
Matrix fit_readout(const StateSequence& states, const Matrix& targets, double ridge);

/// y(n) = W_out x(n) for every state column; result is d x L.
Matrix apply_readout(const Matrix& w_out, const StateSequence& states);

void write_reservoir(std::ostream& os, const Reservoir& res);
Reservoir read_reservoir(std::istream& is);

}  // namespace esnc
