#include "esnc/reservoir.hpp"

#include <cmath>
#include <ostream>

#include "esnc/error.hpp"
#include "esnc/kernels.hpp"
#include "esnc/linalg.hpp"
#include "esnc/rng.hpp"
#include "text_io.hpp"

namespace esnc {

std::string_view to_string(Activation a) noexcept {
  return a == Activation::tanh ? "tanh" : "linear";
}

std::optional<Activation> parse_activation(std::string_view text) noexcept {
  if (text == "tanh") return Activation::tanh;
  if (text == "linear" || text == "identity") return Activation::identity;
  return std::nullopt;
}

void ReservoirParams::validate() const {
  if (n_neurons < 1) throw Error(Errc::BadArgument, "n_neurons must be >= 1");
  if (!(spectral_radius_target > 0.0 && spectral_radius_target < 1.0)) {
    throw Error(Errc::BadArgument,
                "spectral_radius_target must lie in (0, 1), got " + format_double(spectral_radius_target));
  }
  if (!(input_scaling > 0.0)) throw Error(Errc::BadArgument, "input_scaling must be > 0");
  if (!(bias_scaling >= 0.0)) throw Error(Errc::BadArgument, "bias_scaling must be >= 0");
}

Reservoir generate(const ReservoirParams& params, std::size_t input_dim) {
  params.validate();
  if (input_dim < 1) throw Error(Errc::ZeroDimension, "reservoir input_dim must be >= 1");
  const std::size_t n = params.n_neurons;
  constexpr int kMaxRetries = 5;

  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(attempt)));
    Matrix w0 = random_matrix(n, n, Distribution::standard_normal, rng);
    const double rho = spectral_radius(w0);
    if (!(rho >= 1e-12)) continue;

    Reservoir res;
    res.params = params;
    res.w_res = (params.spectral_radius_target / rho) * std::move(w0);
    res.w_in = params.input_scaling *
               random_matrix(n, input_dim, Distribution::standard_normal, rng);
    res.bias.resize(n);
    for (double& b : res.bias) b = params.bias_scaling * rng.normal();
    return res;
  }
  throw Error(Errc::DegenerateW0, "spectral radius of W0 below 1e-12 after " +
                                      std::to_string(kMaxRetries) + " retries");
}

StateSequence drive(const Reservoir& res, const Matrix& input,
                    std::span<const double> initial_state) {
  const std::size_t n = res.size();
  const std::size_t d = res.input_dim();
  if (input.rows() != d) {
    throw Error(Errc::DimensionMismatch, "input has " + std::to_string(input.rows()) +
                                             " channels, reservoir expects " + std::to_string(d));
  }
  const std::size_t washout = res.params.washout;
  if (input.cols() <= washout) {
    throw Error(Errc::TooShort, "input length " + std::to_string(input.cols()) +
                                    " must exceed washout " + std::to_string(washout));
  }
  if (!initial_state.empty() && initial_state.size() != n) {
    throw Error(Errc::DimensionMismatch, "initial state length");
  }

  const auto& k = kernels::active();
  std::vector<double> x(n, 0.0);
  if (!initial_state.empty()) x.assign(initial_state.begin(), initial_state.end());
  std::vector<double> pre(n), drive_in(n), p(d);

  StateSequence out;
  out.washout_dropped = washout;
  out.states = Matrix(n, input.cols() - washout);
  const bool squash = res.params.activation == Activation::tanh;

  for (std::size_t step = 0; step < input.cols(); ++step) {
    for (std::size_t c = 0; c < d; ++c) p[c] = input(c, step);
    k.gemv(res.w_res.data().data(), n, n, x.data(), pre.data());
    k.gemv(res.w_in.data().data(), n, d, p.data(), drive_in.data());
    for (std::size_t i = 0; i < n; ++i) {
      const double a = pre[i] + drive_in[i] + res.bias[i];
      x[i] = squash ? std::tanh(a) : a;
    }
    if (step >= washout) out.states.set_col(step - washout, x);
  }
  return out;
}

Matrix fit_readout(const StateSequence& states, const Matrix& targets, double ridge) {
  const Matrix& x = states.states;
  if (targets.cols() != x.cols()) {
    throw Error(Errc::DimensionMismatch, "targets have " + std::to_string(targets.cols()) +
                                             " steps, states " + std::to_string(x.cols()));
  }
  if (ridge < 0.0) throw Error(Errc::BadArgument, "ridge must be >= 0");
  Matrix a = gram(x);
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += ridge;
  // (X X^T + ridge I) W^T = X Y^T
  const Matrix rhs = x * transpose(targets);
  try {
    return transpose(solve_spd(a, rhs));
  } catch (const Error& e) {
    if (e.code() == Errc::NotPositiveDefinite) {
      throw Error(Errc::SingularGram, "state Gram matrix is singular; use ridge > 0");
    }
    throw;
  }
}

Matrix apply_readout(const Matrix& w_out, const StateSequence& states) {
  return w_out * states.states;
}

void write_reservoir(std::ostream& os, const Reservoir& res) {
  const auto& p = res.params;
  os << "esnc-reservoir 1\n";
  os << "n_neurons=" << p.n_neurons << '\n';
  os << "spectral_radius_target=" << format_double(p.spectral_radius_target) << '\n';
  os << "input_scaling=" << format_double(p.input_scaling) << '\n';
  os << "bias_scaling=" << format_double(p.bias_scaling) << '\n';
  os << "activation=" << to_string(p.activation) << '\n';
  os << "washout=" << p.washout << '\n';
  os << "seed=" << p.seed << '\n';
  os << "w_res\n";
  write_matrix(os, res.w_res);
  os << "w_in\n";
  write_matrix(os, res.w_in);
  os << "bias\n";
  write_matrix(os, Matrix::column(res.bias));
  os << "end-reservoir\n";
}

Reservoir read_reservoir(std::istream& is) {
  using namespace textio;
  expect_line(is, "esnc-reservoir 1");
  Reservoir res;
  auto& p = res.params;
  p.n_neurons = parse_count(expect_key(is, "n_neurons"));
  p.spectral_radius_target = parse_double(expect_key(is, "spectral_radius_target"));
  p.input_scaling = parse_double(expect_key(is, "input_scaling"));
  p.bias_scaling = parse_double(expect_key(is, "bias_scaling"));
  const std::string act = expect_key(is, "activation");
  const auto a = parse_activation(act);
  if (!a) throw Error(Errc::ParseError, "unknown activation '" + act + "'");
  p.activation = *a;
  p.washout = parse_count(expect_key(is, "washout"));
  p.seed = parse_count(expect_key(is, "seed"));
  res.w_res = read_tagged_matrix(is, "w_res");
  res.w_in = read_tagged_matrix(is, "w_in");
  const Matrix bias = read_tagged_matrix(is, "bias");
  expect_line(is, "end-reservoir");
  if (res.w_res.rows() != p.n_neurons || !res.w_res.square() || res.w_in.rows() != p.n_neurons ||
      bias.rows() != p.n_neurons || bias.cols() != 1) {
    throw Error(Errc::ParseError, "reservoir matrix shapes disagree with n_neurons");
  }
  res.bias.assign(bias.data().begin(), bias.data().end());
  return res;
}

}  // namespace esnc
