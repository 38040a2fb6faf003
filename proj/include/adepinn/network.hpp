#pragma once
/**
 * @file network.hpp
 * @brief Plain MLPs and Fourier-feature sub-network ensembles.
 *
 * Every network is stored as an ensemble: a plain MLP is the ensemble with a
 * single subnet and scale factor 1, whose fixed combination is the identity.
 * Each subnet n sees the input scaled by a_n, maps it through
 * [cos(W1 x); sin(W1 x)] when its first layer is a Fourier layer, then
 * through dense layers, and ends in a linear scalar output F_n. The ensemble
 * output is either (1/N) sum_n F_n / a_n or a learned linear head.
 *
 * The templated forward functions here work with every AD scalar and are the
 * reference path; `BatchNetwork` is the fast batched path used in training.
 */

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "adepinn/activation.hpp"
#include "adepinn/error.hpp"

namespace adepinn {

struct MlpSpec {
  int input_dim = 2;
  std::vector<int> hidden_sizes{10, 20, 10};
  ActivationKind hidden_activation = ActivationKind::sin;
  ActivationKind first_layer_activation = ActivationKind::fourier_pair;
  int output_dim = 1;

  void validate() const;
  bool operator==(const MlpSpec&) const = default;
};

enum class Combination { fixed_average, learned_head };

struct EnsembleSpec {
  MlpSpec subnet;
  std::vector<double> scale_factors{1.0};
  Combination combination = Combination::fixed_average;
  bool trainable_fourier = true;

  static EnsembleSpec single(MlpSpec mlp) { return EnsembleSpec{std::move(mlp), {1.0}}; }

  int subnet_count() const { return static_cast<int>(scale_factors.size()); }
  void validate() const;
  bool operator==(const EnsembleSpec&) const = default;
};

/// One dense (or Fourier) layer of one subnet inside the flat parameter vector.
struct LayerBlock {
  int subnet = 0;
  int rows = 0;  ///< for a Fourier layer: number of rows of W1 (half the width)
  int cols = 0;
  Eigen::Index weight_offset = 0;  ///< column-major rows x cols
  Eigen::Index bias_offset = -1;   ///< -1 when the layer has no bias
  bool fourier = false;
  ActivationKind activation = ActivationKind::linear;
  bool trainable = true;

  int output_width() const { return fourier ? 2 * rows : rows; }
  Eigen::Index size() const { return Eigen::Index{rows} * cols + (bias_offset >= 0 ? rows : 0); }
};

class NetworkLayout {
 public:
  explicit NetworkLayout(EnsembleSpec spec);

  const EnsembleSpec& spec() const { return spec_; }
  int input_dim() const { return spec_.subnet.input_dim; }
  int subnet_count() const { return spec_.subnet_count(); }
  /// Layers of subnet n, input to output.
  std::span<const LayerBlock> layers(int subnet) const;
  Eigen::Index head_offset() const { return head_offset_; }  ///< -1 for fixed average
  Eigen::Index size() const { return size_; }
  /// Fixed-combination weight 1 / (N a_n).
  double combination_weight(int subnet) const;

 private:
  EnsembleSpec spec_;
  std::vector<LayerBlock> blocks_;
  int layers_per_subnet_ = 0;
  Eigen::Index head_offset_ = -1;
  Eigen::Index size_ = 0;
};

/// Flat trainable parameters with their layer layout.
class ParamStore {
 public:
  explicit ParamStore(NetworkLayout layout)
      : layout_(std::move(layout)), values_(Eigen::VectorXd::Zero(layout_.size())) {}

  const NetworkLayout& layout() const { return layout_; }
  const EnsembleSpec& spec() const { return layout_.spec(); }
  Eigen::Index size() const { return values_.size(); }

  Eigen::VectorXd& flat() { return values_; }
  const Eigen::VectorXd& flat() const { return values_; }
  std::span<const double> span() const {
    return {values_.data(), static_cast<std::size_t>(values_.size())};
  }

  Eigen::Map<const Eigen::MatrixXd> weight(const LayerBlock& b) const {
    return {values_.data() + b.weight_offset, b.rows, b.cols};
  }
  Eigen::Map<Eigen::MatrixXd> weight(const LayerBlock& b) {
    return {values_.data() + b.weight_offset, b.rows, b.cols};
  }
  Eigen::Map<const Eigen::VectorXd> bias(const LayerBlock& b) const {
    return {values_.data() + b.bias_offset, b.rows};
  }
  Eigen::Map<Eigen::VectorXd> bias(const LayerBlock& b) {
    return {values_.data() + b.bias_offset, b.rows};
  }

  /// 1 for trainable entries, 0 for frozen ones (untrainable Fourier weights).
  Eigen::VectorXd trainable_mask() const;

 private:
  NetworkLayout layout_;
  Eigen::VectorXd values_;
};

/// Glorot-uniform weights (bound sqrt(6 / (fan_in + fan_out))), zero biases.
ParamStore init_params(const EnsembleSpec& spec, std::uint64_t seed);
ParamStore init_params(const MlpSpec& spec, std::uint64_t seed);

/// [cos(W1 z); sin(W1 z)].
Eigen::VectorXd fourier_features(const Eigen::Ref<const Eigen::VectorXd>& z,
                                 const Eigen::Ref<const Eigen::MatrixXd>& w1);

/// Input seen by a subnet with scale factor `a`.
template <class S>
std::vector<S> scaled_input(double a, std::span<const S> input) {
  std::vector<S> out;
  out.reserve(input.size());
  for (const S& v : input) out.push_back(v * a);
  return out;
}

/**
 * Output F_n of one subnet on an already-scaled input. `P` is the parameter
 * scalar and `S` the evaluation scalar; S must be constructible from P.
 */
template <class S, class P>
S subnet_forward(const NetworkLayout& layout, int subnet, std::span<const P> params,
                 std::span<const S> input) {
  using std::cos;
  using std::sin;
  std::vector<S> y(input.begin(), input.end());
  std::vector<S> next;
  for (const LayerBlock& b : layout.layers(subnet)) {
    if (static_cast<int>(y.size()) != b.cols) {
      throw Error(ErrorKind::shape_mismatch, "layer input width mismatch");
    }
    next.assign(static_cast<std::size_t>(b.output_width()), S(0.0));
    for (int r = 0; r < b.rows; ++r) {
      S z = b.bias_offset >= 0 ? S(params[static_cast<std::size_t>(b.bias_offset + r)]) : S(0.0);
      for (int c = 0; c < b.cols; ++c) {
        z += S(params[static_cast<std::size_t>(b.weight_offset + Eigen::Index{c} * b.rows + r)]) *
             y[static_cast<std::size_t>(c)];
      }
      if (b.fourier) {
        next[static_cast<std::size_t>(r)] = cos(z);
        next[static_cast<std::size_t>(r + b.rows)] = sin(z);
      } else {
        next[static_cast<std::size_t>(r)] = activate(b.activation, z);
      }
    }
    y.swap(next);
  }
  return y.front();
}

/// Ensemble output on an unscaled input (x[, y[, z]], t).
template <class S, class P>
S network_forward(const NetworkLayout& layout, std::span<const P> params, std::span<const S> input) {
  if (static_cast<int>(input.size()) != layout.input_dim()) {
    throw Error(ErrorKind::shape_mismatch, "input dimension mismatch");
  }
  if (static_cast<Eigen::Index>(params.size()) != layout.size()) {
    throw Error(ErrorKind::shape_mismatch, "parameter count mismatch");
  }
  const auto& factors = layout.spec().scale_factors;
  const Eigen::Index head = layout.head_offset();
  S out(0.0);
  for (int n = 0; n < layout.subnet_count(); ++n) {
    const std::vector<S> scaled = scaled_input(factors[static_cast<std::size_t>(n)], input);
    const S f = subnet_forward<S, P>(layout, n, params, std::span<const S>(scaled));
    if (head >= 0) {
      out += S(params[static_cast<std::size_t>(head + n)]) * f;
    } else {
      out += f * layout.combination_weight(n);
    }
  }
  if (head >= 0) out += S(params[static_cast<std::size_t>(head + layout.subnet_count())]);
  return out;
}

template <class S>
S network_forward(const ParamStore& params, std::span<const S> input) {
  return network_forward<S, double>(params.layout(), params.span(), input);
}

double mlp_forward(const MlpSpec& spec, const ParamStore& params, std::span<const double> input);
double ensemble_forward(const EnsembleSpec& spec, const ParamStore& params,
                        std::span<const double> input);

/// Generic predictor view of a parameter store, usable with `eval_jet2`.
class NetworkPredictor {
 public:
  explicit NetworkPredictor(const ParamStore& params) : params_(&params) {}
  template <class S>
  S operator()(std::span<const S> z) const {
    return network_forward<S>(*params_, z);
  }

 private:
  const ParamStore* params_;
};

}  // namespace adepinn
