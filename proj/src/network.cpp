#include "adepinn/network.hpp"

#include <cmath>

#include "adepinn/rng.hpp"

namespace adepinn {

void MlpSpec::validate() const {
  if (input_dim < 1) throw Error(ErrorKind::invalid_config, "input_dim must be >= 1");
  if (output_dim != 1) throw Error(ErrorKind::invalid_config, "only scalar outputs are supported");
  if (hidden_sizes.empty()) throw Error(ErrorKind::invalid_config, "at least one hidden layer");
  for (int h : hidden_sizes) {
    if (h < 1) throw Error(ErrorKind::invalid_config, "hidden sizes must be >= 1");
  }
  if (hidden_activation == ActivationKind::fourier_pair) {
    throw Error(ErrorKind::invalid_config, "fourier_pair is only valid on the first layer");
  }
  if (first_layer_activation == ActivationKind::fourier_pair && hidden_sizes.front() % 2 != 0) {
    throw Error(ErrorKind::invalid_config, "a Fourier first layer needs an even width");
  }
}

void EnsembleSpec::validate() const {
  subnet.validate();
  if (scale_factors.empty()) throw Error(ErrorKind::invalid_config, "ensemble needs >= 1 subnet");
  for (double a : scale_factors) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw Error(ErrorKind::invalid_config, "scale factors must be positive");
    }
  }
}

NetworkLayout::NetworkLayout(EnsembleSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const MlpSpec& m = spec_.subnet;
  layers_per_subnet_ = static_cast<int>(m.hidden_sizes.size()) + 1;
  Eigen::Index offset = 0;
  auto add = [&](int subnet, int rows, int cols, bool bias, bool fourier, ActivationKind act,
                 bool trainable) {
    LayerBlock b;
    b.subnet = subnet;
    b.rows = rows;
    b.cols = cols;
    b.weight_offset = offset;
    offset += Eigen::Index{rows} * cols;
    if (bias) {
      b.bias_offset = offset;
      offset += rows;
    }
    b.fourier = fourier;
    b.activation = act;
    b.trainable = trainable;
    blocks_.push_back(b);
  };
  for (int n = 0; n < spec_.subnet_count(); ++n) {
    const bool fourier = m.first_layer_activation == ActivationKind::fourier_pair;
    const int h0 = m.hidden_sizes.front();
    if (fourier) {
      add(n, h0 / 2, m.input_dim, false, true, ActivationKind::fourier_pair, spec_.trainable_fourier);
    } else {
      add(n, h0, m.input_dim, true, false, m.first_layer_activation, true);
    }
    for (std::size_t l = 1; l < m.hidden_sizes.size(); ++l) {
      add(n, m.hidden_sizes[l], m.hidden_sizes[l - 1], true, false, m.hidden_activation, true);
    }
    add(n, 1, m.hidden_sizes.back(), true, false, ActivationKind::linear, true);
  }
  if (spec_.combination == Combination::learned_head) {
    head_offset_ = offset;
    offset += spec_.subnet_count() + 1;
  }
  size_ = offset;
}

std::span<const LayerBlock> NetworkLayout::layers(int subnet) const {
  return {blocks_.data() + static_cast<std::size_t>(subnet * layers_per_subnet_),
          static_cast<std::size_t>(layers_per_subnet_)};
}

double NetworkLayout::combination_weight(int subnet) const {
  return 1.0 / (static_cast<double>(subnet_count()) *
                spec_.scale_factors[static_cast<std::size_t>(subnet)]);
}

Eigen::VectorXd ParamStore::trainable_mask() const {
  Eigen::VectorXd mask = Eigen::VectorXd::Ones(values_.size());
  for (int n = 0; n < layout_.subnet_count(); ++n) {
    for (const LayerBlock& b : layout_.layers(n)) {
      if (!b.trainable) mask.segment(b.weight_offset, b.size()).setZero();
    }
  }
  return mask;
}

ParamStore init_params(const EnsembleSpec& spec, std::uint64_t seed) {
  ParamStore store{NetworkLayout(spec)};
  CounterRng rng(seed, Stream::params);
  const NetworkLayout& layout = store.layout();
  auto glorot = [&](Eigen::Map<Eigen::MatrixXd> w, int fan_in, int fan_out) {
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-bound, bound);
    }
  };
  for (int n = 0; n < layout.subnet_count(); ++n) {
    for (const LayerBlock& b : layout.layers(n)) {
      glorot(store.weight(b), b.cols, b.rows);
    }
  }
  if (layout.head_offset() >= 0) {
    const int n = layout.subnet_count();
    Eigen::Map<Eigen::MatrixXd> head(store.flat().data() + layout.head_offset(), 1, n);
    glorot(head, n, 1);
  }
  return store;
}

ParamStore init_params(const MlpSpec& spec, std::uint64_t seed) {
  return init_params(EnsembleSpec::single(spec), seed);
}

Eigen::VectorXd fourier_features(const Eigen::Ref<const Eigen::VectorXd>& z,
                                 const Eigen::Ref<const Eigen::MatrixXd>& w1) {
  if (w1.cols() != z.size()) throw Error(ErrorKind::shape_mismatch, "W1 columns != input size");
  const Eigen::ArrayXd arg = (w1 * z).array();
  Eigen::VectorXd out(2 * arg.size());
  out << arg.cos().matrix(), arg.sin().matrix();
  return out;
}

double mlp_forward(const MlpSpec& spec, const ParamStore& params, std::span<const double> input) {
  if (!(params.spec().subnet == spec) || params.layout().subnet_count() != 1) {
    throw Error(ErrorKind::shape_mismatch, "parameter store was not built for this MLP");
  }
  return subnet_forward<double, double>(params.layout(), 0, params.span(), input);
}

double ensemble_forward(const EnsembleSpec& spec, const ParamStore& params,
                        std::span<const double> input) {
  if (!(params.spec() == spec)) {
    throw Error(ErrorKind::shape_mismatch, "parameter store was not built for this ensemble");
  }
  return network_forward<double>(params, input);
}

}  // namespace adepinn
