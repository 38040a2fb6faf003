#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "adepinn/ad.hpp"

namespace adepinn {

enum class ActivationKind {
  sin,
  cos,
  tanh,
  enhanced_tanh,  ///< tanh(0.5 * pi * x)
  sigmoid,
  elu,
  gelu,
  relu,
  leaky_relu,
  fourier_pair,  ///< first-layer [cos(Wz); sin(Wz)]; not an elementwise map
  linear,
};

inline constexpr double leaky_relu_slope = 0.01;

/// Throws UnsupportedPrimitive for unknown names.
ActivationKind parse_activation(std::string_view name);
std::string_view to_string(ActivationKind kind);
const std::vector<ActivationKind>& elementwise_activations();

/// Elementwise activation for any scalar of the AD family.
template <class S>
S activate(ActivationKind kind, const S& x) {
  using std::cos;
  using std::erf;
  using std::exp;
  using std::sin;
  using std::tanh;
  switch (kind) {
    case ActivationKind::sin: return sin(x);
    case ActivationKind::cos: return cos(x);
    case ActivationKind::tanh: return tanh(x);
    case ActivationKind::enhanced_tanh: return tanh(x * (0.5 * std::numbers::pi));
    case ActivationKind::sigmoid: return 1.0 / (1.0 + exp(-x));
    case ActivationKind::elu: return ad::value_of(x) > 0.0 ? x : exp(x) - 1.0;
    case ActivationKind::gelu: return 0.5 * x * (1.0 + erf(x * std::numbers::sqrt2 * 0.5));
    case ActivationKind::relu: return ad::value_of(x) > 0.0 ? x : x * 0.0;
    case ActivationKind::leaky_relu: return ad::value_of(x) > 0.0 ? x : x * leaky_relu_slope;
    case ActivationKind::linear: return x;
    case ActivationKind::fourier_pair: break;
  }
  return x;
}

/// sigma and its first three derivatives, evaluated elementwise on z.
struct ActivationTaylor {
  Eigen::ArrayXXd d0, d1, d2, d3;
};

/// Third derivatives are needed to back-propagate through second-order jets.
/// Kinks (relu, leaky_relu, elu at 0) take the left-hand branch, so every
/// higher derivative there is 0.
void activation_taylor(ActivationKind kind, const Eigen::ArrayXXd& z, ActivationTaylor& out);

/// Scalar convenience wrapper around `activation_taylor`.
std::array<double, 4> activation_derivatives(ActivationKind kind, double x);

}  // namespace adepinn
