#include "adepinn/activation.hpp"

#include <array>
#include <utility>

#include "adepinn/error.hpp"

namespace adepinn {

namespace {

constexpr std::array<std::pair<std::string_view, ActivationKind>, 11> kNames{{
    {"sin", ActivationKind::sin},
    {"cos", ActivationKind::cos},
    {"tanh", ActivationKind::tanh},
    {"enhanced_tanh", ActivationKind::enhanced_tanh},
    {"sigmoid", ActivationKind::sigmoid},
    {"elu", ActivationKind::elu},
    {"gelu", ActivationKind::gelu},
    {"relu", ActivationKind::relu},
    {"leaky_relu", ActivationKind::leaky_relu},
    {"fourier_pair", ActivationKind::fourier_pair},
    {"linear", ActivationKind::linear},
}};

void tanh_taylor(const Eigen::ArrayXXd& z, double c, ActivationTaylor& o) {
  const Eigen::ArrayXXd t = (c * z).tanh();
  const Eigen::ArrayXXd t1 = 1.0 - t.square();
  const Eigen::ArrayXXd t2 = -2.0 * t * t1;
  const Eigen::ArrayXXd t3 = -2.0 * (t1.square() + t * t2);
  o.d0 = t;
  o.d1 = c * t1;
  o.d2 = (c * c) * t2;
  o.d3 = (c * c * c) * t3;
}

}  // namespace

ActivationKind parse_activation(std::string_view name) {
  for (const auto& [n, k] : kNames) {
    if (n == name) return k;
  }
  if (name == "enhance_tanh") return ActivationKind::enhanced_tanh;
  throw Error(ErrorKind::unsupported_primitive, "unknown activation '" + std::string(name) + "'");
}

std::string_view to_string(ActivationKind kind) {
  for (const auto& [n, k] : kNames) {
    if (k == kind) return n;
  }
  return "unknown";
}

const std::vector<ActivationKind>& elementwise_activations() {
  static const std::vector<ActivationKind> all{
      ActivationKind::sin,     ActivationKind::cos,  ActivationKind::tanh,
      ActivationKind::enhanced_tanh, ActivationKind::sigmoid, ActivationKind::elu,
      ActivationKind::gelu,    ActivationKind::relu, ActivationKind::leaky_relu,
      ActivationKind::linear,
  };
  return all;
}

void activation_taylor(ActivationKind kind, const Eigen::ArrayXXd& z, ActivationTaylor& o) {
  const auto rows = z.rows();
  const auto cols = z.cols();
  switch (kind) {
    case ActivationKind::sin: {
      const Eigen::ArrayXXd s = z.sin();
      const Eigen::ArrayXXd c = z.cos();
      o.d0 = s;
      o.d1 = c;
      o.d2 = -s;
      o.d3 = -c;
      return;
    }
    case ActivationKind::cos: {
      const Eigen::ArrayXXd s = z.sin();
      const Eigen::ArrayXXd c = z.cos();
      o.d0 = c;
      o.d1 = -s;
      o.d2 = -c;
      o.d3 = s;
      return;
    }
    case ActivationKind::tanh: tanh_taylor(z, 1.0, o); return;
    case ActivationKind::enhanced_tanh: tanh_taylor(z, 0.5 * std::numbers::pi, o); return;
    case ActivationKind::sigmoid: {
      const Eigen::ArrayXXd s = 1.0 / (1.0 + (-z).exp());
      const Eigen::ArrayXXd s1 = s * (1.0 - s);
      const Eigen::ArrayXXd s2 = s1 * (1.0 - 2.0 * s);
      o.d0 = s;
      o.d1 = s1;
      o.d2 = s2;
      o.d3 = s2 * (1.0 - 2.0 * s) - 2.0 * s1.square();
      return;
    }
    case ActivationKind::elu: {
      const Eigen::ArrayXXd e = z.min(0.0).exp();
      const auto pos = (z > 0.0);
      o.d0 = pos.select(z, e - 1.0);
      o.d1 = pos.select(Eigen::ArrayXXd::Ones(rows, cols), e);
      o.d2 = pos.select(Eigen::ArrayXXd::Zero(rows, cols), e);
      o.d3 = o.d2;
      return;
    }
    case ActivationKind::gelu: {
      const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
      const Eigen::ArrayXXd phi = inv_sqrt2pi * (-0.5 * z.square()).exp();
      const Eigen::ArrayXXd cdf = 0.5 * (1.0 + (z * (0.5 * std::numbers::sqrt2)).unaryExpr([](double v) { return std::erf(v); }));
      o.d0 = z * cdf;
      o.d1 = cdf + z * phi;
      o.d2 = phi * (2.0 - z.square());
      o.d3 = phi * (z.cube() - 4.0 * z);
      return;
    }
    case ActivationKind::relu:
    case ActivationKind::leaky_relu: {
      const double slope = kind == ActivationKind::relu ? 0.0 : leaky_relu_slope;
      const auto pos = (z > 0.0);
      o.d0 = pos.select(z, slope * z);
      o.d1 = pos.select(Eigen::ArrayXXd::Ones(rows, cols),
                        Eigen::ArrayXXd::Constant(rows, cols, slope));
      o.d2 = Eigen::ArrayXXd::Zero(rows, cols);
      o.d3 = o.d2;
      return;
    }
    case ActivationKind::linear:
      o.d0 = z;
      o.d1 = Eigen::ArrayXXd::Ones(rows, cols);
      o.d2 = Eigen::ArrayXXd::Zero(rows, cols);
      o.d3 = o.d2;
      return;
    case ActivationKind::fourier_pair: break;
  }
  throw Error(ErrorKind::unsupported_primitive, "fourier_pair is not an elementwise activation");
}

std::array<double, 4> activation_derivatives(ActivationKind kind, double x) {
  ActivationTaylor t;
  activation_taylor(kind, Eigen::ArrayXXd::Constant(1, 1, x), t);
  return {t.d0(0, 0), t.d1(0, 0), t.d2(0, 0), t.d3(0, 0)};
}

}  // namespace adepinn
