#pragma once
/**
 * @file ad.hpp
 * @brief Scalar automatic differentiation types.
 *
 * Two number types are provided and compose with each other:
 *
 *  - `Var` records every operation onto the thread's active `Tape`, so a
 *    reverse sweep yields the gradient of one output with respect to all
 *    leaves (used for parameter gradients).
 *  - `Dual2<T>` carries (value, first, second) derivatives along one input
 *    direction. `Dual2<double>` gives input jets; `Dual2<Var>` gives input
 *    jets whose entries are themselves differentiable in the parameters.
 *
 * Generic code should call math functions unqualified after
 * `using std::sin;` etc. so ADL picks the right overload.
 */

#include <cmath>
#include <cstdint>
#include <numbers>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

namespace adepinn::ad {

// ---------------------------------------------------------------------------
// Reverse mode
// ---------------------------------------------------------------------------

class Tape {
 public:
  struct Node {
    std::int32_t lhs;
    std::int32_t rhs;
    double d_lhs;
    double d_rhs;
  };

  std::int32_t push(std::int32_t lhs, double d_lhs, std::int32_t rhs, double d_rhs) {
    nodes_.push_back({lhs, rhs, d_lhs, d_rhs});
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  std::int32_t push_leaf() { return push(-1, 0.0, -1, 0.0); }

  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

  /// Reverse sweep from `output`; entry i is d output / d node i.
  std::vector<double> adjoints(std::int32_t output) const {
    std::vector<double> adj(nodes_.size(), 0.0);
    if (output < 0) return adj;
    adj[static_cast<std::size_t>(output)] = 1.0;
    for (std::int32_t i = output; i >= 0; --i) {
      const double a = adj[static_cast<std::size_t>(i)];
      if (a == 0.0) continue;
      const Node& n = nodes_[static_cast<std::size_t>(i)];
      if (n.lhs >= 0) adj[static_cast<std::size_t>(n.lhs)] += a * n.d_lhs;
      if (n.rhs >= 0) adj[static_cast<std::size_t>(n.rhs)] += a * n.d_rhs;
    }
    return adj;
  }

 private:
  std::vector<Node> nodes_;
};

namespace detail {
inline Tape*& active_tape_slot() {
  thread_local Tape* tape = nullptr;
  return tape;
}
}  // namespace detail

inline Tape* active_tape() { return detail::active_tape_slot(); }

/// Installs a tape as the thread's recording target for its lifetime.
class ScopedTape {
 public:
  explicit ScopedTape(Tape& tape) : previous_(detail::active_tape_slot()) {
    detail::active_tape_slot() = &tape;
  }
  ~ScopedTape() { detail::active_tape_slot() = previous_; }
  ScopedTape(const ScopedTape&) = delete;
  ScopedTape& operator=(const ScopedTape&) = delete;

 private:
  Tape* previous_;
};

/// Tape-recorded scalar. Index -1 marks a constant that is never recorded.
class Var {
 public:
  Var() = default;
  Var(double value) : value_(value) {}  // NOLINT: implicit constants are intended

  static Var leaf(double value) {
    Var v(value);
    v.index_ = active_tape()->push_leaf();
    return v;
  }

  double value() const { return value_; }
  std::int32_t index() const { return index_; }
  bool is_constant() const { return index_ < 0; }

  static Var unary(const Var& a, double value, double da) {
    Var r(value);
    if (!a.is_constant()) r.index_ = active_tape()->push(a.index_, da, -1, 0.0);
    return r;
  }

  static Var binary(const Var& a, double da, const Var& b, double db, double value) {
    Var r(value);
    if (!a.is_constant() || !b.is_constant()) {
      r.index_ = active_tape()->push(a.index_, da, b.index_, db);
    }
    return r;
  }

  Var& operator+=(const Var& o) { return *this = *this + o; }
  Var& operator-=(const Var& o) { return *this = *this - o; }
  Var& operator*=(const Var& o) { return *this = *this * o; }
  Var& operator/=(const Var& o) { return *this = *this / o; }

  friend Var operator+(const Var& a, const Var& b) {
    return binary(a, 1.0, b, 1.0, a.value_ + b.value_);
  }
  friend Var operator-(const Var& a, const Var& b) {
    return binary(a, 1.0, b, -1.0, a.value_ - b.value_);
  }
  friend Var operator*(const Var& a, const Var& b) {
    return binary(a, b.value_, b, a.value_, a.value_ * b.value_);
  }
  friend Var operator/(const Var& a, const Var& b) {
    const double q = a.value_ / b.value_;
    return binary(a, 1.0 / b.value_, b, -q / b.value_, q);
  }
  friend Var operator-(const Var& a) { return unary(a, -a.value_, -1.0); }

  friend bool operator<(const Var& a, const Var& b) { return a.value_ < b.value_; }
  friend bool operator>(const Var& a, const Var& b) { return a.value_ > b.value_; }

 private:
  double value_ = 0.0;
  std::int32_t index_ = -1;
};

inline Var sin(const Var& a) { return Var::unary(a, std::sin(a.value()), std::cos(a.value())); }
inline Var cos(const Var& a) { return Var::unary(a, std::cos(a.value()), -std::sin(a.value())); }
inline Var exp(const Var& a) {
  const double e = std::exp(a.value());
  return Var::unary(a, e, e);
}
inline Var log(const Var& a) { return Var::unary(a, std::log(a.value()), 1.0 / a.value()); }
inline Var sqrt(const Var& a) {
  const double s = std::sqrt(a.value());
  return Var::unary(a, s, 0.5 / s);
}
inline Var tanh(const Var& a) {
  const double t = std::tanh(a.value());
  return Var::unary(a, t, 1.0 - t * t);
}
inline Var erf(const Var& a) {
  const double x = a.value();
  return Var::unary(a, std::erf(x), 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x * x));
}

// ---------------------------------------------------------------------------
// Second-order forward mode along a single direction
// ---------------------------------------------------------------------------

template <class T>
struct Dual2 {
  T v{};   ///< value
  T d{};   ///< first directional derivative
  T dd{};  ///< second directional derivative

  Dual2() = default;
  Dual2(const T& value) : v(value), d(0.0), dd(0.0) {}  // NOLINT
  template <class U>
    requires(std::is_arithmetic_v<U> && !std::is_same_v<U, T>)
  Dual2(U c) : v(static_cast<double>(c)), d(0.0), dd(0.0) {}  // NOLINT
  Dual2(const T& value, const T& first, const T& second) : v(value), d(first), dd(second) {}

  /// Seed an independent variable along the active direction.
  static Dual2 variable(const T& value) { return Dual2(value, T(1.0), T(0.0)); }

  Dual2& operator+=(const Dual2& o) { return *this = *this + o; }
  Dual2& operator-=(const Dual2& o) { return *this = *this - o; }
  Dual2& operator*=(const Dual2& o) { return *this = *this * o; }
  Dual2& operator/=(const Dual2& o) { return *this = *this / o; }

  friend Dual2 operator+(const Dual2& a, const Dual2& b) {
    return {a.v + b.v, a.d + b.d, a.dd + b.dd};
  }
  friend Dual2 operator-(const Dual2& a, const Dual2& b) {
    return {a.v - b.v, a.d - b.d, a.dd - b.dd};
  }
  friend Dual2 operator-(const Dual2& a) { return {-a.v, -a.d, -a.dd}; }
  friend Dual2 operator*(const Dual2& a, const Dual2& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * (a.d * b.d) + a.v * b.dd};
  }
  friend Dual2 operator/(const Dual2& a, const Dual2& b) {
    const T q = a.v / b.v;
    const T qd = (a.d - q * b.d) / b.v;
    const T qdd = (a.dd - 2.0 * (qd * b.d) - q * b.dd) / b.v;
    return {q, qd, qdd};
  }

  friend Dual2 operator+(const Dual2& a, double c) { return {a.v + c, a.d, a.dd}; }
  friend Dual2 operator+(double c, const Dual2& a) { return {c + a.v, a.d, a.dd}; }
  friend Dual2 operator-(const Dual2& a, double c) { return {a.v - c, a.d, a.dd}; }
  friend Dual2 operator-(double c, const Dual2& a) { return {c - a.v, -a.d, -a.dd}; }
  friend Dual2 operator*(const Dual2& a, double c) { return {a.v * c, a.d * c, a.dd * c}; }
  friend Dual2 operator*(double c, const Dual2& a) { return {c * a.v, c * a.d, c * a.dd}; }
  friend Dual2 operator/(const Dual2& a, double c) { return {a.v / c, a.d / c, a.dd / c}; }
  friend Dual2 operator/(double c, const Dual2& a) { return Dual2(T(c)) / a; }

  friend bool operator<(const Dual2& a, const Dual2& b) { return a.v < b.v; }
  friend bool operator>(const Dual2& a, const Dual2& b) { return a.v > b.v; }
};

/// Applies g to a jet given g(v), g'(v), g''(v).
template <class T>
Dual2<T> chain(const Dual2<T>& a, const T& g0, const T& g1, const T& g2) {
  return {g0, g1 * a.d, g2 * (a.d * a.d) + g1 * a.dd};
}

template <class T>
Dual2<T> sin(const Dual2<T>& a) {
  using std::cos;
  using std::sin;
  const T s = sin(a.v);
  const T c = cos(a.v);
  return chain(a, s, c, -s);
}
template <class T>
Dual2<T> cos(const Dual2<T>& a) {
  using std::cos;
  using std::sin;
  const T s = sin(a.v);
  const T c = cos(a.v);
  return chain(a, c, -s, -c);
}
template <class T>
Dual2<T> exp(const Dual2<T>& a) {
  using std::exp;
  const T e = exp(a.v);
  return chain(a, e, e, e);
}
template <class T>
Dual2<T> log(const Dual2<T>& a) {
  using std::log;
  const T inv = 1.0 / a.v;
  return chain(a, log(a.v), inv, -(inv * inv));
}
template <class T>
Dual2<T> sqrt(const Dual2<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.v);
  const T g1 = 0.5 / s;
  return chain(a, s, g1, -0.5 * g1 / a.v);
}
template <class T>
Dual2<T> tanh(const Dual2<T>& a) {
  using std::tanh;
  const T t = tanh(a.v);
  const T g1 = 1.0 - t * t;
  return chain(a, t, g1, -2.0 * (t * g1));
}
template <class T>
Dual2<T> erf(const Dual2<T>& a) {
  using std::erf;
  using std::exp;
  const T g1 = (2.0 / std::sqrt(std::numbers::pi)) * exp(-(a.v * a.v));
  return chain(a, erf(a.v), g1, -2.0 * (a.v * g1));
}

// ---------------------------------------------------------------------------
// Value extraction for branching and reporting
// ---------------------------------------------------------------------------

inline double value_of(double x) { return x; }
inline double value_of(const Var& x) { return x.value(); }
template <class T>
double value_of(const Dual2<T>& x) {
  return value_of(x.v);
}

}  // namespace adepinn::ad
