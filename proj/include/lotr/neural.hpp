#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <vector>
#include <string>

#include "lotr/errors.hpp"
#include "lotr/random.hpp"

namespace lotr {

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Parameter-shaped container used for both gradients and update directions.
template <class Scalar>
struct MlpParams {
  MatrixX<Scalar> w1;  // hidden x input
  VectorX<Scalar> b1;
  MatrixX<Scalar> w2;  // output x hidden
  VectorX<Scalar> b2;

  MlpParams& operator+=(const MlpParams& o) {
    w1 += o.w1;
    b1 += o.b1;
    w2 += o.w2;
    b2 += o.b2;
    return *this;
  }
  MlpParams& operator*=(Scalar k) {
    w1 *= k;
    b1 *= k;
    w2 *= k;
    b2 *= k;
    return *this;
  }
  bool is_zero() const {
    return (w1.array() == 0).all() && (b1.array() == 0).all() && (w2.array() == 0).all() &&
           (b2.array() == 0).all();
  }
};

/// Everything backward needs from one forward pass.
template <class Scalar>
struct ForwardTrace {
  VectorX<Scalar> input;
  VectorX<Scalar> pre;     // W1 x + b1
  VectorX<Scalar> hidden;  // relu(pre)
  VectorX<Scalar> output;  // W2 h + b2
};

/// One-hidden-layer perceptron, rectifier hidden activation, linear output.
template <class Scalar>
class Mlp {
 public:
  using Vector = VectorX<Scalar>;
  using Matrix = MatrixX<Scalar>;
  using Params = MlpParams<Scalar>;
  using Trace = ForwardTrace<Scalar>;

  Mlp() = default;

  /// Weights uniform in +-1/sqrt(fan_in), zero biases.
  static Mlp init(int input_dim, int hidden_dim, int output_dim, std::uint64_t seed) {
    if (input_dim < 1 || hidden_dim < 1 || output_dim < 1)
      throw ConfigError("network dimensions must be positive: " + std::to_string(input_dim) + "x" +
                        std::to_string(hidden_dim) + "x" + std::to_string(output_dim));
    Mlp net = zeros(input_dim, hidden_dim, output_dim);
    Rng rng(seed);
    auto fill = [&](Matrix& m, int fan_in) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = static_cast<Scalar>((2.0 * uniform01(rng) - 1.0) * bound);
    };
    fill(net.p_.w1, input_dim);
    fill(net.p_.w2, hidden_dim);
    return net;
  }

  static Mlp zeros(int input_dim, int hidden_dim, int output_dim) {
    Mlp net;
    net.p_.w1 = Matrix::Zero(hidden_dim, input_dim);
    net.p_.b1 = Vector::Zero(hidden_dim);
    net.p_.w2 = Matrix::Zero(output_dim, hidden_dim);
    net.p_.b2 = Vector::Zero(output_dim);
    return net;
  }

  int input_dim() const noexcept { return static_cast<int>(p_.w1.cols()); }
  int hidden_dim() const noexcept { return static_cast<int>(p_.w1.rows()); }
  int output_dim() const noexcept { return static_cast<int>(p_.w2.rows()); }
  std::size_t parameter_count() const noexcept {
    return static_cast<std::size_t>(p_.w1.size() + p_.b1.size() + p_.w2.size() + p_.b2.size());
  }

  const Params& params() const noexcept { return p_; }
  Params& params() noexcept { return p_; }

  Params zero_like() const {
    return {Matrix::Zero(p_.w1.rows(), p_.w1.cols()), Vector::Zero(p_.b1.size()),
            Matrix::Zero(p_.w2.rows(), p_.w2.cols()), Vector::Zero(p_.b2.size())};
  }

  template <class Derived>
  Vector forward(const Eigen::MatrixBase<Derived>& x) const {
    check_input(x.size());
    return p_.w2 * (p_.w1 * x + p_.b1).cwiseMax(Scalar(0)) + p_.b2;
  }

  template <class Derived>
  Trace forward_trace(const Eigen::MatrixBase<Derived>& x) const {
    check_input(x.size());
    Trace t;
    t.input = x;
    t.pre = p_.w1 * t.input + p_.b1;
    t.hidden = t.pre.cwiseMax(Scalar(0));
    t.output = p_.w2 * t.hidden + p_.b2;
    return t;
  }

  /// Reverse-mode gradient of <output_gradient, output> with respect to
  /// every parameter. Consumes the trace.
  Params backward(Trace&& trace, const Vector& output_gradient) const {
    if (output_gradient.size() != output_dim()) throw ConfigError("output gradient has wrong size");
    Params g;
    g.b2 = output_gradient;
    g.w2.noalias() = output_gradient * trace.hidden.transpose();
    Vector dh = p_.w2.transpose() * output_gradient;
    g.b1 = (trace.pre.array() > Scalar(0)).select(dh, Scalar(0));
    g.w1.noalias() = g.b1 * trace.input.transpose();
    return g;
  }

  /// Gradient ascent: parameters += step * grads.
  void apply_gradients(const Params& grads, Scalar step) {
    p_.w1.noalias() += step * grads.w1;
    p_.b1.noalias() += step * grads.b1;
    p_.w2.noalias() += step * grads.w2;
    p_.b2.noalias() += step * grads.b2;
  }

  bool finite() const {
    return p_.w1.allFinite() && p_.b1.allFinite() && p_.w2.allFinite() && p_.b2.allFinite();
  }

  bool operator==(const Mlp& o) const {
    return p_.w1 == o.p_.w1 && p_.b1 == o.p_.b1 && p_.w2 == o.p_.w2 && p_.b2 == o.p_.b2;
  }

 private:
  void check_input(Eigen::Index n) const {
    if (n != p_.w1.cols())
      throw ConfigError("network expects " + std::to_string(p_.w1.cols()) + " inputs, got " + std::to_string(n));
  }

  Params p_;
};

using Mlpd = Mlp<double>;

/// Softmax over the unmasked entries, shifted by their max logit; masked
/// entries are exactly zero.
template <class Derived, class Mask>
VectorX<typename Derived::Scalar> masked_softmax(const Eigen::MatrixBase<Derived>& logits, const Mask& mask) {
  using Scalar = typename Derived::Scalar;
  if (static_cast<Eigen::Index>(mask.size()) != logits.size()) throw ConfigError("mask size does not match logits");
  Scalar top = -std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index i = 0; i < logits.size(); ++i)
    if (mask[static_cast<std::size_t>(i)]) top = std::max(top, logits[i]);
  if (top == -std::numeric_limits<Scalar>::infinity()) throw EmptyMask();
  VectorX<Scalar> p = VectorX<Scalar>::Zero(logits.size());
  Scalar sum = 0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    p[i] = std::exp(logits[i] - top);
    sum += p[i];
  }
  return p / sum;
}

template <class Scalar>
Scalar sigmoid(Scalar x) {
  return x >= 0 ? Scalar(1) / (Scalar(1) + std::exp(-x)) : std::exp(x) / (Scalar(1) + std::exp(x));
}

/// log(sigmoid(x)) without overflow.
template <class Scalar>
Scalar log_sigmoid(Scalar x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// Weight file: "dims <in> <hid> <out>" then W1 (row-major), b1, W2, b2.
template <class Scalar>
void write_weights(std::ostream& out, const Mlp<Scalar>& net) {
  const auto& p = net.params();
  out << "dims " << net.input_dim() << ' ' << net.hidden_dim() << ' ' << net.output_dim() << '\n';
  auto old_prec = out.precision(17);
  auto write_matrix = [&](const auto& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << static_cast<double>(m(i, j));
      out << '\n';
    }
  };
  write_matrix(p.w1);
  write_matrix(p.b1.transpose());
  write_matrix(p.w2);
  write_matrix(p.b2.transpose());
  out.precision(old_prec);
}

template <class Scalar>
Mlp<Scalar> read_weights(std::istream& in) {
  std::string tag;
  int n_in = 0, n_hid = 0, n_out = 0;
  if (!(in >> tag >> n_in >> n_hid >> n_out) || tag != "dims") throw FormatError("weights", 1, "expected 'dims in hid out'");
  if (n_in < 1 || n_hid < 1 || n_out < 1) throw FormatError("weights", 1, "non-positive dimension");
  auto net = Mlp<Scalar>::zeros(n_in, n_hid, n_out);
  auto& p = net.params();
  auto read_into = [&](auto& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        double v;
        if (!(in >> v)) throw FormatError("weights", 0, "truncated weight block");
        m(i, j) = static_cast<Scalar>(v);
      }
  };
  read_into(p.w1);
  read_into(p.b1);
  read_into(p.w2);
  read_into(p.b2);
  return net;
}

}  // namespace lotr
