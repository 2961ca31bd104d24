#include <doctest.h>

#include <sstream>

#include "lotr/neural.hpp"

using namespace lotr;

namespace {

double relative_error(double a, double b) { return std::abs(a - b) / std::max(1e-8, std::abs(a) + std::abs(b)); }

// Compares backward() against central differences of <g, forward(x)>.
double worst_gradient_error(Mlpd net, const Eigen::VectorXd& x, const Eigen::VectorXd& g) {
  const auto grads = net.backward(net.forward_trace(x), g);
  const double eps = 1e-6;
  double worst = 0.0;
  auto check = [&](auto& param, const auto& grad) {
    for (Eigen::Index i = 0; i < param.size(); ++i) {
      const double old = param.data()[i];
      param.data()[i] = old + eps;
      const double up = g.dot(net.forward(x));
      param.data()[i] = old - eps;
      const double down = g.dot(net.forward(x));
      param.data()[i] = old;
      const double numeric = (up - down) / (2 * eps);
      if (std::abs(numeric) + std::abs(grad.data()[i]) > 1e-7)
        worst = std::max(worst, relative_error(numeric, grad.data()[i]));
    }
  };
  auto& p = net.params();
  check(p.w1, grads.w1);
  check(p.b1, grads.b1);
  check(p.w2, grads.w2);
  check(p.b2, grads.b2);
  return worst;
}

}  // namespace

TEST_CASE("initialization") {
  auto a = Mlpd::init(33, 70, 18, 5), b = Mlpd::init(33, 70, 18, 5), c = Mlpd::init(33, 70, 18, 6);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.parameter_count() == 33 * 70 + 70 + 70 * 18 + 18);
  CHECK(a.params().b1.isZero());
  CHECK(a.params().w1.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(33.0));
  CHECK_THROWS_AS(Mlpd::init(33, 0, 18, 1), ConfigError);
}

TEST_CASE("forward") {
  auto z = Mlpd::zeros(4, 3, 2);
  CHECK(z.forward(Eigen::VectorXd::Random(4)).isZero());
  auto unit = Mlpd::zeros(1, 1, 1);
  unit.params().w1(0, 0) = 1.0;
  unit.params().w2(0, 0) = 1.0;
  CHECK(unit.forward(Eigen::VectorXd::Constant(1, 2.0))[0] == 2.0);
  CHECK(unit.forward(Eigen::VectorXd::Constant(1, -2.0))[0] == 0.0);
  CHECK_THROWS_AS(unit.forward(Eigen::VectorXd::Zero(2)), ConfigError);
}

TEST_CASE("masked softmax") {
  Eigen::VectorXd l = Eigen::VectorXd::Zero(3);
  auto p = masked_softmax(l, std::vector<bool>{true, true, true});
  for (int i = 0; i < 3; ++i) CHECK(p[i] == doctest::Approx(1.0 / 3.0));
  l << 5.0, 9.0, -2.0;
  p = masked_softmax(l, std::vector<bool>{true, false, false});
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 0.0);
  CHECK(p[2] == 0.0);
  Eigen::VectorXd big(2);
  big << 1000.0, 999.0;
  p = masked_softmax(big, std::vector<bool>{true, true});
  CHECK(p.allFinite());
  CHECK(p[0] == doctest::Approx(0.7310585786));
  CHECK(p[1] == doctest::Approx(0.2689414214));
  CHECK_THROWS_AS(masked_softmax(l, std::vector<bool>{false, false, false}), EmptyMask);
  CHECK_THROWS_AS(masked_softmax(l, std::vector<bool>{true}), ConfigError);
}

TEST_CASE("sigmoid helpers are stable") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(800.0) == 1.0);
  CHECK(sigmoid(-800.0) == 0.0);
  CHECK(log_sigmoid(-800.0) == doctest::Approx(-800.0));
  CHECK(std::isfinite(log_sigmoid(800.0)));
  CHECK(log_sigmoid(1.5) == doctest::Approx(std::log(sigmoid(1.5))));
}

TEST_CASE("backward matches finite differences") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int in = 2 + static_cast<int>(uniform_index(rng, 40));
    const int hid = 1 + static_cast<int>(uniform_index(rng, 30));
    const int out = 1 + static_cast<int>(uniform_index(rng, 19));
    auto net = Mlpd::init(in, hid, out, rng());
    for (Eigen::Index i = 0; i < net.params().b1.size(); ++i) net.params().b1[i] = 0.1 * (2 * uniform01(rng) - 1);
    Eigen::VectorXd x(in), g(out);
    for (auto& v : x) v = 2 * uniform01(rng) - 1;
    for (auto& v : g) v = 2 * uniform01(rng) - 1;
    CHECK(worst_gradient_error(net, x, g) < 1e-4);
  }
}

TEST_CASE("zero output gradient gives zero gradients") {
  auto net = Mlpd::init(5, 4, 3, 1);
  auto grads = net.backward(net.forward_trace(Eigen::VectorXd::Ones(5)), Eigen::VectorXd::Zero(3));
  CHECK(grads.is_zero());
}

TEST_CASE("gradient application") {
  auto source = Mlpd::init(6, 5, 4, 2);
  auto grads = source.backward(source.forward_trace(Eigen::VectorXd::Ones(6)), Eigen::VectorXd::Ones(4));
  auto net = Mlpd::zeros(6, 5, 4);
  const auto start = net;
  net.apply_gradients(grads, 0.0);
  CHECK(net == start);
  net.apply_gradients(grads, 0.5);
  CHECK_FALSE(net == start);
  auto neg = grads;
  neg *= -1.0;
  net.apply_gradients(neg, 0.5);
  CHECK(net == start);
}

TEST_CASE("long runs of small steps stay finite") {
  auto net = Mlpd::init(34, 70, 18, 3);
  Rng rng(5);
  Eigen::VectorXd x(34), g(18);
  for (int step = 0; step < 20000; ++step) {
    for (auto& v : x) v = uniform01(rng) < 0.3 ? 1.0 : 0.0;
    x[33] = static_cast<double>(uniform_index(rng, 12));
    for (auto& v : g) v = 2 * uniform01(rng) - 1;
    net.apply_gradients(net.backward(net.forward_trace(x), g), 6e-4);
  }
  CHECK(net.finite());
}

TEST_CASE("weights round-trip through text") {
  auto net = Mlpd::init(7, 3, 2, 9);
  std::stringstream io;
  write_weights(io, net);
  CHECK(read_weights<double>(io) == net);
  std::stringstream bad("dims 2 2");
  CHECK_THROWS_AS(read_weights<double>(bad), FormatError);
  std::stringstream truncated("dims 1 1 1\n0.5\n");
  CHECK_THROWS_AS(read_weights<double>(truncated), FormatError);
}

TEST_CASE("float nets share the code path") {
  auto net = Mlp<float>::init(3, 4, 2, 1);
  Eigen::VectorXf x = Eigen::VectorXf::Ones(3);
  CHECK(net.forward(x).size() == 2);
}
