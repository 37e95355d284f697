#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hsivi/diffcore/param_store.hpp"
#include "hsivi/diffcore/rng.hpp"
#include "hsivi/errors.hpp"
#include "hsivi/networks/networks.hpp"
#include "support/test_util.hpp"

using namespace hsivi;
using namespace hsivi::networks;
using diffcore::GradMap;
using diffcore::ParamStore;
using diffcore::Rng;
using diffcore::Tape;
using diffcore::Tensor;
using hsivi::testing::finite_diff_grads;
using hsivi::testing::max_grad_rel_err;

namespace {

Tensor randn(std::vector<int> shape, uint64_t seed) {
  Rng rng(seed);
  return Tensor::randn(shape, rng);
}

}  // namespace

TEST_CASE("zero-initialized mlp outputs zero") {
  ParamStore ps;
  MlpSpec spec{{2, 8, 2}, Activation::kRelu};
  Rng rng(1);
  register_mlp(ps, "net", spec, rng, FinalInit::kZero);
  // Zero the hidden layer too so the whole net is zero.
  ps.set("net/w0", Tensor::zeros({2, 8}));
  Tensor y = mlp_forward(nullptr, ps, "net", spec, randn({4, 2}, 2));
  for (size_t i = 0; i < y.numel(); ++i) CHECK(y.at(i) == 0.0);
}

TEST_CASE("identity-initialized single linear layer reproduces input") {
  ParamStore ps;
  MlpSpec spec{{3, 3}, Activation::kRelu};
  Rng rng(1);
  register_mlp(ps, "net", spec, rng, FinalInit::kZero);
  ps.set("net/w0", Tensor::from({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
  Tensor x = randn({5, 3}, 3);
  Tensor y = mlp_forward(nullptr, ps, "net", spec, x);
  CHECK(hsivi::testing::max_abs_diff(x, y) == 0.0);
}

TEST_CASE("mlp gradient check against finite differences") {
  ParamStore ps;
  MlpSpec spec{{2, 6, 5, 2}, Activation::kGelu};
  Rng rng(11);
  register_mlp(ps, "net", spec, rng, FinalInit::kKaiming);
  Tensor x = randn({4, 2}, 5);
  auto value = [&]() {
    Tape tape;
    return diffcore::mean(
               &tape, diffcore::square(
                          &tape, mlp_forward(&tape, ps, "net", spec, x)))
        .value();
  };
  Tape tape;
  Tensor loss = diffcore::mean(
      &tape, diffcore::square(&tape, mlp_forward(&tape, ps, "net", spec, x)));
  CHECK(max_grad_rel_err(tape.backward(loss), finite_diff_grads(ps, value)) <
        1e-5);
}

TEST_CASE("residual mean with zero net is the identity") {
  ParamStore ps;
  MlpSpec spec{{2, 50, 50, 2}, Activation::kRelu};
  Rng rng(4);
  register_mlp(ps, "mu", spec, rng, FinalInit::kZero);
  Tensor x = randn({6, 2}, 9);
  Tensor y = residual_mean_forward(nullptr, ps, "mu", spec, x);
  // Kaiming hidden layers are live, but the zero final layer kills them.
  CHECK(hsivi::testing::max_abs_diff(x, y) == 0.0);
}

TEST_CASE("residual mean equals x plus the wrapped mlp") {
  ParamStore ps;
  MlpSpec spec{{3, 10, 3}, Activation::kRelu};
  Rng rng(6);
  register_mlp(ps, "mu", spec, rng, FinalInit::kKaiming);
  Tensor x = randn({7, 3}, 10);
  Tensor res = residual_mean_forward(nullptr, ps, "mu", spec, x);
  Tensor plain = mlp_forward(nullptr, ps, "mu", spec, x);
  for (size_t i = 0; i < res.numel(); ++i)
    CHECK(res.at(i) == x.at(i / 3 * 3 + i % 3) + plain.at(i));
}

TEST_CASE("sinusoidal embedding basics") {
  Tensor e0 = sinusoidal_embed(0.0, 8);
  for (int k = 0; k < 4; ++k) {
    CHECK(e0.at(static_cast<size_t>(2 * k)) == 0.0);   // sin 0
    CHECK(e0.at(static_cast<size_t>(2 * k + 1)) == 1.0);  // cos 0
  }
  Tensor e = sinusoidal_embed(0.37, 256);
  for (size_t i = 0; i < e.numel(); ++i) {
    CHECK(e.at(i) <= 1.0);
    CHECK(e.at(i) >= -1.0);
  }
  CHECK_THROWS_AS(sinusoidal_embed(0.1, 7), ConfigError);
}

TEST_CASE("distinct noise levels on the toy grid embed distinctly") {
  // The T-point quadratic grid used for the 2-d experiments.
  const int T = 10;
  std::vector<double> levels;
  for (int t = 0; t <= T; ++t) {
    const double r = 0.01 + (std::sqrt(0.8) - 0.01) * t / T;
    levels.push_back(r * r);
  }
  for (size_t i = 0; i < levels.size(); ++i)
    for (size_t j = i + 1; j < levels.size(); ++j) {
      Tensor a = sinusoidal_embed(levels[i], 256);
      Tensor b = sinusoidal_embed(levels[j], 256);
      double d2 = 0.0;
      for (size_t k = 0; k < a.numel(); ++k)
        d2 += (a.at(k) - b.at(k)) * (a.at(k) - b.at(k));
      CHECK(std::sqrt(d2) > 1e-3);
    }
}

TEST_CASE("time net with zero decoder outputs zero, shape matches data dim") {
  ParamStore ps;
  TimeEmbeddedNet net = TimeEmbeddedNet::toy2d();
  Rng rng(2);
  register_time_net(ps, "score", net, rng, FinalInit::kZero);
  for (size_t i = 0; i < net.dec.widths.size() - 1; ++i)
    ps.set("score/dec/w" + std::to_string(i),
           Tensor::zeros(ps.get("score/dec/w" + std::to_string(i)).shape()));
  Tensor y = time_net_forward(nullptr, ps, "score", net, randn({5, 2}, 8), 0.3);
  CHECK(y.shape() == std::vector<int>{5, 2});
  for (size_t i = 0; i < y.numel(); ++i) CHECK(y.at(i) == 0.0);
}

TEST_CASE("time net deterministic and per-row levels agree with scalar level") {
  ParamStore ps;
  TimeEmbeddedNet net = TimeEmbeddedNet::toy2d();
  Rng rng(13);
  register_time_net(ps, "score", net, rng, FinalInit::kSmallUniform);
  Tensor x = randn({4, 2}, 21);
  Tensor a = time_net_forward(nullptr, ps, "score", net, x, 0.42);
  Tensor b = time_net_forward(nullptr, ps, "score", net, x, 0.42);
  CHECK(hsivi::testing::max_abs_diff(a, b) == 0.0);
  Tensor c =
      time_net_forward_rows(nullptr, ps, "score", net, x, {0.42, 0.42, 0.42, 0.42});
  CHECK(hsivi::testing::max_abs_diff(a, c) < 1e-14);
}

TEST_CASE("time net gradient check wrt params and input") {
  ParamStore ps;
  TimeEmbeddedNet net;
  net.embx = MlpSpec{{2, 6}, Activation::kGelu};
  net.embt = MlpSpec{{8, 6, 6}, Activation::kGelu};
  net.dec = MlpSpec{{6, 6, 2}, Activation::kGelu};
  net.embed_dim = 8;
  Rng rng(3);
  register_time_net(ps, "s", net, rng, FinalInit::kKaiming);
  Tensor x = randn({3, 2}, 17);
  const double level = 0.23;

  auto value = [&]() {
    Tape tape;
    return diffcore::mean(
               &tape,
               diffcore::square(
                   &tape, time_net_forward(&tape, ps, "s", net, x, level)))
        .value();
  };
  Tape tape;
  Tensor loss = diffcore::mean(
      &tape, diffcore::square(
                 &tape, time_net_forward(&tape, ps, "s", net, x, level)));
  CHECK(max_grad_rel_err(tape.backward(loss), finite_diff_grads(ps, value)) <
        1e-5);

  // Gradient with respect to the input via a leased pseudo-parameter.
  ParamStore psx;
  psx.add("x", x);
  auto value_x = [&]() {
    Tape t2;
    Tensor xin = psx.lease(&t2, "x");
    return diffcore::mean(
               &t2, diffcore::square(
                        &t2, time_net_forward(&t2, ps, "s", net, xin, level)))
        .value();
  };
  Tape t2;
  Tensor xin = psx.lease(&t2, "x");
  Tensor loss2 = diffcore::mean(
      &t2,
      diffcore::square(&t2, time_net_forward(&t2, ps, "s", net, xin, level)));
  GradMap full = t2.backward(loss2);  // includes the net parameters
  GradMap input_only;
  input_only.emplace("x", full.at("x"));
  CHECK(max_grad_rel_err(input_only, finite_diff_grads(psx, value_x)) < 1e-5);
}

TEST_CASE("standard initializations keep outputs small on unit gaussians") {
  Rng rng(31);
  ParamStore ps;
  MlpSpec mu{{2, 50, 50, 2}, Activation::kRelu};
  register_mlp(ps, "mu", mu, rng, FinalInit::kZero);
  MlpSpec critic{{2, 128, 128, 2}, Activation::kRelu};
  register_mlp(ps, "critic", critic, rng, FinalInit::kSmallUniform);

  Rng data(77);
  Tensor x = Tensor::randn({2000, 2}, data);
  for (const char* prefix : {"mu", "critic"}) {
    const MlpSpec& spec = std::string(prefix) == "mu" ? mu : critic;
    Tensor y = mlp_forward(nullptr, ps, prefix, spec, x);
    for (int j = 0; j < y.dim(1); ++j) {
      const double sd = std::sqrt(hsivi::testing::var_of(
          hsivi::testing::column(y, j)));
      CHECK(sd < 2.0);
    }
  }
}

TEST_CASE("width mismatches are configuration errors") {
  ParamStore ps;
  MlpSpec spec{{2, 4, 2}, Activation::kRelu};
  Rng rng(1);
  register_mlp(ps, "n", spec, rng, FinalInit::kKaiming);
  CHECK_THROWS_AS(mlp_forward(nullptr, ps, "n", spec, Tensor::zeros({3, 5})),
                  ConfigError);
  MlpSpec bad{{3}, Activation::kRelu};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
