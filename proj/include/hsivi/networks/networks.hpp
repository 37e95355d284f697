#pragma once

#include <string>
#include <vector>

#include "hsivi/diffcore/param_store.hpp"
#include "hsivi/diffcore/rng.hpp"
#include "hsivi/diffcore/tape.hpp"
#include "hsivi/diffcore/tensor.hpp"

namespace hsivi::networks {

using diffcore::ParamStore;
using diffcore::Rng;
using diffcore::Tape;
using diffcore::Tensor;

enum class Activation { kRelu, kGelu };

// Affine-activation stack; the last layer is affine only.
struct MlpSpec {
  std::vector<int> widths;
  Activation activation = Activation::kRelu;

  void validate() const;
  int in_width() const { return widths.front(); }
  int out_width() const { return widths.back(); }
};

enum class FinalInit {
  kKaiming,       // same as hidden layers
  kZero,          // residual mean nets start at the identity
  kSmallUniform,  // +-1e-3, critic nets start near zero
};

// Registers weights "<prefix>/w<i>" and biases "<prefix>/b<i>". Hidden layers
// use Kaiming-uniform fan-in init; biases start at zero.
void register_mlp(ParamStore& store, const std::string& prefix,
                  const MlpSpec& spec, Rng& rng, FinalInit final_init);

Tensor mlp_forward(Tape* tape, const ParamStore& store,
                   const std::string& prefix, const MlpSpec& spec,
                   const Tensor& x);

// x + mlp(x); input and output widths of the wrapped net must match dim(x).
Tensor residual_mean_forward(Tape* tape, const ParamStore& store,
                             const std::string& prefix, const MlpSpec& spec,
                             const Tensor& x);

// Sinusoidal position embedding of a noise level in [0, 1], interleaved as
// (sin, cos) pairs with frequency ladder 10000^(-2k/dim). The input scale
// spreads the small noise-level range across the ladder.
constexpr double kSinusoidalInputScale = 1000.0;
Tensor sinusoidal_embed(double v, int dim,
                        double input_scale = kSinusoidalInputScale);
Tensor sinusoidal_embed_rows(const std::vector<double>& vs, int dim,
                             double input_scale = kSinusoidalInputScale);

// dec(embx(x) + embt(sinusoidal_embed(noise_level))) score-style network.
struct TimeEmbeddedNet {
  MlpSpec embx;
  MlpSpec embt;
  MlpSpec dec;
  int embed_dim = 256;

  void validate() const;
  int data_dim() const { return embx.in_width(); }

  // The 2-d architecture: embx [2,128], embt [256,128,128],
  // dec [128,128,128,2], all GELU.
  static TimeEmbeddedNet toy2d(int data_dim = 2);
};

void register_time_net(ParamStore& store, const std::string& prefix,
                       const TimeEmbeddedNet& net, Rng& rng,
                       FinalInit dec_final);

// Single shared noise level for the whole batch.
Tensor time_net_forward(Tape* tape, const ParamStore& store,
                        const std::string& prefix, const TimeEmbeddedNet& net,
                        const Tensor& x, double noise_level);

// Per-row noise levels (one per batch sample).
Tensor time_net_forward_rows(Tape* tape, const ParamStore& store,
                             const std::string& prefix,
                             const TimeEmbeddedNet& net, const Tensor& x,
                             const std::vector<double>& noise_levels);

}  // namespace hsivi::networks
