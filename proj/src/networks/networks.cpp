#include "hsivi/networks/networks.hpp"

#include <cmath>

#include "hsivi/errors.hpp"

namespace hsivi::networks {

namespace dc = hsivi::diffcore;

void MlpSpec::validate() const {
  if (widths.size() < 2)
    throw ConfigError("MlpSpec: need at least input and output widths");
  for (int w : widths)
    if (w < 1) throw ConfigError("MlpSpec: widths must be >= 1");
}

namespace {

std::string wname(const std::string& prefix, size_t i) {
  return prefix + "/w" + std::to_string(i);
}
std::string bname(const std::string& prefix, size_t i) {
  return prefix + "/b" + std::to_string(i);
}

Tensor kaiming_uniform(int fan_in, int fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
  Tensor w = Tensor::zeros({fan_in, fan_out});
  for (auto& v : w.values()) v = bound * (2.0 * rng.uniform() - 1.0);
  return w;
}

Tensor small_uniform(int fan_in, int fan_out, Rng& rng) {
  Tensor w = Tensor::zeros({fan_in, fan_out});
  for (auto& v : w.values()) v = 1e-3 * (2.0 * rng.uniform() - 1.0);
  return w;
}

Tensor apply_activation(Tape* tape, Activation act, const Tensor& x) {
  return act == Activation::kRelu ? dc::relu(tape, x) : dc::gelu(tape, x);
}

}  // namespace

void register_mlp(ParamStore& store, const std::string& prefix,
                  const MlpSpec& spec, Rng& rng, FinalInit final_init) {
  spec.validate();
  const size_t layers = spec.widths.size() - 1;
  for (size_t i = 0; i < layers; ++i) {
    const int fan_in = spec.widths[i];
    const int fan_out = spec.widths[i + 1];
    const bool last = (i + 1 == layers);
    Tensor w;
    if (!last || final_init == FinalInit::kKaiming)
      w = kaiming_uniform(fan_in, fan_out, rng);
    else if (final_init == FinalInit::kZero)
      w = Tensor::zeros({fan_in, fan_out});
    else
      w = small_uniform(fan_in, fan_out, rng);
    store.add(wname(prefix, i), std::move(w));
    store.add(bname(prefix, i), Tensor::zeros({fan_out}));
  }
}

Tensor mlp_forward(Tape* tape, const ParamStore& store,
                   const std::string& prefix, const MlpSpec& spec,
                   const Tensor& x) {
  spec.validate();
  if (x.rank() != 2 || x.dim(1) != spec.in_width())
    throw ConfigError("mlp_forward: input width " + x.shape_str() +
                      " does not match spec width " +
                      std::to_string(spec.in_width()));
  const size_t layers = spec.widths.size() - 1;
  Tensor h = x;
  for (size_t i = 0; i < layers; ++i) {
    Tensor w = store.lease(tape, wname(prefix, i));
    Tensor b = store.lease(tape, bname(prefix, i));
    h = dc::add_rowvec(tape, dc::matmul(tape, h, w), b);
    if (i + 1 < layers) h = apply_activation(tape, spec.activation, h);
  }
  return h;
}

Tensor residual_mean_forward(Tape* tape, const ParamStore& store,
                             const std::string& prefix, const MlpSpec& spec,
                             const Tensor& x) {
  if (spec.in_width() != spec.out_width() || spec.in_width() != x.dim(1))
    throw ConfigError("residual_mean_forward: net must map dim(x) to dim(x)");
  return dc::add(tape, x, mlp_forward(tape, store, prefix, spec, x));
}

Tensor sinusoidal_embed(double v, int dim, double input_scale) {
  Tensor row = sinusoidal_embed_rows({v}, dim, input_scale);
  return Tensor::from({dim}, row.values());
}

Tensor sinusoidal_embed_rows(const std::vector<double>& vs, int dim,
                             double input_scale) {
  if (dim % 2 != 0) throw ConfigError("sinusoidal_embed: dim must be even");
  const int half = dim / 2;
  const int rows = static_cast<int>(vs.size());
  Tensor out = Tensor::zeros({rows, dim});
  for (int r = 0; r < rows; ++r) {
    const double x = vs[static_cast<size_t>(r)] * input_scale;
    for (int k = 0; k < half; ++k) {
      const double omega =
          std::pow(10000.0, -2.0 * static_cast<double>(k) / dim);
      out.values()[static_cast<size_t>(r) * dim + 2 * k] = std::sin(x * omega);
      out.values()[static_cast<size_t>(r) * dim + 2 * k + 1] =
          std::cos(x * omega);
    }
  }
  return out;
}

void TimeEmbeddedNet::validate() const {
  embx.validate();
  embt.validate();
  dec.validate();
  if (embx.out_width() != embt.out_width() ||
      embx.out_width() != dec.in_width())
    throw ConfigError(
        "TimeEmbeddedNet: embx/embt output widths must equal dec input width");
  if (embt.in_width() != embed_dim)
    throw ConfigError("TimeEmbeddedNet: embt input width must equal embed_dim");
}

TimeEmbeddedNet TimeEmbeddedNet::toy2d(int data_dim) {
  TimeEmbeddedNet net;
  net.embx = MlpSpec{{data_dim, 128}, Activation::kGelu};
  net.embt = MlpSpec{{256, 128, 128}, Activation::kGelu};
  net.dec = MlpSpec{{128, 128, 128, data_dim}, Activation::kGelu};
  net.embed_dim = 256;
  net.validate();
  return net;
}

void register_time_net(ParamStore& store, const std::string& prefix,
                       const TimeEmbeddedNet& net, Rng& rng,
                       FinalInit dec_final) {
  net.validate();
  register_mlp(store, prefix + "/embx", net.embx, rng, FinalInit::kKaiming);
  register_mlp(store, prefix + "/embt", net.embt, rng, FinalInit::kKaiming);
  register_mlp(store, prefix + "/dec", net.dec, rng, dec_final);
}

namespace {

Tensor time_net_eval(Tape* tape, const ParamStore& store,
                     const std::string& prefix, const TimeEmbeddedNet& net,
                     const Tensor& x, const Tensor& embedded) {
  Tensor hx = mlp_forward(tape, store, prefix + "/embx", net.embx, x);
  Tensor ht = mlp_forward(tape, store, prefix + "/embt", net.embt, embedded);
  Tensor h = (ht.dim(0) == 1 && hx.dim(0) != 1)
                 ? dc::add_rowvec(tape, hx,
                                  dc::reshape(tape, ht, {ht.dim(1)}))
                 : dc::add(tape, hx, ht);
  return mlp_forward(tape, store, prefix + "/dec", net.dec, h);
}

}  // namespace

Tensor time_net_forward(Tape* tape, const ParamStore& store,
                        const std::string& prefix, const TimeEmbeddedNet& net,
                        const Tensor& x, double noise_level) {
  if (noise_level < 0.0 || noise_level > 1.0)
    throw DomainError("time_net_forward: noise level must be in [0, 1]");
  Tensor emb = sinusoidal_embed_rows({noise_level}, net.embed_dim);
  return time_net_eval(tape, store, prefix, net, x, emb);
}

Tensor time_net_forward_rows(Tape* tape, const ParamStore& store,
                             const std::string& prefix,
                             const TimeEmbeddedNet& net, const Tensor& x,
                             const std::vector<double>& noise_levels) {
  if (static_cast<int>(noise_levels.size()) != x.dim(0))
    throw ConfigError("time_net_forward_rows: one noise level per row");
  for (double v : noise_levels)
    if (v < 0.0 || v > 1.0)
      throw DomainError("time_net_forward_rows: noise level must be in [0, 1]");
  Tensor emb = sinusoidal_embed_rows(noise_levels, net.embed_dim);
  return time_net_eval(tape, store, prefix, net, x, emb);
}

}  // namespace hsivi::networks
