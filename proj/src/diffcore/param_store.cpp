#include "hsivi/diffcore/param_store.hpp"

#include <cmath>

#include "hsivi/errors.hpp"

namespace hsivi::diffcore {

void ParamStore::add(const std::string& name, Tensor value) {
  if (params_.count(name))
    throw ContractError("ParamStore::add: duplicate parameter '" + name + "'");
  order_.push_back(name);
  AdamState state;
  state.m = Tensor::zeros(value.shape());
  state.v = Tensor::zeros(value.shape());
  adam_.emplace(name, std::move(state));
  // Deep copy so the store never aliases caller-held payloads.
  params_.emplace(name, Tensor::from(value.shape(), value.values()));
}

bool ParamStore::has(const std::string& name) const {
  return params_.count(name) > 0;
}

const Tensor& ParamStore::get(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end())
    throw ContractError("ParamStore::get: unknown parameter '" + name + "'");
  return it->second;
}

void ParamStore::set(const std::string& name, Tensor value) {
  auto it = params_.find(name);
  if (it == params_.end())
    throw ContractError("ParamStore::set: unknown parameter '" + name + "'");
  if (value.shape() != it->second.shape())
    throw ContractError("ParamStore::set: shape mismatch for '" + name + "'");
  it->second = Tensor::from(value.shape(), value.values());
}

size_t ParamStore::value_count() const {
  size_t n = 0;
  for (const auto& name : order_) n += get(name).numel();
  return n;
}

Tensor ParamStore::lease(Tape* tape, const std::string& name) const {
  const Tensor& value = get(name);
  return (tape && trainable_) ? tape->leaf(name, value) : value;
}

const AdamState& ParamStore::adam_state(const std::string& name) const {
  auto it = adam_.find(name);
  if (it == adam_.end())
    throw ContractError("ParamStore: no Adam state for '" + name + "'");
  return it->second;
}

AdamState& ParamStore::adam_state(const std::string& name) {
  auto it = adam_.find(name);
  if (it == adam_.end())
    throw ContractError("ParamStore: no Adam state for '" + name + "'");
  return it->second;
}

void adam_step(ParamStore& store, const GradMap& grads, double lr,
               const AdamConfig& cfg) {
  for (const auto& [name, g] : grads)
    if (!store.has(name))
      throw ContractError("adam_step: gradient for unknown parameter '" +
                          name + "'");
  for (const auto& name : store.names()) {
    auto it = grads.find(name);
    if (it == grads.end())
      throw ContractError("adam_step: missing gradient for '" + name + "'");
    const Tensor& g = it->second;
    AdamState& st = store.adam_state(name);
    Tensor value = store.get(name);
    if (g.shape() != value.shape())
      throw ContractError("adam_step: gradient shape mismatch for '" + name +
                          "'");
    st.step += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.step));
    auto& m = st.m.values();
    auto& v = st.v.values();
    auto& p = value.values();
    const auto& gv = g.values();
    for (size_t i = 0; i < p.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * gv[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * gv[i] * gv[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      p[i] -= lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
}

}  // namespace hsivi::diffcore
