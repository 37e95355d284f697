#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "hsivi/diffcore/tape.hpp"
#include "hsivi/diffcore/tensor.hpp"

namespace hsivi::diffcore {

struct AdamState {
  Tensor m;      // first moment
  Tensor v;      // second moment
  long step = 0; // strictly increases by 1 per update
};

// Named parameters plus per-parameter Adam state. Insertion order is kept so
// serialization and iteration are deterministic.
class ParamStore {
 public:
  void add(const std::string& name, Tensor value);
  bool has(const std::string& name) const;
  const Tensor& get(const std::string& name) const;
  void set(const std::string& name, Tensor value);
  const std::vector<std::string>& names() const { return order_; }
  size_t size() const { return order_.size(); }
  size_t value_count() const;

  // Puts the parameter on the tape as a differentiable leaf; with a null tape
  // or a frozen store, returns the stored constant.
  Tensor lease(Tape* tape, const std::string& name) const;

  // Frozen stores never lease differentiable leaves (pretrained networks,
  // already-trained layers). Gradients simply do not flow into them.
  void set_trainable(bool trainable) { trainable_ = trainable; }
  bool trainable() const { return trainable_; }

  const AdamState& adam_state(const std::string& name) const;
  AdamState& adam_state(const std::string& name);

 private:
  bool trainable_ = true;
  std::vector<std::string> order_;
  std::unordered_map<std::string, Tensor> params_;
  std::unordered_map<std::string, AdamState> adam_;
};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.99;
  double eps = 1e-8;
};

// Bias-corrected Adam update applied in place. Every parameter in the store
// must have a gradient in `grads` and vice versa.
void adam_step(ParamStore& store, const GradMap& grads, double lr,
               const AdamConfig& cfg = {});

}  // namespace hsivi::diffcore
