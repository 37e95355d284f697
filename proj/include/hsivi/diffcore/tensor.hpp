#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hsivi/diffcore/rng.hpp"

namespace hsivi::diffcore {

// Dense row-major array of binary64 reals. Payloads are shared between
// copies and treated as immutable once an op has produced them; `node` ties
// the tensor to a record on the Tape that created it (-1 for constants).
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<int> shape, std::shared_ptr<std::vector<double>> data,
         int node = -1)
      : shape_(std::move(shape)), data_(std::move(data)), node_(node) {}

  static Tensor zeros(std::vector<int> shape);
  static Tensor full(std::vector<int> shape, double value);
  static Tensor scalar(double value) { return full({1}, value); }
  static Tensor from(std::vector<int> shape, std::vector<double> values);
  static Tensor randn(std::vector<int> shape, Rng& rng);

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  size_t numel() const;
  bool is_scalar() const { return numel() == 1; }

  const std::vector<double>& values() const { return *data_; }
  std::vector<double>& values() { return *data_; }
  double value() const;  // scalar accessor
  double at(size_t i) const { return (*data_)[i]; }
  double at(int r, int c) const {
    return (*data_)[static_cast<size_t>(r) * static_cast<size_t>(shape_[1]) +
                    static_cast<size_t>(c)];
  }

  bool on_tape() const { return node_ >= 0; }
  int node() const { return node_; }
  void set_node(int node) { node_ = node; }

  // Same values, no tape record; gradients do not flow through the result.
  Tensor detached() const { return Tensor(shape_, data_, -1); }

  bool all_finite() const;

  std::string shape_str() const;

 private:
  std::vector<int> shape_;
  std::shared_ptr<std::vector<double>> data_;
  int node_ = -1;
};

Tensor detach(const Tensor& x);

}  // namespace hsivi::diffcore
