#include "hsivi/diffcore/tensor.hpp"

#include <cmath>
#include <sstream>

#include "hsivi/errors.hpp"

namespace hsivi::diffcore {

namespace {
size_t product(const std::vector<int>& shape) {
  size_t n = 1;
  for (int e : shape) n *= static_cast<size_t>(e);
  return n;
}
}  // namespace

Tensor Tensor::zeros(std::vector<int> shape) {
  auto data = std::make_shared<std::vector<double>>(product(shape), 0.0);
  return Tensor(std::move(shape), std::move(data));
}

Tensor Tensor::full(std::vector<int> shape, double value) {
  auto data = std::make_shared<std::vector<double>>(product(shape), value);
  return Tensor(std::move(shape), std::move(data));
}

Tensor Tensor::from(std::vector<int> shape, std::vector<double> values) {
  if (product(shape) != values.size())
    throw ConfigError("Tensor::from: shape does not match value count");
  auto data = std::make_shared<std::vector<double>>(std::move(values));
  return Tensor(std::move(shape), std::move(data));
}

Tensor Tensor::randn(std::vector<int> shape, Rng& rng) {
  auto data = std::make_shared<std::vector<double>>(product(shape));
  for (double& v : *data) v = rng.normal();
  return Tensor(std::move(shape), std::move(data));
}

size_t Tensor::numel() const { return data_ ? data_->size() : 0; }

double Tensor::value() const {
  if (!data_ || data_->size() != 1)
    throw ContractError("Tensor::value: tensor is not scalar, shape " +
                        shape_str());
  return (*data_)[0];
}

bool Tensor::all_finite() const {
  for (double v : *data_)
    if (!std::isfinite(v)) return false;
  return true;
}

std::string Tensor::shape_str() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < shape_.size(); ++i)
    os << shape_[i] << (i + 1 < shape_.size() ? "," : "");
  os << ")";
  return os.str();
}

Tensor detach(const Tensor& x) { return x.detached(); }

}  // namespace hsivi::diffcore
