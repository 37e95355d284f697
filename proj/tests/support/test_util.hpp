#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hsivi/diffcore/param_store.hpp"
#include "hsivi/diffcore/tape.hpp"
#include "hsivi/diffcore/tensor.hpp"

namespace hsivi::testing {

using diffcore::GradMap;
using diffcore::ParamStore;
using diffcore::Tensor;

inline double rel_err(double a, double b, double floor = 1e-6) {
  return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), floor});
}

// Central finite differences of a scalar-valued function with respect to
// every component of every parameter in the store. The function must be a
// pure function of the store contents (reseed any RNG inside it).
inline GradMap finite_diff_grads(ParamStore& store,
                                 const std::function<double()>& f,
                                 double h = 1e-5) {
  GradMap out;
  for (const auto& name : store.names()) {
    Tensor base = store.get(name);
    Tensor grad = Tensor::zeros(base.shape());
    for (size_t i = 0; i < base.numel(); ++i) {
      Tensor bumped = Tensor::from(base.shape(), base.values());
      bumped.values()[i] = base.at(i) + h;
      store.set(name, bumped);
      const double up = f();
      bumped.values()[i] = base.at(i) - h;
      store.set(name, bumped);
      const double down = f();
      grad.values()[i] = (up - down) / (2.0 * h);
    }
    store.set(name, base);
    out.emplace(name, std::move(grad));
  }
  return out;
}

// Central finite differences with respect to a dense input tensor.
inline Tensor finite_diff_input(const std::function<double(const Tensor&)>& f,
                                const Tensor& x, double h = 1e-5) {
  Tensor grad = Tensor::zeros(x.shape());
  for (size_t i = 0; i < x.numel(); ++i) {
    Tensor up = Tensor::from(x.shape(), x.values());
    up.values()[i] += h;
    Tensor down = Tensor::from(x.shape(), x.values());
    down.values()[i] -= h;
    grad.values()[i] = (f(up) - f(down)) / (2.0 * h);
  }
  return grad;
}

// Largest componentwise relative error between two gradient maps. Parameters
// missing from `b` are compared against zero.
inline double max_grad_rel_err(const GradMap& a, const GradMap& b,
                               double floor = 1e-6) {
  double worst = 0.0;
  for (const auto& [name, ga] : a) {
    auto it = b.find(name);
    for (size_t i = 0; i < ga.numel(); ++i) {
      const double bv = (it == b.end()) ? 0.0 : it->second.at(i);
      worst = std::max(worst, rel_err(ga.at(i), bv, floor));
    }
  }
  for (const auto& [name, gb] : b) {
    if (!a.count(name))
      for (size_t i = 0; i < gb.numel(); ++i)
        worst = std::max(worst, rel_err(0.0, gb.at(i), floor));
  }
  return worst;
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.numel(); ++i)
    worst = std::max(worst, std::fabs(a.at(i) - b.at(i)));
  return worst;
}

inline double max_rel_diff(const Tensor& a, const Tensor& b,
                           double floor = 1e-6) {
  double worst = 0.0;
  for (size_t i = 0; i < a.numel(); ++i)
    worst = std::max(worst, rel_err(a.at(i), b.at(i), floor));
  return worst;
}

inline std::vector<double> column(const Tensor& m, int j) {
  std::vector<double> out(static_cast<size_t>(m.dim(0)));
  for (int i = 0; i < m.dim(0); ++i) out[static_cast<size_t>(i)] = m.at(i, j);
  return out;
}

inline double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

inline double var_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

}  // namespace hsivi::testing
