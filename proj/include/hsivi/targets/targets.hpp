#pragma once

#include <cstdint>
#include <vector>

#include "hsivi/diffcore/rng.hpp"
#include "hsivi/diffcore/tape.hpp"
#include "hsivi/diffcore/tensor.hpp"

namespace hsivi::targets {

using diffcore::Rng;
using diffcore::Tape;
using diffcore::Tensor;

// Gaussian mixture with shared isotropic variance.
struct GmmTarget {
  Tensor means;                 // (K, d)
  double variance = 1.0;        // sigma^2
  std::vector<double> weights;  // sums to 1

  int dim() const { return means.dim(1); }
  int components() const { return means.dim(0); }
  void validate() const;

  // Eight equal-weight modes on a radius-10 ring, sigma = 1.
  static GmmTarget ring8();
};

// Exact mixture log-density per row, computed with pairwise log-add-exp.
Tensor gmm_logpdf(Tape* tape, const GmmTarget& g, const Tensor& x);
// Mixture score per row: sum_i r_i(x) (mu_i - x) / sigma^2.
Tensor gmm_score(Tape* tape, const GmmTarget& g, const Tensor& x);
// Score of the VP-diffused mixture: means scaled by sqrt(alpha), variance
// alpha sigma^2 + 1 - alpha. alpha must lie in (0, 1].
Tensor gmm_diffused_score(Tape* tape, const GmmTarget& g, const Tensor& x,
                          double alpha);
// Exact draws, used as the reference sampler in evaluations.
Tensor gmm_sample(const GmmTarget& g, int n, Rng& rng);

// Posterior of a discretized scalar SDE path observed under Gaussian noise.
// Latents are the 300 post-boundary states; x at time 0 is fixed to 0.
struct CondDiffusionTarget {
  double dt = 0.01;
  double horizon = 3.0;
  double drift_coef = 10.0;
  double obs_noise = 0.1;
  Tensor y;  // observation, length dim()

  int dim() const;
  void validate() const;

  // Simulates a prior path with the given seed and observes it under noise;
  // the observation seed is independent of any run seed so every method sees
  // the same inference problem.
  static CondDiffusionTarget with_observation(uint64_t obs_seed);
};

// log p_prior(x) + log p(y|x) up to an additive constant, one value per row.
Tensor conddiff_log_unnorm(Tape* tape, const CondDiffusionTarget& t,
                           const Tensor& x);
// Exact gradient of the above.
Tensor conddiff_score(Tape* tape, const CondDiffusionTarget& t,
                      const Tensor& x);
// Euler-Maruyama forward simulation of the prior SDE; returns a length-dim
// path.
Tensor simulate_prior_path(const CondDiffusionTarget& t, Rng& rng);

enum class Toy2dKind { kCheckerboard, kCircles, kMoons, kSwissroll };

struct Toy2dDataset {
  Toy2dKind kind = Toy2dKind::kCheckerboard;

  static Toy2dDataset parse(const std::string& name);
  std::string name() const;
};

// n x 2 samples, centered and scaled into the [-4, 4]^2 box.
Tensor toy2d_sample(const Toy2dDataset& d, int n, Rng& rng);

// Membership test for the checkerboard's allowed cells.
bool checkerboard_allowed(double x, double y);

}  // namespace hsivi::targets
