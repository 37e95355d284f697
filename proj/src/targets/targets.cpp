#include "hsivi/targets/targets.hpp"

#include <cmath>

#include "hsivi/errors.hpp"

namespace hsivi::targets {

namespace dc = hsivi::diffcore;

// ---------------------------------------------------------------------------
// Gaussian mixture
// ---------------------------------------------------------------------------

void GmmTarget::validate() const {
  if (means.rank() != 2) throw ConfigError("GmmTarget: means must be (K, d)");
  if (static_cast<int>(weights.size()) != components())
    throw ConfigError("GmmTarget: one weight per component");
  if (variance <= 0.0) throw ConfigError("GmmTarget: variance must be > 0");
  double total = 0.0;
  for (double w : weights) total += w;
  if (std::fabs(total - 1.0) > 1e-12)
    throw ConfigError("GmmTarget: weights must sum to 1");
}

GmmTarget GmmTarget::ring8() {
  GmmTarget g;
  std::vector<double> m;
  for (int i = 1; i <= 8; ++i) {
    const double angle = static_cast<double>(i) * M_PI / 4.0;
    m.push_back(10.0 * std::cos(angle));
    m.push_back(10.0 * std::sin(angle));
  }
  g.means = Tensor::from({8, 2}, std::move(m));
  g.variance = 1.0;
  g.weights.assign(8, 0.125);
  g.validate();
  return g;
}

namespace {

// Per-component log densities as B-vectors, for a mixture with the given
// means/variance. Shared by logpdf and score.
std::vector<Tensor> component_logps(Tape* tape, const Tensor& means,
                                    double variance,
                                    const std::vector<double>& weights,
                                    const Tensor& x) {
  const int d = x.dim(1);
  const double log_norm =
      -0.5 * d * std::log(2.0 * M_PI * variance);
  std::vector<Tensor> out;
  for (int i = 0; i < means.dim(0); ++i) {
    Tensor neg_mu = Tensor::zeros({d});
    for (int j = 0; j < d; ++j)
      neg_mu.values()[static_cast<size_t>(j)] = -means.at(i, j);
    Tensor diff = dc::add_rowvec(tape, x, neg_mu);  // x - mu_i
    Tensor sq = dc::row_sum(tape, dc::square(tape, diff));
    Tensor logp = dc::add_const(
        tape, dc::scale(tape, sq, -0.5 / variance),
        log_norm + std::log(weights[static_cast<size_t>(i)]));
    out.push_back(std::move(logp));
  }
  return out;
}

Tensor mixture_logpdf(Tape* tape, const Tensor& means, double variance,
                      const std::vector<double>& weights, const Tensor& x) {
  auto logps = component_logps(tape, means, variance, weights, x);
  Tensor lse = logps[0];
  for (size_t i = 1; i < logps.size(); ++i)
    lse = dc::logaddexp(tape, lse, logps[i]);
  return lse;
}

Tensor mixture_score(Tape* tape, const Tensor& means, double variance,
                     const std::vector<double>& weights, const Tensor& x) {
  const int d = x.dim(1);
  auto logps = component_logps(tape, means, variance, weights, x);
  Tensor lse = logps[0];
  for (size_t i = 1; i < logps.size(); ++i)
    lse = dc::logaddexp(tape, lse, logps[i]);

  Tensor acc;
  for (int i = 0; i < means.dim(0); ++i) {
    // Responsibility r_i = exp(logp_i - lse), one per row.
    Tensor r = dc::exp(tape, dc::sub(tape, logps[static_cast<size_t>(i)], lse));
    Tensor neg_mu = Tensor::zeros({d});
    for (int j = 0; j < d; ++j)
      neg_mu.values()[static_cast<size_t>(j)] = -means.at(i, j);
    Tensor mu_minus_x =
        dc::neg(tape, dc::add_rowvec(tape, x, neg_mu));  // mu_i - x
    Tensor contrib = dc::mul_colvec(tape, mu_minus_x, r);
    acc = (i == 0) ? contrib : dc::add(tape, acc, contrib);
  }
  return dc::scale(tape, acc, 1.0 / variance);
}

}  // namespace

Tensor gmm_logpdf(Tape* tape, const GmmTarget& g, const Tensor& x) {
  if (x.rank() != 2 || x.dim(1) != g.dim())
    throw ConfigError("gmm_logpdf: x must be (B, d)");
  return mixture_logpdf(tape, g.means, g.variance, g.weights, x);
}

Tensor gmm_score(Tape* tape, const GmmTarget& g, const Tensor& x) {
  if (x.rank() != 2 || x.dim(1) != g.dim())
    throw ConfigError("gmm_score: x must be (B, d)");
  return mixture_score(tape, g.means, g.variance, g.weights, x);
}

Tensor gmm_diffused_score(Tape* tape, const GmmTarget& g, const Tensor& x,
                          double alpha) {
  if (alpha <= 0.0 || alpha > 1.0)
    throw DomainError("gmm_diffused_score: alpha must be in (0, 1]");
  const double root = std::sqrt(alpha);
  Tensor scaled_means = Tensor::zeros(g.means.shape());
  for (size_t i = 0; i < g.means.numel(); ++i)
    scaled_means.values()[i] = root * g.means.at(i);
  const double diffused_var = alpha * g.variance + 1.0 - alpha;
  return mixture_score(tape, scaled_means, diffused_var, g.weights, x);
}

Tensor gmm_sample(const GmmTarget& g, int n, Rng& rng) {
  const int d = g.dim();
  const double sd = std::sqrt(g.variance);
  Tensor out = Tensor::zeros({n, d});
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    double acc = 0.0;
    int pick = g.components() - 1;
    for (int k = 0; k < g.components(); ++k) {
      acc += g.weights[static_cast<size_t>(k)];
      if (u < acc) {
        pick = k;
        break;
      }
    }
    for (int j = 0; j < d; ++j)
      out.values()[static_cast<size_t>(i) * d + j] =
          g.means.at(pick, j) + sd * rng.normal();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conditioned diffusion
// ---------------------------------------------------------------------------

int CondDiffusionTarget::dim() const {
  return static_cast<int>(std::lround(horizon / dt));
}

void CondDiffusionTarget::validate() const {
  if (dt <= 0.0 || horizon <= 0.0 || obs_noise <= 0.0)
    throw ConfigError("CondDiffusionTarget: dt, horizon, obs_noise must be > 0");
  if (y.rank() != 1 || y.dim(0) != dim())
    throw ConfigError("CondDiffusionTarget: observation dim must equal " +
                      std::to_string(dim()));
}

CondDiffusionTarget CondDiffusionTarget::with_observation(uint64_t obs_seed) {
  CondDiffusionTarget t;
  Rng rng(obs_seed);
  Tensor path = simulate_prior_path(t, rng);
  Tensor y = Tensor::zeros({t.dim()});
  for (size_t i = 0; i < y.numel(); ++i)
    y.values()[i] = path.at(i) + t.obs_noise * rng.normal();
  t.y = std::move(y);
  t.validate();
  return t;
}

namespace {

// States shifted one step toward the boundary: prev_j = x_{j-1}, prev_0 = 0.
Tensor shift_prev(Tape* tape, const Tensor& x) {
  const int d = x.dim(1);
  return dc::pad_cols(tape, dc::slice_cols(tape, x, 0, d - 1), 1, 0);
}

// Transition residuals r_j = x_j - prev_j - dt * m(prev_j) with the cubic
// drift m(v) = c v (1 - v^2).
Tensor residuals(Tape* tape, const CondDiffusionTarget& t, const Tensor& x) {
  Tensor prev = shift_prev(tape, x);
  Tensor cube = dc::mul(tape, dc::square(tape, prev), prev);
  Tensor drift = dc::scale(tape, dc::sub(tape, prev, cube), t.drift_coef);
  return dc::sub(tape, dc::sub(tape, x, prev), dc::scale(tape, drift, t.dt));
}

}  // namespace

Tensor conddiff_log_unnorm(Tape* tape, const CondDiffusionTarget& t,
                           const Tensor& x) {
  t.validate();
  if (x.rank() != 2 || x.dim(1) != t.dim())
    throw ConfigError("conddiff_log_unnorm: x must be (B, " +
                      std::to_string(t.dim()) + ")");
  Tensor r = residuals(tape, t, x);
  Tensor log_prior =
      dc::scale(tape, dc::row_sum(tape, dc::square(tape, r)), -0.5 / t.dt);
  Tensor neg_y = Tensor::zeros({t.dim()});
  for (size_t i = 0; i < neg_y.numel(); ++i) neg_y.values()[i] = -t.y.at(i);
  Tensor resid = dc::add_rowvec(tape, x, neg_y);  // x - y
  Tensor log_lik =
      dc::scale(tape, dc::row_sum(tape, dc::square(tape, resid)),
                -0.5 / (t.obs_noise * t.obs_noise));
  return dc::add(tape, log_prior, log_lik);
}

Tensor conddiff_score(Tape* tape, const CondDiffusionTarget& t,
                      const Tensor& x) {
  t.validate();
  if (x.rank() != 2 || x.dim(1) != t.dim())
    throw ConfigError("conddiff_score: x must be (B, " +
                      std::to_string(t.dim()) + ")");
  const int d = t.dim();
  Tensor r = residuals(tape, t, x);
  // d log p_prior / d x_j = [r_{j+1} (1 + dt m'(x_j)) - r_j] / dt with
  // m'(v) = c (1 - 3 v^2) and r_{d} = 0.
  Tensor r_next = dc::pad_cols(tape, dc::slice_cols(tape, r, 1, d - 1), 0, 1);
  Tensor factor = dc::add_const(
      tape, dc::scale(tape, dc::square(tape, x), -3.0 * t.drift_coef * t.dt),
      1.0 + t.drift_coef * t.dt);
  Tensor prior_score = dc::scale(
      tape, dc::sub(tape, dc::mul(tape, r_next, factor), r), 1.0 / t.dt);
  Tensor neg_y = Tensor::zeros({d});
  for (size_t i = 0; i < neg_y.numel(); ++i) neg_y.values()[i] = -t.y.at(i);
  Tensor lik_score =
      dc::scale(tape, dc::add_rowvec(tape, x, neg_y),
                -1.0 / (t.obs_noise * t.obs_noise));
  return dc::add(tape, prior_score, lik_score);
}

Tensor simulate_prior_path(const CondDiffusionTarget& t, Rng& rng) {
  const int d = t.dim();
  const double root_dt = std::sqrt(t.dt);
  Tensor path = Tensor::zeros({d});
  double x = 0.0;  // fixed boundary state
  for (int i = 0; i < d; ++i) {
    x += t.dt * t.drift_coef * x * (1.0 - x * x) + root_dt * rng.normal();
    path.values()[static_cast<size_t>(i)] = x;
  }
  return path;
}

// ---------------------------------------------------------------------------
// Toy 2-d datasets
// ---------------------------------------------------------------------------

Toy2dDataset Toy2dDataset::parse(const std::string& name) {
  if (name == "checkerboard") return {Toy2dKind::kCheckerboard};
  if (name == "circles") return {Toy2dKind::kCircles};
  if (name == "moons") return {Toy2dKind::kMoons};
  if (name == "swissroll") return {Toy2dKind::kSwissroll};
  throw ConfigError("unknown toy2d dataset '" + name + "'");
}

std::string Toy2dDataset::name() const {
  switch (kind) {
    case Toy2dKind::kCheckerboard: return "checkerboard";
    case Toy2dKind::kCircles: return "circles";
    case Toy2dKind::kMoons: return "moons";
    case Toy2dKind::kSwissroll: return "swissroll";
  }
  return "?";
}

bool checkerboard_allowed(double x, double y) {
  if (x < -4.0 || x >= 4.0 || y < -4.0 || y >= 4.0) return false;
  const int i = static_cast<int>(std::floor((x + 4.0) / 2.0));
  const int j = static_cast<int>(std::floor((y + 4.0) / 2.0));
  return (i + j) % 2 == 0;
}

namespace {

double clip_box(double v) { return std::min(4.0, std::max(-4.0, v)); }

}  // namespace

Tensor toy2d_sample(const Toy2dDataset& d, int n, Rng& rng) {
  if (n < 1) throw ConfigError("toy2d_sample: n must be >= 1");
  Tensor out = Tensor::zeros({n, 2});
  for (int i = 0; i < n; ++i) {
    double x = 0.0, y = 0.0;
    switch (d.kind) {
      case Toy2dKind::kCheckerboard: {
        // 4x4 alternating cells of size 2 on [-4, 4]^2; 8 allowed cells.
        const int cell = static_cast<int>(rng.below(8));
        const int row = cell / 2;
        const int col_in_row = 2 * (cell % 2) + (row % 2 == 0 ? 0 : 1);
        x = -4.0 + 2.0 * col_in_row + 2.0 * rng.uniform();
        y = -4.0 + 2.0 * row + 2.0 * rng.uniform();
        break;
      }
      case Toy2dKind::kCircles: {
        // Two concentric circles, inner factor 0.5, scaled by 3.
        const double r = (i % 2 == 0) ? 1.0 : 0.5;
        const double a = 2.0 * M_PI * rng.uniform();
        x = 3.0 * (r * std::cos(a) + 0.08 * rng.normal());
        y = 3.0 * (r * std::sin(a) + 0.08 * rng.normal());
        break;
      }
      case Toy2dKind::kMoons: {
        // Interleaved half circles, analytically centered, scaled by 2.
        const double a = M_PI * rng.uniform();
        double px, py;
        if (i % 2 == 0) {
          px = std::cos(a);
          py = std::sin(a);
        } else {
          px = 1.0 - std::cos(a);
          py = 1.0 - std::sin(a) - 0.5;
        }
        x = 2.0 * (px - 0.5 + 0.08 * rng.normal());
        y = 2.0 * (py - 0.25 + 0.08 * rng.normal());
        break;
      }
      case Toy2dKind::kSwissroll: {
        // 1.5 turns of the spiral, analytically centered, scaled by 1/5.
        const double t = 1.5 * M_PI * (1.0 + 2.0 * rng.uniform());
        const double cx = 2.0;  // E[t cos t] over the turn range
        const double cy = 2.0 / (3.0 * M_PI);
        x = (t * std::cos(t) + 1.0 * rng.normal() - cx) / 5.0;
        y = (t * std::sin(t) + 1.0 * rng.normal() - cy) / 5.0;
        break;
      }
    }
    out.values()[static_cast<size_t>(i) * 2] = clip_box(x);
    out.values()[static_cast<size_t>(i) * 2 + 1] = clip_box(y);
  }
  return out;
}

}  // namespace hsivi::targets
