#include "dprir/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dprir/error.hpp"

namespace dprir {

namespace {

void require_same_shape(const ImageGrid& a, const ImageGrid& b) {
  if (!a.same_shape(b)) throw InvalidArgument("image shape mismatch");
}

}  // namespace

SigmaChoice parse_sigma_choice(std::string_view name) {
  if (name == "beta" || name == "sqrt-beta") return SigmaChoice::SqrtBeta;
  if (name == "posterior") return SigmaChoice::Posterior;
  throw InvalidArgument("unknown sigma choice: " + std::string(name));
}

std::string_view to_string(SigmaChoice c) {
  return c == SigmaChoice::Posterior ? "posterior" : "beta";
}

VarianceSchedule::VarianceSchedule(std::vector<double> betas, SigmaChoice sigma)
    : sigma_choice_(sigma) {
  if (betas.empty()) throw InvalidArgument("schedule needs at least one timestep");
  const std::size_t T = betas.size();
  beta_.assign(T + 1, 0.0);
  alpha_bar_.assign(T + 1, 1.0);
  sigma_.assign(T + 1, 0.0);
  for (std::size_t t = 1; t <= T; ++t) {
    const double b = betas[t - 1];
    if (!(b > 0.0 && b < 1.0)) throw InvalidArgument("beta_t must lie in (0, 1)");
    beta_[t] = b;
    alpha_bar_[t] = alpha_bar_[t - 1] * (1.0 - b);
    sigma_[t] = sigma == SigmaChoice::Posterior
                    ? std::sqrt((1.0 - alpha_bar_[t - 1]) / (1.0 - alpha_bar_[t]) * b)
                    : std::sqrt(b);
  }
}

std::size_t VarianceSchedule::checked(int t, int lo) const {
  if (t < lo || t > T())
    throw InvalidArgument("timestep " + std::to_string(t) + " outside [" + std::to_string(lo) +
                          ", " + std::to_string(T()) + "]");
  return static_cast<std::size_t>(t);
}

VarianceSchedule make_linear_schedule(int T, double beta_1, double beta_T, SigmaChoice sigma) {
  if (T < 1) throw InvalidArgument("T must be >= 1");
  if (!(beta_1 > 0.0 && beta_1 <= beta_T && beta_T < 1.0))
    throw InvalidArgument("schedule requires 0 < beta_1 <= beta_T < 1");
  std::vector<double> b(static_cast<std::size_t>(T));
  for (int i = 0; i < T; ++i) {
    b[i] = T == 1 ? beta_1 : beta_1 + (beta_T - beta_1) * i / (T - 1);
  }
  return VarianceSchedule(std::move(b), sigma);
}

StepSubsequence make_subsequence(int T, int S) {
  if (S < 1 || S > T) throw InvalidArgument("subsequence length must lie in [1, T]");
  StepSubsequence s;
  s.tau.resize(static_cast<std::size_t>(S));
  const long long TT = T;
  for (long long j = 1; j <= S; ++j) s.tau[j - 1] = static_cast<int>((2 * j * TT + S) / (2 * S));
  return s;
}

ImageGrid forward_sample(const ImageGrid& x0, int t, const ImageGrid& eps,
                         const VarianceSchedule& sched) {
  if (t < 1) throw InvalidArgument("forward_sample requires t >= 1");
  require_same_shape(x0, eps);
  const double ab = sched.alpha_bar(t);
  return lincomb(std::sqrt(ab), x0, std::sqrt(1.0 - ab), eps);
}

ImageGrid estimate_x0(const ImageGrid& x_t, const ImageGrid& eps_hat, int t,
                      const VarianceSchedule& sched) {
  require_same_shape(x_t, eps_hat);
  const double ab = sched.alpha_bar(t);
  const double inv = 1.0 / std::sqrt(ab);
  return lincomb(inv, x_t, -std::sqrt(1.0 - ab) * inv, eps_hat);
}

ImageGrid ddpm_step(const ImageGrid& x_t, const ImageGrid& eps_hat, int t, const ImageGrid& z,
                    const VarianceSchedule& sched) {
  require_same_shape(x_t, eps_hat);
  require_same_shape(x_t, z);
  if (t < 1) throw InvalidArgument("ddpm_step requires t >= 1");
  if (t == 1 && std::any_of(z.values().begin(), z.values().end(), [](double v) { return v != 0.0; }))
    throw InvalidArgument("the final ancestral step takes no noise");
  const double inv_sqrt_alpha = 1.0 / std::sqrt(sched.alpha(t));
  const double c_eps = sched.beta(t) / std::sqrt(1.0 - sched.alpha_bar(t));
  const double s = sched.sigma(t);
  ImageGrid out = x_t.zeros_like();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = inv_sqrt_alpha * (x_t[i] - c_eps * eps_hat[i]) + s * z[i];
  return out;
}

double ddim_sigma(int t_from, int t_to, double eta, const VarianceSchedule& sched) {
  if (!(t_to < t_from)) throw InvalidArgument("DDIM steps must decrease the timestep");
  if (eta < 0.0) throw InvalidArgument("eta must be >= 0");
  if (eta == 0.0) return 0.0;
  const double ab_from = sched.alpha_bar(t_from);
  const double ab_to = sched.alpha_bar(t_to);
  return eta * std::sqrt((1.0 - ab_to) / (1.0 - ab_from) * (1.0 - ab_from / ab_to));
}

ImageGrid ddim_combine(const ImageGrid& x0, const ImageGrid& eps_hat, int t_to, double sigma,
                       const VarianceSchedule& sched) {
  require_same_shape(x0, eps_hat);
  const double ab = sched.alpha_bar(t_to);
  const double room = 1.0 - ab;
  if (sigma < 0.0 || sigma * sigma > room * (1.0 + 1e-12) + 1e-300)
    throw InvalidArgument("DDIM sigma exceeds sqrt(1 - abar_to)");
  const double dir = std::sqrt(std::max(0.0, room - sigma * sigma));
  return lincomb(std::sqrt(ab), x0, dir, eps_hat);
}

ImageGrid ddim_step(const ImageGrid& x_from, const ImageGrid& eps_hat, int t_from, int t_to,
                    double sigma, const ImageGrid& z, const VarianceSchedule& sched) {
  if (!(t_to < t_from) || t_to < 0) throw InvalidArgument("DDIM steps must decrease the timestep");
  require_same_shape(x_from, z);
  ImageGrid out = ddim_combine(estimate_x0(x_from, eps_hat, t_from, sched), eps_hat, t_to, sigma, sched);
  if (sigma != 0.0) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += sigma * z[i];
  }
  return out;
}

}  // namespace dprir
