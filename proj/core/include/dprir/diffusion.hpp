#pragma once

#include <string_view>
#include <vector>

#include "dprir/grid.hpp"

namespace dprir {

/// How the per-step sampling noise scale sigma_t is chosen.
enum class SigmaChoice {
  SqrtBeta,   // sigma_t = sqrt(beta_t)
  Posterior,  // sigma_t = sqrt((1 - abar_{t-1}) / (1 - abar_t) * beta_t)
};

SigmaChoice parse_sigma_choice(std::string_view name);
std::string_view to_string(SigmaChoice c);

/// beta/alpha/alpha-bar/sigma for timesteps 1..T, with the convention abar_0 = 1.
class VarianceSchedule {
 public:
  explicit VarianceSchedule(std::vector<double> betas, SigmaChoice sigma = SigmaChoice::SqrtBeta);

  int T() const noexcept { return static_cast<int>(beta_.size()) - 1; }
  SigmaChoice sigma_choice() const noexcept { return sigma_choice_; }

  double beta(int t) const { return beta_.at(checked(t, 1)); }
  double alpha(int t) const { return 1.0 - beta(t); }
  /// Valid for 0 <= t <= T.
  double alpha_bar(int t) const { return alpha_bar_.at(checked(t, 0)); }
  double sigma(int t) const { return sigma_.at(checked(t, 1)); }

 private:
  std::size_t checked(int t, int lo) const;

  std::vector<double> beta_;       // index 0 unused
  std::vector<double> alpha_bar_;  // index 0 = 1
  std::vector<double> sigma_;      // index 0 unused
  SigmaChoice sigma_choice_;
};

/// beta_t linearly interpolated from beta_1 to beta_T inclusive.
VarianceSchedule make_linear_schedule(int T, double beta_1, double beta_T,
                                      SigmaChoice sigma = SigmaChoice::SqrtBeta);

/// Strictly increasing timesteps tau_1 < ... < tau_S = T.
struct StepSubsequence {
  std::vector<int> tau;  // tau[j-1] is tau_j

  int size() const noexcept { return static_cast<int>(tau.size()); }
  /// tau_j for 1 <= j <= S, and tau_0 = 0.
  int at(int j) const { return j == 0 ? 0 : tau.at(static_cast<std::size_t>(j - 1)); }
};

/// tau_j = round(j * T / S).
StepSubsequence make_subsequence(int T, int S);

/// sqrt(abar_t) x0 + sqrt(1 - abar_t) eps
ImageGrid forward_sample(const ImageGrid& x0, int t, const ImageGrid& eps,
                         const VarianceSchedule& sched);

/// (x_t - sqrt(1 - abar_t) eps_hat) / sqrt(abar_t)
ImageGrid estimate_x0(const ImageGrid& x_t, const ImageGrid& eps_hat, int t,
                      const VarianceSchedule& sched);

/// Ancestral step t -> t-1:
///   (x_t - beta_t / sqrt(1 - abar_t) eps_hat) / sqrt(alpha_t) + sigma_t z.
/// z must be all zero when t = 1.
ImageGrid ddpm_step(const ImageGrid& x_t, const ImageGrid& eps_hat, int t, const ImageGrid& z,
                    const VarianceSchedule& sched);

/// sigma for a DDIM step t_from -> t_to interpolated by eta:
///   eta * sqrt((1 - abar_to) / (1 - abar_from)) * sqrt(1 - abar_from / abar_to).
double ddim_sigma(int t_from, int t_to, double eta, const VarianceSchedule& sched);

/// sqrt(abar_to) x0 + sqrt(1 - abar_to - sigma^2) eps_hat, the deterministic
/// part of a DDIM step given a clean-image estimate.
ImageGrid ddim_combine(const ImageGrid& x0, const ImageGrid& eps_hat, int t_to, double sigma,
                       const VarianceSchedule& sched);

/// DDIM step t_from -> t_to (t_to < t_from, t_to = 0 allowed):
///   ddim_combine(estimate_x0(x_from, eps_hat, t_from), eps_hat, t_to, sigma) + sigma z.
ImageGrid ddim_step(const ImageGrid& x_from, const ImageGrid& eps_hat, int t_from, int t_to,
                    double sigma, const ImageGrid& z, const VarianceSchedule& sched);

/// Image of independent standard normal draws.
template <typename Engine>
ImageGrid standard_normal_image(int width, int height, double pixel_size, Engine& rng);

}  // namespace dprir

#include <random>

namespace dprir {

template <typename Engine>
ImageGrid standard_normal_image(int width, int height, double pixel_size, Engine& rng) {
  ImageGrid img(width, height, pixel_size);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (double& v : img.values()) v = n01(rng);
  return img;
}

}  // namespace dprir
