#include "dprir/simulate.hpp"

#include <cmath>
#include <random>

#include "dprir/error.hpp"

namespace dprir {

void NoiseConfig::validate() const {
  if (!(i0 > 0.0) || !std::isfinite(i0)) throw InvalidArgument("I0 must be positive");
  if (!(sigma_e2 >= 0.0) || !std::isfinite(sigma_e2))
    throw InvalidArgument("electronic noise variance must be >= 0");
}

double sample_poisson(double lambda, Rng& rng) {
  if (!(lambda >= 0.0)) throw InvalidArgument("Poisson mean must be >= 0");
  if (lambda == 0.0) return 0.0;
  if (lambda <= 30.0) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    double p = std::exp(-lambda);
    double cdf = p;
    long k = 0;
    while (u > cdf) {
      ++k;
      p *= lambda / static_cast<double>(k);
      const double next = cdf + p;
      if (next == cdf) break;  // tail below double resolution
      cdf = next;
    }
    return static_cast<double>(k);
  }
  if (lambda <= 1e6) {
    std::poisson_distribution<long long> dist(lambda);
    return static_cast<double>(dist(rng));
  }
  std::normal_distribution<double> normal(lambda, std::sqrt(lambda));
  return std::max(0.0, std::round(normal(rng)));
}

Sinogram simulate_counts(const Sinogram& y, const NoiseConfig& cfg) {
  cfg.validate();
  if (!y.all_finite()) throw InvalidArgument("sinogram contains non-finite values");
  Sinogram out = y.zeros_like();
  const double sigma_e = std::sqrt(cfg.sigma_e2);
  for (int v = 0; v < y.n_views(); ++v) {
    Rng rng = make_stream(cfg.seed, "measurement-noise", static_cast<std::uint64_t>(v));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int d = 0; d < y.n_detectors(); ++d) {
      const double lambda = cfg.i0 * std::exp(-y(v, d));
      double counts = sample_poisson(lambda, rng);
      if (sigma_e > 0.0) counts += sigma_e * normal(rng);
      out(v, d) = counts;
    }
  }
  return out;
}

Sinogram add_ct_noise(const Sinogram& y, const NoiseConfig& cfg) {
  Sinogram out = simulate_counts(y, cfg);
  for (double& c : out.values()) c = -std::log(std::max(c, kCountFloor) / cfg.i0);
  return out;
}

std::vector<int> uniform_view_indices(int n_views, int n) {
  if (n < 1 || n > n_views) throw InvalidArgument("view count must lie in [1, n_views]");
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    idx[k] = static_cast<int>(std::llround(static_cast<double>(k) * n_views / n));
    if (idx[k] >= n_views) idx[k] = n_views - 1;
  }
  return idx;
}

Sinogram downsample_views(const Sinogram& s, int n) {
  const std::vector<int> idx = uniform_view_indices(s.n_views(), n);
  std::vector<double> angles;
  std::vector<double> data;
  angles.reserve(idx.size());
  data.reserve(idx.size() * static_cast<std::size_t>(s.n_detectors()));
  for (int v : idx) {
    angles.push_back(s.angles()[v]);
    const auto row = s.view(v);
    data.insert(data.end(), row.begin(), row.end());
  }
  return Sinogram(s.n_detectors(), std::move(angles), std::move(data));
}

}  // namespace dprir
