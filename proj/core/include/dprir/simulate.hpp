#pragma once

#include <cstdint>
#include <vector>

#include "dprir/grid.hpp"
#include "dprir/random.hpp"

namespace dprir {

struct NoiseConfig {
  double i0 = 1e6;        // incident photons per ray
  double sigma_e2 = 10.0; // electronic noise variance, counts^2
  std::uint64_t seed = 0;

  void validate() const;
};

/// Counts below this are clamped before the log transform.
inline constexpr double kCountFloor = 0.5;

/// Poisson draw: inversion for lambda <= 30, rejection (std) up to 1e6,
/// rounded normal approximation above.
double sample_poisson(double lambda, Rng& rng);

/// Noisy detector counts I = Poisson(I0 exp(-y)) + N(0, sigma_e2). View v
/// draws from the "measurement-noise" sub-stream with run id v.
Sinogram simulate_counts(const Sinogram& y, const NoiseConfig& cfg);

/// -ln(max(I, floor) / I0) applied to simulate_counts.
Sinogram add_ct_noise(const Sinogram& y, const NoiseConfig& cfg);

/// Indices round(k * n_views / n) for k = 0..n-1.
std::vector<int> uniform_view_indices(int n_views, int n);

Sinogram downsample_views(const Sinogram& s, int n);

}  // namespace dprir
