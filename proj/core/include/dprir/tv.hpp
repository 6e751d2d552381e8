#pragma once

#include "dprir/grid.hpp"

namespace dprir {

struct TvConfig {
  double weight_rel = 0.1;  // lambda_tv = weight_rel * std(input)
  int iters = 50;
};

/// Isotropic total variation with forward differences and Neumann boundary.
double tv_value(const ImageGrid& img);

/// Approximate argmin_u 0.5*||u - v||^2 + weight * TV(u) by the Chambolle-Pock
/// primal-dual iteration (sigma = tau = 1/sqrt(8), theta = 1), starting from
/// u = v and a zero dual field.
ImageGrid tv_denoise(const ImageGrid& v, double weight, int n_iters);

/// tv_denoise with weight = cfg.weight_rel * stddev(v).
ImageGrid tv_denoise_relative(const ImageGrid& v, const TvConfig& cfg);

}  // namespace dprir
