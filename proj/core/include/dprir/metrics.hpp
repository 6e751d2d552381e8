#pragma once

#include "dprir/grid.hpp"

namespace dprir {

/// max(ref); throws if it is not positive.
double default_range(const ImageGrid& ref);

double mse(const ImageGrid& x, const ImageGrid& ref);

/// Root mean square error of (x - ref) / range. range <= 0 selects max(ref).
double rmse(const ImageGrid& x, const ImageGrid& ref, double range = 0.0);

/// 10 log10(range^2 / MSE); +inf when the images are identical.
double psnr(const ImageGrid& x, const ImageGrid& ref, double range);

/// Mean SSIM over all full 11x11 windows (Gaussian weights, sigma 1.5,
/// K1 0.01, K2 0.03). Images must be at least 11x11.
double ssim(const ImageGrid& x, const ImageGrid& ref, double range);

inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

}  // namespace dprir
