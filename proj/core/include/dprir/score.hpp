#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "dprir/diffusion.hpp"
#include "dprir/grid.hpp"

namespace dprir {

/// Noise predictor eps(x_t, t). Implementations are immutable and thread-safe.
class EpsilonModel {
 public:
  virtual ~EpsilonModel() = default;
  virtual ImageGrid predict(const ImageGrid& x_t, int t, const VarianceSchedule& sched) const = 0;
};

/// Exact noise predictor for a prior N(mean, diag(variance)).
///
/// The marginal of x_t is N(sqrt(abar) m, abar d + 1 - abar) per pixel and the
/// predictor is the scaled score -sqrt(1 - abar) * grad log p(x_t):
///   eps = sqrt(1 - abar) (x_t - sqrt(abar) m) / (abar d + 1 - abar).
class GaussianAnalyticModel final : public EpsilonModel {
 public:
  GaussianAnalyticModel(ImageGrid mean, std::vector<double> variance);

  const ImageGrid& mean() const noexcept { return mean_; }
  const std::vector<double>& variance() const noexcept { return variance_; }

  ImageGrid predict(const ImageGrid& x_t, int t, const VarianceSchedule& sched) const override;

 private:
  ImageGrid mean_;
  std::vector<double> variance_;
};

ImageGrid gaussian_predict(const GaussianAnalyticModel& model, const ImageGrid& x_t, int t,
                           const VarianceSchedule& sched);

/// Per-pixel mean and variance of a dataset; variances below `variance_floor`
/// are raised to it.
GaussianAnalyticModel fit_gaussian_prior(const std::vector<ImageGrid>& dataset,
                                         double variance_floor = 1e-4);

/// Uniform partition of timesteps 1..T into `n_bins` contiguous bins.
struct TimeBins {
  int T = 1;
  int n_bins = 1;

  int bin_of(int t) const noexcept {
    return static_cast<int>(static_cast<long long>(t - 1) * n_bins / T);
  }
  int first(int bin) const noexcept;  // smallest t in the bin
  int last(int bin) const noexcept;   // largest t in the bin
  double center(int bin) const noexcept { return 0.5 * (first(bin) + last(bin)); }
};

/// eps = gain_b[i] * x_t[i] + offset_b[i] for the time bin b containing t.
class AffineModel final : public EpsilonModel {
 public:
  AffineModel(int width, int height, TimeBins bins, std::vector<std::vector<double>> gain,
              std::vector<std::vector<double>> offset);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const TimeBins& bins() const noexcept { return bins_; }
  std::span<const double> gain(int bin) const { return gain_.at(static_cast<std::size_t>(bin)); }
  std::span<const double> offset(int bin) const {
    return offset_.at(static_cast<std::size_t>(bin));
  }

  ImageGrid predict(const ImageGrid& x_t, int t, const VarianceSchedule& sched) const override;

 private:
  int width_, height_;
  TimeBins bins_;
  std::vector<std::vector<double>> gain_, offset_;
};

/// Visits the `samples` synthetic training pairs of one time bin in the order
/// train_affine consumes them: x0 uniform from the dataset, t uniform within
/// the bin, eps standard normal, x_t = sqrt(abar_t) x0 + sqrt(1 - abar_t) eps.
void for_each_training_pair(const std::vector<ImageGrid>& dataset, const VarianceSchedule& sched,
                            const TimeBins& bins, int bin, int samples, std::uint64_t seed,
                            const std::function<void(const ImageGrid& x_t, const ImageGrid& eps, int t)>& visit);

/// Closed-form least-squares fit of the per-pixel affine predictor for every
/// time bin (2x2 normal equations per pixel). Pixels whose noisy input has no
/// spread fall back to gain 0 and the mean noise as offset.
AffineModel train_affine(const std::vector<ImageGrid>& dataset, const VarianceSchedule& sched,
                         int n_bins, int samples_per_bin = 10000, std::uint64_t seed = 0);

/// Convolution layer: weights in (out, in, kh, kw) order, zero "same" padding,
/// cross-correlation with the kernel anchored at (kh/2, kw/2).
struct ConvLayer {
  int kernel_h = 1, kernel_w = 1;
  int in_channels = 1, out_channels = 1;
  std::vector<float> weights;
  std::vector<float> bias;  // out_channels entries
};

/// Small convolutional network, ReLU between layers (none after the last).
/// A first layer with two input channels receives the image plus a constant
/// channel filled with t/T.
class ConvNetModel final : public EpsilonModel {
 public:
  explicit ConvNetModel(std::vector<ConvLayer> layers);

  const std::vector<ConvLayer>& layers() const noexcept { return layers_; }
  bool time_conditioned() const noexcept { return layers_.front().in_channels == 2; }

  ImageGrid predict(const ImageGrid& x_t, int t, const VarianceSchedule& sched) const override;

 private:
  std::vector<ConvLayer> layers_;
};

// Weight file: "DPRNET01", u32 layer count, then per layer
//   u32 kernel_h, u32 kernel_w, u32 in_channels, u32 out_channels,
//   f32 weights[out][in][kh][kw], f32 bias[out].
// A layer count of 0 marks an affine model instead, followed by
//   u32 width, u32 height, u32 n_bins, u32 T, then per bin
//   f32 gain[width*height], f32 offset[width*height].
inline constexpr char kNetMagic[] = "DPRNET01";

void save_conv_net(std::ostream& os, const ConvNetModel& model);
void save_affine(std::ostream& os, const AffineModel& model);
std::unique_ptr<EpsilonModel> read_weights(std::istream& is);
std::unique_ptr<EpsilonModel> load_weights(const std::filesystem::path& path);

}  // namespace dprir
