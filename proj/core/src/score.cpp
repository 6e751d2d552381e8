#include "dprir/score.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "dprir/error.hpp"
#include "dprir/image_io.hpp"
#include "dprir/random.hpp"

namespace dprir {

GaussianAnalyticModel::GaussianAnalyticModel(ImageGrid mean, std::vector<double> variance)
    : mean_(std::move(mean)), variance_(std::move(variance)) {
  if (variance_.size() != mean_.size()) throw InvalidArgument("prior variance length mismatch");
  for (double d : variance_) {
    if (!(d > 0.0) || !std::isfinite(d)) throw InvalidArgument("prior variances must be positive");
  }
}

ImageGrid GaussianAnalyticModel::predict(const ImageGrid& x_t, int t,
                                         const VarianceSchedule& sched) const {
  if (!x_t.same_shape(mean_)) throw InvalidArgument("model/image shape mismatch");
  const double ab = sched.alpha_bar(t);
  const double sqrt_ab = std::sqrt(ab);
  const double noise = 1.0 - ab;
  const double scale = std::sqrt(noise);
  ImageGrid eps = x_t.zeros_like();
  for (std::size_t i = 0; i < eps.size(); ++i)
    eps[i] = scale * (x_t[i] - sqrt_ab * mean_[i]) / (ab * variance_[i] + noise);
  return eps;
}

ImageGrid gaussian_predict(const GaussianAnalyticModel& model, const ImageGrid& x_t, int t,
                           const VarianceSchedule& sched) {
  return model.predict(x_t, t, sched);
}

GaussianAnalyticModel fit_gaussian_prior(const std::vector<ImageGrid>& dataset,
                                         double variance_floor) {
  if (dataset.empty()) throw InvalidArgument("dataset is empty");
  if (!(variance_floor > 0.0)) throw InvalidArgument("variance floor must be positive");
  const ImageGrid& first = dataset.front();
  ImageGrid m = first.zeros_like();
  for (const ImageGrid& img : dataset) m += img;
  m *= 1.0 / static_cast<double>(dataset.size());
  std::vector<double> var(m.size(), 0.0);
  for (const ImageGrid& img : dataset) {
    for (std::size_t i = 0; i < m.size(); ++i) var[i] += (img[i] - m[i]) * (img[i] - m[i]);
  }
  for (double& v : var) v = std::max(v / static_cast<double>(dataset.size()), variance_floor);
  return GaussianAnalyticModel(std::move(m), std::move(var));
}

int TimeBins::first(int bin) const noexcept {
  const long long num = static_cast<long long>(bin) * T;
  return static_cast<int>((num + n_bins - 1) / n_bins) + 1;
}

int TimeBins::last(int bin) const noexcept { return first(bin + 1) - 1; }

AffineModel::AffineModel(int width, int height, TimeBins bins,
                         std::vector<std::vector<double>> gain,
                         std::vector<std::vector<double>> offset)
    : width_(width), height_(height), bins_(bins), gain_(std::move(gain)), offset_(std::move(offset)) {
  if (width < 1 || height < 1) throw InvalidArgument("affine model needs a positive size");
  if (bins_.n_bins < 1 || bins_.T < bins_.n_bins) throw InvalidArgument("need 1 <= n_bins <= T");
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (gain_.size() != static_cast<std::size_t>(bins_.n_bins) || offset_.size() != gain_.size())
    throw InvalidArgument("affine model bin count mismatch");
  for (std::size_t b = 0; b < gain_.size(); ++b) {
    if (gain_[b].size() != n || offset_[b].size() != n)
      throw InvalidArgument("affine model parameter length mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(gain_[b][i]) || !std::isfinite(offset_[b][i]))
        throw InvalidArgument("affine model parameters must be finite");
    }
  }
}

ImageGrid AffineModel::predict(const ImageGrid& x_t, int t, const VarianceSchedule& sched) const {
  if (x_t.width() != width_ || x_t.height() != height_)
    throw InvalidArgument("model/image shape mismatch");
  if (sched.T() != bins_.T) throw InvalidArgument("affine model was trained for a different T");
  if (t < 1 || t > bins_.T) throw InvalidArgument("timestep out of range");
  const auto& g = gain_[static_cast<std::size_t>(bins_.bin_of(t))];
  const auto& o = offset_[static_cast<std::size_t>(bins_.bin_of(t))];
  ImageGrid eps = x_t.zeros_like();
  for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = g[i] * x_t[i] + o[i];
  return eps;
}

void for_each_training_pair(
    const std::vector<ImageGrid>& dataset, const VarianceSchedule& sched, const TimeBins& bins,
    int bin, int samples, std::uint64_t seed,
    const std::function<void(const ImageGrid&, const ImageGrid&, int)>& visit) {
  if (dataset.empty()) throw InvalidArgument("dataset is empty");
  if (bin < 0 || bin >= bins.n_bins) throw InvalidArgument("bin index out of range");
  Rng rng = make_stream(seed, "affine-training", static_cast<std::uint64_t>(bin));
  std::uniform_int_distribution<std::size_t> pick(0, dataset.size() - 1);
  std::uniform_int_distribution<int> step(bins.first(bin), bins.last(bin));
  const ImageGrid& shape = dataset.front();
  for (int k = 0; k < samples; ++k) {
    const ImageGrid& x0 = dataset[pick(rng)];
    const int t = step(rng);
    const ImageGrid eps = standard_normal_image(shape.width(), shape.height(), shape.pixel_size(), rng);
    visit(forward_sample(x0, t, eps, sched), eps, t);
  }
}

AffineModel train_affine(const std::vector<ImageGrid>& dataset, const VarianceSchedule& sched,
                         int n_bins, int samples_per_bin, std::uint64_t seed) {
  if (dataset.empty()) throw InvalidArgument("dataset is empty");
  if (n_bins < 1 || n_bins > sched.T()) throw InvalidArgument("need 1 <= n_bins <= T");
  if (samples_per_bin < 1) throw InvalidArgument("need at least one sample per bin");
  const ImageGrid& shape = dataset.front();
  for (const ImageGrid& img : dataset) {
    if (!img.same_shape(shape)) throw InvalidArgument("dataset images differ in shape");
  }
  const std::size_t n = shape.size();
  const TimeBins bins{sched.T(), n_bins};

  std::vector<std::vector<double>> gain(static_cast<std::size_t>(n_bins));
  std::vector<std::vector<double>> offset(static_cast<std::size_t>(n_bins));
  for (int b = 0; b < n_bins; ++b) {
    std::vector<double> sx(n, 0.0), sxx(n, 0.0), se(n, 0.0), sxe(n, 0.0);
    for_each_training_pair(dataset, sched, bins, b, samples_per_bin, seed,
                           [&](const ImageGrid& x, const ImageGrid& e, int) {
                             for (std::size_t i = 0; i < n; ++i) {
                               sx[i] += x[i];
                               sxx[i] += x[i] * x[i];
                               se[i] += e[i];
                               sxe[i] += x[i] * e[i];
                             }
                           });
    const double m = samples_per_bin;
    auto& g = gain[b];
    auto& o = offset[b];
    g.assign(n, 0.0);
    o.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double mx = sx[i] / m;
      const double me = se[i] / m;
      const double var = sxx[i] / m - mx * mx;
      const double cov = sxe[i] / m - mx * me;
      if (var > 1e-14 * (1.0 + mx * mx)) {
        g[i] = cov / var;
        o[i] = me - g[i] * mx;
      } else {
        o[i] = me;
      }
    }
  }
  return AffineModel(shape.width(), shape.height(), bins, std::move(gain), std::move(offset));
}

ConvNetModel::ConvNetModel(std::vector<ConvLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw FormatError("network has no layers");
  if (layers_.front().in_channels != 1 && layers_.front().in_channels != 2)
    throw FormatError("first layer must take 1 (image) or 2 (image, t/T) channels");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const ConvLayer& L = layers_[l];
    if (L.kernel_h < 1 || L.kernel_w < 1 || L.in_channels < 1 || L.out_channels < 1)
      throw FormatError("layer " + std::to_string(l) + " has a zero dimension");
    if (l > 0 && L.in_channels != layers_[l - 1].out_channels)
      throw FormatError("layer " + std::to_string(l) + " input channels do not match");
    const std::size_t expect = static_cast<std::size_t>(L.out_channels) * L.in_channels *
                               L.kernel_h * L.kernel_w;
    if (L.weights.size() != expect || L.bias.size() != static_cast<std::size_t>(L.out_channels))
      throw FormatError("layer " + std::to_string(l) + " parameter count mismatch");
  }
  if (layers_.back().out_channels != 1) throw FormatError("last layer must have one output channel");
}

ImageGrid ConvNetModel::predict(const ImageGrid& x_t, int t, const VarianceSchedule& sched) const {
  const int w = x_t.width();
  const int h = x_t.height();
  const std::size_t n = x_t.size();
  std::vector<std::vector<double>> act;
  act.emplace_back(x_t.values().begin(), x_t.values().end());
  if (time_conditioned()) act.emplace_back(n, static_cast<double>(t) / sched.T());

  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const ConvLayer& L = layers_[l];
    const int ah = L.kernel_h / 2;
    const int aw = L.kernel_w / 2;
    std::vector<std::vector<double>> next(static_cast<std::size_t>(L.out_channels),
                                          std::vector<double>(n, 0.0));
    for (int oc = 0; oc < L.out_channels; ++oc) {
      auto& out = next[oc];
      for (int ic = 0; ic < L.in_channels; ++ic) {
        const auto& in = act[ic];
        for (int ky = 0; ky < L.kernel_h; ++ky) {
          for (int kx = 0; kx < L.kernel_w; ++kx) {
            const double wgt =
                L.weights[((static_cast<std::size_t>(oc) * L.in_channels + ic) * L.kernel_h + ky) *
                              L.kernel_w + kx];
            if (wgt == 0.0) continue;
            const int dy = ky - ah;
            const int dx = kx - aw;
            for (int r = std::max(0, -dy); r < std::min(h, h - dy); ++r) {
              const std::size_t orow = static_cast<std::size_t>(r) * w;
              const std::size_t irow = static_cast<std::size_t>(r + dy) * w;
              for (int c = std::max(0, -dx); c < std::min(w, w - dx); ++c)
                out[orow + c] += wgt * in[irow + c + dx];
            }
          }
        }
      }
      const double b = L.bias[oc];
      const bool relu = l + 1 < layers_.size();
      for (double& v : out) {
        v += b;
        if (relu && v < 0.0) v = 0.0;
      }
    }
    act = std::move(next);
  }
  return ImageGrid(w, h, x_t.pixel_size(), std::move(act.front()));
}

void save_conv_net(std::ostream& os, const ConvNetModel& model) {
  os.write(kNetMagic, 8);
  le::put_u32(os, static_cast<std::uint32_t>(model.layers().size()));
  for (const ConvLayer& L : model.layers()) {
    le::put_u32(os, L.kernel_h);
    le::put_u32(os, L.kernel_w);
    le::put_u32(os, L.in_channels);
    le::put_u32(os, L.out_channels);
    for (float v : L.weights) le::put_f32(os, v);
    for (float v : L.bias) le::put_f32(os, v);
  }
}

void save_affine(std::ostream& os, const AffineModel& model) {
  os.write(kNetMagic, 8);
  le::put_u32(os, 0);
  le::put_u32(os, model.width());
  le::put_u32(os, model.height());
  le::put_u32(os, model.bins().n_bins);
  le::put_u32(os, model.bins().T);
  for (int b = 0; b < model.bins().n_bins; ++b) {
    for (double v : model.gain(b)) le::put_f32(os, static_cast<float>(v));
    for (double v : model.offset(b)) le::put_f32(os, static_cast<float>(v));
  }
}

std::unique_ptr<EpsilonModel> read_weights(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::string(magic, 8) != std::string(kNetMagic, 8)) throw FormatError("bad weight-file magic");
  constexpr std::uint32_t kMaxDim = 1u << 16;
  const std::uint32_t count = le::get_u32(is);
  if (count == 0) {
    const std::uint32_t w = le::get_u32(is), h = le::get_u32(is);
    const std::uint32_t nb = le::get_u32(is), T = le::get_u32(is);
    if (w < 1 || h < 1 || w > kMaxDim || h > kMaxDim || nb < 1 || T < nb || T > (1u << 24))
      throw FormatError("invalid affine model header");
    const std::size_t n = static_cast<std::size_t>(w) * h;
    std::vector<std::vector<double>> gain(nb), offset(nb);
    for (std::uint32_t b = 0; b < nb; ++b) {
      gain[b].resize(n);
      offset[b].resize(n);
      for (double& v : gain[b]) v = le::get_f32(is);
      for (double& v : offset[b]) v = le::get_f32(is);
    }
    try {
      return std::make_unique<AffineModel>(static_cast<int>(w), static_cast<int>(h),
                                           TimeBins{static_cast<int>(T), static_cast<int>(nb)},
                                           std::move(gain), std::move(offset));
    } catch (const InvalidArgument& e) {
      throw FormatError(e.what());
    }
  }
  if (count > 1024) throw FormatError("implausible layer count");
  std::vector<ConvLayer> layers(count);
  for (ConvLayer& L : layers) {
    const std::uint32_t kh = le::get_u32(is), kw = le::get_u32(is);
    const std::uint32_t ic = le::get_u32(is), oc = le::get_u32(is);
    if (kh < 1 || kw < 1 || ic < 1 || oc < 1 || kh > 64 || kw > 64 || ic > 4096 || oc > 4096)
      throw FormatError("invalid layer header");
    L.kernel_h = static_cast<int>(kh);
    L.kernel_w = static_cast<int>(kw);
    L.in_channels = static_cast<int>(ic);
    L.out_channels = static_cast<int>(oc);
    L.weights.resize(static_cast<std::size_t>(oc) * ic * kh * kw);
    for (float& v : L.weights) v = le::get_f32(is);
    L.bias.resize(oc);
    for (float& v : L.bias) v = le::get_f32(is);
  }
  return std::make_unique<ConvNetModel>(std::move(layers));
}

std::unique_ptr<EpsilonModel> load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open weight file " + path.string());
  return read_weights(in);
}

}  // namespace dprir
