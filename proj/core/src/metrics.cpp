#include "dprir/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "dprir/error.hpp"

namespace dprir {

namespace {

void require_same_shape(const ImageGrid& a, const ImageGrid& b) {
  if (!a.same_shape(b)) throw InvalidArgument("image shape mismatch");
  if (a.empty()) throw InvalidArgument("empty image");
}

std::array<double, kSsimWindow> gaussian_taps() {
  std::array<double, kSsimWindow> g{};
  double sum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - kSsimWindow / 2;
    g[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    sum += g[i];
  }
  for (double& v : g) v /= sum;
  return g;
}

// Separable "valid" filtering with the normalized Gaussian.
std::vector<double> filter_valid(const std::vector<double>& img, int w, int h,
                                 const std::array<double, kSsimWindow>& g) {
  const int ow = w - kSsimWindow + 1;
  const int oh = h - kSsimWindow + 1;
  std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < ow; ++c) {
      double s = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) s += g[k] * img[static_cast<std::size_t>(r) * w + c + k];
      tmp[static_cast<std::size_t>(r) * ow + c] = s;
    }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int r = 0; r < oh; ++r)
    for (int c = 0; c < ow; ++c) {
      double s = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) s += g[k] * tmp[static_cast<std::size_t>(r + k) * ow + c];
      out[static_cast<std::size_t>(r) * ow + c] = s;
    }
  return out;
}

}  // namespace

double default_range(const ImageGrid& ref) {
  if (ref.empty()) throw InvalidArgument("empty image");
  const double m = *std::max_element(ref.values().begin(), ref.values().end());
  if (!(m > 0.0)) throw InvalidArgument("reference maximum must be positive to set the range");
  return m;
}

double mse(const ImageGrid& x, const ImageGrid& ref) {
  require_same_shape(x, ref);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - ref[i];
    s += d * d;
  }
  return s / static_cast<double>(x.size());
}

double rmse(const ImageGrid& x, const ImageGrid& ref, double range) {
  if (range <= 0.0) range = default_range(ref);
  return std::sqrt(mse(x, ref)) / range;
}

double psnr(const ImageGrid& x, const ImageGrid& ref, double range) {
  if (!(range > 0.0)) throw InvalidArgument("range must be positive");
  const double m = mse(x, ref);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(range * range / m);
}

double ssim(const ImageGrid& x, const ImageGrid& ref, double range) {
  require_same_shape(x, ref);
  if (!(range > 0.0)) throw InvalidArgument("range must be positive");
  const int w = x.width();
  const int h = x.height();
  if (w < kSsimWindow || h < kSsimWindow) throw InvalidArgument("SSIM needs images of at least 11x11");
  if (x == ref) return 1.0;

  const auto g = gaussian_taps();
  const std::size_t n = x.size();
  std::vector<double> a(x.values().begin(), x.values().end());
  std::vector<double> b(ref.values().begin(), ref.values().end());
  std::vector<double> aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  const auto mu_a = filter_valid(a, w, h, g);
  const auto mu_b = filter_valid(b, w, h, g);
  const auto s_aa = filter_valid(aa, w, h, g);
  const auto s_bb = filter_valid(bb, w, h, g);
  const auto s_ab = filter_valid(ab, w, h, g);

  const double c1 = (kSsimK1 * range) * (kSsimK1 * range);
  const double c2 = (kSsimK2 * range) * (kSsimK2 * range);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i], mb = mu_b[i];
    const double va = s_aa[i] - ma * ma;
    const double vb = s_bb[i] - mb * mb;
    const double cov = s_ab[i] - ma * mb;
    total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
  }
  return total / static_cast<double>(mu_a.size());
}

}  // namespace dprir
