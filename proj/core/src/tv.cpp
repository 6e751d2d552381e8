#include "dprir/tv.hpp"

#include <cmath>
#include <vector>

#include "dprir/error.hpp"

namespace dprir {

double tv_value(const ImageGrid& img) {
  const int w = img.width();
  const int h = img.height();
  double tv = 0.0;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double u = img.at(c, r);
      const double gx = c + 1 < w ? img.at(c + 1, r) - u : 0.0;
      const double gy = r + 1 < h ? img.at(c, r + 1) - u : 0.0;
      tv += std::sqrt(gx * gx + gy * gy);
    }
  }
  return tv;
}

ImageGrid tv_denoise(const ImageGrid& v, double weight, int n_iters) {
  if (weight < 0.0 || !std::isfinite(weight)) throw InvalidArgument("TV weight must be >= 0");
  if (n_iters < 1) throw InvalidArgument("TV iteration count must be >= 1");
  if (weight == 0.0) return v;

  const int w = v.width();
  const int h = v.height();
  const std::size_t n = v.size();
  const double step = 1.0 / std::sqrt(8.0);  // sigma = tau; sigma*tau*||grad||^2 <= 1

  ImageGrid u = v;
  ImageGrid u_bar = v;
  std::vector<double> px(n, 0.0), py(n, 0.0);

  for (int it = 0; it < n_iters; ++it) {
    // Dual ascent, then projection onto {|p| <= weight}.
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const std::size_t i = static_cast<std::size_t>(r) * w + c;
        const double gx = c + 1 < w ? u_bar[i + 1] - u_bar[i] : 0.0;
        const double gy = r + 1 < h ? u_bar[i + w] - u_bar[i] : 0.0;
        const double qx = px[i] + step * gx;
        const double qy = py[i] + step * gy;
        const double mag = std::sqrt(qx * qx + qy * qy);
        const double shrink = mag > weight ? weight / mag : 1.0;
        px[i] = qx * shrink;
        py[i] = qy * shrink;
      }
    }
    // Primal descent on 0.5||u - v||^2 with div = -grad^T.
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const std::size_t i = static_cast<std::size_t>(r) * w + c;
        double div = 0.0;
        div += (c + 1 < w ? px[i] : 0.0) - (c > 0 ? px[i - 1] : 0.0);
        div += (r + 1 < h ? py[i] : 0.0) - (r > 0 ? py[i - w] : 0.0);
        const double prev = u[i];
        const double next = (prev + step * div + step * v[i]) / (1.0 + step);
        u[i] = next;
        u_bar[i] = 2.0 * next - prev;
      }
    }
  }
  return u;
}

ImageGrid tv_denoise_relative(const ImageGrid& v, const TvConfig& cfg) {
  return tv_denoise(v, cfg.weight_rel * stddev(v), cfg.iters);
}

}  // namespace dprir
