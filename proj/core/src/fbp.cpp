#include "dprir/fbp.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>

#include "dprir/error.hpp"

namespace dprir {

namespace {

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
struct PlanDestroy {
  void operator()(fftw_plan p) const noexcept { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDestroy>;

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Filters every view of a sinogram with a fixed real kernel by zero-padded FFT
// convolution.
class ViewFilter {
 public:
  ViewFilter(int n_detectors, double pitch, FbpFilter filter)
      : n_(n_detectors), padded_(next_pow2(2 * n_detectors)), bins_(padded_ / 2 + 1) {
    real_.reset(static_cast<double*>(fftw_malloc(sizeof(double) * padded_)));
    spec_.reset(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins_)));
    forward_.reset(fftw_plan_dft_r2c_1d(padded_, real_.get(), spec_.get(), FFTW_ESTIMATE));
    inverse_.reset(fftw_plan_dft_c2r_1d(padded_, spec_.get(), real_.get(), FFTW_ESTIMATE));

    // Kernel laid out circularly: tap n at index n mod padded.
    const std::vector<double> taps = fan_ramp_kernel(n_detectors, pitch);
    std::fill(real_.get(), real_.get() + padded_, 0.0);
    for (int i = 0; i < static_cast<int>(taps.size()); ++i) {
      const int n = i - (n_detectors - 1);
      real_.get()[(n + padded_) % padded_] = taps[i];
    }
    fftw_execute(forward_.get());
    response_.resize(static_cast<std::size_t>(bins_));
    for (int k = 0; k < bins_; ++k) {
      double h = spec_.get()[k][0];
      if (filter == FbpFilter::Hann) {
        const double nu = static_cast<double>(k) / padded_;
        h *= 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * nu));
      }
      response_[k] = h / padded_;
    }
  }

  /// out = pitch * (in conv kernel), in-place over one view.
  void apply(std::span<double> view, double pitch) {
    std::fill(real_.get(), real_.get() + padded_, 0.0);
    std::copy(view.begin(), view.end(), real_.get());
    fftw_execute(forward_.get());
    for (int k = 0; k < bins_; ++k) {
      spec_.get()[k][0] *= response_[k];
      spec_.get()[k][1] *= response_[k];
    }
    fftw_execute(inverse_.get());
    for (int d = 0; d < n_; ++d) view[d] = pitch * real_.get()[d];
  }

 private:
  int n_, padded_, bins_;
  std::unique_ptr<double, FftwFree> real_;
  std::unique_ptr<fftw_complex, FftwFree> spec_;
  Plan forward_, inverse_;
  std::vector<double> response_;
};

}  // namespace

FbpFilter parse_fbp_filter(std::string_view name) {
  if (name == "ram-lak" || name == "ramlak") return FbpFilter::RamLak;
  if (name == "hann") return FbpFilter::Hann;
  throw InvalidArgument("unknown FBP filter: " + std::string(name));
}

std::string_view to_string(FbpFilter f) { return f == FbpFilter::Hann ? "hann" : "ram-lak"; }

std::vector<double> fan_ramp_kernel(int n_detectors, double pitch) {
  const int count = 2 * n_detectors - 1;
  std::vector<double> k(static_cast<std::size_t>(count), 0.0);
  const double a2 = pitch * pitch;
  for (int i = 0; i < count; ++i) {
    const int n = i - (n_detectors - 1);
    if (n == 0) {
      k[i] = 1.0 / (8.0 * a2);
    } else if (n % 2 != 0) {
      const double gamma = n * pitch;
      const double fan = gamma / std::sin(gamma);
      k[i] = -0.5 * fan * fan / (n * n * std::numbers::pi * std::numbers::pi * a2);
    }
  }
  return k;
}

Sinogram fbp_filter_views(const Sinogram& s, const FanBeamGeometry& g, FbpFilter filter) {
  if (s.n_detectors() != g.n_detectors) throw InvalidArgument("sinogram detector count mismatch");
  const double pitch = g.det_angular_pitch;
  Sinogram filtered = s;
  ViewFilter vf(s.n_detectors(), pitch, filter);
  for (int v = 0; v < s.n_views(); ++v) {
    auto view = filtered.view(v);
    for (int d = 0; d < s.n_detectors(); ++d) view[d] *= g.dso * std::cos(g.fan_angle(d));
    vf.apply(view, pitch);
  }
  return filtered;
}

ImageGrid fbp_reconstruct(const Sinogram& s, const FanBeamGeometry& g, FbpFilter filter) {
  g.validate();
  if (s.n_views() != g.n_views() || s.n_detectors() != g.n_detectors)
    throw InvalidArgument("sinogram dimensions do not match the geometry");

  const int nv = s.n_views();
  const int nd = s.n_detectors();
  const auto angles = s.angles();
  if (nv < 2) throw UnsupportedScanRange("filtered back-projection needs a full scan");
  const double spacing = (angles.back() - angles.front()) / (nv - 1);
  const double coverage = angles.back() - angles.front() + spacing;
  if (coverage < 2.0 * std::numbers::pi * (1.0 - 1e-6))
    throw UnsupportedScanRange("angle span " + std::to_string(coverage) +
                               " rad is short of a full 360 degree scan");
  const double dbeta = 2.0 * std::numbers::pi / nv;

  const Sinogram filtered = fbp_filter_views(s, g, filter);

  ImageGrid out(g.image_width, g.image_height, g.pixel_size);
  const double center_det = 0.5 * (nd - 1);
  for (int v = 0; v < nv; ++v) {
    const double beta = angles[v];
    const double ux = std::cos(beta);
    const double uy = std::sin(beta);
    const double sx = g.dso * ux;
    const double sy = g.dso * uy;
    const auto q = filtered.view(v);
    for (int row = 0; row < out.height(); ++row) {
      const double y = out.y_of(row);
      for (int col = 0; col < out.width(); ++col) {
        const double vx = out.x_of(col) - sx;
        const double vy = y - sy;
        // Central direction is -(ux, uy).
        const double along = -(ux * vx + uy * vy);
        const double across = -ux * vy + uy * vx;
        const double gamma = std::atan2(across, along);
        const double k = gamma / g.det_angular_pitch + center_det;
        if (k < 0.0 || k > nd - 1) continue;
        const int k0 = static_cast<int>(std::floor(k));
        const double f = k - k0;
        const double val = k0 + 1 < nd ? (1.0 - f) * q[k0] + f * q[k0 + 1] : q[k0];
        out.at(col, row) += dbeta * val / (vx * vx + vy * vy);
      }
    }
  }
  return out;
}

}  // namespace dprir
