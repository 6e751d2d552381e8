#include "dprir/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dprir/error.hpp"
#include "dprir/random.hpp"

namespace dprir {

namespace {

void require_same_shape(const ImageGrid& a, const ImageGrid& b) {
  if (!a.same_shape(b)) {
    throw InvalidArgument("image shape mismatch: " + std::to_string(a.width()) + "x" +
                          std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                          "x" + std::to_string(b.height()));
  }
}

}  // namespace

ImageGrid::ImageGrid(int width, int height, double pixel_size)
    : ImageGrid(width, height, pixel_size,
                std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                    static_cast<std::size_t>(std::max(height, 0)))) {}

ImageGrid::ImageGrid(int width, int height, double pixel_size, std::vector<double> data)
    : width_(width), height_(height), pixel_size_(pixel_size), data_(std::move(data)) {
  if (width < 1 || height < 1) throw InvalidArgument("image dimensions must be positive");
  if (!(pixel_size > 0.0) || !std::isfinite(pixel_size))
    throw InvalidArgument("pixel_size must be positive");
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw InvalidArgument("image data length does not match dimensions");
}

ImageGrid ImageGrid::filled(int width, int height, double pixel_size, double value) {
  ImageGrid img(width, height, pixel_size);
  std::fill(img.data_.begin(), img.data_.end(), value);
  return img;
}

bool ImageGrid::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

ImageGrid& ImageGrid::operator+=(const ImageGrid& rhs) {
  require_same_shape(*this, rhs);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ImageGrid& ImageGrid::operator-=(const ImageGrid& rhs) {
  require_same_shape(*this, rhs);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ImageGrid& ImageGrid::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

ImageGrid operator+(ImageGrid lhs, const ImageGrid& rhs) { return lhs += rhs; }
ImageGrid operator-(ImageGrid lhs, const ImageGrid& rhs) { return lhs -= rhs; }
ImageGrid operator*(double s, ImageGrid img) { return img *= s; }

ImageGrid lincomb(double a, const ImageGrid& x, double b, const ImageGrid& y) {
  require_same_shape(x, y);
  ImageGrid out = x.zeros_like();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

double dot(const ImageGrid& a, const ImageGrid& b) {
  require_same_shape(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const ImageGrid& a) { return std::sqrt(dot(a, a)); }

double mean(const ImageGrid& a) {
  double s = 0.0;
  for (double v : a.values()) s += v;
  return a.empty() ? 0.0 : s / static_cast<double>(a.size());
}

double stddev(const ImageGrid& a) {
  if (a.empty()) return 0.0;
  const double m = mean(a);
  double s = 0.0;
  for (double v : a.values()) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(a.size()));
}

Sinogram::Sinogram(int n_detectors, std::vector<double> angles)
    : Sinogram(n_detectors, angles,
               std::vector<double>(angles.size() * static_cast<std::size_t>(std::max(n_detectors, 0)))) {}

Sinogram::Sinogram(int n_detectors, std::vector<double> angles, std::vector<double> data)
    : n_detectors_(n_detectors), angles_(std::move(angles)), data_(std::move(data)) {
  if (n_detectors < 1) throw InvalidArgument("n_detectors must be positive");
  if (angles_.empty()) throw InvalidArgument("sinogram needs at least one view");
  for (std::size_t i = 0; i < angles_.size(); ++i) {
    const double a = angles_[i];
    if (!std::isfinite(a) || a < 0.0 || a >= 2.0 * std::numbers::pi)
      throw InvalidArgument("view angles must lie in [0, 2pi)");
    if (i > 0 && !(a > angles_[i - 1]))
      throw InvalidArgument("view angles must be strictly increasing");
  }
  if (data_.size() != angles_.size() * static_cast<std::size_t>(n_detectors))
    throw InvalidArgument("sinogram data length does not match dimensions");
}

bool Sinogram::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::vector<double> full_scan_angles(int n) {
  if (n < 1) throw InvalidArgument("need at least one view");
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) a[i] = 2.0 * std::numbers::pi * i / n;
  return a;
}

bool Ellipse::contains(double x, double y) const noexcept {
  const double dx = x - center_x;
  const double dy = y - center_y;
  const double c = std::cos(rotation);
  const double s = std::sin(rotation);
  const double u = (dx * c + dy * s) / semi_x;
  const double v = (-dx * s + dy * c) / semi_y;
  return u * u + v * v <= 1.0;
}

EllipsePhantom shepp_logan_ellipses(double fov_mm, double mu_scale) {
  // Shepp & Logan (1974), unit-square coordinates:
  //   intensity, semi-axis x, semi-axis y, center x, center y, rotation (deg)
  struct Row {
    double intensity, a, b, x0, y0, phi;
  };
  static constexpr Row kTable[] = {
      {2.00, 0.6900, 0.9200, 0.00, 0.0000, 0.0},
      {-0.98, 0.6624, 0.8740, 0.00, -0.0184, 0.0},
      {-0.02, 0.1100, 0.3100, 0.22, 0.0000, -18.0},
      {-0.02, 0.1600, 0.4100, -0.22, 0.0000, 18.0},
      {0.01, 0.2100, 0.2500, 0.00, 0.3500, 0.0},
      {0.01, 0.0460, 0.0460, 0.00, 0.1000, 0.0},
      {0.01, 0.0460, 0.0460, 0.00, -0.1000, 0.0},
      {0.01, 0.0460, 0.0230, -0.08, -0.6050, 0.0},
      {0.01, 0.0230, 0.0230, 0.00, -0.6060, 0.0},
      {0.01, 0.0230, 0.0460, 0.06, -0.6050, 0.0},
  };
  const double half = 0.5 * fov_mm;
  EllipsePhantom p;
  for (const Row& r : kTable) {
    p.ellipses.push_back(Ellipse{r.x0 * half, r.y0 * half, r.a * half, r.b * half,
                                 r.phi * std::numbers::pi / 180.0, r.intensity * mu_scale});
  }
  return p;
}

ImageGrid rasterize_phantom(const EllipsePhantom& phantom, int n, double pixel_size) {
  if (n < 2) throw InvalidArgument("phantom size must be at least 2");
  for (const Ellipse& e : phantom.ellipses) {
    if (!(e.semi_x > 0.0) || !(e.semi_y > 0.0))
      throw InvalidArgument("ellipse semi-axes must be positive");
  }
  ImageGrid img(n, n, pixel_size);
  for (int row = 0; row < n; ++row) {
    const double y = img.y_of(row);
    for (int col = 0; col < n; ++col) {
      const double x = img.x_of(col);
      double v = 0.0;
      for (const Ellipse& e : phantom.ellipses) {
        if (e.contains(x, y)) v += e.intensity;
      }
      img.at(col, row) = v;
    }
  }
  return img;
}

ImageGrid make_shepp_logan(int n, double pixel_size, double mu_scale) {
  if (n < 2) throw InvalidArgument("phantom size must be at least 2");
  return rasterize_phantom(shepp_logan_ellipses(n * pixel_size, mu_scale), n, pixel_size);
}

std::vector<ImageGrid> make_phantom_ensemble(int n, double pixel_size, int count,
                                             std::uint64_t seed, double mu_scale) {
  if (count < 1) throw InvalidArgument("ensemble needs at least one member");
  const double fov = n * pixel_size;
  const EllipsePhantom base = shepp_logan_ellipses(fov, mu_scale);
  Rng rng = make_stream(seed, "phantom-ensemble");
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  std::vector<ImageGrid> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    EllipsePhantom p = base;
    for (std::size_t i = 0; i < p.ellipses.size(); ++i) {
      Ellipse& e = p.ellipses[i];
      const double shift = (i < 2 ? 0.01 : 0.03) * 0.5 * fov;
      e.center_x += shift * unit(rng);
      e.center_y += shift * unit(rng);
      e.semi_x *= 1.0 + 0.06 * unit(rng);
      e.semi_y *= 1.0 + 0.06 * unit(rng);
      e.rotation += 0.08 * unit(rng);
      e.intensity *= 1.0 + (i < 2 ? 0.02 : 0.4) * unit(rng);
    }
    out.push_back(rasterize_phantom(p, n, pixel_size));
  }
  return out;
}

std::vector<std::uint8_t> window_display(const ImageGrid& img, double lo_hu, double hi_hu,
                                         double mu_water) {
  if (!(hi_hu > lo_hu)) throw InvalidArgument("display window requires hi > lo");
  std::vector<std::uint8_t> out(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double g = std::floor(255.0 * (to_hu(img[i], mu_water) - lo_hu) / (hi_hu - lo_hu));
    out[i] = static_cast<std::uint8_t>(std::clamp(g, 0.0, 255.0));
  }
  return out;
}

}  // namespace dprir
