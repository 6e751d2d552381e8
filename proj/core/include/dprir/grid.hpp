#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dprir {

/// Attenuation of water in mm^-1, used for HU conversion and phantom scaling.
inline constexpr double kWaterAttenuation = 0.0192;

/// Row-major 2D image with a physical pixel size (mm).
///
/// Pixel (col, row) has its center at
///   x = (col - (width-1)/2) * pixel_size,
///   y = ((height-1)/2 - row) * pixel_size,
/// so row 0 is the top of the image and the isocenter sits at the grid center.
class ImageGrid {
 public:
  ImageGrid() = default;
  ImageGrid(int width, int height, double pixel_size);
  ImageGrid(int width, int height, double pixel_size, std::vector<double> data);

  static ImageGrid filled(int width, int height, double pixel_size, double value);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double pixel_size() const noexcept { return pixel_size_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }
  double& at(int col, int row) noexcept { return data_[static_cast<std::size_t>(row) * width_ + col]; }
  double at(int col, int row) const noexcept {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }

  double x_of(int col) const noexcept { return (col - 0.5 * (width_ - 1)) * pixel_size_; }
  double y_of(int row) const noexcept { return (0.5 * (height_ - 1) - row) * pixel_size_; }

  bool same_shape(const ImageGrid& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool all_finite() const noexcept;

  /// Zero image with the same shape and pixel size.
  ImageGrid zeros_like() const { return ImageGrid(width_, height_, pixel_size_); }

  ImageGrid& operator+=(const ImageGrid& rhs);
  ImageGrid& operator-=(const ImageGrid& rhs);
  ImageGrid& operator*=(double s) noexcept;

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double pixel_size_ = 1.0;
  std::vector<double> data_;
};

ImageGrid operator+(ImageGrid lhs, const ImageGrid& rhs);
ImageGrid operator-(ImageGrid lhs, const ImageGrid& rhs);
ImageGrid operator*(double s, ImageGrid img);

/// a*x + b*y, shapes must match.
ImageGrid lincomb(double a, const ImageGrid& x, double b, const ImageGrid& y);

double dot(const ImageGrid& a, const ImageGrid& b);
double norm2(const ImageGrid& a);
double mean(const ImageGrid& a);
double stddev(const ImageGrid& a);

/// Fan-beam projection data, view-major: data[view * n_detectors + det].
class Sinogram {
 public:
  Sinogram() = default;
  /// Zero data; angles must be strictly increasing in [0, 2*pi).
  Sinogram(int n_detectors, std::vector<double> angles);
  Sinogram(int n_detectors, std::vector<double> angles, std::vector<double> data);

  int n_views() const noexcept { return static_cast<int>(angles_.size()); }
  int n_detectors() const noexcept { return n_detectors_; }
  std::span<const double> angles() const noexcept { return angles_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  std::span<double> view(int v) noexcept {
    return std::span<double>(data_).subspan(static_cast<std::size_t>(v) * n_detectors_, n_detectors_);
  }
  std::span<const double> view(int v) const noexcept {
    return std::span<const double>(data_).subspan(static_cast<std::size_t>(v) * n_detectors_,
                                                  n_detectors_);
  }
  double& operator()(int v, int d) noexcept { return data_[static_cast<std::size_t>(v) * n_detectors_ + d]; }
  double operator()(int v, int d) const noexcept {
    return data_[static_cast<std::size_t>(v) * n_detectors_ + d];
  }

  bool all_finite() const noexcept;
  Sinogram zeros_like() const { return Sinogram(n_detectors_, angles_); }

  friend bool operator==(const Sinogram&, const Sinogram&) = default;

 private:
  int n_detectors_ = 0;
  std::vector<double> angles_;
  std::vector<double> data_;
};

/// `n` angles uniformly spaced on [0, 2*pi).
std::vector<double> full_scan_angles(int n);

struct Ellipse {
  double center_x = 0.0;  // mm
  double center_y = 0.0;  // mm
  double semi_x = 1.0;    // mm, before rotation
  double semi_y = 1.0;    // mm
  double rotation = 0.0;  // rad, counter-clockwise
  double intensity = 0.0; // mm^-1, additive

  bool contains(double x, double y) const noexcept;
};

struct EllipsePhantom {
  std::vector<Ellipse> ellipses;
};

/// Shepp-Logan ellipse table mapped onto a field of view of `fov_mm`
/// (the unit square [-1,1]^2 spans the field of view), intensities multiplied
/// by `mu_scale`.
EllipsePhantom shepp_logan_ellipses(double fov_mm, double mu_scale = kWaterAttenuation);

ImageGrid rasterize_phantom(const EllipsePhantom& phantom, int n, double pixel_size);

ImageGrid make_shepp_logan(int n, double pixel_size, double mu_scale = kWaterAttenuation);

/// Randomly perturbed Shepp-Logan variants (centers, axes, angles and
/// intensities jittered), used as a stand-in training population.
std::vector<ImageGrid> make_phantom_ensemble(int n, double pixel_size, int count,
                                             std::uint64_t seed,
                                             double mu_scale = kWaterAttenuation);

/// Map attenuation to 8-bit gray through an HU window [lo, hi].
/// gray = floor(255 * (HU - lo) / (hi - lo)) clamped to [0, 255].
std::vector<std::uint8_t> window_display(const ImageGrid& img, double lo_hu, double hi_hu,
                                         double mu_water = kWaterAttenuation);

inline double to_hu(double mu, double mu_water = kWaterAttenuation) {
  return 1000.0 * (mu - mu_water) / mu_water;
}

}  // namespace dprir
