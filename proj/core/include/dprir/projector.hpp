#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "dprir/grid.hpp"

namespace dprir {

/// Fan-beam scanner with an equiangular (arc) detector centred on the ray
/// through the isocenter.
///
/// At view angle beta the source sits at dso * (cos beta, sin beta); detector
/// element k looks along the central direction rotated counter-clockwise by
/// gamma_k = (k - (n_detectors-1)/2) * det_angular_pitch.
struct FanBeamGeometry {
  double dso = 595.0;
  double dsd = 1085.6;
  int n_detectors = 736;
  double det_angular_pitch = 1.2858 / 1085.6;
  std::vector<double> view_angles;
  int image_width = 512;
  int image_height = 512;
  double pixel_size = 0.6641;

  int n_views() const noexcept { return static_cast<int>(view_angles.size()); }
  double fan_angle(int det) const noexcept {
    return (det - 0.5 * (n_detectors - 1)) * det_angular_pitch;
  }

  /// Throws InvalidArgument on a violated invariant.
  void validate() const;
  /// Whether the fan reaches every corner of the image support.
  bool covers_image() const noexcept;

  FanBeamGeometry with_views(std::vector<double> angles) const;

  /// Clinical geometry: 512x512 @ 0.6641 mm, 736 arc elements of 1.2858 mm.
  static FanBeamGeometry clinical(int n_views);
  /// Clinical geometry shrunk to an n x n image covering the same field of
  /// view: detector count and pixel size scaled by n/512.
  static FanBeamGeometry desk(int n, int n_views);
};

/// A linear system y = A x, addressed one view (block of detector rows) at a time.
class SystemOperator {
 public:
  virtual ~SystemOperator() = default;

  virtual int image_width() const = 0;
  virtual int image_height() const = 0;
  virtual double pixel_size() const = 0;
  virtual int n_views() const = 0;
  virtual int n_detectors() const = 0;
  virtual std::span<const double> view_angles() const = 0;

  /// out[d] = (A_view x)[d]; `out` is overwritten.
  virtual void project_view(std::span<const double> image, int view, std::span<double> out) const = 0;
  /// image += A_view^T rays.
  virtual void backproject_view(std::span<const double> rays, int view,
                                std::span<double> image) const = 0;

  std::size_t n_pixels() const {
    return static_cast<std::size_t>(image_width()) * static_cast<std::size_t>(image_height());
  }
};

/// Joseph's method: one ray per detector element, linear interpolation
/// between the two pixels straddling the ray on each line of the dominant axis.
class FanBeamProjector final : public SystemOperator {
 public:
  explicit FanBeamProjector(FanBeamGeometry geometry);

  const FanBeamGeometry& geometry() const noexcept { return geometry_; }

  int image_width() const override { return geometry_.image_width; }
  int image_height() const override { return geometry_.image_height; }
  double pixel_size() const override { return geometry_.pixel_size; }
  int n_views() const override { return geometry_.n_views(); }
  int n_detectors() const override { return geometry_.n_detectors; }
  std::span<const double> view_angles() const override { return geometry_.view_angles; }

  void project_view(std::span<const double> image, int view, std::span<double> out) const override;
  void backproject_view(std::span<const double> rays, int view,
                        std::span<double> image) const override;

  /// Calls visit(pixel_index, weight) for every nonzero entry of one row of A.
  template <typename Visit>
  void trace(int view, int det, Visit&& visit) const;

 private:
  struct Ray {
    double sx, sy, dx, dy;
  };
  Ray ray(int view, int det) const noexcept {
    return rays_[static_cast<std::size_t>(view) * geometry_.n_detectors + det];
  }

  FanBeamGeometry geometry_;
  std::vector<Ray> rays_;
};

/// Explicit matrix with rows grouped into views of `n_detectors` rays.
class DenseOperator final : public SystemOperator {
 public:
  /// `rows` holds n_views*n_detectors rows of width*height entries, row-major.
  DenseOperator(int width, int height, double pixel_size, int n_views, int n_detectors,
                std::vector<double> matrix);

  int image_width() const override { return width_; }
  int image_height() const override { return height_; }
  double pixel_size() const override { return pixel_size_; }
  int n_views() const override { return n_views_; }
  int n_detectors() const override { return n_detectors_; }
  std::span<const double> view_angles() const override { return angles_; }

  void project_view(std::span<const double> image, int view, std::span<double> out) const override;
  void backproject_view(std::span<const double> rays, int view,
                        std::span<double> image) const override;

  double entry(std::size_t row, std::size_t col) const noexcept {
    return matrix_[row * n_pixels() + col];
  }

 private:
  int width_, height_;
  double pixel_size_;
  int n_views_, n_detectors_;
  std::vector<double> angles_;
  std::vector<double> matrix_;
};

Sinogram forward_project(const ImageGrid& img, const SystemOperator& op);
ImageGrid back_project(const Sinogram& s, const SystemOperator& op);

Sinogram forward_project(const ImageGrid& img, const FanBeamGeometry& g);
ImageGrid back_project(const Sinogram& s, const FanBeamGeometry& g);

/// Forward projection restricted to `views`; other views of `out` are untouched.
void forward_project_views(const ImageGrid& img, const SystemOperator& op,
                           std::span<const int> views, Sinogram& out);
/// A_S^T applied to the `views` rows of `s`.
ImageGrid back_project_views(const Sinogram& s, const SystemOperator& op,
                             std::span<const int> views);

/// A * 1
Sinogram row_sums(const SystemOperator& op);
/// A^T * 1
ImageGrid col_sums(const SystemOperator& op);

Sinogram row_sums(const FanBeamGeometry& g);
ImageGrid col_sums(const FanBeamGeometry& g);

/// Largest eigenvalue of A^T A by power iteration from a fixed start vector.
double operator_norm_sq(const SystemOperator& op, int iterations = 30);

// ---------------------------------------------------------------------------

template <typename Visit>
void FanBeamProjector::trace(int view, int det, Visit&& visit) const {
  const Ray r = ray(view, det);
  const int w = geometry_.image_width;
  const int h = geometry_.image_height;
  const double p = geometry_.pixel_size;
  const double cx = 0.5 * (w - 1);
  const double cy = 0.5 * (h - 1);

  if (std::abs(r.dx) >= std::abs(r.dy)) {
    // March over columns; the ray crosses each column line once.
    const double len = p / std::abs(r.dx);
    const double slope = r.dy / r.dx;
    for (int col = 0; col < w; ++col) {
      const double x = (col - cx) * p;
      const double y = r.sy + (x - r.sx) * slope;
      const double row_f = cy - y / p;
      if (row_f <= -1.0 || row_f >= h) continue;
      const int r0 = static_cast<int>(std::floor(row_f));
      const double frac = row_f - r0;
      if (r0 >= 0) visit(static_cast<std::size_t>(r0) * w + col, len * (1.0 - frac));
      if (r0 + 1 < h && frac > 0.0) visit(static_cast<std::size_t>(r0 + 1) * w + col, len * frac);
    }
  } else {
    const double len = p / std::abs(r.dy);
    const double slope = r.dx / r.dy;
    for (int row = 0; row < h; ++row) {
      const double y = (cy - row) * p;
      const double x = r.sx + (y - r.sy) * slope;
      const double col_f = x / p + cx;
      if (col_f <= -1.0 || col_f >= w) continue;
      const int c0 = static_cast<int>(std::floor(col_f));
      const double frac = col_f - c0;
      const std::size_t base = static_cast<std::size_t>(row) * w;
      if (c0 >= 0) visit(base + c0, len * (1.0 - frac));
      if (c0 + 1 < w && frac > 0.0) visit(base + c0 + 1, len * frac);
    }
  }
}

}  // namespace dprir
