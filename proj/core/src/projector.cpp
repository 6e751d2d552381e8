#include "dprir/projector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "dprir/error.hpp"

namespace dprir {

namespace {

constexpr int kClinicalImage = 512;
constexpr int kClinicalDetectors = 736;
constexpr double kClinicalPixel = 0.6641;
constexpr double kClinicalElement = 1.2858;

// Back-projection accumulates into a fixed number of partial images, one per
// contiguous block of views, reduced in block order. The result therefore does
// not depend on the thread count.
constexpr int kAccumulatorBlocks = 8;

void require_matching_image(const ImageGrid& img, const SystemOperator& op) {
  if (img.width() != op.image_width() || img.height() != op.image_height())
    throw InvalidArgument("image dimensions do not match the system geometry");
}

void require_matching_sinogram(const Sinogram& s, const SystemOperator& op) {
  if (s.n_views() != op.n_views() || s.n_detectors() != op.n_detectors())
    throw InvalidArgument("sinogram dimensions do not match the system geometry");
}

}  // namespace

void FanBeamGeometry::validate() const {
  if (!(dso > 0.0) || !(dsd > dso)) throw InvalidArgument("geometry requires dsd > dso > 0");
  if (n_detectors < 1) throw InvalidArgument("geometry requires at least one detector");
  if (!(det_angular_pitch > 0.0)) throw InvalidArgument("detector pitch must be positive");
  if (view_angles.empty()) throw InvalidArgument("geometry requires at least one view");
  if (image_width < 1 || image_height < 1 || !(pixel_size > 0.0))
    throw InvalidArgument("invalid image binding");
  const double half_diag =
      0.5 * pixel_size * std::hypot(static_cast<double>(image_width), static_cast<double>(image_height));
  if (half_diag >= dso) throw InvalidArgument("source orbit passes through the image");
}

bool FanBeamGeometry::covers_image() const noexcept {
  const double half_fan = 0.5 * n_detectors * det_angular_pitch;
  const double half_diag =
      0.5 * pixel_size * std::hypot(static_cast<double>(image_width), static_cast<double>(image_height));
  return dso * std::sin(std::min(half_fan, 0.5 * std::numbers::pi)) >= half_diag;
}

FanBeamGeometry FanBeamGeometry::with_views(std::vector<double> angles) const {
  FanBeamGeometry g = *this;
  g.view_angles = std::move(angles);
  return g;
}

FanBeamGeometry FanBeamGeometry::clinical(int n_views) { return desk(kClinicalImage, n_views); }

FanBeamGeometry FanBeamGeometry::desk(int n, int n_views) {
  if (n < 2) throw InvalidArgument("image size must be at least 2");
  const double scale = static_cast<double>(kClinicalImage) / n;
  FanBeamGeometry g;
  g.image_width = n;
  g.image_height = n;
  g.pixel_size = kClinicalPixel * scale;
  g.n_detectors = std::max(1, static_cast<int>(std::lround(kClinicalDetectors / scale)));
  g.det_angular_pitch = kClinicalElement * scale / g.dsd;
  g.view_angles = full_scan_angles(n_views);
  return g;
}

FanBeamProjector::FanBeamProjector(FanBeamGeometry geometry) : geometry_(std::move(geometry)) {
  geometry_.validate();
  const int nd = geometry_.n_detectors;
  rays_.resize(static_cast<std::size_t>(geometry_.n_views()) * nd);
  for (int v = 0; v < geometry_.n_views(); ++v) {
    const double beta = geometry_.view_angles[v];
    const double sx = geometry_.dso * std::cos(beta);
    const double sy = geometry_.dso * std::sin(beta);
    const double cx = -std::cos(beta);
    const double cy = -std::sin(beta);
    for (int d = 0; d < nd; ++d) {
      const double gamma = geometry_.fan_angle(d);
      const double c = std::cos(gamma);
      const double s = std::sin(gamma);
      rays_[static_cast<std::size_t>(v) * nd + d] = Ray{sx, sy, cx * c - cy * s, cx * s + cy * c};
    }
  }
}

void FanBeamProjector::project_view(std::span<const double> image, int view,
                                    std::span<double> out) const {
  for (int d = 0; d < geometry_.n_detectors; ++d) {
    double acc = 0.0;
    trace(view, d, [&](std::size_t idx, double w) { acc += w * image[idx]; });
    out[d] = acc;
  }
}

void FanBeamProjector::backproject_view(std::span<const double> rays, int view,
                                        std::span<double> image) const {
  for (int d = 0; d < geometry_.n_detectors; ++d) {
    const double r = rays[d];
    if (r == 0.0) continue;
    trace(view, d, [&](std::size_t idx, double w) { image[idx] += w * r; });
  }
}

DenseOperator::DenseOperator(int width, int height, double pixel_size, int n_views,
                             int n_detectors, std::vector<double> matrix)
    : width_(width),
      height_(height),
      pixel_size_(pixel_size),
      n_views_(n_views),
      n_detectors_(n_detectors),
      angles_(full_scan_angles(n_views)),
      matrix_(std::move(matrix)) {
  if (width < 1 || height < 1 || n_detectors < 1 || !(pixel_size > 0.0))
    throw InvalidArgument("invalid dense operator dimensions");
  if (matrix_.size() != static_cast<std::size_t>(n_views) * n_detectors * n_pixels())
    throw InvalidArgument("dense operator matrix has the wrong size");
}

void DenseOperator::project_view(std::span<const double> image, int view,
                                 std::span<double> out) const {
  const std::size_t np = n_pixels();
  for (int d = 0; d < n_detectors_; ++d) {
    const std::size_t row = static_cast<std::size_t>(view) * n_detectors_ + d;
    double acc = 0.0;
    for (std::size_t j = 0; j < np; ++j) acc += matrix_[row * np + j] * image[j];
    out[d] = acc;
  }
}

void DenseOperator::backproject_view(std::span<const double> rays, int view,
                                     std::span<double> image) const {
  const std::size_t np = n_pixels();
  for (int d = 0; d < n_detectors_; ++d) {
    const std::size_t row = static_cast<std::size_t>(view) * n_detectors_ + d;
    for (std::size_t j = 0; j < np; ++j) image[j] += matrix_[row * np + j] * rays[d];
  }
}

void forward_project_views(const ImageGrid& img, const SystemOperator& op,
                           std::span<const int> views, Sinogram& out) {
  require_matching_image(img, op);
  require_matching_sinogram(out, op);
  const auto n = static_cast<long>(views.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) op.project_view(img.values(), views[i], out.view(views[i]));
}

ImageGrid back_project_views(const Sinogram& s, const SystemOperator& op,
                             std::span<const int> views) {
  require_matching_sinogram(s, op);
  ImageGrid out(op.image_width(), op.image_height(), op.pixel_size());
  const int n = static_cast<int>(views.size());
  const int blocks = std::min(kAccumulatorBlocks, n);
  if (blocks <= 1) {
    for (int v : views) op.backproject_view(s.view(v), v, out.values());
    return out;
  }
  std::vector<ImageGrid> partial(static_cast<std::size_t>(blocks), out.zeros_like());
#pragma omp parallel for schedule(static)
  for (int b = 0; b < blocks; ++b) {
    const int lo = static_cast<int>(static_cast<long>(n) * b / blocks);
    const int hi = static_cast<int>(static_cast<long>(n) * (b + 1) / blocks);
    for (int i = lo; i < hi; ++i) op.backproject_view(s.view(views[i]), views[i], partial[b].values());
  }
  for (const ImageGrid& p : partial) out += p;
  return out;
}

namespace {

std::vector<int> all_views(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

Sinogram forward_project(const ImageGrid& img, const SystemOperator& op) {
  std::vector<double> angles(op.view_angles().begin(), op.view_angles().end());
  Sinogram out(op.n_detectors(), std::move(angles));
  const auto views = all_views(op.n_views());
  forward_project_views(img, op, views, out);
  return out;
}

ImageGrid back_project(const Sinogram& s, const SystemOperator& op) {
  return back_project_views(s, op, all_views(op.n_views()));
}

Sinogram forward_project(const ImageGrid& img, const FanBeamGeometry& g) {
  return forward_project(img, FanBeamProjector(g));
}

ImageGrid back_project(const Sinogram& s, const FanBeamGeometry& g) {
  return back_project(s, FanBeamProjector(g));
}

Sinogram row_sums(const SystemOperator& op) {
  return forward_project(ImageGrid::filled(op.image_width(), op.image_height(), op.pixel_size(), 1.0),
                         op);
}

ImageGrid col_sums(const SystemOperator& op) {
  std::vector<double> angles(op.view_angles().begin(), op.view_angles().end());
  std::vector<double> ones(static_cast<std::size_t>(op.n_views()) * op.n_detectors(), 1.0);
  return back_project(Sinogram(op.n_detectors(), std::move(angles), std::move(ones)), op);
}

Sinogram row_sums(const FanBeamGeometry& g) { return row_sums(FanBeamProjector(g)); }
ImageGrid col_sums(const FanBeamGeometry& g) { return col_sums(FanBeamProjector(g)); }

double operator_norm_sq(const SystemOperator& op, int iterations) {
  ImageGrid x = ImageGrid::filled(op.image_width(), op.image_height(), op.pixel_size(), 1.0);
  double lambda = 0.0;
  for (int k = 0; k < iterations; ++k) {
    const double n = norm2(x);
    if (n == 0.0) return 0.0;
    x *= 1.0 / n;
    ImageGrid y = back_project(forward_project(x, op), op);
    lambda = dot(x, y);
    x = std::move(y);
  }
  return lambda;
}

}  // namespace dprir
