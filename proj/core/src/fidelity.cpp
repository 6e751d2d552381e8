#include "dprir/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dprir/error.hpp"

namespace dprir {

SubsetPartition make_subsets(int n_views, int n_subsets) {
  if (n_views < 1) throw InvalidArgument("need at least one view");
  if (n_subsets < 1 || n_subsets > n_views)
    throw InvalidArgument("subset count " + std::to_string(n_subsets) + " must lie in [1, " +
                          std::to_string(n_views) + "]");
  SubsetPartition p;
  p.subsets.resize(static_cast<std::size_t>(n_subsets));
  for (int k = 0; k < n_subsets; ++k) {
    for (int v = k; v < n_views; v += n_subsets) p.subsets[k].push_back(v);
  }
  return p;
}

void SartConfig::validate() const {
  if (n_subsets < 1) throw InvalidArgument("sart.subsets must be >= 1");
  if (!(relaxation > 0.0 && relaxation < 2.0))
    throw InvalidArgument("sart.relaxation must lie in (0, 2)");
  if (n_passes < 0) throw InvalidArgument("sart.passes must be >= 0");
}

OsSart::OsSart(const SystemOperator& op, SartConfig cfg) : op_(&op), cfg_(cfg) {
  cfg_.validate();
  partition_ = make_subsets(op.n_views(), std::min(cfg_.n_subsets, op.n_views()));

  const Sinogram rows = row_sums(op);
  inv_row_.resize(rows.size());
  bool any_row = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double r = rows.values()[i];
    inv_row_[i] = r >= kNormalizerFloor ? 1.0 / r : 0.0;
    any_row = any_row || r >= kNormalizerFloor;
  }

  Sinogram ones = rows.zeros_like();
  std::fill(ones.values().begin(), ones.values().end(), 1.0);
  bool any_col = false;
  for (const auto& subset : partition_.subsets) {
    const ImageGrid cs = back_project_views(ones, op, subset);
    std::vector<double> inv(cs.size());
    for (std::size_t j = 0; j < cs.size(); ++j) {
      inv[j] = cs[j] >= kNormalizerFloor ? 1.0 / cs[j] : 0.0;
      any_col = any_col || cs[j] >= kNormalizerFloor;
    }
    inv_col_.push_back(std::move(inv));
  }
  if (!any_row || !any_col)
    throw DegenerateGeometry("no ray of the system intersects the image support");
}

void OsSart::sweep(ImageGrid& x, const Sinogram& y) const {
  const int nd = op_->n_detectors();
  Sinogram scratch = y.zeros_like();
  for (std::size_t s = 0; s < partition_.size(); ++s) {
    const auto& views = partition_.subsets[s];
    forward_project_views(x, *op_, views, scratch);
    for (int v : views) {
      auto r = scratch.view(v);
      const auto meas = y.view(v);
      const std::size_t base = static_cast<std::size_t>(v) * nd;
      for (int d = 0; d < nd; ++d) r[d] = (meas[d] - r[d]) * inv_row_[base + d];
    }
    const ImageGrid update = back_project_views(scratch, *op_, views);
    const auto& inv_col = inv_col_[s];
    for (std::size_t j = 0; j < x.size(); ++j) {
      x[j] += cfg_.relaxation * update[j] * inv_col[j];
      if (cfg_.nonnegativity && x[j] < 0.0) x[j] = 0.0;
    }
  }
}

ImageGrid OsSart::apply(ImageGrid x, const Sinogram& y) const {
  if (x.width() != op_->image_width() || x.height() != op_->image_height())
    throw InvalidArgument("image dimensions do not match the system geometry");
  if (y.n_views() != op_->n_views() || y.n_detectors() != op_->n_detectors())
    throw InvalidArgument("sinogram dimensions do not match the system geometry");
  for (int p = 0; p < cfg_.n_passes; ++p) sweep(x, y);
  return x;
}

ImageGrid os_sart(const ImageGrid& x, const Sinogram& y, const SystemOperator& op,
                  const SartConfig& cfg) {
  return OsSart(op, cfg).apply(x, y);
}

ImageGrid gd_fidelity_step(const ImageGrid& x, const Sinogram& y, const SystemOperator& op,
                           double step) {
  if (step < 0.0) throw InvalidArgument("gradient step must be nonnegative");
  Sinogram r = forward_project(x, op);
  auto rv = r.values();
  const auto yv = y.values();
  if (rv.size() != yv.size()) throw InvalidArgument("sinogram dimensions do not match");
  for (std::size_t i = 0; i < rv.size(); ++i) rv[i] = yv[i] - rv[i];
  ImageGrid out = x;
  const ImageGrid g = back_project(r, op);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += step * g[j];
  return out;
}

double residual_norm(const ImageGrid& x, const Sinogram& y, const SystemOperator& op) {
  const Sinogram ax = forward_project(x, op);
  const auto a = ax.values();
  const auto b = y.values();
  if (a.size() != b.size()) throw InvalidArgument("sinogram dimensions do not match");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace dprir
