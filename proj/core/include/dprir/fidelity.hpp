#pragma once

#include <vector>

#include "dprir/grid.hpp"
#include "dprir/projector.hpp"

namespace dprir {

/// Ordered list of disjoint, nonempty view subsets covering every view.
struct SubsetPartition {
  std::vector<std::vector<int>> subsets;

  std::size_t size() const noexcept { return subsets.size(); }
};

/// Interleaved partition: subset k = {k, k+n_subsets, k+2*n_subsets, ...}.
SubsetPartition make_subsets(int n_views, int n_subsets);

struct SartConfig {
  int n_subsets = 10;
  double relaxation = 1.0;  // lambda, in (0, 2)
  int n_passes = 1;         // full sweeps per call
  bool nonnegativity = true;

  void validate() const;
};

/// Normalizers below this receive no update.
inline constexpr double kNormalizerFloor = 1e-12;

/// OS-SART with row/column normalizers precomputed for one system operator.
///
/// Per subset S, in order:
///   x <- x + lambda * D_col(S)^-1 A_S^T [ D_row^-1 (y_S - A_S x) ]
/// where D_row holds per-ray sums of A and D_col(S) holds A_S^T 1.
/// More subsets than views are clamped to one view per subset.
class OsSart {
 public:
  OsSart(const SystemOperator& op, SartConfig cfg);

  const SartConfig& config() const noexcept { return cfg_; }
  const SubsetPartition& partition() const noexcept { return partition_; }

  ImageGrid apply(ImageGrid x, const Sinogram& y) const;
  /// One sweep over the subsets, no repetition.
  void sweep(ImageGrid& x, const Sinogram& y) const;

 private:
  const SystemOperator* op_;
  SartConfig cfg_;
  SubsetPartition partition_;
  std::vector<double> inv_row_;               // per ray, 0 where guarded
  std::vector<std::vector<double>> inv_col_;  // per subset, per pixel
};

ImageGrid os_sart(const ImageGrid& x, const Sinogram& y, const SystemOperator& op,
                  const SartConfig& cfg);

/// x + step * A^T (y - A x)
ImageGrid gd_fidelity_step(const ImageGrid& x, const Sinogram& y, const SystemOperator& op,
                           double step);

/// ||A x - y||_2
double residual_norm(const ImageGrid& x, const Sinogram& y, const SystemOperator& op);

}  // namespace dprir
