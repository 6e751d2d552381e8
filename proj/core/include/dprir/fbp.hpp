#pragma once

#include <string_view>
#include <vector>

#include "dprir/grid.hpp"
#include "dprir/projector.hpp"

namespace dprir {

enum class FbpFilter { RamLak, Hann };

FbpFilter parse_fbp_filter(std::string_view name);
std::string_view to_string(FbpFilter f);

/// Band-limited ramp kernel for an equiangular detector with angular sampling
/// `pitch`, including the (gamma / sin gamma)^2 fan correction and the factor
/// 1/2 for a 2*pi scan. Index i holds tap n = i - (count - 1).
std::vector<double> fan_ramp_kernel(int n_detectors, double pitch);

/// Pre-weighted, ramp-filtered views, scaled by the detector pitch.
Sinogram fbp_filter_views(const Sinogram& s, const FanBeamGeometry& g,
                          FbpFilter filter = FbpFilter::RamLak);

/// Equiangular fan-beam filtered back-projection over a full 360 degree scan.
///
/// Each view is pre-weighted by dso*cos(gamma), convolved with the fan ramp
/// kernel (FFT, zero-padded to the next power of two >= 2*n_detectors,
/// optionally Hann apodized), then back-projected pixel-by-pixel with weight
/// dbeta / L^2, L being the source-to-pixel distance.
ImageGrid fbp_reconstruct(const Sinogram& s, const FanBeamGeometry& g,
                          FbpFilter filter = FbpFilter::RamLak);

}  // namespace dprir
