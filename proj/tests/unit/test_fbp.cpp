#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dprir/error.hpp"
#include "dprir/fbp.hpp"
#include "dprir/metrics.hpp"
#include "oracles.hpp"

using namespace dprir;

namespace {

// RMSE of the noiseless 128^2, 360-view Shepp-Logan reconstruction, frozen
// from the first validated run (normalized by max of the phantom).
constexpr double kGoldenRmseRamLak = 0.0468;

}  // namespace

TEST_CASE("ramp kernel taps") {
  const double a = 0.01;
  const auto k = fan_ramp_kernel(5, a);
  REQUIRE(k.size() == 9);
  CHECK(k[4] == doctest::Approx(1.0 / (8 * a * a)));
  CHECK(k[6] == 0.0);
  CHECK(k[2] == 0.0);
  for (int n : {1, 3}) {
    const double g = n * a;
    const double expect = -0.5 * std::pow(g / std::sin(g), 2) / (n * n * std::numbers::pi * std::numbers::pi * a * a);
    CHECK(k[4 + n] == doctest::Approx(expect));
    CHECK(k[4 - n] == doctest::Approx(expect));
  }
}

TEST_CASE("FFT filtering equals direct convolution") {
  FanBeamGeometry g = FanBeamGeometry::desk(32, 4);
  const Sinogram s = [&] {
    Sinogram out(g.n_detectors, g.view_angles);
    const ImageGrid r = oracle::random_image(g.n_detectors, 4, 1.0, 4);
    for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = r[i];
    return out;
  }();
  const Sinogram f = fbp_filter_views(s, g, FbpFilter::RamLak);
  const int nd = g.n_detectors;
  const auto k = fan_ramp_kernel(nd, g.det_angular_pitch);
  for (int v = 0; v < 4; ++v)
    for (int d = 0; d < nd; ++d) {
      double acc = 0.0;
      for (int m = 0; m < nd; ++m) acc += s(v, m) * g.dso * std::cos(g.fan_angle(m)) * k[d - m + nd - 1];
      CHECK(f(v, d) == doctest::Approx(acc * g.det_angular_pitch).epsilon(1e-9));
    }
}

TEST_CASE("zero sinogram and linearity") {
  const FanBeamGeometry g = FanBeamGeometry::desk(32, 60);
  const ImageGrid r = fbp_reconstruct(Sinogram(g.n_detectors, g.view_angles), g);
  for (double v : r.values()) CHECK(v == 0.0);
  const ImageGrid x = oracle::random_image(32, 32, g.pixel_size, 8, 0.0, 0.02);
  Sinogram s = forward_project(x, g);
  const ImageGrid r1 = fbp_reconstruct(s, g, FbpFilter::Hann);
  for (double& v : s.values()) v *= 3.0;
  const ImageGrid r3 = fbp_reconstruct(s, g, FbpFilter::Hann);
  for (std::size_t i = 0; i < r1.size(); ++i) CHECK(r3[i] == doctest::Approx(3.0 * r1[i]).epsilon(1e-9).scale(1e-12));
}

TEST_CASE("uniform disk center value") {
  const int n = 128;
  const FanBeamGeometry g = FanBeamGeometry::desk(n, 360);
  const double mu = 0.02;
  const ImageGrid disk = oracle::disk_image(n, g.pixel_size, 100.0, mu);
  const ImageGrid rec = fbp_reconstruct(forward_project(disk, g), g);
  double center = 0.0;
  for (int r = 62; r < 66; ++r)
    for (int c = 62; c < 66; ++c) center += rec.at(c, r) / 16.0;
  CHECK(center == doctest::Approx(mu).epsilon(0.05));
}

TEST_CASE("more views reduce the error on the disk") {
  const int n = 128;
  const double mu = 0.02;
  const FanBeamGeometry g96 = FanBeamGeometry::desk(n, 96);
  const FanBeamGeometry g360 = FanBeamGeometry::desk(n, 360);
  const ImageGrid disk = oracle::disk_image(n, g96.pixel_size, 100.0, mu);
  const double e96 = rmse(fbp_reconstruct(forward_project(disk, g96), g96), disk);
  const double e360 = rmse(fbp_reconstruct(forward_project(disk, g360), g360), disk);
  CHECK(e360 < e96);
}

TEST_CASE("Shepp-Logan reconstruction stays below the golden error") {
  const int n = 128;
  const FanBeamGeometry g = FanBeamGeometry::desk(n, 360);
  const ImageGrid truth = make_shepp_logan(n, g.pixel_size);
  const double e = rmse(fbp_reconstruct(forward_project(truth, g), g), truth);
  MESSAGE("ram-lak rmse " << e);
  CHECK(e <= kGoldenRmseRamLak);
}

TEST_CASE("short scans are rejected") {
  FanBeamGeometry g = FanBeamGeometry::desk(32, 10);
  std::vector<double> half;
  for (int i = 0; i < 10; ++i) half.push_back(i * std::numbers::pi / 10);
  g.view_angles = half;
  CHECK_THROWS_AS(fbp_reconstruct(Sinogram(g.n_detectors, half), g), UnsupportedScanRange);
  CHECK(parse_fbp_filter("hann") == FbpFilter::Hann);
  CHECK(parse_fbp_filter("ram-lak") == FbpFilter::RamLak);
  CHECK_THROWS_AS(parse_fbp_filter("shepp"), InvalidArgument);
}
