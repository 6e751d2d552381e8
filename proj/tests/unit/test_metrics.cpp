#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "dprir/error.hpp"
#include "dprir/metrics.hpp"
#include "oracles.hpp"

using namespace dprir;

TEST_CASE("rmse") {
  const ImageGrid ref = oracle::random_image(4, 4, 1.0, 1);
  CHECK(rmse(ref, ref) == 0.0);
  CHECK(rmse(ImageGrid::filled(3, 3, 1.0, 0.1), ImageGrid(3, 3, 1.0), 1.0) == doctest::Approx(0.1));
  const ImageGrid x = oracle::random_image(4, 4, 1.0, 2);
  double s = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) s += std::pow(x.at(c, r) - ref.at(c, r), 2);
  double mx = 0;
  for (double v : ref.values()) mx = std::max(mx, v);
  CHECK(rmse(x, ref) == doctest::Approx(std::sqrt(s / 16) / mx));
  CHECK_THROWS_AS(rmse(x, ImageGrid(3, 4, 1.0)), InvalidArgument);
  CHECK_THROWS_AS(rmse(x, ImageGrid(4, 4, 1.0)), InvalidArgument);
}

TEST_CASE("psnr") {
  const ImageGrid ref(10, 10, 1.0);
  ImageGrid x = ImageGrid::filled(10, 10, 1.0, 0.01);
  CHECK(psnr(x, ref, 1.0) == doctest::Approx(40.0));
  CHECK(psnr(ImageGrid::filled(10, 10, 1.0, 0.1), ref, 1.0) == doctest::Approx(20.0));
  CHECK(psnr(ref, ref, 1.0) == std::numeric_limits<double>::infinity());
  double prev = std::numeric_limits<double>::infinity();
  for (double off : {0.01, 0.02, 0.05, 0.1}) {
    const double p = psnr(ImageGrid::filled(10, 10, 1.0, off), ref, 1.0);
    CHECK(p < prev);
    prev = p;
  }
  CHECK_THROWS_AS(psnr(x, ref, 0.0), InvalidArgument);
}

TEST_CASE("ssim") {
  const ImageGrid a = oracle::random_image(16, 16, 1.0, 3);
  const ImageGrid b = oracle::random_image(16, 16, 1.0, 4);
  CHECK(ssim(a, a, 1.0) == 1.0);
  CHECK(std::abs(ssim(a, b, 1.0) - oracle::ssim_bruteforce(a, b, 1.0)) <= 1e-10);
  CHECK(ssim(a, b, 1.0) == ssim(b, a, 1.0));
  const ImageGrid big = oracle::random_image(23, 19, 1.0, 5);
  const ImageGrid big2 = lincomb(0.8, big, 0.1, oracle::random_image(23, 19, 1.0, 6));
  CHECK(std::abs(ssim(big2, big, 2.0) - oracle::ssim_bruteforce(big2, big, 2.0)) <= 1e-10);

  const ImageGrid ref = make_shepp_logan(64, 1.0, 1.0);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  double prev = 1.0;
  for (double sd : {0.05, 0.2, 0.8}) {
    ImageGrid x = ref;
    for (double& v : x.values()) v += sd * n01(rng);
    const double s = ssim(x, ref, 1.0);
    CHECK(s < prev);
    CHECK(s >= -1.0);
    prev = s;
  }
  CHECK_THROWS_AS(ssim(ImageGrid(10, 12, 1.0), ImageGrid(10, 12, 1.0), 1.0), InvalidArgument);
}

TEST_CASE("default range") {
  CHECK(default_range(ImageGrid(2, 1, 1.0, {0.5, 2.0})) == 2.0);
  CHECK_THROWS_AS(default_range(ImageGrid(2, 1, 1.0, {-0.5, 0.0})), InvalidArgument);
}
