#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <sstream>
#include <unistd.h>

#include "cli/cli.hpp"
#include "dprir/image_io.hpp"

using namespace dprir;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args, const std::string& in_bytes, std::string* out_bytes = nullptr) {
  args.insert(args.begin(), "dprir");
  std::istringstream in(in_bytes);
  std::ostringstream out, err;
  const int code = cli::run(args, {in, out, err});
  if (out_bytes) *out_bytes = out.str();
  return code;
}

}  // namespace

TEST_CASE("dpr2 at S = T/5 against dpr1 on the same input") {
  const fs::path dir = fs::temp_directory_path() / ("dprir_timing_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string ph, sino;
  REQUIRE(run({"phantom", "--n", "32"}, "", &ph) == 0);
  REQUIRE(run({"project", "--views", "60"}, ph, &sino) == 0);

  std::vector<std::string> texts;
  for (const char* method : {"dpr1", "dpr2"}) {
    const std::string out = (dir / (std::string(method) + ".img")).string();
    REQUIRE(run({"reconstruct", "--n", "32", "--method", method, "--T", "1000", "--steps", "200",
                 "--set", "schedule.beta1=1e-4", "--set", "schedule.betaT=0.02", "-o", out},
                sino) == 0);
    texts.push_back(read_file(out + ".manifest.json"));
  }
  const double t1 = nlohmann::json::parse(texts[0])["wall_time_s"].get<double>();
  const double t2 = nlohmann::json::parse(texts[1])["wall_time_s"].get<double>();
  MESSAGE("dpr1 " << t1 << " s, dpr2 " << t2 << " s");
  CHECK(t2 < 0.25 * t1);

  // ratio column against S/T = 0.2, within 30%
  std::istringstream csv(cli::timing_report(texts));
  std::string line, dpr2;
  while (std::getline(csv, line))
    if (line.rfind("dpr2,", 0) == 0) dpr2 = line;
  const double ratio = std::stod(dpr2.substr(dpr2.rfind(',') + 1));
  CHECK(ratio == doctest::Approx(0.2).epsilon(0.3));
  fs::remove_all(dir);
}
