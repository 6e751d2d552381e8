#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <list>
#include <map>
#include <optional>
#include <sstream>
#include <system_error>

#include "config.hpp"
#include "dprir/dpr.hpp"
#include "dprir/error.hpp"
#include "dprir/fbp.hpp"
#include "dprir/fidelity.hpp"
#include "dprir/image_io.hpp"
#include "dprir/metrics.hpp"
#include "dprir/score.hpp"
#include "dprir/simulate.hpp"

namespace dprir::cli {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

/// Missing files, unwritable outputs.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string shortest(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_input(const std::string& path, std::istream& in) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(in), {});
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path);
  return read_file(path);
}

void write_output(const std::string& path, const std::string& bytes, std::ostream& out) {
  if (path == "-") {
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("cannot write to stdout");
    return;
  }
  write_file_atomic(path, bytes);
}

// Shared schema fragments.
std::vector<KeySpec> geometry_keys() {
  return {{"geometry.n", KeyType::Int, "128"}, {"geometry.pixel_size", KeyType::Real, "0"}};
}

std::vector<KeySpec> schedule_keys() {
  return {{"schedule.T", KeyType::Int, "200"},
          {"schedule.beta1", KeyType::Real, "5e-4"},
          {"schedule.betaT", KeyType::Real, "0.1"},
          {"schedule.sigma", KeyType::Text, "sqrt-beta"}};
}

std::vector<KeySpec> joined(std::initializer_list<std::vector<KeySpec>> parts) {
  std::vector<KeySpec> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

/// Wires --config, --set and the dedicated flags into a Config. Flags are
/// applied after parsing, so they beat both the file and --set.
class ConfigOptions {
 public:
  ConfigOptions(CLI::App* cmd, std::vector<KeySpec> schema) : schema_(std::move(schema)) {
    cmd->add_option("--config", file_, "flat section.key = value file");
    cmd->add_option("--set", sets_, "override, section.key=value")->take_all();
  }

  /// Binds `flag` to `key`; the flag text is stored unchanged.
  void flag(CLI::App* cmd, const std::string& flag, const std::string& key, const std::string& help) {
    auto& slot = flags_.emplace_back(key, std::string{});
    cmd->add_option(flag, slot.second, help);
  }

  Config build(std::istream& in) const {
    Config c(schema_);
    if (!file_.empty()) c.merge_text(read_input(file_, in), file_);
    for (const std::string& s : sets_) c.merge_assignment(s);
    for (const auto& [key, value] : flags_)
      if (!value.empty()) c.set(key, value);
    return c;
  }

 private:
  std::vector<KeySpec> schema_;
  std::string file_;
  std::vector<std::string> sets_;
  std::list<std::pair<std::string, std::string>> flags_;
};

FanBeamGeometry geometry_for(const Config& c, int n_views) {
  const long long n = c.integer("geometry.n");
  if (n < 2 || n > 4096) throw UsageError("geometry.n must be in [2, 4096]");
  FanBeamGeometry g = FanBeamGeometry::desk(static_cast<int>(n), n_views);
  if (const double px = c.real("geometry.pixel_size"); px > 0.0) g.pixel_size = px;
  return g;
}

VarianceSchedule schedule_for(const Config& c) {
  const long long T = c.integer("schedule.T");
  if (T < 1 || T > 100000) throw UsageError("schedule.T must be in [1, 100000]");
  return make_linear_schedule(static_cast<int>(T), c.real("schedule.beta1"), c.real("schedule.betaT"),
                              parse_sigma_choice(c.text("schedule.sigma")));
}

std::vector<ImageGrid> normalized_ensemble(int n, double px, int count, std::uint64_t seed) {
  std::vector<ImageGrid> set = make_phantom_ensemble(n, px, count, seed);
  for (ImageGrid& img : set) img *= 1.0 / kWaterAttenuation;
  return set;
}

void maybe_write_pgm(const std::string& path, const ImageGrid& img, const Config& c) {
  if (path.empty()) return;
  const auto gray = window_display(img, c.real("display.lo_hu"), c.real("display.hi_hu"));
  std::ostringstream os;
  write_pgm(os, img.width(), img.height(), gray);
  write_file_atomic(path, os.str());
}

std::vector<KeySpec> display_keys() {
  return {{"display.lo_hu", KeyType::Real, "-1000"}, {"display.hi_hu", KeyType::Real, "1000"}};
}

// ---------------------------------------------------------------------------

struct Command {
  CLI::App* app;
  std::function<int()> action;
};

Command add_phantom(CLI::App& root, Streams io) {
  auto* cmd = root.add_subcommand("phantom", "rasterize a Shepp-Logan phantom");
  auto opts = std::make_shared<ConfigOptions>(
      cmd, joined({geometry_keys(), display_keys(),
                   {{"phantom.kind", KeyType::Text, "shepp-logan"},
                    {"phantom.index", KeyType::Int, "0"},
                    {"phantom.ensemble_seed", KeyType::Int, "7"}}}));
  opts->flag(cmd, "--n", "geometry.n", "image size in pixels");
  opts->flag(cmd, "--kind", "phantom.kind", "shepp-logan or ensemble");
  auto output = std::make_shared<std::string>("-");
  auto pgm = std::make_shared<std::string>();
  cmd->add_option("-o,--output", *output, "image file or -");
  cmd->add_option("--pgm", *pgm, "also write a windowed PGM");
  return {cmd, [=] {
            const Config c = opts->build(io.in);
            const FanBeamGeometry g = geometry_for(c, 1);
            const int n = g.image_width;
            ImageGrid img;
            if (c.text("phantom.kind") == "shepp-logan") {
              img = make_shepp_logan(n, g.pixel_size);
            } else if (c.text("phantom.kind") == "ensemble") {
              const long long idx = c.integer("phantom.index");
              if (idx < 0 || idx > 100000) throw UsageError("phantom.index out of range");
              img = make_phantom_ensemble(n, g.pixel_size, static_cast<int>(idx) + 1,
                                          c.u64("phantom.ensemble_seed"))
                        .back();
            } else {
              throw UsageError("unknown phantom.kind: " + c.text("phantom.kind"));
            }
            write_output(*output, encode_image(img), io.out);
            maybe_write_pgm(*pgm, img, c);
            return kOk;
          }};
}

Command add_project(CLI::App& root, Streams io) {
  auto* cmd = root.add_subcommand("project", "noiseless fan-beam line integrals of an image");
  auto opts = std::make_shared<ConfigOptions>(cmd, joined({geometry_keys(), {{"geometry.views", KeyType::Int, "360"}}}));
  opts->flag(cmd, "--views", "geometry.views", "number of views over 360 degrees");
  auto input = std::make_shared<std::string>("-");
  auto output = std::make_shared<std::string>("-");
  cmd->add_option("input", *input, "image file or -");
  cmd->add_option("-o,--output", *output, "sinogram file or -");
  return {cmd, [=] {
            Config c = opts->build(io.in);
            const ImageGrid img = decode_image(read_input(*input, io.in));
            if (img.width() != img.height()) throw UsageError("only square images are supported");
            c.set("geometry.n", std::to_string(img.width()));
            const long long views = c.integer("geometry.views");
            if (views < 1 || views > 100000) throw UsageError("geometry.views out of range");
            FanBeamGeometry g = geometry_for(c, static_cast<int>(views));
            g.pixel_size = img.pixel_size();
            write_output(*output, encode_sinogram(forward_project(img, g)), io.out);
            return kOk;
          }};
}

Command add_simulate(CLI::App& root, Streams io) {
  auto* cmd = root.add_subcommand("simulate", "Poisson plus electronic noise on a sinogram");
  auto opts = std::make_shared<ConfigOptions>(cmd, std::vector<KeySpec>{{"noise.i0", KeyType::Real, "1e6"},
                                                                        {"noise.sigma_e2", KeyType::Real, "10"},
                                                                        {"noise.seed", KeyType::Int, "0"},
                                                                        {"noise.views", KeyType::Int, "0"}});
  opts->flag(cmd, "--i0", "noise.i0", "incident photons per ray");
  opts->flag(cmd, "--sigma-e2", "noise.sigma_e2", "electronic noise variance");
  opts->flag(cmd, "--seed", "noise.seed", "measurement-noise seed");
  opts->flag(cmd, "--views", "noise.views", "keep this many uniformly spaced views (0 = all)");
  auto input = std::make_shared<std::string>("-");
  auto output = std::make_shared<std::string>("-");
  cmd->add_option("input", *input, "sinogram file or -");
  cmd->add_option("-o,--output", *output, "sinogram file or -");
  return {cmd, [=] {
            const Config c = opts->build(io.in);
            Sinogram s = decode_sinogram(read_input(*input, io.in));
            if (const long long v = c.integer("noise.views"); v != 0) {
              if (v < 0 || v > s.n_views()) throw UsageError("noise.views out of range");
              s = downsample_views(s, static_cast<int>(v));
            }
            NoiseConfig nc{c.real("noise.i0"), c.real("noise.sigma_e2"), c.u64("noise.seed")};
            write_output(*output, encode_sinogram(add_ct_noise(s, nc)), io.out);
            return kOk;
          }};
}

// --- reconstruct -------------------------------------------------------------

std::vector<KeySpec> reconstruct_schema() {
  return joined({geometry_keys(), schedule_keys(), display_keys(),
                 {{"method.name", KeyType::Text, "fbp"},
                  {"fbp.filter", KeyType::Text, "ram-lak"},
                  {"sart.subsets", KeyType::Int, "24"},
                  {"sart.passes", KeyType::Int, "2"},
                  {"sart.relaxation", KeyType::Real, "1"},
                  {"sart.nonnegativity", KeyType::Bool, "true"},
                  {"sart.iterations", KeyType::Int, "20"},
                  {"tv.weight_rel", KeyType::Real, "0.1"},
                  {"tv.iters", KeyType::Int, "50"},
                  {"dpr.steps", KeyType::Int, "40"},
                  {"dpr.eta", KeyType::Real, "0"},
                  {"dpr.gd_step", KeyType::Real, "0"},
                  {"dpr.intensity_scale", KeyType::Real, shortest(kWaterAttenuation)},
                  {"model.path", KeyType::Text, ""},
                  {"model.ensemble_count", KeyType::Int, "200"},
                  {"model.ensemble_seed", KeyType::Int, "7"},
                  {"run.seed", KeyType::Int, "0"},
                  {"run.id", KeyType::Int, "0"},
                  {"output.residuals", KeyType::Bool, "true"}}});
}

SartConfig sart_for(const Config& c) {
  SartConfig s;
  s.n_subsets = static_cast<int>(c.integer("sart.subsets"));
  s.n_passes = static_cast<int>(c.integer("sart.passes"));
  s.relaxation = c.real("sart.relaxation");
  s.nonnegativity = c.boolean("sart.nonnegativity");
  s.validate();
  return s;
}

struct RunRecord {
  std::string method;
  int steps = 0;
  json residuals = json::array();
  double wall = 0.0;
  double setup = 0.0;
  std::string status = "ok";
  int failed_timestep = -1;
  std::string error;
  std::string output_hash;
};

void write_manifest(const std::string& path, const Config& c, const RunRecord& r,
                    const std::string& input, const std::string& output) {
  json m;
  m["command"] = "reconstruct";
  m["method"] = r.method;
  m["config"] = c.values();
  m["config_hash"] = c.hash();
  m["seed"] = c.u64("run.seed");
  m["run_id"] = c.u64("run.id");
  m["input"] = input;
  m["output"] = output;
  m["output_hash"] = r.output_hash;
  m["steps"] = r.steps;
  m["residuals"] = r.residuals;
  m["setup_time_s"] = r.setup;
  m["wall_time_s"] = r.wall;
  m["status"] = r.status;
  if (r.failed_timestep >= 0) m["failed_timestep"] = r.failed_timestep;
  if (!r.error.empty()) m["error"] = r.error;
  write_file_atomic(path, m.dump(2) + "\n");
}

Command add_reconstruct(CLI::App& root, Streams io) {
  auto* cmd = root.add_subcommand("reconstruct", "reconstruct an image from a sinogram");
  auto opts = std::make_shared<ConfigOptions>(cmd, reconstruct_schema());
  opts->flag(cmd, "--method", "method.name", "fbp, sart, mcg-gd, dpr1 .. dpr5");
  opts->flag(cmd, "--steps", "dpr.steps", "subsequence length S (dpr2 .. dpr5)");
  opts->flag(cmd, "--eta", "dpr.eta", "DDIM noise interpolation");
  opts->flag(cmd, "--T", "schedule.T", "diffusion steps");
  opts->flag(cmd, "--n", "geometry.n", "image size in pixels");
  opts->flag(cmd, "--seed", "run.seed", "run seed");
  opts->flag(cmd, "--model", "model.path", "weights file (default: Gaussian prior fit to the phantom ensemble)");
  opts->flag(cmd, "--filter", "fbp.filter", "ram-lak or hann");
  auto input = std::make_shared<std::string>("-");
  auto output = std::make_shared<std::string>("-");
  auto manifest = std::make_shared<std::string>();
  auto pgm = std::make_shared<std::string>();
  cmd->add_option("input", *input, "sinogram file or -");
  cmd->add_option("-o,--output", *output, "image file or -");
  cmd->add_option("--manifest", *manifest, "run manifest path (default <output>.manifest.json)");
  cmd->add_option("--pgm", *pgm, "also write a windowed PGM");
  return {cmd, [=] {
            const Config c = opts->build(io.in);
            const std::string method = c.text("method.name");
            const bool is_fbp = method == "fbp", is_sart = method == "sart";
            const bool is_dpr = !is_fbp && !is_sart;
            std::optional<Variant> variant;
            if (is_dpr) variant = parse_variant(method);
            std::optional<FbpFilter> filter;
            if (is_fbp) filter = parse_fbp_filter(c.text("fbp.filter"));
            const SartConfig sart = sart_for(c);
            std::optional<VarianceSchedule> sched;
            if (is_dpr) sched = schedule_for(c);
            if (!c.text("model.path").empty() && !std::filesystem::exists(c.text("model.path")))
              throw IoError("no such model file: " + c.text("model.path"));
            const std::string manifest_path =
                !manifest->empty() ? *manifest
                : *output == "-"   ? std::string("reconstruct.manifest.json")
                                   : *output + ".manifest.json";

            const Sinogram y = decode_sinogram(read_input(*input, io.in));
            const auto t_setup = Clock::now();
            FanBeamGeometry g = geometry_for(c, y.n_views());
            g.view_angles.assign(y.angles().begin(), y.angles().end());
            if (g.n_detectors != y.n_detectors())
              throw UsageError("sinogram has " + std::to_string(y.n_detectors()) +
                               " detectors but a " + std::to_string(g.image_width) +
                               "-pixel geometry has " + std::to_string(g.n_detectors) + "; check --n");
            const FanBeamProjector op(g);

            std::unique_ptr<EpsilonModel> model;
            if (is_dpr) {
              if (!c.text("model.path").empty()) {
                model = load_weights(c.text("model.path"));
              } else {
                const long long count = c.integer("model.ensemble_count");
                if (count < 2 || count > 100000) throw UsageError("model.ensemble_count out of range");
                model = std::make_unique<GaussianAnalyticModel>(fit_gaussian_prior(normalized_ensemble(
                    g.image_width, g.pixel_size, static_cast<int>(count), c.u64("model.ensemble_seed"))));
              }
            }

            RunRecord rec;
            rec.method = method;
            const auto t0 = Clock::now();
            rec.setup = std::chrono::duration<double>(t0 - t_setup).count();
            ImageGrid x;
            try {
              if (is_fbp) {
                rec.steps = 1;
                x = fbp_reconstruct(y, g, *filter);
              } else if (is_sart) {
                const long long iters = c.integer("sart.iterations");
                if (iters < 1 || iters > 100000) throw UsageError("sart.iterations out of range");
                SartConfig one = sart;
                one.n_passes = 1;
                const OsSart solver(op, one);
                x = ImageGrid(g.image_width, g.image_height, g.pixel_size);
                for (long long k = 0; k < iters; ++k) {
                  solver.sweep(x, y);
                  if (!x.all_finite()) throw NumericalFailure("non-finite iterate", static_cast<int>(k + 1));
                  if (c.boolean("output.residuals"))
                    rec.residuals.push_back({{"iteration", k + 1}, {"residual", residual_norm(x, y, op)}});
                }
                rec.steps = static_cast<int>(iters);
              } else {
                DprConfig dc;
                dc.variant = *variant;
                dc.steps = static_cast<int>(c.integer("dpr.steps"));
                dc.eta = c.real("dpr.eta");
                dc.sart = sart;
                dc.tv.weight_rel = c.real("tv.weight_rel");
                dc.tv.iters = static_cast<int>(c.integer("tv.iters"));
                dc.intensity_scale = c.real("dpr.intensity_scale");
                dc.seed = c.u64("run.seed");
                dc.run_id = c.u64("run.id");
                dc.gd_step = c.real("dpr.gd_step");
                if (dc.variant == Variant::McgGd && dc.gd_step == 0.0) dc.gd_step = 1.0 / operator_norm_sq(op);
                rec.steps = uses_subsequence(dc.variant) ? dc.steps : sched->T();
                Sinogram y_scaled = y;
                if (dc.intensity_scale > 0.0)
                  for (double& v : y_scaled.values()) v /= dc.intensity_scale;
                const bool track = c.boolean("output.residuals");
                const StepObserver obs = [&](const StepInfo& s) {
                  if (track)
                    rec.residuals.push_back({{"t", s.t_from}, {"residual", residual_norm(s.conditioned, y_scaled, op)}});
                };
                x = run_dpr(DprProblem{y, op, *model, *sched}, dc, obs);
              }
            } catch (const NumericalFailure& e) {
              rec.wall = std::chrono::duration<double>(Clock::now() - t0).count();
              rec.status = "numerical-failure";
              rec.failed_timestep = e.timestep();
              rec.error = e.what();
              write_manifest(manifest_path, c, rec, *input, *output);
              io.err << "numerical failure at timestep " << e.timestep() << ": " << e.what() << '\n';
              return static_cast<int>(kNumerical);
            }
            rec.wall = std::chrono::duration<double>(Clock::now() - t0).count();
            const std::string bytes = encode_image(x);
            rec.output_hash = hex64(fnv1a64(bytes));
            write_output(*output, bytes, io.out);
            maybe_write_pgm(*pgm, x, c);
            write_manifest(manifest_path, c, rec, *input, *output);
            return static_cast<int>(kOk);
          }};
}

// --- small commands ------------------------------------------------------------

Command add_metrics(CLI::App& root, Streams io) {
  auto* cmd = root.add_subcommand("metrics", "PSNR, SSIM and RMSE of an image against a reference");
  auto a = std::make_shared<std::string>();
  auto b = std::make_shared<std::string>();
  auto range = std::make_shared<double>(0.0);
  auto csv = std::make_shared<bool>(false);
  cmd->add_option("image", *a, "image under test")->required();
  cmd->add_option("reference", *b, "reference image")->required();
  cmd->add_option("--range", *range, "dynamic range (default: max of the reference)");
  cmd->add_flag("--csv", *csv, "CSV with a header row");
  return {cmd, [=] {
            if (*a == "-" && *b == "-") throw UsageError("only one input may come from stdin");
            const ImageGrid x = decode_image(read_input(*a, io.in));
            const ImageGrid ref = decode_image(read_input(*b, io.in));
            const double r = *range > 0.0 ? *range : default_range(ref);
            const double p = psnr(x, ref, r), s = ssim(x, ref, r), e = rmse(x, ref, r);
            if (*csv) {
              io.out << "psnr_db,ssim,rmse\n" << shortest(p) << ',' << shortest(s) << ',' << shortest(e) << '\n';
            } else {
              io.out << "psnr_db " << shortest(p) << "\nssim " << shortest(s) << "\nrmse " << shortest(e) << '\n';
            }
            return kOk;
          }};
}

Command add_train_affine(CLI::App& root, Streams io) {
  auto* cmd = root.add_subcommand("train-affine", "fit the per-pixel affine noise predictor on phantoms");
  auto opts = std::make_shared<ConfigOptions>(
      cmd, joined({geometry_keys(), schedule_keys(),
                   {{"affine.bins", KeyType::Int, "20"},
                    {"affine.samples", KeyType::Int, "2000"},
                    {"affine.ensemble_count", KeyType::Int, "200"},
                    {"affine.ensemble_seed", KeyType::Int, "7"},
                    {"run.seed", KeyType::Int, "0"}}}));
  opts->flag(cmd, "--n", "geometry.n", "image size in pixels");
  opts->flag(cmd, "--bins", "affine.bins", "time bins");
  opts->flag(cmd, "--samples", "affine.samples", "training pairs per bin");
  opts->flag(cmd, "--seed", "run.seed", "training seed");
  auto output = std::make_shared<std::string>("-");
  cmd->add_option("-o,--output", *output, "weights file or -");
  return {cmd, [=] {
            const Config c = opts->build(io.in);
            const FanBeamGeometry g = geometry_for(c, 1);
            const VarianceSchedule sched = schedule_for(c);
            const long long count = c.integer("affine.ensemble_count");
            const long long bins = c.integer("affine.bins");
            const long long samples = c.integer("affine.samples");
            if (count < 1 || count > 100000) throw UsageError("affine.ensemble_count out of range");
            if (bins < 1 || bins > sched.T()) throw UsageError("affine.bins must be in [1, T]");
            if (samples < 2 || samples > 10000000) throw UsageError("affine.samples out of range");
            const auto data = normalized_ensemble(g.image_width, g.pixel_size, static_cast<int>(count),
                                                  c.u64("affine.ensemble_seed"));
            const AffineModel m = train_affine(data, sched, static_cast<int>(bins),
                                               static_cast<int>(samples), c.u64("run.seed"));
            std::ostringstream os;
            save_affine(os, m);
            write_output(*output, os.str(), io.out);
            return kOk;
          }};
}

Command add_schedule_dump(CLI::App& root, Streams io) {
  auto* cmd = root.add_subcommand("schedule-dump", "print the variance schedule as CSV");
  auto opts = std::make_shared<ConfigOptions>(cmd, schedule_keys());
  opts->flag(cmd, "--T", "schedule.T", "diffusion steps");
  opts->flag(cmd, "--beta1", "schedule.beta1", "first beta");
  opts->flag(cmd, "--betaT", "schedule.betaT", "last beta");
  opts->flag(cmd, "--sigma", "schedule.sigma", "sqrt-beta or posterior");
  return {cmd, [=] {
            const VarianceSchedule s = schedule_for(opts->build(io.in));
            std::ostringstream os;
            os << "t,beta,alpha_bar,sigma\n";
            for (int t = 1; t <= s.T(); ++t)
              os << t << ',' << shortest(s.beta(t)) << ',' << shortest(s.alpha_bar(t)) << ','
                 << shortest(s.sigma(t)) << '\n';
            io.out << os.str();
            return kOk;
          }};
}

Command add_timing_report(CLI::App& root, Streams io) {
  auto* cmd = root.add_subcommand("timing-report", "per-method mean wall time over run manifests");
  auto files = std::make_shared<std::vector<std::string>>();
  cmd->add_option("manifests", *files, "manifest files")->required();
  return {cmd, [=] {
            std::vector<std::string> texts;
            for (const std::string& f : *files) texts.push_back(read_input(f, io.in));
            io.out << timing_report(texts);
            return kOk;
          }};
}

}  // namespace

std::string timing_report(const std::vector<std::string>& manifest_texts) {
  if (manifest_texts.empty()) throw UsageError("timing-report needs at least one manifest");
  struct Acc {
    int runs = 0;
    double wall = 0.0, steps = 0.0;
  };
  std::map<std::string, Acc> by_method;
  for (const std::string& text : manifest_texts) {
    json m;
    try {
      m = json::parse(text);
      Acc& a = by_method[m.at("method").get<std::string>()];
      ++a.runs;
      a.wall += m.at("wall_time_s").get<double>();
      a.steps += m.at("steps").get<double>();
    } catch (const json::exception& e) {
      throw FormatError(std::string("bad manifest: ") + e.what());
    }
  }
  std::optional<double> base;
  if (auto it = by_method.find("dpr1"); it != by_method.end()) base = it->second.wall / it->second.runs;
  std::ostringstream os;
  os << "method,runs,mean_wall_time_s,mean_steps,ratio_to_dpr1\n";
  for (const auto& [method, a] : by_method) {
    const double mean = a.wall / a.runs;
    os << method << ',' << a.runs << ',' << shortest(mean) << ',' << shortest(a.steps / a.runs) << ',';
    if (base && *base > 0.0) os << shortest(mean / *base);
    os << '\n';
  }
  return os.str();
}

int run(const std::vector<std::string>& args, Streams io) {
  CLI::App app{"diffusion-prior CT reconstruction toolkit", args.empty() ? "dprir" : args.front()};
  app.require_subcommand(1);
  std::vector<Command> cmds{add_phantom(app, io),     add_project(app, io),
                            add_simulate(app, io),    add_reconstruct(app, io),
                            add_metrics(app, io),     add_train_affine(app, io),
                            add_schedule_dump(app, io), add_timing_report(app, io)};
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? kOk : kUsage;
  }
  try {
    for (const Command& c : cmds)
      if (c.app->parsed()) return c.action();
    return kUsage;
  } catch (const UsageError& e) {
    io.err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidArgument& e) {
    io.err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DegenerateGeometry& e) {
    io.err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedScanRange& e) {
    io.err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    io.err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const FormatError& e) {
    io.err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::system_error& e) {
    io.err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericalFailure& e) {
    io.err << "numerical failure at timestep " << e.timestep() << ": " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace dprir::cli
