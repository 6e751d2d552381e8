#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

#include "dprir/diffusion.hpp"
#include "dprir/fidelity.hpp"
#include "dprir/grid.hpp"
#include "dprir/projector.hpp"
#include "dprir/random.hpp"
#include "dprir/score.hpp"
#include "dprir/tv.hpp"

namespace dprir {

enum class Variant { I, II, III, IV, V, McgGd };

Variant parse_variant(std::string_view name);  // "dpr1".."dpr5", "mcg-gd"
std::string_view to_string(Variant v);
bool uses_subsequence(Variant v) noexcept;

struct DprConfig {
  Variant variant = Variant::I;
  int steps = 200;            // S, subsequence variants only
  double eta = 0.0;           // DDIM sigma interpolation, 0 = deterministic
  SartConfig sart;
  TvConfig tv;
  double gd_step = 0.0;       // MCG-GD only
  double intensity_scale = 1.0;  // diffusion state = image / intensity_scale
  std::uint64_t seed = 0;
  std::uint64_t run_id = 0;
};

/// One reverse step, reported in normalized (diffusion) units.
struct StepInfo {
  int t_from;
  int t_to;
  const ImageGrid& conditioned;  // after the fidelity step
  const ImageGrid& next;         // state entering the next step
};
using StepObserver = std::function<void(const StepInfo&)>;

/// Gaussian draws for a reconstruction run. The initial state comes from the
/// "init-noise" sub-stream and the per-step z from "step-noise", both derived
/// from (seed, run_id). A z is drawn exactly for steps whose target timestep
/// is positive, so variants sharing a step sequence share their noise.
class NoiseSource {
 public:
  NoiseSource(std::uint64_t seed, std::uint64_t run_id, int width, int height, double pixel_size);

  ImageGrid initial();
  ImageGrid step();
  ImageGrid zero() const { return ImageGrid(width_, height_, pixel_size_); }

 private:
  Rng init_, step_;
  int width_, height_;
  double pixel_size_;
};

/// (1 + sqrt(1 + 4 eta^2)) / 2
double nesterov_eta(double eta);

/// Algorithm inputs shared by every driver.
struct DprProblem {
  const Sinogram& y;
  const SystemOperator& op;
  const EpsilonModel& model;
  const VarianceSchedule& sched;
};

/// Ancestral DDPM over all T steps with OS-SART conditioning before each step.
ImageGrid run_dpr_ir_1(const DprProblem& p, const DprConfig& cfg, const StepObserver& obs = {});
/// DDIM over the subsequence with OS-SART conditioning.
ImageGrid run_dpr_ir_2(const DprProblem& p, const DprConfig& cfg, const StepObserver& obs = {});
/// DDIM with Nesterov momentum on the intermediate state; OS-SART acts on the
/// momentum point.
ImageGrid run_dpr_ir_3(const DprProblem& p, const DprConfig& cfg, const StepObserver& obs = {});
/// DDIM with Nesterov momentum on the clean-image estimate.
ImageGrid run_dpr_ir_4(const DprProblem& p, const DprConfig& cfg, const StepObserver& obs = {});
/// As variant IV with the momentum difference passed through the TV prox.
ImageGrid run_dpr_ir_5(const DprProblem& p, const DprConfig& cfg, const StepObserver& obs = {});
/// As variant I with OS-SART replaced by one gradient step of size gd_step.
ImageGrid run_mcg_gd(const DprProblem& p, const DprConfig& cfg, const StepObserver& obs = {});

ImageGrid run_dpr(const DprProblem& p, const DprConfig& cfg, const StepObserver& obs = {});

}  // namespace dprir
