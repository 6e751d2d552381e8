#include "dprir/dpr.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "dprir/error.hpp"

namespace dprir {

Variant parse_variant(std::string_view name) {
  if (name == "dpr1") return Variant::I;
  if (name == "dpr2") return Variant::II;
  if (name == "dpr3") return Variant::III;
  if (name == "dpr4") return Variant::IV;
  if (name == "dpr5") return Variant::V;
  if (name == "mcg-gd") return Variant::McgGd;
  throw InvalidArgument("unknown DPR variant: " + std::string(name));
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::I: return "dpr1";
    case Variant::II: return "dpr2";
    case Variant::III: return "dpr3";
    case Variant::IV: return "dpr4";
    case Variant::V: return "dpr5";
    case Variant::McgGd: return "mcg-gd";
  }
  return "?";
}

bool uses_subsequence(Variant v) noexcept {
  return v == Variant::II || v == Variant::III || v == Variant::IV || v == Variant::V;
}

NoiseSource::NoiseSource(std::uint64_t seed, std::uint64_t run_id, int width, int height,
                         double pixel_size)
    : init_(make_stream(seed, "init-noise", run_id)),
      step_(make_stream(seed, "step-noise", run_id)),
      width_(width),
      height_(height),
      pixel_size_(pixel_size) {}

ImageGrid NoiseSource::initial() { return standard_normal_image(width_, height_, pixel_size_, init_); }
ImageGrid NoiseSource::step() { return standard_normal_image(width_, height_, pixel_size_, step_); }

double nesterov_eta(double eta) {
  if (!(eta >= 1.0)) throw InvalidArgument("momentum parameter must be >= 1");
  return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * eta * eta));
}

namespace {

// Shared per-run state: normalized measurements, the fidelity operator and
// the noise streams.
class Run {
 public:
  Run(const DprProblem& p, const DprConfig& cfg)
      : p_(p),
        cfg_(cfg),
        y_(normalized(p.y, cfg.intensity_scale)),
        noise_(cfg.seed, cfg.run_id, p.op.image_width(), p.op.image_height(), p.op.pixel_size()) {
    if (cfg.variant != Variant::McgGd) sart_.emplace(p.op, cfg.sart);
    if (cfg.variant == Variant::McgGd && cfg.gd_step < 0.0)
      throw InvalidArgument("gradient step must be nonnegative");
  }

  ImageGrid initial() { return noise_.initial(); }
  ImageGrid noise_for(int t_to) { return t_to > 0 ? noise_.step() : noise_.zero(); }

  ImageGrid condition(const ImageGrid& x) const {
    if (sart_) return sart_->apply(x, y_);
    return gd_fidelity_step(x, y_, p_.op, cfg_.gd_step);
  }

  ImageGrid eps(const ImageGrid& x, int t) const { return p_.model.predict(x, t, p_.sched); }

  ImageGrid finish(ImageGrid x) const {
    x *= cfg_.intensity_scale;
    return x;
  }

 private:
  static Sinogram normalized(const Sinogram& y, double scale) {
    if (!(scale > 0.0)) throw InvalidArgument("intensity scale must be positive");
    Sinogram out = y;
    for (double& v : out.values()) v /= scale;
    return out;
  }

  const DprProblem& p_;
  const DprConfig& cfg_;
  Sinogram y_;
  std::optional<OsSart> sart_;
  NoiseSource noise_;
};

void check_finite(const ImageGrid& x, int t) {
  if (!x.all_finite())
    throw NumericalFailure("non-finite iterate at timestep " + std::to_string(t), t);
}

StepSubsequence subsequence_for(const DprProblem& p, const DprConfig& cfg) {
  if (cfg.steps > p.sched.T()) throw InvalidArgument("steps must not exceed T");
  return make_subsequence(p.sched.T(), cfg.steps);
}

ImageGrid ancestral(const DprProblem& p, const DprConfig& cfg, const StepObserver& obs) {
  Run run(p, cfg);
  ImageGrid x = run.initial();
  for (int t = p.sched.T(); t >= 1; --t) {
    const ImageGrid cond = run.condition(x);
    const ImageGrid z = run.noise_for(t - 1);
    x = ddpm_step(cond, run.eps(cond, t), t, z, p.sched);
    check_finite(x, t);
    if (obs) obs(StepInfo{t, t - 1, cond, x});
  }
  return run.finish(std::move(x));
}

enum class Momentum { None, OnState, OnEstimate, OnEstimateTv };

ImageGrid accelerated(const DprProblem& p, const DprConfig& cfg, Momentum momentum,
                      const StepObserver& obs) {
  const StepSubsequence tau = subsequence_for(p, cfg);
  Run run(p, cfg);
  ImageGrid x = run.initial();
  ImageGrid r = x;                     // momentum point (variant III)
  ImageGrid x_bar_prev = x;            // previous deterministic target (variant III)
  std::optional<ImageGrid> x0_prev;    // previous clean estimate (IV, V)
  double eta = 1.0;

  for (int j = tau.size(); j >= 1; --j) {
    const int t = tau.at(j);
    const int t_to = tau.at(j - 1);
    const double sigma = ddim_sigma(t, t_to, cfg.eta, p.sched);

    const ImageGrid cond = run.condition(momentum == Momentum::OnState ? r : x);
    const ImageGrid eps = run.eps(cond, t);
    const ImageGrid x0 = estimate_x0(cond, eps, t, p.sched);

    ImageGrid anchor = x0;
    if (momentum == Momentum::OnEstimate || momentum == Momentum::OnEstimateTv) {
      const double eta_next = nesterov_eta(eta);
      if (x0_prev) {
        ImageGrid diff = x0 - *x0_prev;
        if (momentum == Momentum::OnEstimateTv) diff = tv_denoise_relative(diff, cfg.tv);
        const double c = (eta - 1.0) / eta_next;
        for (std::size_t i = 0; i < anchor.size(); ++i) anchor[i] += c * diff[i];
      }
      eta = eta_next;
      x0_prev = x0;
    }

    const ImageGrid x_bar = ddim_combine(anchor, eps, t_to, sigma, p.sched);

    if (momentum == Momentum::OnState) {
      const double eta_next = nesterov_eta(eta);
      const double c = (eta - 1.0) / eta_next;
      r = x_bar;
      for (std::size_t i = 0; i < r.size(); ++i) r[i] += c * (x_bar[i] - x_bar_prev[i]);
      eta = eta_next;
      x_bar_prev = x_bar;
    }

    // Noise enters after the momentum combination. Variant III conditions on
    // the noise-free momentum point, so z only reaches its returned state.
    const ImageGrid z = run.noise_for(t_to);
    x = x_bar;
    if (sigma != 0.0) {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += sigma * z[i];
    }
    check_finite(x, t);
    check_finite(r, t);
    if (obs) obs(StepInfo{t, t_to, cond, x});
  }
  return run.finish(std::move(x));
}

}  // namespace

ImageGrid run_dpr_ir_1(const DprProblem& p, const DprConfig& cfg, const StepObserver& obs) {
  DprConfig c = cfg;
  c.variant = Variant::I;
  return ancestral(p, c, obs);
}

ImageGrid run_dpr_ir_2(const DprProblem& p, const DprConfig& cfg, const StepObserver& obs) {
  DprConfig c = cfg;
  c.variant = Variant::II;
  return accelerated(p, c, Momentum::None, obs);
}

ImageGrid run_dpr_ir_3(const DprProblem& p, const DprConfig& cfg, const StepObserver& obs) {
  DprConfig c = cfg;
  c.variant = Variant::III;
  return accelerated(p, c, Momentum::OnState, obs);
}

ImageGrid run_dpr_ir_4(const DprProblem& p, const DprConfig& cfg, const StepObserver& obs) {
  DprConfig c = cfg;
  c.variant = Variant::IV;
  return accelerated(p, c, Momentum::OnEstimate, obs);
}

ImageGrid run_dpr_ir_5(const DprProblem& p, const DprConfig& cfg, const StepObserver& obs) {
  DprConfig c = cfg;
  c.variant = Variant::V;
  return accelerated(p, c, Momentum::OnEstimateTv, obs);
}

ImageGrid run_mcg_gd(const DprProblem& p, const DprConfig& cfg, const StepObserver& obs) {
  DprConfig c = cfg;
  c.variant = Variant::McgGd;
  return ancestral(p, c, obs);
}

ImageGrid run_dpr(const DprProblem& p, const DprConfig& cfg, const StepObserver& obs) {
  switch (cfg.variant) {
    case Variant::I: return run_dpr_ir_1(p, cfg, obs);
    case Variant::II: return run_dpr_ir_2(p, cfg, obs);
    case Variant::III: return run_dpr_ir_3(p, cfg, obs);
    case Variant::IV: return run_dpr_ir_4(p, cfg, obs);
    case Variant::V: return run_dpr_ir_5(p, cfg, obs);
    case Variant::McgGd: return run_mcg_gd(p, cfg, obs);
  }
  throw InvalidArgument("unknown variant");
}

}  // namespace dprir
