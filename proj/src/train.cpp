#include "hm/train.hpp"

#include "hm/check.hpp"
#include "hm/metrics.hpp"
#include "hm/numeric.hpp"

namespace helmholtz {

std::string to_string(UpdateRule rule) {
  return rule == UpdateRule::exact_gradient ? "exact_gradient" : "sign_delta";
}

UpdateRule update_rule_from_string(const std::string& name) {
  if (name == "exact_gradient") return UpdateRule::exact_gradient;
  if (name == "sign_delta") return UpdateRule::sign_delta;
  throw Error("unknown update rule: " + name +
              " (expected exact_gradient or sign_delta)");
}

void TrainConfig::validate() const {
  // γ = 0 is allowed: it turns training into a pure evaluation pass.
  HM_CHECK_MSG(learning_rate >= 0.0, "learning_rate must be non-negative");
  HM_CHECK_MSG(stage1_iterations >= 0, "stage1_iterations must be ≥ 0");
  HM_CHECK_MSG(eval_samples >= 1, "eval_samples must be ≥ 1");
  HM_CHECK_MSG(trace_interval >= 1, "trace_interval must be ≥ 1");
}

Delta generative_delta(double s_parent, double s_target, double p_target,
                       UpdateRule rule) {
  // Inclusive bounds: σ rounds to exactly 0 or 1 past |a| ≈ 37, and the error
  // terms below are still well-defined there; rejecting would abort long runs.
  HM_CHECK_MSG(p_target >= 0.0 && p_target <= 1.0, "probability must be in [0,1]");
  const double err = rule == UpdateRule::exact_gradient
                         ? (1.0 + s_target) / 2.0 - p_target
                         : s_target - p_target;
  return {-s_parent * err, -err};
}

CompleteState wake_step(GenerativeParams* gen, const RecognitionParams& rec,
                        const NetworkShape& shape, const Pattern& data,
                        double gamma, UpdateRule rule, Rng& rng) {
  const CompleteState s = recognition_pass(rec, shape, data.signs(), rng);
  const std::vector<Vec> probs = clamped_generative_probabilities(*gen, shape, s);
  const int M = shape.layers();
  for (int m = 0; m + 1 < M; ++m) {
    const auto um = static_cast<std::size_t>(m);
    Mat& w = gen->w[um];
    const Vec& parent = s[um + 1];
    for (int j = 0; j < w.cols; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const Delta d0 = generative_delta(1.0, s[um][uj], probs[um][uj], rule);
      gen->b[um][uj] -= gamma * d0.dbias;
      // dθ for parent k is just dbias scaled by the parent's sign.
      for (int k = 0; k < w.rows; ++k) {
        w.at(k, j) -= gamma * d0.dbias * parent[static_cast<std::size_t>(k)];
      }
    }
  }
  // Top layer: generated from a constant +1 unity parent with weight top_bias.
  const auto utop = static_cast<std::size_t>(M - 1);
  for (std::size_t j = 0; j < gen->top_bias.size(); ++j) {
    const Delta d = generative_delta(1.0, s[utop][j], probs[utop][j], rule);
    gen->top_bias[j] -= gamma * d.dtheta;
  }
  return s;
}

CompleteState sleep_step(const GenerativeParams& gen, RecognitionParams* rec,
                         const NetworkShape& shape, double gamma, UpdateRule rule,
                         Rng& rng) {
  const CompleteState dream = generative_pass(gen, shape, rng);
  const std::vector<Vec> q = recognition_probabilities(*rec, shape, dream);
  const int M = shape.layers();
  for (int m = 1; m < M; ++m) {
    const auto um = static_cast<std::size_t>(m);
    Mat& w = rec->w[um - 1];
    const Vec& lower = dream[um - 1];
    for (int j = 0; j < w.cols; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const Delta d0 = generative_delta(1.0, dream[um][uj], q[um][uj], rule);
      rec->b[um - 1][uj] -= gamma * d0.dbias;
      for (int k = 0; k < w.rows; ++k) {
        w.at(k, j) -= gamma * d0.dbias * lower[static_cast<std::size_t>(k)];
      }
    }
  }
  return dream;
}

namespace {

// Trace-point evaluation from split streams; never touches the training stream.
TraceRow trace_eval(const GenerativeParams& gen, const RecognitionParams& rec,
                    const NetworkShape& shape, const std::vector<Pattern>& wellformed,
                    const TrainConfig& cfg, const Rng& root, std::int64_t iteration,
                    std::uint64_t stream) {
  TraceRow row;
  row.iteration = iteration;
  Rng acc_rng = root.split(2 * stream + 1);
  row.accuracy = generation_accuracy(gen, shape, cfg.eval_samples, acc_rng).accuracy;
  Rng fe_rng = root.split(2 * stream + 2);
  Welford fe;
  for (const Pattern& p : wellformed) {
    const FreeEnergyEstimate e = estimate_free_energy(gen, rec, shape, p, 2, fe_rng);
    fe.add(e.mean);
  }
  row.free_energy = fe.mean;
  return row;
}

}  // namespace

Stage1Result train_stage1(const TrainConfig& cfg, const std::vector<Pattern>& wellformed,
                          const NetworkShape& shape) {
  cfg.validate();
  shape.validate();
  HM_CHECK_MSG(!wellformed.empty(), "stage I needs a nonempty well-formed set");

  Rng rng(cfg.seed);
  Stage1Result result;
  init_params(shape, rng, &result.gen, &result.rec);

  std::uint64_t stream = 1;  // split-stream ids for trace evaluations
  result.trace.push_back(trace_eval(result.gen, result.rec, shape, wellformed, cfg,
                                    rng, 0, stream++));
  const double w = static_cast<double>(wellformed.size());
  for (std::int64_t it = 1; it <= cfg.stage1_iterations; ++it) {
    const auto pick = static_cast<std::size_t>(rng.uniform() * w);
    wake_step(&result.gen, result.rec, shape, wellformed[pick], cfg.learning_rate,
              cfg.update_rule, rng);
    sleep_step(result.gen, &result.rec, shape, cfg.learning_rate, cfg.update_rule, rng);
    if (it % cfg.trace_interval == 0 || it == cfg.stage1_iterations) {
      result.trace.push_back(trace_eval(result.gen, result.rec, shape, wellformed, cfg,
                                        rng, it, stream++));
    }
  }
  result.rng_state = rng.state();
  return result;
}

}  // namespace helmholtz
