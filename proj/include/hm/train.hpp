#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hm/model.hpp"

namespace helmholtz {

// Local delta rules for a single sampled state.
//   sign_delta:      d = −s_parent·(s_target − p); the raw form mixing the ±1
//                    activity with the (0,1) probability.
//   exact_gradient:  d = −s_parent·((1+s_target)/2 − p); the true derivative of
//                    the per-sample negative Bernoulli log-likelihood (default).
// Updates are applied as param ← param − γ·d.
enum class UpdateRule { exact_gradient, sign_delta };

std::string to_string(UpdateRule rule);
UpdateRule update_rule_from_string(const std::string& name);

struct TrainConfig {
  double learning_rate = 0.03;           // γ; calibrated, see README
  std::int64_t stage1_iterations = 240000;
  std::int64_t eval_samples = 10000;     // N dreams per accuracy evaluation
  std::uint64_t seed = 1;
  UpdateRule update_rule = UpdateRule::exact_gradient;
  std::int64_t trace_interval = 10000;   // iterations between trace records

  void validate() const;
};

struct Delta {
  double dtheta = 0.0;  // for the weight from this parent
  double dbias = 0.0;   // for the target unit's bias (parent-independent)
};

Delta generative_delta(double s_parent, double s_target, double p_target,
                       UpdateRule rule);

struct TraceRow {
  std::int64_t iteration = 0;
  double free_energy = 0.0;  // pooled over well-formed data, see train_stage1
  double accuracy = 0.0;
};
using TrainTrace = std::vector<TraceRow>;

// Wake phase: clamp data, sample the hidden cause bottom-up, move every
// generative weight/bias (data layer included; top_bias with parent = +1)
// toward reconstructing the sampled state. Returns the sampled state.
CompleteState wake_step(GenerativeParams* gen, const RecognitionParams& rec,
                        const NetworkShape& shape, const Pattern& data,
                        double gamma, UpdateRule rule, Rng& rng);

// Sleep phase: dream a full state top-down, move every recognition
// weight/bias toward inverting the dream. Returns the dream.
CompleteState sleep_step(const GenerativeParams& gen, RecognitionParams* rec,
                         const NetworkShape& shape, double gamma, UpdateRule rule,
                         Rng& rng);

struct Stage1Result {
  GenerativeParams gen;
  RecognitionParams rec;
  TrainTrace trace;
  std::string rng_state;  // training stream state after the last iteration
};

// Stage I: initialize parameters from cfg.seed, then for each iteration draw a
// well-formed pattern uniformly and run one wake_step + one sleep_step,
// interleaved. Trace rows (free energy pooled over the well-formed set,
// generation accuracy at cfg.eval_samples) are recorded at iteration 0, every
// cfg.trace_interval iterations, and at the end, each from split evaluation
// streams that never perturb the training stream.
Stage1Result train_stage1(const TrainConfig& cfg, const std::vector<Pattern>& wellformed,
                          const NetworkShape& shape = NetworkShape::standard());

}  // namespace helmholtz
