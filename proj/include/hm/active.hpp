#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hm/model.hpp"
#include "hm/salience.hpp"
#include "hm/train.hpp"

namespace helmholtz {

struct Stage2Config {
  std::int64_t rounds = 200;
  std::int64_t wake_steps_per_round = 2000;    // calibrated, see README
  std::int64_t sleep_attempts_per_round = 2000;
  std::int64_t max_dream_retries = 100;
  double gamma2 = 0.03;                        // fine-tune rate, both phases
  double wake_gamma = 0.0;                     // 0 ⇒ wake phase also uses gamma2
  UpdateRule update_rule = UpdateRule::exact_gradient;
  std::int64_t eval_samples = 10000;           // dreams per per-round accuracy

  double effective_wake_gamma() const { return wake_gamma > 0.0 ? wake_gamma : gamma2; }
  void validate() const;
};

// Outcome of one filtered sleep step: the accepted dream's pattern, or empty
// when all max_dream_retries dreams fell outside the well-formed region.
struct FilteredSleepOutcome {
  std::optional<Pattern> accepted;
  bool exhausted() const { return !accepted.has_value(); }
};

// Dreams up to cfg.max_dream_retries times; the first dream whose data layer
// is well-formed trains the recognition weights (exactly as sleep_step does)
// and reinforces the salience distribution. Rejected dreams change nothing.
FilteredSleepOutcome filtered_sleep_step(const GenerativeParams& gen,
                                         RecognitionParams* rec,
                                         SalienceDistribution* dist,
                                         const NetworkShape& shape,
                                         const Stage2Config& cfg, Rng& rng);

struct RoundReport {
  std::int64_t accepted = 0;
  std::int64_t exhausted = 0;
};

// One fine-tune round: wake_steps_per_round wake steps with data drawn from
// the live salience distribution (generative updates at the wake rate), then
// sleep_attempts_per_round filtered sleep steps (recognition + salience).
RoundReport stage2_round(GenerativeParams* gen, RecognitionParams* rec,
                         SalienceDistribution* dist, const NetworkShape& shape,
                         const Stage2Config& cfg, Rng& rng);

struct Stage2TraceRow {
  std::int64_t round = 0;
  double accuracy = 0.0;
  int distinct_valid = 0;
  double kl_from_uniform = 0.0;
  std::int64_t accepted = 0;
  std::int64_t exhausted = 0;
};

struct Stage2Result {
  SalienceDistribution salience;
  std::vector<Stage2TraceRow> trace;  // one row per round
  std::string rng_state;              // training stream state after the last round
};

// Full stage II: uniform salience over the well-formed set, then cfg.rounds
// stage2_rounds on the (mutable) stage-I parameters. Per-round accuracy is
// evaluated with cfg.eval_samples dreams from split streams that never perturb
// the training stream. The rng argument is the training stream (normally
// restored from the stage-I checkpoint).
Stage2Result train_stage2(GenerativeParams* gen, RecognitionParams* rec,
                          const std::vector<Pattern>& wellformed,
                          const NetworkShape& shape, const Stage2Config& cfg,
                          Rng& rng);

}  // namespace helmholtz
