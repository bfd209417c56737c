#include "hm/active.hpp"

#include "hm/check.hpp"
#include "hm/grammar.hpp"
#include "hm/metrics.hpp"

namespace helmholtz {

void Stage2Config::validate() const {
  // Zero step counts / rounds are allowed (no-op rounds); rates non-negative.
  HM_CHECK_MSG(rounds >= 0, "rounds must be ≥ 0");
  HM_CHECK_MSG(wake_steps_per_round >= 0, "wake_steps_per_round must be ≥ 0");
  HM_CHECK_MSG(sleep_attempts_per_round >= 0, "sleep_attempts_per_round must be ≥ 0");
  HM_CHECK_MSG(max_dream_retries >= 1, "max_dream_retries must be ≥ 1");
  HM_CHECK_MSG(gamma2 >= 0.0, "gamma2 must be non-negative");
  HM_CHECK_MSG(wake_gamma >= 0.0, "wake_gamma must be non-negative");
  HM_CHECK_MSG(eval_samples >= 1, "eval_samples must be ≥ 1");
}

FilteredSleepOutcome filtered_sleep_step(const GenerativeParams& gen,
                                         RecognitionParams* rec,
                                         SalienceDistribution* dist,
                                         const NetworkShape& shape,
                                         const Stage2Config& cfg, Rng& rng) {
  for (std::int64_t attempt = 0; attempt < cfg.max_dream_retries; ++attempt) {
    const CompleteState dream = generative_pass(gen, shape, rng);
    const Pattern p = Pattern::from_signs(dream[0]);
    if (!is_well_formed(p)) continue;  // rejected dreams touch nothing
    // Accepted: recognition update exactly as in an unfiltered sleep step.
    const std::vector<Vec> q = recognition_probabilities(*rec, shape, dream);
    const int M = shape.layers();
    for (int m = 1; m < M; ++m) {
      const auto um = static_cast<std::size_t>(m);
      Mat& w = rec->w[um - 1];
      const Vec& lower = dream[um - 1];
      for (int j = 0; j < w.cols; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        const Delta d0 = generative_delta(1.0, dream[um][uj], q[um][uj], cfg.update_rule);
        rec->b[um - 1][uj] -= cfg.gamma2 * d0.dbias;
        for (int k = 0; k < w.rows; ++k) {
          w.at(k, j) -= cfg.gamma2 * d0.dbias * lower[static_cast<std::size_t>(k)];
        }
      }
    }
    dist->update(p);
    return {p};
  }
  return {std::nullopt};
}

RoundReport stage2_round(GenerativeParams* gen, RecognitionParams* rec,
                         SalienceDistribution* dist, const NetworkShape& shape,
                         const Stage2Config& cfg, Rng& rng) {
  const double wake_rate = cfg.effective_wake_gamma();
  for (std::int64_t i = 0; i < cfg.wake_steps_per_round; ++i) {
    const Pattern& data = dist->sample(rng);
    wake_step(gen, *rec, shape, data, wake_rate, cfg.update_rule, rng);
  }
  RoundReport report;
  for (std::int64_t i = 0; i < cfg.sleep_attempts_per_round; ++i) {
    const FilteredSleepOutcome outcome =
        filtered_sleep_step(*gen, rec, dist, shape, cfg, rng);
    if (outcome.exhausted()) {
      ++report.exhausted;
    } else {
      ++report.accepted;
    }
  }
  return report;
}

Stage2Result train_stage2(GenerativeParams* gen, RecognitionParams* rec,
                          const std::vector<Pattern>& wellformed,
                          const NetworkShape& shape, const Stage2Config& cfg,
                          Rng& rng) {
  cfg.validate();
  shape.validate();
  Stage2Result result;
  result.salience = SalienceDistribution::uniform_over(wellformed);
  for (std::int64_t round = 1; round <= cfg.rounds; ++round) {
    const RoundReport rep =
        stage2_round(gen, rec, &result.salience, shape, cfg, rng);
    Stage2TraceRow row;
    row.round = round;
    row.accepted = rep.accepted;
    row.exhausted = rep.exhausted;
    Rng eval_rng = rng.split(0x51000000ULL + static_cast<std::uint64_t>(round));
    const AccuracyReport acc =
        generation_accuracy(*gen, shape, cfg.eval_samples, eval_rng);
    row.accuracy = acc.accuracy;
    row.distinct_valid = acc.distinct_valid;
    row.kl_from_uniform = kl_from_uniform(result.salience);
    result.trace.push_back(row);
  }
  result.rng_state = rng.state();
  return result;
}

}  // namespace helmholtz
