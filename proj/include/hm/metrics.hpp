#pragma once

#include <cstdint>
#include <vector>

#include "hm/model.hpp"
#include "hm/salience.hpp"

namespace helmholtz {

struct AccuracyReport {
  double accuracy = 0.0;       // fraction of dreams with a well-formed data layer
  int distinct_valid = 0;      // unique valid patterns among the dreams
  double dream_entropy = 0.0;  // Shannon entropy (nats) over ALL dream patterns
  std::vector<std::int64_t> valid_counts;  // per well-formed rank, for reuse
};

// Draws n unconstrained dreams and scores the data layer against the grammar.
AccuracyReport generation_accuracy(const GenerativeParams& gen, const NetworkShape& shape,
                                   std::int64_t n, Rng& rng);

struct FeDecomposition {
  double complexity = 0.0;     // E_Q[log Q(α|d) − log P(α)], hidden layers only
  double accuracy_term = 0.0;  // E_Q[log P(d|α)], data layer only
};

// Per-sample identity (log Q − log P(α,d)) = (log Q − log P(α)) − log P(d|α)
// holds exactly; complexity − accuracy_term equals the free-energy mean for
// the same samples.
FeDecomposition fe_decomposition(const GenerativeParams& gen, const RecognitionParams& rec,
                                 const NetworkShape& shape, const Pattern& data,
                                 int n_samples, Rng& rng);

// KL(salience ‖ uniform) = Σ_p q(p)·ln(q(p)·W), computed from the integer
// counts so a uniform distribution gives exactly 0.
double kl_from_uniform(const SalienceDistribution& dist);

// The full evaluation report (serialized by the CLI's eval command).
struct EvalReport {
  double accuracy = 0.0;
  std::int64_t n_samples = 0;
  int distinct_valid = 0;
  double dream_entropy = 0.0;
  double coverage = 0.0;  // distinct_valid / W
  double fe_mean = 0.0;   // free energy pooled over the well-formed set
  double fe_stderr = 0.0;
  double kl_salience_uniform = 0.0;  // 0 when the salience is uniform/absent
};

// Accuracy metrics from n dreams plus pooled free energy (fe_samples_per_pattern
// recognition samples for every well-formed pattern, one Welford accumulator).
EvalReport build_eval_report(const GenerativeParams& gen, const RecognitionParams& rec,
                             const NetworkShape& shape,
                             const std::vector<Pattern>& wellformed, std::int64_t n,
                             const SalienceDistribution* salience, Rng& rng,
                             int fe_samples_per_pattern = 4);

}  // namespace helmholtz
