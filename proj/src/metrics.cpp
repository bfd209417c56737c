#include "hm/metrics.hpp"

#include <cmath>
#include <unordered_map>

#include "hm/check.hpp"
#include "hm/grammar.hpp"
#include "hm/numeric.hpp"

namespace helmholtz {

AccuracyReport generation_accuracy(const GenerativeParams& gen, const NetworkShape& shape,
                                   std::int64_t n, Rng& rng) {
  HM_CHECK_MSG(n >= 1, "accuracy evaluation needs n ≥ 1");
  // Histogram over all data words (valid or not) for the entropy; the valid
  // subset separately for accuracy/diversity.
  std::unordered_map<int, std::int64_t> histogram;
  std::int64_t valid = 0;
  std::unordered_map<int, std::int64_t> valid_histogram;
  for (std::int64_t i = 0; i < n; ++i) {
    const CompleteState dream = generative_pass(gen, shape, rng);
    const Pattern p = Pattern::from_signs(dream[0]);
    ++histogram[p.index()];
    if (is_well_formed(p)) {
      ++valid;
      ++valid_histogram[p.index()];
    }
  }
  AccuracyReport report;
  report.accuracy = static_cast<double>(valid) / static_cast<double>(n);
  report.distinct_valid = static_cast<int>(valid_histogram.size());
  double h = 0.0;
  for (const auto& [idx, count] : histogram) {
    const double q = static_cast<double>(count) / static_cast<double>(n);
    h -= q * std::log(q);
  }
  report.dream_entropy = h;
  report.valid_counts.assign(static_cast<std::size_t>(1) << shape.data_size(), 0);
  for (const auto& [idx, count] : valid_histogram) {
    report.valid_counts[static_cast<std::size_t>(idx)] = count;
  }
  return report;
}

FeDecomposition fe_decomposition(const GenerativeParams& gen, const RecognitionParams& rec,
                                 const NetworkShape& shape, const Pattern& data,
                                 int n_samples, Rng& rng) {
  HM_CHECK_MSG(n_samples >= 1, "fe decomposition needs n_samples ≥ 1");
  const Vec d = data.signs();
  Welford complexity;
  Welford accuracy_term;
  for (int i = 0; i < n_samples; ++i) {
    const CompleteState s = recognition_pass(rec, shape, d, rng);
    complexity.add(log_recognition_density(rec, shape, s) -
                   log_generative_hidden(gen, shape, s));
    accuracy_term.add(log_generative_data(gen, shape, s));
  }
  return {complexity.mean, accuracy_term.mean};
}

double kl_from_uniform(const SalienceDistribution& dist) {
  HM_CHECK_MSG(dist.total() > 0, "KL of an empty distribution");
  const double total = static_cast<double>(dist.total());
  const double w = static_cast<double>(dist.support_size());
  double kl = 0.0;
  for (std::uint64_t c : dist.counts()) {
    // q·ln(q·W) with q·W formed as (c·W)/total so uniform counts give ln 1 = 0.
    const double q = static_cast<double>(c) / total;
    kl += q * std::log(static_cast<double>(c) * w / total);
  }
  return kl;
}

EvalReport build_eval_report(const GenerativeParams& gen, const RecognitionParams& rec,
                             const NetworkShape& shape,
                             const std::vector<Pattern>& wellformed, std::int64_t n,
                             const SalienceDistribution* salience, Rng& rng,
                             int fe_samples_per_pattern) {
  EvalReport report;
  const AccuracyReport acc = generation_accuracy(gen, shape, n, rng);
  report.accuracy = acc.accuracy;
  report.n_samples = n;
  report.distinct_valid = acc.distinct_valid;
  report.dream_entropy = acc.dream_entropy;
  report.coverage = static_cast<double>(acc.distinct_valid) /
                    static_cast<double>(wellformed.size());
  Welford fe;
  for (const Pattern& p : wellformed) {
    const Vec d = p.signs();
    for (int i = 0; i < fe_samples_per_pattern; ++i) {
      const CompleteState s = recognition_pass(rec, shape, d, rng);
      fe.add((log_recognition_density(rec, shape, s) -
              log_generative_hidden(gen, shape, s)) -
             log_generative_data(gen, shape, s));
    }
  }
  report.fe_mean = fe.mean;
  report.fe_stderr = fe.std_error();
  report.kl_salience_uniform = salience ? kl_from_uniform(*salience) : 0.0;
  return report;
}

}  // namespace helmholtz
