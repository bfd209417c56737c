#include "hm/model.hpp"

#include <cmath>

#include "hm/check.hpp"
#include "hm/numeric.hpp"

namespace helmholtz {

void NetworkShape::validate() const {
  HM_CHECK_MSG(sizes.size() >= 2, "shape needs at least a data and a top layer");
  for (int s : sizes) HM_CHECK_MSG(s >= 1, "every layer size must be ≥ 1");
}

double activation(const Vec& weights, const Vec& activities, double bias) {
  HM_CHECK_MSG(weights.size() == activities.size(), "activation dimension mismatch");
  double a = bias;
  for (std::size_t k = 0; k < weights.size(); ++k) a += weights[k] * activities[k];
  return a;
}

namespace {

// Child unit j's activation in the generative direction: parents are layer m+1.
double gen_activation(const GenerativeParams& gen, int m, int j, const Vec& parent) {
  const Mat& w = gen.w[static_cast<std::size_t>(m)];
  double a = gen.b[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)];
  for (int k = 0; k < w.rows; ++k) a += w.at(k, j) * parent[static_cast<std::size_t>(k)];
  return a;
}

// Upper unit j's activation in the recognition direction: inputs are layer m.
double rec_activation(const RecognitionParams& rec, int m, int j, const Vec& lower) {
  const Mat& w = rec.w[static_cast<std::size_t>(m)];
  double a = rec.b[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)];
  for (int k = 0; k < w.rows; ++k) a += w.at(k, j) * lower[static_cast<std::size_t>(k)];
  return a;
}

void check_finite(double x) { HM_CHECK_MSG(std::isfinite(x), "non-finite parameter"); }

}  // namespace

void init_params(const NetworkShape& shape, Rng& rng, GenerativeParams* gen,
                 RecognitionParams* rec) {
  shape.validate();
  const int M = shape.layers();
  auto draw = [&rng]() { return rng.uniform() * 0.2 - 0.1; };

  gen->w.clear();
  gen->b.clear();
  for (int m = 0; m + 1 < M; ++m) {
    Mat w(shape.sizes[static_cast<std::size_t>(m + 1)], shape.sizes[static_cast<std::size_t>(m)]);
    for (double& x : w.a) x = draw();
    gen->w.push_back(std::move(w));
    Vec b(static_cast<std::size_t>(shape.sizes[static_cast<std::size_t>(m)]));
    for (double& x : b) x = draw();
    gen->b.push_back(std::move(b));
  }
  gen->top_bias.assign(static_cast<std::size_t>(shape.sizes.back()), 0.0);

  rec->w.clear();
  rec->b.clear();
  for (int m = 0; m + 1 < M; ++m) {
    Mat w(shape.sizes[static_cast<std::size_t>(m)], shape.sizes[static_cast<std::size_t>(m + 1)]);
    for (double& x : w.a) x = draw();
    rec->w.push_back(std::move(w));
    Vec b(static_cast<std::size_t>(shape.sizes[static_cast<std::size_t>(m + 1)]));
    for (double& x : b) x = draw();
    rec->b.push_back(std::move(b));
  }
}

void validate_params(const NetworkShape& shape, const GenerativeParams& gen,
                     const RecognitionParams& rec) {
  shape.validate();
  const std::size_t pairs = static_cast<std::size_t>(shape.layers() - 1);
  HM_CHECK_MSG(gen.w.size() == pairs, "gen.w layer count mismatch");
  HM_CHECK_MSG(gen.b.size() == pairs, "gen.b layer count mismatch");
  HM_CHECK_MSG(rec.w.size() == pairs, "rec.w layer count mismatch");
  HM_CHECK_MSG(rec.b.size() == pairs, "rec.b layer count mismatch");
  for (std::size_t m = 0; m < pairs; ++m) {
    const int lo = shape.sizes[m];
    const int hi = shape.sizes[m + 1];
    HM_CHECK_MSG(gen.w[m].rows == hi && gen.w[m].cols == lo, "gen.w dims mismatch");
    HM_CHECK_MSG(static_cast<int>(gen.b[m].size()) == lo, "gen.b length mismatch");
    HM_CHECK_MSG(rec.w[m].rows == lo && rec.w[m].cols == hi, "rec.w dims mismatch");
    HM_CHECK_MSG(static_cast<int>(rec.b[m].size()) == hi, "rec.b length mismatch");
    for (double x : gen.w[m].a) check_finite(x);
    for (double x : gen.b[m]) check_finite(x);
    for (double x : rec.w[m].a) check_finite(x);
    for (double x : rec.b[m]) check_finite(x);
  }
  HM_CHECK_MSG(static_cast<int>(gen.top_bias.size()) == shape.sizes.back(),
               "top_bias length mismatch");
  for (double x : gen.top_bias) check_finite(x);
}

CompleteState recognition_pass(const RecognitionParams& rec, const NetworkShape& shape,
                               const Vec& data_signs, Rng& rng) {
  HM_CHECK_MSG(static_cast<int>(data_signs.size()) == shape.data_size(),
               "data length does not match shape");
  const int M = shape.layers();
  CompleteState s(static_cast<std::size_t>(M));
  s[0] = data_signs;
  for (int m = 1; m < M; ++m) {
    const int n = shape.sizes[static_cast<std::size_t>(m)];
    Vec layer(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double a = rec_activation(rec, m - 1, j, s[static_cast<std::size_t>(m - 1)]);
      layer[static_cast<std::size_t>(j)] = rng.sign_draw(sigmoid(a));
    }
    s[static_cast<std::size_t>(m)] = std::move(layer);
  }
  return s;
}

CompleteState generative_pass(const GenerativeParams& gen, const NetworkShape& shape,
                              Rng& rng) {
  const int M = shape.layers();
  CompleteState s(static_cast<std::size_t>(M));
  const int top = shape.sizes.back();
  Vec top_layer(static_cast<std::size_t>(top));
  for (int j = 0; j < top; ++j) {
    top_layer[static_cast<std::size_t>(j)] =
        rng.sign_draw(sigmoid(gen.top_bias[static_cast<std::size_t>(j)]));
  }
  s[static_cast<std::size_t>(M - 1)] = std::move(top_layer);
  for (int m = M - 2; m >= 0; --m) {
    const int n = shape.sizes[static_cast<std::size_t>(m)];
    Vec layer(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double a = gen_activation(gen, m, j, s[static_cast<std::size_t>(m + 1)]);
      layer[static_cast<std::size_t>(j)] = rng.sign_draw(sigmoid(a));
    }
    s[static_cast<std::size_t>(m)] = std::move(layer);
  }
  return s;
}

std::vector<Vec> clamped_generative_probabilities(const GenerativeParams& gen,
                                                  const NetworkShape& shape,
                                                  const CompleteState& state) {
  const int M = shape.layers();
  HM_CHECK_MSG(static_cast<int>(state.size()) == M, "state does not match shape");
  std::vector<Vec> probs(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) {
    const int n = shape.sizes[static_cast<std::size_t>(m)];
    Vec p(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double a = (m == M - 1)
                           ? gen.top_bias[static_cast<std::size_t>(j)]
                           : gen_activation(gen, m, j, state[static_cast<std::size_t>(m + 1)]);
      p[static_cast<std::size_t>(j)] = sigmoid(a);
    }
    probs[static_cast<std::size_t>(m)] = std::move(p);
  }
  return probs;
}

std::vector<Vec> recognition_probabilities(const RecognitionParams& rec,
                                           const NetworkShape& shape,
                                           const CompleteState& state) {
  const int M = shape.layers();
  HM_CHECK_MSG(static_cast<int>(state.size()) == M, "state does not match shape");
  std::vector<Vec> probs(static_cast<std::size_t>(M));
  for (int m = 1; m < M; ++m) {
    const int n = shape.sizes[static_cast<std::size_t>(m)];
    Vec q(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double a = rec_activation(rec, m - 1, j, state[static_cast<std::size_t>(m - 1)]);
      q[static_cast<std::size_t>(j)] = sigmoid(a);
    }
    probs[static_cast<std::size_t>(m)] = std::move(q);
  }
  return probs;
}

double log_recognition_density(const RecognitionParams& rec, const NetworkShape& shape,
                               const CompleteState& state) {
  const int M = shape.layers();
  HM_CHECK_MSG(static_cast<int>(state.size()) == M, "state does not match shape");
  double lq = 0.0;
  for (int m = 1; m < M; ++m) {
    const int n = shape.sizes[static_cast<std::size_t>(m)];
    for (int j = 0; j < n; ++j) {
      const double a = rec_activation(rec, m - 1, j, state[static_cast<std::size_t>(m - 1)]);
      lq += log_prob_of_sign(state[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)], a);
    }
  }
  return lq;
}

double log_generative_hidden(const GenerativeParams& gen, const NetworkShape& shape,
                             const CompleteState& state) {
  const int M = shape.layers();
  HM_CHECK_MSG(static_cast<int>(state.size()) == M, "state does not match shape");
  double lp = 0.0;
  for (int m = 1; m < M; ++m) {
    const int n = shape.sizes[static_cast<std::size_t>(m)];
    for (int j = 0; j < n; ++j) {
      const double a = (m == M - 1)
                           ? gen.top_bias[static_cast<std::size_t>(j)]
                           : gen_activation(gen, m, j, state[static_cast<std::size_t>(m + 1)]);
      lp += log_prob_of_sign(state[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)], a);
    }
  }
  return lp;
}

double log_generative_data(const GenerativeParams& gen, const NetworkShape& shape,
                           const CompleteState& state) {
  HM_CHECK_MSG(static_cast<int>(state.size()) == shape.layers(), "state does not match shape");
  const int n = shape.data_size();
  double lp = 0.0;
  for (int j = 0; j < n; ++j) {
    const double a = gen_activation(gen, 0, j, state[1]);
    lp += log_prob_of_sign(state[0][static_cast<std::size_t>(j)], a);
  }
  return lp;
}

double log_generative_density(const GenerativeParams& gen, const NetworkShape& shape,
                              const CompleteState& state) {
  return log_generative_hidden(gen, shape, state) + log_generative_data(gen, shape, state);
}

FreeEnergyEstimate estimate_free_energy(const GenerativeParams& gen,
                                        const RecognitionParams& rec,
                                        const NetworkShape& shape, const Pattern& data,
                                        int n_samples, Rng& rng) {
  HM_CHECK_MSG(n_samples >= 1, "free-energy estimate needs n_samples ≥ 1");
  const Vec d = data.signs();
  Welford acc;
  for (int i = 0; i < n_samples; ++i) {
    const CompleteState s = recognition_pass(rec, shape, d, rng);
    const double f = (log_recognition_density(rec, shape, s) -
                      log_generative_hidden(gen, shape, s)) -
                     log_generative_data(gen, shape, s);
    acc.add(f);
  }
  return {acc.mean, acc.std_error()};
}

}  // namespace helmholtz
