#pragma once

#include <vector>

#include "hm/pattern.hpp"
#include "hm/rng.hpp"

namespace helmholtz {

// Layer sizes bottom-up: index 0 is the data layer, back() is the top layer.
// (Equations elsewhere use 1-based superscripts m = 1..M; code is 0-based.)
struct NetworkShape {
  std::vector<int> sizes;

  static NetworkShape standard() { return {{10, 8, 5, 3}}; }
  int layers() const { return static_cast<int>(sizes.size()); }
  int data_size() const { return sizes.front(); }
  void validate() const;

  bool operator==(const NetworkShape& o) const { return sizes == o.sizes; }
};

// Dense row-major matrix; the network is 26 neurons, plain loops are plenty.
struct Mat {
  int rows = 0;
  int cols = 0;
  Vec a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

// Top-down parameters θ. w[m] has rows = sizes[m+1] (parent layer), cols =
// sizes[m] (child layer), for m = 0..M−2; b[m] is the child layer's bias.
// top_bias is the top layer's generative input from a constant +1 unity parent.
struct GenerativeParams {
  std::vector<Mat> w;
  std::vector<Vec> b;
  Vec top_bias;
};

// Bottom-up parameters φ. w[m] has rows = sizes[m] (lower layer), cols =
// sizes[m+1] (upper layer), for m = 0..M−2; b[m] is the upper layer's bias.
struct RecognitionParams {
  std::vector<Mat> w;
  std::vector<Vec> b;
};

// One joint ±1 assignment: s[0] is the data d, s[1..M−1] the latent cause α.
using CompleteState = std::vector<Vec>;

// a = Σ_k w_k·s_k + bias over one unit's incoming connections.
double activation(const Vec& weights, const Vec& activities, double bias);

// Probability that a unit with activation a is +1: σ(a) (see numeric.hpp).

// Uniform[−0.1, 0.1] weights and biases from the stream (draw order: generative
// weights then biases per layer pair ascending, then recognition likewise);
// top_bias starts at zero.
void init_params(const NetworkShape& shape, Rng& rng, GenerativeParams* gen,
                 RecognitionParams* rec);

// Throws if any dimension disagrees with the shape or any entry is non-finite.
void validate_params(const NetworkShape& shape, const GenerativeParams& gen,
                     const RecognitionParams& rec);

// Bottom-up sample from Q_φ(α|d): clamp the data layer, then sample each layer
// from the realized layer below.
CompleteState recognition_pass(const RecognitionParams& rec, const NetworkShape& shape,
                               const Vec& data_signs, Rng& rng);

// Top-down "dream" from P_θ(α,d): top layer from the unity bias, then each
// layer from the realized layer above.
CompleteState generative_pass(const GenerativeParams& gen, const NetworkShape& shape,
                              Rng& rng);

// Every generative probability p_n^m evaluated with the state's activities as
// parents (top layer from unity); no sampling. probs[m][n] aligns with s[m][n].
std::vector<Vec> clamped_generative_probabilities(const GenerativeParams& gen,
                                                  const NetworkShape& shape,
                                                  const CompleteState& state);

// Recognition probabilities q_n^m for the hidden layers, computed from the
// state's lower-layer activities; probs[0] is empty (data layer is clamped).
std::vector<Vec> recognition_probabilities(const RecognitionParams& rec,
                                           const NetworkShape& shape,
                                           const CompleteState& state);

// log Q_φ(α|d): Bernoulli log-likelihood of the hidden activities under the
// recognition probabilities.
double log_recognition_density(const RecognitionParams& rec, const NetworkShape& shape,
                               const CompleteState& state);

// log P_θ(α,d) split into the hidden-cause part (layers 1..M−1, top from
// unity) and the data part (layer 0 given layer 1); their sum is the joint.
double log_generative_hidden(const GenerativeParams& gen, const NetworkShape& shape,
                             const CompleteState& state);
double log_generative_data(const GenerativeParams& gen, const NetworkShape& shape,
                           const CompleteState& state);
double log_generative_density(const GenerativeParams& gen, const NetworkShape& shape,
                              const CompleteState& state);

struct FreeEnergyEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Monte-Carlo F = E_Q[log Q − log P] over n recognition samples of the given
// data pattern; per-sample value is (log Q − log P_hidden) − log P_data.
FreeEnergyEstimate estimate_free_energy(const GenerativeParams& gen,
                                        const RecognitionParams& rec,
                                        const NetworkShape& shape, const Pattern& data,
                                        int n_samples, Rng& rng);

}  // namespace helmholtz
