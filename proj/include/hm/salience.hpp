#pragma once

#include <cstdint>
#include <vector>

#include "hm/pattern.hpp"
#include "hm/rng.hpp"

namespace helmholtz {

// The deformable evidence distribution: one positive integer count per
// well-formed pattern, sampled proportionally. Starts uniform (count 1 each);
// every accepted dream adds +1 to its pattern, so the distribution drifts
// toward what the model likes to generate ("the more an instance is generated,
// the more salient it becomes").
class SalienceDistribution {
 public:
  // Uniform initial distribution: weight 1 for every pattern in the support.
  static SalienceDistribution uniform_over(const std::vector<Pattern>& support);

  // Support size W.
  int support_size() const { return static_cast<int>(support_.size()); }
  const std::vector<Pattern>& support() const { return support_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total() const { return total_; }
  double probability(int rank) const {
    return static_cast<double>(counts_[static_cast<std::size_t>(rank)]) /
           static_cast<double>(total_);
  }

  // Sampling probability weight(p)/total.
  const Pattern& sample(Rng& rng) const;

  // +1 for the generated pattern; it must lie in the support (callers filter
  // dreams through the grammar first).
  void update(const Pattern& generated);

  // Rank of a pattern in the support, or −1 if absent.
  int rank_of(const Pattern& p) const;

  // Rebuild from persisted counts (checkpoint load); validates counts ≥ 1 and
  // total consistency.
  static SalienceDistribution from_counts(const std::vector<Pattern>& support,
                                          const std::vector<std::uint64_t>& counts,
                                          std::uint64_t total);

 private:
  std::vector<Pattern> support_;          // lexicographic well-formed set
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  std::vector<int> rank_by_index_;        // data-word index -> rank, −1 outside
};

}  // namespace helmholtz
