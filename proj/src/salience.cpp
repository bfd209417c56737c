#include "hm/salience.hpp"

#include "hm/check.hpp"

namespace helmholtz {

namespace {
std::vector<int> build_rank_table(const std::vector<Pattern>& support) {
  HM_CHECK_MSG(!support.empty(), "salience support must be nonempty");
  const int len = support.front().size();
  std::vector<int> table(static_cast<std::size_t>(1) << len, -1);
  for (std::size_t r = 0; r < support.size(); ++r) {
    HM_CHECK_MSG(support[r].size() == len, "salience support length mismatch");
    HM_CHECK_MSG(table[static_cast<std::size_t>(support[r].index())] == -1,
                 "duplicate pattern in salience support");
    table[static_cast<std::size_t>(support[r].index())] = static_cast<int>(r);
  }
  return table;
}
}  // namespace

SalienceDistribution SalienceDistribution::uniform_over(
    const std::vector<Pattern>& support) {
  SalienceDistribution d;
  d.support_ = support;
  d.rank_by_index_ = build_rank_table(support);
  d.counts_.assign(support.size(), 1);
  d.total_ = support.size();
  return d;
}

const Pattern& SalienceDistribution::sample(Rng& rng) const {
  HM_CHECK_MSG(total_ > 0, "cannot sample an empty salience distribution");
  // Inverse-CDF walk over integer counts; threshold strictly below total.
  const double r = rng.uniform() * static_cast<double>(total_);
  std::uint64_t cum = 0;
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    cum += counts_[k];
    if (r < static_cast<double>(cum)) return support_[k];
  }
  return support_.back();  // guard against r landing exactly on total
}

void SalienceDistribution::update(const Pattern& generated) {
  const int rank = rank_of(generated);
  HM_CHECK_MSG(rank >= 0, "salience update with a pattern outside the well-formed support");
  ++counts_[static_cast<std::size_t>(rank)];
  ++total_;
}

int SalienceDistribution::rank_of(const Pattern& p) const {
  if (p.size() != support_.front().size()) return -1;
  return rank_by_index_[static_cast<std::size_t>(p.index())];
}

SalienceDistribution SalienceDistribution::from_counts(
    const std::vector<Pattern>& support, const std::vector<std::uint64_t>& counts,
    std::uint64_t total) {
  SalienceDistribution d;
  d.support_ = support;
  d.rank_by_index_ = build_rank_table(support);
  HM_CHECK_MSG(counts.size() == support.size(), "salience counts length mismatch");
  std::uint64_t sum = 0;
  for (std::uint64_t c : counts) {
    HM_CHECK_MSG(c >= 1, "salience count below the initial value 1");
    sum += c;
  }
  HM_CHECK_MSG(sum == total, "salience total does not match the sum of counts");
  d.counts_ = counts;
  d.total_ = total;
  return d;
}

}  // namespace helmholtz
