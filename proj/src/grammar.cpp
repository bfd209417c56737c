#include "hm/grammar.hpp"

#include "hm/check.hpp"

namespace helmholtz {

namespace {
bool window_at(const std::string& w, std::size_t i, const char* pat, std::size_t n) {
  if (i + n > w.size()) return false;
  for (std::size_t k = 0; k < n; ++k) {
    if (w[i + k] != pat[k]) return false;
  }
  return true;
}
}  // namespace

std::vector<RuleViolation> violations(const Pattern& p) {
  const std::string& w = p.bits();
  HM_CHECK_MSG(w.size() >= 5, "word too short for the rule windows");
  const int n = static_cast<int>(w.size());

  std::vector<RuleViolation> out;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (i == 0 && w[0] != '1') out.push_back({Rule::R1_start, 0});
    if (i == 0 && window_at(w, 0, "100", 3)) out.push_back({Rule::R2_isolated_start, 0});
    if (window_at(w, ui, "00100", 5)) out.push_back({Rule::R2_isolated_mid, i});
    if (window_at(w, ui, "0000", 4)) out.push_back({Rule::R3_break, i});
    if (i == n - 3 && window_at(w, ui, "001", 3)) out.push_back({Rule::R2_isolated_end, i});
  }
  return out;
}

bool is_well_formed(const Pattern& p) { return violations(p).empty(); }

std::vector<Pattern> enumerate_wellformed(int length) {
  std::vector<Pattern> out;
  for (int idx = 0; idx < (1 << length); ++idx) {
    Pattern p = Pattern::from_index(idx, length);
    if (is_well_formed(p)) out.push_back(p);
  }
  return out;
}

}  // namespace helmholtz
