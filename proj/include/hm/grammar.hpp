#pragma once

#include <vector>

#include "hm/pattern.hpp"

namespace helmholtz {

// Well-formedness rules over 10-beat rhythm words ('1' = onset, '0' = rest):
//   R1: the word starts with an onset.
//   R2: no strongly isolated onset — forbidden windows "00100" anywhere,
//       prefix "100", suffix "001".
//   R3: no extended break — forbidden window "0000" anywhere.
enum class Rule {
  R1_start,
  R2_isolated_start,
  R2_isolated_mid,
  R2_isolated_end,
  R3_break,
};

struct RuleViolation {
  Rule rule_id;
  int position;  // 0-based index where the offending window begins (0 for R1)

  bool operator==(const RuleViolation& o) const {
    return rule_id == o.rule_id && position == o.position;
  }
};

bool is_well_formed(const Pattern& p);

// All violations, ordered by position (rule order R1, R2-start, R2-mid, R3,
// R2-end within one position); overlapping forbidden windows each get their
// own record. Empty iff is_well_formed.
std::vector<RuleViolation> violations(const Pattern& p);

// Every well-formed word of the given length, lexicographic (= index) order,
// by brute force over all 2^length candidates.
std::vector<Pattern> enumerate_wellformed(int length = 10);

}  // namespace helmholtz
