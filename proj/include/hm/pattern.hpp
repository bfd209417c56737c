#pragma once

#include <string>
#include <vector>

namespace helmholtz {

using Vec = std::vector<double>;

// A data-layer word. Displayed over {0,1}; computed over {−1,+1} (0 ↔ −1, 1 ↔ +1).
class Pattern {
 public:
  Pattern() = default;
  // From a '0'/'1' string, e.g. "1010001010".
  static Pattern from_bits(const std::string& bits);
  // From a ±1.0 activity vector (the data layer of a sampled state).
  static Pattern from_signs(const Vec& signs);
  // From the integer whose binary expansion (MSB first) is the word.
  static Pattern from_index(int index, int length);

  const std::string& bits() const { return bits_; }
  Vec signs() const;
  int size() const { return static_cast<int>(bits_.size()); }
  // MSB-first integer value in [0, 2^length).
  int index() const;

  bool operator==(const Pattern& o) const { return bits_ == o.bits_; }
  bool operator<(const Pattern& o) const { return bits_ < o.bits_; }

 private:
  std::string bits_;
};

}  // namespace helmholtz
