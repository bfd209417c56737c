#include "hm/pattern.hpp"

#include "hm/check.hpp"

namespace helmholtz {

Pattern Pattern::from_bits(const std::string& bits) {
  Pattern p;
  for (char c : bits) HM_CHECK_MSG(c == '0' || c == '1', "pattern bits must be 0/1");
  p.bits_ = bits;
  return p;
}

Pattern Pattern::from_signs(const Vec& signs) {
  Pattern p;
  p.bits_.reserve(signs.size());
  for (double s : signs) {
    HM_CHECK_MSG(s == 1.0 || s == -1.0, "pattern signs must be exactly ±1");
    p.bits_.push_back(s > 0.0 ? '1' : '0');
  }
  return p;
}

Pattern Pattern::from_index(int index, int length) {
  HM_CHECK(length > 0 && index >= 0 && index < (1 << length));
  Pattern p;
  p.bits_.assign(static_cast<std::size_t>(length), '0');
  for (int i = 0; i < length; ++i) {
    if (index & (1 << (length - 1 - i))) p.bits_[static_cast<std::size_t>(i)] = '1';
  }
  return p;
}

Vec Pattern::signs() const {
  Vec v(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i) v[i] = bits_[i] == '1' ? 1.0 : -1.0;
  return v;
}

int Pattern::index() const {
  int idx = 0;
  for (char c : bits_) idx = (idx << 1) | (c == '1' ? 1 : 0);
  return idx;
}

}  // namespace helmholtz
