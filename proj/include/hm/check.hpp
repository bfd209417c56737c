#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace helmholtz {

// Error type for contract violations (bad dimensions, malformed files, ...).
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
[[noreturn]] inline void check_failed(const char* expr, const char* file, int line,
                                      const std::string& msg) {
  std::ostringstream os;
  os << file << ":" << line << ": check failed: " << expr;
  if (!msg.empty()) os << " — " << msg;
  throw Error(os.str());
}
}  // namespace detail

}  // namespace helmholtz

// Always-on invariant check; throws helmholtz::Error with location context.
#define HM_CHECK(cond)                                                        \
  do {                                                                        \
    if (!(cond)) ::helmholtz::detail::check_failed(#cond, __FILE__, __LINE__, \
                                                   std::string());            \
  } while (0)

#define HM_CHECK_MSG(cond, msg)                                               \
  do {                                                                        \
    if (!(cond)) ::helmholtz::detail::check_failed(#cond, __FILE__, __LINE__, \
                                                   (msg));                    \
  } while (0)
