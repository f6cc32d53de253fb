#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropscat {

using Int = mpz_class;
using Rat = mpq_class;

// All failures surfaced to callers carry a short machine-friendly kind
// plus a human message.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline Rat rat(long num, long den = 1) { return Rat(num, den); }

inline Int rat_num(const Rat& r) { return r.get_num(); }
inline Int rat_den(const Rat& r) { return r.get_den(); }

inline bool is_integer(const Rat& r) { return rat_den(r) == 1; }

inline std::string to_string(const Int& z) { return z.get_str(); }

inline std::string to_string(const Rat& q) {
  Rat c = q;
  c.canonicalize();
  if (rat_den(c) == 1) return rat_num(c).get_str();
  return rat_num(c).get_str() + "/" + rat_den(c).get_str();
}

Rat parse_rat(const std::string& s);
Int parse_int(const std::string& s);

}  // namespace tropscat
