#include "tropscat/symbols.hpp"

#include <sstream>

namespace tropscat {

SymMono SymMono::generator(const std::string& name, const Rat& e) {
  SymMono m;
  if (e != 0) m.e_[name] = e;
  return m;
}

SymMono SymMono::times(const SymMono& o) const {
  SymMono r = *this;
  for (const auto& [k, v] : o.e_) {
    Rat s = v;
    auto it = r.e_.find(k);
    if (it != r.e_.end()) {
      s += it->second;
      r.e_.erase(it);
    }
    if (s != 0) r.e_[k] = s;
  }
  return r;
}

SymMono SymMono::inverse() const { return pow(Rat(-1)); }

SymMono SymMono::pow(const Rat& r) const {
  SymMono m;
  if (r == 0) return m;
  for (const auto& [k, v] : e_) m.e_[k] = v * r;
  return m;
}

std::string SymMono::str() const {
  if (e_.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : e_) {
    if (!first) os << "*";
    first = false;
    os << k;
    if (v != 1) os << "^(" << to_string(v) << ")";
  }
  return os.str();
}

Coeff Coeff::scalar(const Rat& r) {
  Coeff c;
  if (r != 0) c.t_[SymMono()] = r;
  return c;
}

Coeff Coeff::monomial(const Rat& r, const SymMono& m) {
  Coeff c;
  if (r != 0) c.t_[m] = r;
  return c;
}

bool Coeff::is_rational() const {
  if (t_.empty()) return true;
  return t_.size() == 1 && t_.begin()->first.is_one();
}

Rat Coeff::rational_value() const {
  if (t_.empty()) return Rat(0);
  if (!is_rational()) fail("coeff", "coefficient carries formal symbols: " + str());
  return t_.begin()->second;
}

Coeff Coeff::inverse() const {
  if (t_.size() != 1) fail("coeff", "not a unit: " + str());
  Coeff c;
  c.t_[t_.begin()->first.inverse()] = 1 / t_.begin()->second;
  return c;
}

void Coeff::prune() {
  for (auto it = t_.begin(); it != t_.end();)
    it = (it->second == 0) ? t_.erase(it) : std::next(it);
}

Coeff Coeff::operator+(const Coeff& o) const {
  Coeff r = *this;
  for (const auto& [m, v] : o.t_) r.t_[m] += v;
  r.prune();
  return r;
}

Coeff Coeff::operator-(const Coeff& o) const { return *this + (-o); }

Coeff Coeff::operator-() const {
  Coeff r = *this;
  for (auto& [m, v] : r.t_) v = -v;
  return r;
}

Coeff Coeff::operator*(const Coeff& o) const {
  Coeff r;
  for (const auto& [m1, v1] : t_)
    for (const auto& [m2, v2] : o.t_) r.t_[m1.times(m2)] += v1 * v2;
  r.prune();
  return r;
}

std::string Coeff::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, v] : t_) {
    if (!first) os << " + ";
    first = false;
    if (m.is_one())
      os << to_string(v);
    else if (v == 1)
      os << m.str();
    else
      os << to_string(v) << "*" << m.str();
  }
  return os.str();
}

}  // namespace tropscat
