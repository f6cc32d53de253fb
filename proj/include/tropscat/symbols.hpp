#pragma once

#include <map>

#include "tropscat/linalg.hpp"

namespace tropscat {

// Formal multiplicative symbol monomial  prod_j g_j^{e_j}  with rational
// exponents.  Gluing data take values here instead of in C^*.
class SymMono {
 public:
  SymMono() = default;
  static SymMono generator(const std::string& name, const Rat& e = Rat(1));
  bool is_one() const { return e_.empty(); }
  SymMono times(const SymMono& o) const;
  SymMono inverse() const;
  SymMono pow(const Rat& r) const;
  const std::map<std::string, Rat>& exponents() const { return e_; }
  bool operator<(const SymMono& o) const { return e_ < o.e_; }
  bool operator==(const SymMono& o) const { return e_ == o.e_; }
  std::string str() const;

 private:
  std::map<std::string, Rat> e_;  // no zero exponents stored
};

// Coefficient ring: finite Q-linear combinations of symbol monomials.
// Rational numbers embed as multiples of the trivial monomial.  Units are
// the single-term elements.
class Coeff {
 public:
  Coeff() = default;
  Coeff(const Rat& r) { *this = scalar(r); }
  Coeff(long n) { *this = scalar(Rat(n)); }
  static Coeff scalar(const Rat& r);
  static Coeff monomial(const Rat& r, const SymMono& m);

  bool is_zero() const { return t_.empty(); }
  bool is_rational() const;
  Rat rational_value() const;  // error unless is_rational
  bool is_unit() const { return t_.size() == 1; }
  Coeff inverse() const;  // error unless unit

  Coeff operator+(const Coeff& o) const;
  Coeff operator-(const Coeff& o) const;
  Coeff operator-() const;
  Coeff operator*(const Coeff& o) const;
  Coeff& operator+=(const Coeff& o) { return *this = *this + o; }
  bool operator==(const Coeff& o) const { return t_ == o.t_; }
  bool operator!=(const Coeff& o) const { return !(*this == o); }
  bool operator<(const Coeff& o) const { return t_ < o.t_; }

  const std::map<SymMono, Rat>& terms() const { return t_; }
  std::string str() const;

 private:
  std::map<SymMono, Rat> t_;
  void prune();
};

}  // namespace tropscat
