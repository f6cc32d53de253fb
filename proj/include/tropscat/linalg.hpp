#pragma once

#include <optional>

#include "tropscat/numeric.hpp"

namespace tropscat {

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

RatVec to_rat(const IntVec& v);
// Clears denominators and divides by content; zero vector maps to itself.
IntVec primitive(const RatVec& v);
IntVec primitive(const IntVec& v);

bool is_zero(const RatVec& v);
bool is_zero(const IntVec& v);
RatVec add(const RatVec& a, const RatVec& b);
RatVec sub(const RatVec& a, const RatVec& b);
RatVec scale(const Rat& c, const RatVec& v);
IntVec add(const IntVec& a, const IntVec& b);
IntVec sub(const IntVec& a, const IntVec& b);
IntVec negate(const IntVec& v);
Rat dot(const RatVec& a, const RatVec& b);
Rat dot(const RatVec& a, const IntVec& b);
Rat dot(const IntVec& a, const RatVec& b);
Int dot(const IntVec& a, const IntVec& b);

// lexicographic comparison, used for canonical orderings everywhere
int lex_cmp(const IntVec& a, const IntVec& b);
int lex_cmp(const RatVec& a, const RatVec& b);

std::string to_string(const IntVec& v);
std::string to_string(const RatVec& v);

// Dense rational matrix, row major.  Rows/cols are small (dim <= ~8)
// so no attention is paid to asymptotics.
class RatMat {
 public:
  RatMat() : rows_(0), cols_(0) {}
  RatMat(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  static RatMat identity(size_t n);
  static RatMat from_rows(const std::vector<RatVec>& rows, size_t cols);
  static RatMat from_int(const std::vector<IntVec>& rows, size_t cols);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Rat& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const Rat& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }
  RatVec row(size_t i) const;
  RatVec col(size_t j) const;

  RatMat transpose() const;
  RatMat multiply(const RatMat& other) const;
  RatVec apply(const RatVec& v) const;
  RatVec apply(const IntVec& v) const;
  bool operator==(const RatMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

  size_t rank() const;
  // Solve A x = b; empty optional if inconsistent.  Returns one solution.
  std::optional<RatVec> solve(const RatVec& b) const;
  std::optional<RatMat> inverse() const;
  // Basis of the right nullspace {x : A x = 0}.
  std::vector<RatVec> nullspace() const;
  Rat determinant() const;

 private:
  size_t rows_, cols_;
  std::vector<Rat> a_;
};

// Integer matrix backed by rationals only at the interfaces that need it.
class IntMat {
 public:
  IntMat() : rows_(0), cols_(0) {}
  IntMat(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Int(0)) {}
  static IntMat identity(size_t n);
  static IntMat from_rows(const std::vector<IntVec>& rows, size_t cols);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Int& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const Int& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }
  IntVec row(size_t i) const;
  IntVec col(size_t j) const;
  bool operator==(const IntMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

  IntMat transpose() const;
  IntMat multiply(const IntMat& other) const;
  IntVec apply(const IntVec& v) const;
  RatMat to_rat() const;
  Int determinant() const;
  // Inverse of a unimodular matrix; error if |det| != 1.
  IntMat unimodular_inverse() const;

 private:
  size_t rows_, cols_;
  std::vector<Int> a_;
};

// Row-style Hermite normal form H = U A with U unimodular; returns H
// (nonzero rows first) and optionally U.
IntMat hermite_normal_form(const IntMat& a, IntMat* u = nullptr);

// Smith normal form diagonal d1 | d2 | ... of an integer matrix.
std::vector<Int> smith_diagonal(IntMat a);

// Basis of the saturation of the row span: the lattice (row span over Q) cap Z^n.
std::vector<IntVec> lattice_span_basis(const std::vector<IntVec>& rows, size_t n);

// True if the rows generate, over Z, the full lattice (span over Q) cap Z^n.
bool generates_saturated_lattice(const std::vector<IntVec>& rows, size_t n);

}  // namespace tropscat
