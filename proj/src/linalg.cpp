#include "tropscat/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace tropscat {

Rat parse_rat(const std::string& s) {
  std::string t = s;
  if (t.empty()) fail("parse", "empty rational");
  try {
    Rat r;
    if (r.set_str(t, 10) != 0) fail("parse", "bad rational '" + s + "'");
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    fail("parse", "bad rational '" + s + "'");
  }
}

Int parse_int(const std::string& s) {
  try {
    return Int(s);
  } catch (const std::invalid_argument&) {
    fail("parse", "bad integer '" + s + "'");
  }
}

RatVec to_rat(const IntVec& v) {
  RatVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
  return r;
}

IntVec primitive(const RatVec& v) {
  Int lcm_den(1);
  for (const Rat& x : v) {
    Int d = rat_den(x);
    Int g;
    mpz_gcd(g.get_mpz_t(), lcm_den.get_mpz_t(), d.get_mpz_t());
    lcm_den = lcm_den / g * d;
  }
  IntVec w(v.size());
  Int content(0);
  for (size_t i = 0; i < v.size(); ++i) {
    Rat scaled = v[i] * Rat(lcm_den);
    w[i] = rat_num(scaled);
    Int g;
    mpz_gcd(g.get_mpz_t(), content.get_mpz_t(), w[i].get_mpz_t());
    content = g;
  }
  if (content == 0) return w;  // zero vector
  for (Int& x : w) x /= content;
  return w;
}

IntVec primitive(const IntVec& v) { return primitive(to_rat(v)); }

bool is_zero(const RatVec& v) {
  for (const Rat& x : v)
    if (x != 0) return false;
  return true;
}
bool is_zero(const IntVec& v) {
  for (const Int& x : v)
    if (x != 0) return false;
  return true;
}

static void check_same_size(size_t a, size_t b) {
  if (a != b) fail("linalg", "vector size mismatch");
}

RatVec add(const RatVec& a, const RatVec& b) {
  check_same_size(a.size(), b.size());
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}
RatVec sub(const RatVec& a, const RatVec& b) {
  check_same_size(a.size(), b.size());
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}
RatVec scale(const Rat& c, const RatVec& v) {
  RatVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
  return r;
}
IntVec add(const IntVec& a, const IntVec& b) {
  check_same_size(a.size(), b.size());
  IntVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}
IntVec sub(const IntVec& a, const IntVec& b) {
  check_same_size(a.size(), b.size());
  IntVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}
IntVec negate(const IntVec& v) {
  IntVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = -v[i];
  return r;
}

Rat dot(const RatVec& a, const RatVec& b) {
  check_same_size(a.size(), b.size());
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
Rat dot(const RatVec& a, const IntVec& b) { return dot(a, to_rat(b)); }
Rat dot(const IntVec& a, const RatVec& b) { return dot(to_rat(a), b); }
Int dot(const IntVec& a, const IntVec& b) {
  check_same_size(a.size(), b.size());
  Int s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

int lex_cmp(const IntVec& a, const IntVec& b) {
  check_same_size(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  return 0;
}
int lex_cmp(const RatVec& a, const RatVec& b) {
  check_same_size(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  return 0;
}

std::string to_string(const IntVec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << to_string(v[i]);
  os << ")";
  return os.str();
}
std::string to_string(const RatVec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << to_string(v[i]);
  os << ")";
  return os.str();
}

RatMat RatMat::identity(size_t n) {
  RatMat m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMat RatMat::from_rows(const std::vector<RatVec>& rows, size_t cols) {
  RatMat m(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    check_same_size(rows[i].size(), cols);
    for (size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

RatMat RatMat::from_int(const std::vector<IntVec>& rows, size_t cols) {
  RatMat m(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    check_same_size(rows[i].size(), cols);
    for (size_t j = 0; j < cols; ++j) m.at(i, j) = Rat(rows[i][j]);
  }
  return m;
}

RatVec RatMat::row(size_t i) const {
  RatVec r(cols_);
  for (size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
  return r;
}
RatVec RatMat::col(size_t j) const {
  RatVec r(rows_);
  for (size_t i = 0; i < rows_; ++i) r[i] = at(i, j);
  return r;
}

RatMat RatMat::transpose() const {
  RatMat m(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
  return m;
}

RatMat RatMat::multiply(const RatMat& other) const {
  if (cols_ != other.rows_) fail("linalg", "matrix size mismatch");
  RatMat m(rows_, other.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      if (at(i, k) == 0) continue;
      for (size_t j = 0; j < other.cols_; ++j) m.at(i, j) += at(i, k) * other.at(k, j);
    }
  return m;
}

RatVec RatMat::apply(const RatVec& v) const {
  check_same_size(v.size(), cols_);
  RatVec r(rows_);
  for (size_t i = 0; i < rows_; ++i) {
    Rat s(0);
    for (size_t j = 0; j < cols_; ++j) s += at(i, j) * v[j];
    r[i] = s;
  }
  return r;
}
RatVec RatMat::apply(const IntVec& v) const { return apply(to_rat(v)); }

// Gaussian elimination into (reduced) row echelon form; returns pivot columns.
static std::vector<size_t> rref(RatMat& m) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    size_t p = r;
    while (p < m.rows() && m.at(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    for (size_t j = 0; j < m.cols(); ++j) std::swap(m.at(p, j), m.at(r, j));
    Rat inv = 1 / m.at(r, c);
    for (size_t j = 0; j < m.cols(); ++j) m.at(r, j) *= inv;
    for (size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m.at(i, c) == 0) continue;
      Rat f = m.at(i, c);
      for (size_t j = 0; j < m.cols(); ++j) m.at(i, j) -= f * m.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

size_t RatMat::rank() const {
  RatMat m = *this;
  return rref(m).size();
}

std::optional<RatVec> RatMat::solve(const RatVec& b) const {
  check_same_size(b.size(), rows_);
  RatMat aug(rows_, cols_ + 1);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_) = b[i];
  }
  std::vector<size_t> pivots = rref(aug);
  for (size_t c : pivots)
    if (c == cols_) return std::nullopt;  // inconsistent
  RatVec x(cols_, Rat(0));
  for (size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug.at(k, cols_);
  return x;
}

std::optional<RatMat> RatMat::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  RatMat aug(rows_, 2 * cols_);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_ + i) = 1;
  }
  std::vector<size_t> pivots = rref(aug);
  if (pivots.size() != rows_) return std::nullopt;
  for (size_t k = 0; k < pivots.size(); ++k)
    if (pivots[k] != k) return std::nullopt;
  RatMat inv(rows_, cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
  return inv;
}

std::vector<RatVec> RatMat::nullspace() const {
  RatMat m = *this;
  std::vector<size_t> pivots = rref(m);
  std::vector<bool> is_pivot(cols_, false);
  for (size_t c : pivots) is_pivot[c] = true;
  std::vector<RatVec> basis;
  for (size_t c = 0; c < cols_; ++c) {
    if (is_pivot[c]) continue;
    RatVec v(cols_, Rat(0));
    v[c] = 1;
    for (size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -m.at(k, c);
    basis.push_back(v);
  }
  return basis;
}

Rat RatMat::determinant() const {
  if (rows_ != cols_) fail("linalg", "determinant of non-square matrix");
  RatMat m = *this;
  Rat det(1);
  for (size_t c = 0; c < cols_; ++c) {
    size_t p = c;
    while (p < rows_ && m.at(p, c) == 0) ++p;
    if (p == rows_) return Rat(0);
    if (p != c) {
      for (size_t j = 0; j < cols_; ++j) std::swap(m.at(p, j), m.at(c, j));
      det = -det;
    }
    det *= m.at(c, c);
    Rat inv = 1 / m.at(c, c);
    for (size_t i = c + 1; i < rows_; ++i) {
      if (m.at(i, c) == 0) continue;
      Rat f = m.at(i, c) * inv;
      for (size_t j = c; j < cols_; ++j) m.at(i, j) -= f * m.at(c, j);
    }
  }
  return det;
}

IntMat IntMat::identity(size_t n) {
  IntMat m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMat IntMat::from_rows(const std::vector<IntVec>& rows, size_t cols) {
  IntMat m(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    check_same_size(rows[i].size(), cols);
    for (size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

IntVec IntMat::row(size_t i) const {
  IntVec r(cols_);
  for (size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
  return r;
}
IntVec IntMat::col(size_t j) const {
  IntVec r(rows_);
  for (size_t i = 0; i < rows_; ++i) r[i] = at(i, j);
  return r;
}

IntMat IntMat::transpose() const {
  IntMat m(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
  return m;
}

IntMat IntMat::multiply(const IntMat& other) const {
  if (cols_ != other.rows_) fail("linalg", "matrix size mismatch");
  IntMat m(rows_, other.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      if (at(i, k) == 0) continue;
      for (size_t j = 0; j < other.cols_; ++j) m.at(i, j) += at(i, k) * other.at(k, j);
    }
  return m;
}

IntVec IntMat::apply(const IntVec& v) const {
  check_same_size(v.size(), cols_);
  IntVec r(rows_);
  for (size_t i = 0; i < rows_; ++i) {
    Int s(0);
    for (size_t j = 0; j < cols_; ++j) s += at(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

RatMat IntMat::to_rat() const {
  RatMat m(rows_, cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) m.at(i, j) = Rat(at(i, j));
  return m;
}

Int IntMat::determinant() const {
  Rat d = to_rat().determinant();
  if (!is_integer(d)) fail("linalg", "non-integer determinant");
  return rat_num(d);
}

IntMat IntMat::unimodular_inverse() const {
  if (rows_ != cols_) fail("linalg", "inverse of non-square matrix");
  Int det = determinant();
  if (det != 1 && det != -1) fail("linalg", "matrix not unimodular");
  auto inv = to_rat().inverse();
  IntMat m(rows_, cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) {
      if (!is_integer(inv->at(i, j))) fail("linalg", "non-integer inverse entry");
      m.at(i, j) = rat_num(inv->at(i, j));
    }
  return m;
}

IntMat hermite_normal_form(const IntMat& a, IntMat* u_out) {
  IntMat h = a;
  IntMat u = IntMat::identity(a.rows());
  size_t r = 0;
  for (size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    // clear column c below row r via gcd steps
    while (true) {
      size_t p = h.rows();
      for (size_t i = r; i < h.rows(); ++i)
        if (h.at(i, c) != 0 && (p == h.rows() || abs(h.at(i, c)) < abs(h.at(p, c)))) p = i;
      if (p == h.rows()) break;  // column all zero below
      if (p != r) {
        for (size_t j = 0; j < h.cols(); ++j) std::swap(h.at(p, j), h.at(r, j));
        for (size_t j = 0; j < u.cols(); ++j) std::swap(u.at(p, j), u.at(r, j));
      }
      bool reduced = true;
      for (size_t i = r + 1; i < h.rows(); ++i) {
        if (h.at(i, c) == 0) continue;
        Int q = h.at(i, c) / h.at(r, c);  // truncated division is fine for the loop
        if (q != 0) {
          for (size_t j = 0; j < h.cols(); ++j) h.at(i, j) -= q * h.at(r, j);
          for (size_t j = 0; j < u.cols(); ++j) u.at(i, j) -= q * u.at(r, j);
        }
        if (h.at(i, c) != 0) reduced = false;
      }
      if (reduced) break;
    }
    if (h.at(r, c) == 0) continue;
    if (h.at(r, c) < 0) {
      for (size_t j = 0; j < h.cols(); ++j) h.at(r, j) = -h.at(r, j);
      for (size_t j = 0; j < u.cols(); ++j) u.at(r, j) = -u.at(r, j);
    }
    // reduce rows above
    for (size_t i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), h.at(i, c).get_mpz_t(), h.at(r, c).get_mpz_t());
      if (q != 0) {
        for (size_t j = 0; j < h.cols(); ++j) h.at(i, j) -= q * h.at(r, j);
        for (size_t j = 0; j < u.cols(); ++j) u.at(i, j) -= q * u.at(r, j);
      }
    }
    ++r;
  }
  if (u_out) *u_out = u;
  return h;
}

std::vector<Int> smith_diagonal(IntMat a) {
  size_t n = std::min(a.rows(), a.cols());
  std::vector<Int> diag;
  size_t top = 0;
  while (top < n) {
    // find nonzero pivot with smallest absolute value
    size_t pi = a.rows(), pj = a.cols();
    for (size_t i = top; i < a.rows(); ++i)
      for (size_t j = top; j < a.cols(); ++j)
        if (a.at(i, j) != 0 && (pi == a.rows() || abs(a.at(i, j)) < abs(a.at(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == a.rows()) break;
    for (size_t j = 0; j < a.cols(); ++j) std::swap(a.at(pi, j), a.at(top, j));
    for (size_t i = 0; i < a.rows(); ++i) std::swap(a.at(i, pj), a.at(i, top));
    bool clean = true;
    for (size_t i = top + 1; i < a.rows(); ++i) {
      Int q = a.at(i, top) / a.at(top, top);
      if (q != 0)
        for (size_t j = 0; j < a.cols(); ++j) a.at(i, j) -= q * a.at(top, j);
      if (a.at(i, top) != 0) clean = false;
    }
    for (size_t j = top + 1; j < a.cols(); ++j) {
      Int q = a.at(top, j) / a.at(top, top);
      if (q != 0)
        for (size_t i = 0; i < a.rows(); ++i) a.at(i, j) -= q * a.at(i, top);
      if (a.at(top, j) != 0) clean = false;
    }
    if (!clean) continue;  // repeat with smaller entries
    ++top;
  }
  for (size_t i = 0; i < n; ++i) {
    if (a.at(i, i) == 0) break;
    diag.push_back(abs(a.at(i, i)));
  }
  // enforce divisibility chain
  for (size_t i = 0; i + 1 < diag.size(); ++i)
    for (size_t j = i + 1; j < diag.size(); ++j) {
      Int g;
      mpz_gcd(g.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
      Int l = diag[i] / g * diag[j];
      diag[i] = g;
      diag[j] = l;
    }
  return diag;
}

// Basis of {x in Z^n : R x = 0}; saturated by construction.
static std::vector<IntVec> integer_kernel(const std::vector<IntVec>& r_rows, size_t n) {
  IntMat m = IntMat::from_rows(r_rows, n).transpose();  // n x m
  IntMat u;
  IntMat h = hermite_normal_form(m, &u);
  std::vector<IntVec> ker;
  for (size_t i = 0; i < h.rows(); ++i)
    if (is_zero(h.row(i))) ker.push_back(u.row(i));
  return ker;
}

std::vector<IntVec> lattice_span_basis(const std::vector<IntVec>& rows, size_t n) {
  std::vector<IntVec> nz;
  for (const IntVec& r : rows)
    if (!is_zero(r)) nz.push_back(r);
  if (nz.empty()) return {};
  std::vector<IntVec> ann = integer_kernel(nz, n);
  if (ann.empty()) {
    std::vector<IntVec> basis;
    for (size_t i = 0; i < n; ++i) {
      IntVec e(n, Int(0));
      e[i] = 1;
      basis.push_back(e);
    }
    return basis;
  }
  return integer_kernel(ann, n);
}

bool generates_saturated_lattice(const std::vector<IntVec>& rows, size_t n) {
  std::vector<IntVec> nz;
  for (const IntVec& r : rows)
    if (!is_zero(r)) nz.push_back(r);
  if (nz.empty()) return true;
  std::vector<Int> d = smith_diagonal(IntMat::from_rows(nz, n));
  for (const Int& x : d)
    if (x != 1) return false;
  return true;
}

}  // namespace tropscat
