#pragma once

#include <memory>

#include "tropscat/symbols.hpp"

namespace tropscat {

// Laurent polynomial over Coeff in lattice variables (no q, no u/v) --
// the slab functions f_{v rho} and coefficient numerators live here.
class Poly {
 public:
  Poly() : rank_(0) {}
  explicit Poly(size_t rank) : rank_(rank) {}
  static Poly monomial(size_t rank, const Coeff& c, const IntVec& m);
  static Poly one(size_t rank) { return monomial(rank, Coeff(1), IntVec(rank, Int(0))); }

  size_t rank() const { return rank_; }
  bool is_zero() const { return t_.empty(); }
  bool is_one() const;
  Coeff constant_term() const;
  const std::map<IntVec, Coeff>& terms() const { return t_; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const Coeff& c) const;
  Poly pow(unsigned e) const;
  // Coefficientwise <m, n>-weighted sum: the log derivative numerator.
  Poly log_derivative_numerator(const RatVec& n) const;
  bool operator==(const Poly& o) const { return rank_ == o.rank_ && t_ == o.t_; }
  std::string str() const;

 private:
  size_t rank_;
  std::map<IntVec, Coeff> t_;
  void prune();
};

// Ring context shared by elements.  Immutable.
class Ring {
 public:
  enum class Kind { Laurent, SlabUV, Toric };

  static std::shared_ptr<const Ring> laurent(size_t rank, int order);
  // Q[L_rho][u,v][q] / (uv - q^kink * f, q^{order+1}); f must have unit
  // constant term.  The semi-flat chart is the same ring with f = 1.
  static std::shared_ptr<const Ring> slab_uv(size_t rank, int kink, const Poly& f, int order);
  // Q[P]/(q^{order+1}) with q = z^rho and P cut out by a_i >= psi_i(m):
  // psi_i(m) = max over the stored covectors c of <m, c>.
  static std::shared_ptr<const Ring> toric(size_t mdim, const IntVec& rho,
                                           const std::vector<std::vector<RatVec>>& psis, int order);

  Kind kind() const { return kind_; }
  size_t rank() const { return rank_; }
  int order() const { return order_; }
  int kink() const { return kink_; }
  const Poly& slab_f() const { return f_; }
  bool slab_trivial() const;  // f == 1
  // number of components of a direction covector
  size_t deriv_dim() const;
  // Toric helpers
  size_t toric_mdim() const { return mdim_; }
  bool toric_member(const IntVec& p) const;
  int toric_q_order(const IntVec& p) const;  // largest t with p - t*rho in P
  bool same(const Ring& o) const;

 private:
  Kind kind_ = Kind::Laurent;
  size_t rank_ = 0;  // lattice rank of the z-part (Toric: full ambient)
  int order_ = 0;
  int kink_ = 0;
  Poly f_;
  size_t mdim_ = 0;
  IntVec rho_;
  std::vector<std::vector<RatVec>> psis_;
};

using RingPtr = std::shared_ptr<const Ring>;

// key of one monomial term: q-power, lattice exponent, u/v exponent
// (u: w > 0, v: w < 0), and the wedge of coordinate derivations.
struct TermKey {
  int q = 0;
  IntVec m;
  long w = 0;
  std::vector<int> wedge;
  bool operator<(const TermKey& o) const;
  bool operator==(const TermKey& o) const;
};

// An element of the truncated ring tensored with the exterior algebra of log
// derivations: finite sum of  c * q^j z^m u^w dx_{i1} ^ ... ^ dx_{il}.
// SlabUV elements may carry a global denominator f^{fden}.
class Element {
 public:
  Element() = default;
  explicit Element(RingPtr ring) : ring_(std::move(ring)) {}
  static Element zero(RingPtr ring) { return Element(std::move(ring)); }
  static Element term(RingPtr ring, const Coeff& c, int q, const IntVec& m, long w = 0,
                      std::vector<int> wedge = {});
  static Element from_poly(RingPtr ring, const Poly& p, int q = 0);

  const RingPtr& ring() const { return ring_; }
  bool is_zero() const { return t_.empty(); }
  const std::map<TermKey, Coeff>& terms() const { return t_; }
  int fden() const { return fden_; }

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator-() const;
  Element operator*(const Element& o) const;  // ring/exterior product
  Element scaled(const Coeff& c) const;
  bool operator==(const Element& o) const;
  bool operator!=(const Element& o) const { return !(*this == o); }

  // wedge degree if homogeneous, -1 if mixed, 0 for zero element
  int wedge_degree() const;
  std::vector<Element> split_by_wedge_degree() const;
  Element wedge_part(size_t deg) const;
  Element q_part(int j) const;          // homogeneous q-order part (Laurent/SlabUV)
  int min_q_order() const;              // k+1 if zero
  bool divisible_by_q() const;
  Element truncated(int new_order) const;  // reduce mod q^{new_order+1}
  Element with_ring(RingPtr r) const;      // same terms, new context (orders may differ)
  // reinterpret the stored terms as a numerator over f^d (SlabUV localization)
  Element with_denominator(int d) const;

  // derivation along covector n (size deriv_dim); SlabUV applies the
  // twisted rule on v-powers.
  Element derive(const RatVec& n) const;
  // odd left partial with respect to dx_i
  Element xi_partial(int i) const;
  // chart transport for Laurent elements of wedge degree <= 1
  Element transform(const IntMat& map) const;
  std::string str() const;

  static void require_same_ring(const Element& a, const Element& b);

 private:
  RingPtr ring_;
  std::map<TermKey, Coeff> t_;
  int fden_ = 0;
  void insert(const TermKey& k, const Coeff& c);
  void canon();
  Element times_f(unsigned pow) const;  // multiply numerator by slab f^pow
  friend Element bracket(const Element&, const Element&);
};

// [a, b]: Schouten-Nijenhuis bracket in the conventions of the displayed
// generator rules; on vector fields
//   [z^m1 d_{n1}, z^m2 d_{n2}] = z^{m1+m2} d_{<m1,n2> n1 - <m2,n1> n2}.
Element bracket(const Element& a, const Element& b);
// BV operator for the standard (semi-flat) volume form; SlabUV carries the
// log f twist on v.
Element bv_delta(const Element& a);
bool check_bv_identity(const Element& v, const Element& w);
bool is_divergence_free(const Element& a);

enum class ActionMode { Auto, Function, Adjoint };

// exp([theta,.]) applied to x; theta must be divisible by q and of wedge
// degree 1.  Function mode acts by the derivation, Adjoint by the bracket.
Element exp_adjoint(const Element& theta, const Element& x, ActionMode mode = ActionMode::Auto);

// Word of exponentials  exp([t1,.]) o ... o exp([tr,.]), applied right to left.
class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(RingPtr ring) : ring_(std::move(ring)) {}
  static GroupElement identity(RingPtr ring) { return GroupElement(std::move(ring)); }
  static GroupElement exponential(const Element& log_letter);

  const RingPtr& ring() const { return ring_; }
  const std::vector<Element>& letters() const { return letters_; }
  bool is_identity_word() const { return letters_.empty(); }

  GroupElement compose(const GroupElement& then) const;  // *this after `then`
  GroupElement inverse() const;
  GroupElement power(int sign) const;  // sign in {1,-1}
  Element act(const Element& x, ActionMode mode = ActionMode::Auto) const;
  // extensional equality: equal action on ring generators mod q^{k+1}
  bool same_action(const GroupElement& o) const;
  GroupElement truncated(int new_order) const;

 private:
  RingPtr ring_;
  std::vector<Element> letters_;
};

std::vector<Element> ring_generators(const RingPtr& ring);

// log(1 + c q^a z^m) * d_n as an element (series truncated by the ring order).
Element log_one_plus_term(const RingPtr& ring, const Coeff& c, int qpow, const IntVec& m,
                          const RatVec& n);
// log(f) * d_n for f with constant term 1 whose nonconstant part is
// divisible by q.
Element log_unit_series(const Element& f_minus_one, const RatVec& n);

// text form: terms "c q^j z^[m] u^w d_[n]" joined by " + " / " - "
std::string print_element(const Element& e);
Element parse_element(const std::string& text, const RingPtr& ring);

// slab chart hop: h: R_f -> R_1 with u -> u, v -> f v (and its inverse);
// exact in the f-localized coefficients.
Element slab_to_semiflat(const Element& x, const RingPtr& semiflat_ring);
Element semiflat_to_slab(const Element& x, const RingPtr& slab_ring);

}  // namespace tropscat
