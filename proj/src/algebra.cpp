#include "tropscat/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace tropscat {

Poly Poly::monomial(size_t rank, const Coeff& c, const IntVec& m) {
  if (m.size() != rank) fail("poly", "exponent size mismatch");
  Poly p(rank);
  if (!c.is_zero()) p.t_[m] = c;
  return p;
}

bool Poly::is_one() const {
  return t_.size() == 1 && tropscat::is_zero(t_.begin()->first) && t_.begin()->second == Coeff(1);
}

Coeff Poly::constant_term() const {
  auto it = t_.find(IntVec(rank_, Int(0)));
  return it == t_.end() ? Coeff() : it->second;
}

void Poly::prune() {
  for (auto it = t_.begin(); it != t_.end();)
    it = it->second.is_zero() ? t_.erase(it) : std::next(it);
}

Poly Poly::operator+(const Poly& o) const {
  if (rank_ != o.rank_) fail("poly", "rank mismatch");
  Poly r = *this;
  for (const auto& [m, c] : o.t_) r.t_[m] += c;
  r.prune();
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + o.scaled(Coeff(Rat(-1))); }

Poly Poly::operator*(const Poly& o) const {
  if (rank_ != o.rank_) fail("poly", "rank mismatch");
  Poly r(rank_);
  for (const auto& [m1, c1] : t_)
    for (const auto& [m2, c2] : o.t_) r.t_[add(m1, m2)] += c1 * c2;
  r.prune();
  return r;
}

Poly Poly::scaled(const Coeff& c) const {
  Poly r(rank_);
  for (const auto& [m, v] : t_) r.t_[m] = v * c;
  r.prune();
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly r = Poly::one(rank_);
  for (unsigned i = 0; i < e; ++i) r = r * (*this);
  return r;
}

Poly Poly::log_derivative_numerator(const RatVec& n) const {
  if (n.size() != rank_) fail("poly", "covector size mismatch");
  Poly r(rank_);
  for (const auto& [m, c] : t_) {
    Coeff w = c * Coeff(dot(m, n));
    if (!w.is_zero()) r.t_[m] = w;
  }
  return r;
}

std::string Poly::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : t_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")z^" << to_string(m);
  }
  return os.str();
}

std::shared_ptr<const Ring> Ring::laurent(size_t rank, int order) {
  auto r = std::make_shared<Ring>();
  r->kind_ = Kind::Laurent;
  r->rank_ = rank;
  r->order_ = order;
  return r;
}

std::shared_ptr<const Ring> Ring::slab_uv(size_t rank, int kink, const Poly& f, int order) {
  if (f.rank() != rank) fail("ring", "slab function rank mismatch");
  if (!f.constant_term().is_unit()) fail("non-unit f constant term", "slab function must have unit constant term");
  if (kink < 1) fail("ring", "slab kink must be positive");
  auto r = std::make_shared<Ring>();
  r->kind_ = Kind::SlabUV;
  r->rank_ = rank;
  r->order_ = order;
  r->kink_ = kink;
  r->f_ = f;
  return r;
}

std::shared_ptr<const Ring> Ring::toric(size_t mdim, const IntVec& rho,
                                        const std::vector<std::vector<RatVec>>& psis, int order) {
  auto r = std::make_shared<Ring>();
  r->kind_ = Kind::Toric;
  r->rank_ = mdim + psis.size();
  r->mdim_ = mdim;
  r->order_ = order;
  r->rho_ = rho;
  r->psis_ = psis;
  if (rho.size() != r->rank_) fail("ring", "rho size mismatch");
  return r;
}

bool Ring::slab_trivial() const { return f_.is_one(); }

size_t Ring::deriv_dim() const {
  switch (kind_) {
    case Kind::Laurent:
      return rank_;
    case Kind::SlabUV:
      return rank_ + 1;
    case Kind::Toric:
      return rank_;
  }
  return rank_;
}

bool Ring::toric_member(const IntVec& p) const {
  if (kind_ != Kind::Toric) fail("ring", "not a toric monoid ring");
  if (p.size() != rank_) return false;
  IntVec m(p.begin(), p.begin() + mdim_);
  for (size_t i = 0; i < psis_.size(); ++i) {
    Rat psi(0);
    bool first = true;
    for (const RatVec& c : psis_[i]) {
      Rat v = dot(c, m);
      if (first || v > psi) psi = v;
      first = false;
    }
    if (psis_[i].empty()) psi = 0;
    if (Rat(p[mdim_ + i]) < psi) return false;
  }
  return true;
}

int Ring::toric_q_order(const IntVec& p) const {
  if (!toric_member(p)) fail("monomial outside support", "point not in the toric monoid");
  int t = 0;
  IntVec cur = p;
  while (t <= order_ + 1) {
    IntVec next = sub(cur, rho_);
    bool ok = true;
    if (next.size() != rank_) ok = false;
    if (ok) {
      // membership without throwing
      IntVec m(next.begin(), next.begin() + mdim_);
      for (size_t i = 0; i < psis_.size() && ok; ++i) {
        Rat psi(0);
        bool first = true;
        for (const RatVec& c : psis_[i]) {
          Rat v = dot(c, m);
          if (first || v > psi) psi = v;
          first = false;
        }
        if (psis_[i].empty()) psi = 0;
        if (Rat(next[mdim_ + i]) < psi) ok = false;
      }
    }
    if (!ok) break;
    cur = next;
    ++t;
  }
  return t;
}

bool Ring::same(const Ring& o) const {
  return kind_ == o.kind_ && rank_ == o.rank_ && order_ == o.order_ && kink_ == o.kink_ &&
         f_ == o.f_ && mdim_ == o.mdim_ && rho_ == o.rho_ && psis_.size() == o.psis_.size();
}

bool TermKey::operator<(const TermKey& o) const {
  if (q != o.q) return q < o.q;
  int c = lex_cmp(m, o.m);
  if (c) return c < 0;
  if (w != o.w) return w < o.w;
  return wedge < o.wedge;
}
bool TermKey::operator==(const TermKey& o) const {
  return q == o.q && m == o.m && w == o.w && wedge == o.wedge;
}

void Element::require_same_ring(const Element& a, const Element& b) {
  if (!a.ring_ || !b.ring_ || !a.ring_->same(*b.ring_))
    fail("mixed ring variants", "elements live in different ring contexts");
}

Element Element::term(RingPtr ring, const Coeff& c, int q, const IntVec& m, long w,
                      std::vector<int> wedge) {
  Element e(ring);
  if (c.is_zero()) return e;
  if (m.size() != ring->rank()) fail("element", "exponent size mismatch");
  std::sort(wedge.begin(), wedge.end());
  for (size_t i = 0; i + 1 < wedge.size(); ++i)
    if (wedge[i] == wedge[i + 1]) return e;  // repeated odd variable
  for (int i : wedge)
    if (i < 0 || (size_t)i >= ring->deriv_dim()) fail("element", "derivation index out of range");
  if (ring->kind() != Ring::Kind::SlabUV && w != 0) fail("element", "u/v exponent outside slab ring");
  TermKey k{q, m, w, wedge};
  if (ring->kind() == Ring::Kind::Toric) {
    k.q = 0;
    if (!ring->toric_member(m)) fail("monomial outside support", "point not in the toric monoid " + to_string(m));
    if (ring->toric_q_order(m) > ring->order()) return e;
  } else {
    if (q < 0) fail("element", "negative q power");
    if (q > ring->order()) return e;
  }
  e.t_[k] = c;
  return e;
}

Element Element::from_poly(RingPtr ring, const Poly& p, int q) {
  Element e(ring);
  for (const auto& [m, c] : p.terms()) e = e + term(ring, c, q, m);
  return e;
}

void Element::insert(const TermKey& k, const Coeff& c) {
  auto it = t_.find(k);
  if (it == t_.end()) {
    if (!c.is_zero()) t_[k] = c;
  } else {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

void Element::canon() {
  for (auto it = t_.begin(); it != t_.end();)
    it = it->second.is_zero() ? t_.erase(it) : std::next(it);
  if (t_.empty()) fden_ = 0;
}

Element Element::times_f(unsigned pow) const {
  if (pow == 0) return *this;
  const Poly& f = ring_->slab_f();
  Poly fp = f.pow(pow);
  Element r(ring_);
  r.fden_ = fden_;
  for (const auto& [k, c] : t_)
    for (const auto& [mf, cf] : fp.terms()) {
      TermKey k2 = k;
      k2.m = add(k.m, mf);
      r.insert(k2, c * cf);
    }
  r.canon();
  return r;
}

Element Element::operator+(const Element& o) const {
  require_same_ring(*this, o);
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  const Element* a = this;
  const Element* b = &o;
  Element ax, bx;
  if (fden_ != o.fden_) {
    int d = std::max(fden_, o.fden_);
    ax = times_f(d - fden_);
    ax.fden_ = d;
    bx = o.times_f(d - o.fden_);
    bx.fden_ = d;
    a = &ax;
    b = &bx;
  }
  Element r = *a;
  for (const auto& [k, c] : b->t_) r.insert(k, c);
  r.canon();
  return r;
}

Element Element::operator-(const Element& o) const { return *this + (-o); }

Element Element::operator-() const {
  Element r = *this;
  for (auto& [k, c] : r.t_) c = -c;
  return r;
}

Element Element::scaled(const Coeff& c) const {
  Element r(ring_);
  r.fden_ = fden_;
  if (c.is_zero()) return r;
  for (const auto& [k, v] : t_) r.insert(k, v * c);
  r.canon();
  return r;
}

namespace {
// shuffle sign of concatenating sorted index lists a and b; 0 if they meet
int wedge_merge(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out) {
  int inversions = 0;
  for (int x : a)
    for (int y : b) {
      if (x == y) return 0;
      if (x > y) ++inversions;
    }
  out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return (inversions % 2 == 0) ? 1 : -1;
}
}  // namespace

Element Element::operator*(const Element& o) const {
  require_same_ring(*this, o);
  Element r(ring_);
  r.fden_ = fden_ + o.fden_;
  const bool toric = ring_->kind() == Ring::Kind::Toric;
  const bool slab = ring_->kind() == Ring::Kind::SlabUV;
  for (const auto& [k1, c1] : t_)
    for (const auto& [k2, c2] : o.t_) {
      std::vector<int> wedge;
      int sign = wedge_merge(k1.wedge, k2.wedge, wedge);
      if (sign == 0) continue;
      TermKey k;
      k.m = add(k1.m, k2.m);
      k.wedge = wedge;
      Coeff c = c1 * c2 * Coeff(Rat(sign));
      if (toric) {
        k.q = 0;
        if (!ring_->toric_member(k.m)) fail("monomial outside support", "product leaves the monoid");
        if (ring_->toric_q_order(k.m) > ring_->order()) continue;
        r.insert(k, c);
        continue;
      }
      k.q = k1.q + k2.q;
      k.w = k1.w + k2.w;
      long red = 0;
      if (slab && k1.w > 0 && k2.w < 0) red = std::min(k1.w, -k2.w);
      if (slab && k1.w < 0 && k2.w > 0) red = std::min(-k1.w, k2.w);
      if (red > 0) k.q += ring_->kink() * (int)red;
      if (k.q > ring_->order()) continue;
      if (red > 0) {
        Poly fp = ring_->slab_f().pow((unsigned)red);
        for (const auto& [mf, cf] : fp.terms()) {
          TermKey k3 = k;
          k3.m = add(k.m, mf);
          r.insert(k3, c * cf);
        }
      } else {
        r.insert(k, c);
      }
    }
  r.canon();
  return r;
}

bool Element::operator==(const Element& o) const {
  require_same_ring(*this, o);
  if (fden_ == o.fden_) return t_ == o.t_;
  Element a = times_f(o.fden_);
  Element b = o.times_f(fden_);
  return a.t_ == b.t_;
}

int Element::wedge_degree() const {
  if (t_.empty()) return 0;
  size_t d = t_.begin()->first.wedge.size();
  for (const auto& [k, c] : t_)
    if (k.wedge.size() != d) return -1;
  return (int)d;
}

std::vector<Element> Element::split_by_wedge_degree() const {
  std::map<size_t, Element> parts;
  for (const auto& [k, c] : t_) {
    auto it = parts.find(k.wedge.size());
    if (it == parts.end()) {
      Element e(ring_);
      e.fden_ = fden_;
      it = parts.emplace(k.wedge.size(), e).first;
    }
    it->second.insert(k, c);
  }
  std::vector<Element> out;
  for (auto& [d, e] : parts) {
    e.canon();
    out.push_back(e);
  }
  return out;
}

Element Element::wedge_part(size_t deg) const {
  Element e(ring_);
  e.fden_ = fden_;
  for (const auto& [k, c] : t_)
    if (k.wedge.size() == deg) e.insert(k, c);
  e.canon();
  return e;
}

Element Element::q_part(int j) const {
  Element e(ring_);
  e.fden_ = fden_;
  for (const auto& [k, c] : t_) {
    int qo = (ring_->kind() == Ring::Kind::Toric) ? ring_->toric_q_order(k.m) : k.q;
    if (qo == j) e.insert(k, c);
  }
  e.canon();
  return e;
}

int Element::min_q_order() const {
  int mn = ring_->order() + 1;
  for (const auto& [k, c] : t_) {
    int qo = (ring_->kind() == Ring::Kind::Toric) ? ring_->toric_q_order(k.m) : k.q;
    mn = std::min(mn, qo);
  }
  return mn;
}

bool Element::divisible_by_q() const { return min_q_order() >= 1; }

Element Element::truncated(int new_order) const {
  auto r2 = [&]() -> RingPtr {
    switch (ring_->kind()) {
      case Ring::Kind::Laurent:
        return Ring::laurent(ring_->rank(), new_order);
      case Ring::Kind::SlabUV:
        return Ring::slab_uv(ring_->rank(), ring_->kink(), ring_->slab_f(), new_order);
      case Ring::Kind::Toric:
        fail("ring", "toric truncation unsupported here");
    }
    return nullptr;
  }();
  Element e(r2);
  e.fden_ = fden_;
  for (const auto& [k, c] : t_)
    if (k.q <= new_order) e.insert(k, c);
  e.canon();
  return e;
}

Element Element::with_ring(RingPtr r) const {
  Element e(std::move(r));
  e.fden_ = fden_;
  for (const auto& [k, c] : t_) {
    if (e.ring_->kind() != Ring::Kind::Toric && k.q > e.ring_->order()) continue;
    e.insert(k, c);
  }
  e.canon();
  return e;
}

Element Element::derive(const RatVec& n) const {
  if (n.size() != ring_->deriv_dim()) fail("element", "covector size mismatch");
  Element r(ring_);
  r.fden_ = fden_;
  const bool slab = ring_->kind() == Ring::Kind::SlabUV;
  Element twist(ring_);  // terms needing an extra 1/f
  twist.fden_ = fden_ + 1;
  Poly fder;
  RatVec nrho;
  if (slab) {
    nrho = RatVec(n.begin(), n.begin() + ring_->rank());
    fder = ring_->slab_f().log_derivative_numerator(nrho);
  }
  for (const auto& [k, c] : t_) {
    Rat factor(0);
    if (slab) {
      factor = dot(k.m, nrho) + Rat(k.w) * n.back();
      // d_n(v^b) twist from the uv relation, and the quotient rule for the
      // global f^{fden} denominator
      Rat fpow = Rat(k.w < 0 ? -k.w : 0) - Rat(fden_);
      if (fpow != 0) {
        for (const auto& [mf, cf] : fder.terms()) {
          TermKey k2 = k;
          k2.m = add(k.m, mf);
          twist.insert(k2, c * cf * Coeff(fpow));
        }
      }
    } else {
      factor = dot(k.m, n);
    }
    if (factor != 0) r.insert(k, c * Coeff(factor));
  }
  r.canon();
  twist.canon();
  return r + twist;
}

Element Element::xi_partial(int i) const {
  Element r(ring_);
  r.fden_ = fden_;
  for (const auto& [k, c] : t_) {
    auto it = std::find(k.wedge.begin(), k.wedge.end(), i);
    if (it == k.wedge.end()) continue;
    size_t pos = (size_t)(it - k.wedge.begin());
    TermKey k2 = k;
    k2.wedge.erase(k2.wedge.begin() + pos);
    int sign = (pos % 2 == 0) ? 1 : -1;
    r.insert(k2, c * Coeff(Rat(sign)));
  }
  r.canon();
  return r;
}

Element Element::transform(const IntMat& map) const {
  if (ring_->kind() != Ring::Kind::Laurent) fail("element", "transform only on Laurent elements");
  if (map.rows() != ring_->rank() || map.cols() != ring_->rank()) fail("element", "map size mismatch");
  IntMat inv = map.unimodular_inverse();
  Element r(ring_);
  for (const auto& [k, c] : t_) {
    if (k.wedge.size() > 1) fail("element", "transform of wedge degree > 1");
    TermKey k2 = k;
    k2.m = map.apply(k.m);
    if (k.wedge.empty()) {
      r.insert(k2, c);
      continue;
    }
    // d_{e_i} -> sum_j inv[i][j] d_{e_j}
    int i = k.wedge[0];
    for (size_t j = 0; j < inv.cols(); ++j) {
      if (inv.at(i, j) == 0) continue;
      TermKey k3 = k2;
      k3.wedge = {(int)j};
      r.insert(k3, c * Coeff(Rat(inv.at(i, j))));
    }
  }
  r.canon();
  return r;
}

namespace {

// sum_i (dA/dxi_i) * d_i(B)
Element star(const Element& a, const Element& b) {
  Element::require_same_ring(a, b);
  Element r = Element::zero(a.ring());
  size_t dd = a.ring()->deriv_dim();
  for (size_t i = 0; i < dd; ++i) {
    Element pa = a.xi_partial((int)i);
    if (pa.is_zero()) continue;
    RatVec e(dd, Rat(0));
    e[i] = 1;
    Element db = b.derive(e);
    if (db.is_zero()) continue;
    r = r + pa * db;
  }
  return r;
}

}  // namespace

Element bracket(const Element& a, const Element& b) {
  Element::require_same_ring(a, b);
  Element r = Element::zero(a.ring());
  for (const Element& ha : a.split_by_wedge_degree())
    for (const Element& hb : b.split_by_wedge_degree()) {
      int p = ha.wedge_degree(), q = hb.wedge_degree();
      int sign = (((p - 1) * (q - 1)) % 2 == 0) ? 1 : -1;
      Element part = star(hb, ha) - star(ha, hb).scaled(Coeff(Rat(sign)));
      r = r + part;
    }
  return r;
}

Element bv_delta(const Element& a) {
  Element r = Element::zero(a.ring());
  size_t dd = a.ring()->deriv_dim();
  for (size_t i = 0; i < dd; ++i) {
    Element pa = a.xi_partial((int)i);
    if (pa.is_zero()) continue;
    RatVec e(dd, Rat(0));
    e[i] = 1;
    r = r + pa.derive(e);
  }
  return r;
}

bool check_bv_identity(const Element& v, const Element& w) {
  int p = v.wedge_degree(), q = w.wedge_degree();
  if (p < 0 || q < 0) fail("bv", "inputs must be wedge-homogeneous");
  Rat sign((p % 2 == 0) ? 1 : -1);
  Element lhs = bracket(v, w).scaled(Coeff(sign));
  Element rhs = bv_delta(v * w) - bv_delta(v) * w - (v * bv_delta(w)).scaled(Coeff(sign));
  return lhs == rhs;
}

bool is_divergence_free(const Element& a) {
  if (a.is_zero()) return true;
  if (a.wedge_degree() != 1) fail("bv", "divergence check expects a vector field");
  return bv_delta(a).is_zero();
}

Element exp_adjoint(const Element& theta, const Element& x, ActionMode mode) {
  if (!theta.is_zero() && theta.wedge_degree() != 1)
    fail("not in tropical vertex group", "letter is not a vector field");
  if (!theta.is_zero() && !theta.divisible_by_q())
    fail("not in tropical vertex group", "letter is not divisible by q");
  Element::require_same_ring(theta, x);
  ActionMode m = mode;
  if (m == ActionMode::Auto) {
    int d = x.wedge_degree();
    m = (d == 0) ? ActionMode::Function : ActionMode::Adjoint;
  }
  Element acc = x;
  Element cur = x;  // unscaled ad^s(x)
  Rat factorial(1);
  for (int s = 1; s <= x.ring()->order() + 1; ++s) {
    cur = (m == ActionMode::Function) ? star(theta, cur) : bracket(theta, cur);
    if (cur.is_zero()) break;
    factorial *= s;
    acc = acc + cur.scaled(Coeff(1 / factorial));
  }
  return acc;
}

GroupElement GroupElement::exponential(const Element& log_letter) {
  if (!log_letter.is_zero() && log_letter.wedge_degree() != 1)
    fail("not in tropical vertex group", "logarithm is not a vector field");
  if (!log_letter.is_zero() && !log_letter.divisible_by_q())
    fail("not in tropical vertex group", "logarithm is not divisible by q");
  GroupElement g(log_letter.ring());
  if (!log_letter.is_zero()) g.letters_.push_back(log_letter);
  return g;
}

GroupElement GroupElement::compose(const GroupElement& then) const {
  if (ring_ && then.ring_ && !ring_->same(*then.ring_)) fail("mixed ring variants", "group composition");
  GroupElement g(ring_ ? ring_ : then.ring_);
  g.letters_ = letters_;
  g.letters_.insert(g.letters_.end(), then.letters_.begin(), then.letters_.end());
  return g;
}

GroupElement GroupElement::inverse() const {
  GroupElement g(ring_);
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) g.letters_.push_back(-*it);
  return g;
}

GroupElement GroupElement::power(int sign) const {
  if (sign == 1) return *this;
  if (sign == -1) return inverse();
  fail("group", "only powers +1/-1 supported");
}

Element GroupElement::act(const Element& x, ActionMode mode) const {
  Element y = x;
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) y = exp_adjoint(*it, y, mode);
  return y;
}

std::vector<Element> ring_generators(const RingPtr& ring) {
  std::vector<Element> gens;
  IntVec zero_m(ring->rank(), Int(0));
  switch (ring->kind()) {
    case Ring::Kind::Laurent:
      for (size_t i = 0; i < ring->rank(); ++i) {
        IntVec m = zero_m;
        m[i] = 1;
        gens.push_back(Element::term(ring, Coeff(1), 0, m));
        m[i] = -1;
        gens.push_back(Element::term(ring, Coeff(1), 0, m));
      }
      break;
    case Ring::Kind::SlabUV:
      for (size_t i = 0; i < ring->rank(); ++i) {
        IntVec m = zero_m;
        m[i] = 1;
        gens.push_back(Element::term(ring, Coeff(1), 0, m));
        m[i] = -1;
        gens.push_back(Element::term(ring, Coeff(1), 0, m));
      }
      gens.push_back(Element::term(ring, Coeff(1), 0, zero_m, 1));
      gens.push_back(Element::term(ring, Coeff(1), 0, zero_m, -1));
      break;
    case Ring::Kind::Toric:
      fail("ring", "toric generators not enumerated");
  }
  return gens;
}

bool GroupElement::same_action(const GroupElement& o) const {
  if (ring_ && o.ring_ && !ring_->same(*o.ring_)) return false;
  RingPtr r = ring_ ? ring_ : o.ring_;
  if (!r) return true;
  for (const Element& g : ring_generators(r))
    if (!(act(g) == o.act(g))) return false;
  return true;
}

GroupElement GroupElement::truncated(int new_order) const {
  GroupElement g;
  for (const Element& l : letters_) {
    Element t = l.truncated(new_order);
    if (!g.ring_) g.ring_ = t.ring();
    if (!t.is_zero()) g.letters_.push_back(t);
  }
  if (!g.ring_ && ring_) {
    // all letters vanished; keep a ring with the new order
    g.ring_ = Ring::laurent(ring_->rank(), new_order);
    if (ring_->kind() == Ring::Kind::SlabUV)
      g.ring_ = Ring::slab_uv(ring_->rank(), ring_->kink(), ring_->slab_f(), new_order);
  }
  return g;
}

Element log_one_plus_term(const RingPtr& ring, const Coeff& c, int qpow, const IntVec& m,
                          const RatVec& n) {
  if (qpow < 1) fail("not in tropical vertex group", "log argument must be 1 mod q");
  Element sum = Element::zero(ring);
  Coeff cs = Coeff(1);
  for (int s = 1; s * qpow <= ring->order(); ++s) {
    cs = cs * c;
    IntVec ms(m.size());
    for (size_t j = 0; j < m.size(); ++j) ms[j] = m[j] * s;
    Rat sign = (s % 2 == 1) ? Rat(1, s) : Rat(-1, s);
    for (size_t i = 0; i < n.size(); ++i) {
      if (n[i] == 0) continue;
      sum = sum + Element::term(ring, cs * Coeff(sign * n[i]), s * qpow, ms, 0, {(int)i});
    }
  }
  return sum;
}

Element log_unit_series(const Element& g, const RatVec& n) {
  // log(1+g) d_n with g divisible by q
  if (!g.is_zero() && (!g.divisible_by_q() || g.wedge_degree() != 0))
    fail("not in tropical vertex group", "log argument must be 1 mod q");
  RingPtr ring = g.ring();
  Element series = Element::zero(ring);
  Element p = Element::term(ring, Coeff(1), 0, IntVec(ring->rank(), Int(0)));
  for (int s = 1; s <= ring->order(); ++s) {
    p = p * g;
    if (p.is_zero()) break;
    series = series + p.scaled(Coeff(Rat((s % 2 == 1) ? 1 : -1, s)));
  }
  Element out = Element::zero(ring);
  for (size_t i = 0; i < n.size(); ++i) {
    if (n[i] == 0) continue;
    Element xi = Element::term(ring, Coeff(n[i]), 0, IntVec(ring->rank(), Int(0)), 0, {(int)i});
    out = out + series * xi;
  }
  return out;
}

Element slab_to_semiflat(const Element& x, const RingPtr& semiflat_ring) {
  if (x.ring()->kind() != Ring::Kind::SlabUV || semiflat_ring->kind() != Ring::Kind::SlabUV)
    fail("slab", "chart hop requires slab rings");
  if (!semiflat_ring->slab_trivial()) fail("slab", "target must be the semi-flat chart");
  if (x.fden() != 0) fail("slab", "clear denominators before leaving the slab chart");
  const Poly& f = x.ring()->slab_f();
  Element r = Element::zero(semiflat_ring);
  for (const auto& [k, c] : x.terms()) {
    if (k.w >= 0) {
      r = r + Element::term(semiflat_ring, c, k.q, k.m, k.w, k.wedge);
    } else {
      Poly fp = f.pow((unsigned)(-k.w));
      for (const auto& [mf, cf] : fp.terms())
        r = r + Element::term(semiflat_ring, c * cf, k.q, add(k.m, mf), k.w, k.wedge);
    }
  }
  return r;
}

Element semiflat_to_slab(const Element& x, const RingPtr& slab_ring) {
  if (x.ring()->kind() != Ring::Kind::SlabUV || slab_ring->kind() != Ring::Kind::SlabUV)
    fail("slab", "chart hop requires slab rings");
  if (!x.ring()->slab_trivial()) fail("slab", "source must be the semi-flat chart");
  if (x.fden() != 0) fail("slab", "unexpected denominator in semi-flat chart");
  // v -> f^{-1} v: put everything over the common denominator f^D
  long D = 0;
  for (const auto& [k, c] : x.terms()) D = std::max(D, k.w < 0 ? -k.w : 0);
  const Poly& f = slab_ring->slab_f();
  Element r = Element::zero(slab_ring);
  for (const auto& [k, c] : x.terms()) {
    long need = k.w < 0 ? -k.w : 0;
    Poly fp = f.pow((unsigned)(D - need));
    for (const auto& [mf, cf] : fp.terms())
      r = r + Element::term(slab_ring, c * cf, k.q, add(k.m, mf), k.w, k.wedge);
  }
  return r.with_denominator((int)D);
}

Element Element::with_denominator(int d) const {
  if (d < 0) fail("element", "negative denominator power");
  if (d > 0 && (!ring_ || ring_->kind() != Ring::Kind::SlabUV))
    fail("element", "denominators only in slab rings");
  Element r = *this;
  r.fden_ = is_zero() ? 0 : d;
  return r;
}

std::string print_element(const Element& e) {
  if (e.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : e.terms()) {
    Rat cr;
    bool rational = c.is_rational();
    std::string coeff_str;
    bool negative = false;
    if (rational) {
      cr = c.rational_value();
      negative = cr < 0;
      Rat a = negative ? -cr : cr;
      coeff_str = to_string(a);
    } else {
      coeff_str = "(" + c.str() + ")";
    }
    if (first) {
      if (negative) os << "-";
      first = false;
    } else {
      os << (negative ? " - " : " + ");
    }
    std::vector<std::string> parts;
    if (coeff_str != "1" || (k.q == 0 && is_zero(k.m) && k.w == 0 && k.wedge.empty()))
      parts.push_back(coeff_str);
    if (k.q == 1)
      parts.push_back("q");
    else if (k.q != 0)
      parts.push_back("q^" + std::to_string(k.q));
    if (!is_zero(k.m)) {
      std::string z = "z^[";
      for (size_t i = 0; i < k.m.size(); ++i) z += (i ? "," : "") + to_string(k.m[i]);
      parts.push_back(z + "]");
    }
    if (k.w > 0) parts.push_back(k.w == 1 ? "u" : "u^" + std::to_string(k.w));
    if (k.w < 0) parts.push_back(k.w == -1 ? "v" : "v^" + std::to_string(-k.w));
    if (k.wedge.size() == 1) {
      std::string d = "d_[";
      for (size_t i = 0; i < e.ring()->deriv_dim(); ++i)
        d += (i ? "," : "") + std::string(k.wedge[0] == (int)i ? "1" : "0");
      parts.push_back(d + "]");
    } else if (!k.wedge.empty()) {
      std::string d = "w_[";
      for (size_t i = 0; i < k.wedge.size(); ++i) d += (i ? "," : "") + std::to_string(k.wedge[i]);
      parts.push_back(d + "]");
    }
    for (size_t i = 0; i < parts.size(); ++i) os << (i ? " " : "") << parts[i];
  }
  std::string body = os.str();
  if (e.fden() > 0) return "(" + body + ") / f^" + std::to_string(e.fden());
  return body;
}

namespace {

std::vector<Rat> parse_rat_list(const std::string& s, const std::string& what) {
  std::vector<Rat> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(parse_rat(cur));
      cur.clear();
    } else if (!isspace((unsigned char)ch)) {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(parse_rat(cur));
  if (out.empty()) fail("parse", "empty " + what);
  return out;
}

}  // namespace

Element parse_element(const std::string& text, const RingPtr& ring) {
  // terms split on top-level + and - (with "-" meaning subtract)
  Element total = Element::zero(ring);
  std::vector<std::pair<int, std::string>> terms;  // sign, body
  size_t i = 0;
  int sign = 1;
  std::string cur;
  auto flush = [&]() {
    std::string t = cur;
    size_t a = t.find_first_not_of(" \t");
    if (a == std::string::npos) {
      cur.clear();
      return;
    }
    terms.push_back({sign, t});
    cur.clear();
  };
  int depth = 0;
  for (; i < text.size(); ++i) {
    char ch = text[i];
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (depth == 0 && (ch == '+' || ch == '-')) {
      // minus inside a number like "^-1" or leading coefficient sign
      bool is_sep = false;
      size_t back = cur.find_last_not_of(" \t");
      if (back != std::string::npos && !cur.substr(0, back + 1).empty()) {
        char prev = cur[back];
        is_sep = (prev != '^' && prev != '/' && prev != ',');
      }
      if (is_sep) {
        flush();
        sign = (ch == '-') ? -1 : 1;
        continue;
      }
      if (cur.find_first_not_of(" \t") == std::string::npos && ch == '-') {
        // leading sign of the first term
        flush();
        sign = -1;
        continue;
      }
    }
    cur += ch;
  }
  flush();
  if (terms.empty()) {
    std::string t = text;
    if (t.find_first_not_of(" \t") == std::string::npos) fail("parse", "empty element");
  }
  for (auto& [sgn, body] : terms) {
    if (body.find_first_not_of(" \t") == std::string::npos && sgn == -1) continue;
    // tokenize by spaces
    std::vector<std::string> toks;
    std::istringstream is(body);
    std::string tok;
    while (is >> tok) toks.push_back(tok);
    if (toks.empty()) fail("parse", "empty term");
    Rat coeff(sgn);
    int q = 0;
    IntVec m(ring->rank(), Int(0));
    long w = 0;
    std::optional<RatVec> dir;
    for (const std::string& t : toks) {
      if (t == "q") {
        q += 1;
      } else if (t.rfind("q^", 0) == 0) {
        q += (int)parse_int(t.substr(2)).get_si();
      } else if (t.rfind("z^[", 0) == 0 && t.back() == ']') {
        std::vector<Rat> xs = parse_rat_list(t.substr(3, t.size() - 4), "exponent");
        if (xs.size() != ring->rank()) fail("parse", "z exponent size mismatch");
        for (size_t j = 0; j < xs.size(); ++j) {
          if (!is_integer(xs[j])) fail("parse", "non-integer z exponent");
          m[j] += rat_num(xs[j]);
        }
      } else if (t == "u") {
        w += 1;
      } else if (t.rfind("u^", 0) == 0) {
        w += parse_int(t.substr(2)).get_si();
      } else if (t == "v") {
        w -= 1;
      } else if (t.rfind("v^", 0) == 0) {
        w -= parse_int(t.substr(2)).get_si();
      } else if (t.rfind("d_[", 0) == 0 && t.back() == ']') {
        if (dir) fail("parse", "repeated direction");
        RatVec n = parse_rat_list(t.substr(3, t.size() - 4), "direction");
        if (n.size() != ring->deriv_dim()) fail("parse", "direction size mismatch");
        dir = n;
      } else {
        coeff *= parse_rat(t);
      }
    }
    if (!dir) {
      total = total + Element::term(ring, Coeff(coeff), q, m, w);
    } else {
      for (size_t j = 0; j < dir->size(); ++j) {
        if ((*dir)[j] == 0) continue;
        total = total + Element::term(ring, Coeff(coeff * (*dir)[j]), q, m, w, {(int)j});
      }
    }
  }
  return total;
}

}  // namespace tropscat
