#include "tropscat/manifold.hpp"

#include <algorithm>
#include <set>

namespace tropscat {

const IntMat& TropicalManifold::chart_map(const std::string& tau, const std::string& sigma) const {
  auto it = fan_structures.find(tau);
  if (it == fan_structures.end()) fail("manifold", "no fan structure along " + tau);
  auto jt = it->second.find(sigma);
  if (jt == it->second.end()) fail("manifold", "fan structure along " + tau + " misses cell " + sigma);
  return jt->second;
}

Cone TropicalManifold::k_cone(const std::string& tau, const std::string& mid) const {
  // pick a maximal cell containing mid (and hence tau)
  std::vector<std::string> tops = complex.maximal_cofaces(mid);
  if (tops.empty()) fail("manifold", "cell " + mid + " has no maximal coface");
  const std::string& sigma = tops.front();
  const IntMat& s = chart_map(tau, sigma);
  const Polyhedron& sp = complex.cell(sigma);
  Polyhedron tau_img = (tau == sigma) ? sp : complex.arrow(tau, sigma).image(complex.cell(tau));
  Polyhedron mid_img = (mid == sigma) ? sp : complex.arrow(mid, sigma).image(complex.cell(mid));
  Cone tangent = mid_img.tangent_cone_at(tau_img);
  // push through S_tau
  std::vector<IntVec> rays, lines;
  for (const IntVec& r : tangent.rays()) {
    IntVec v = s.apply(r);
    if (!is_zero(v)) rays.push_back(primitive(v));
  }
  for (const IntVec& l : tangent.lines()) {
    IntVec v = s.apply(l);
    if (!is_zero(v)) lines.push_back(primitive(v));
  }
  return Cone::from_rays(rays, s.rows(), lines);
}

Fan TropicalManifold::fan_at(const std::string& tau) const {
  std::vector<Cone> cones;
  size_t k = dim() - complex.cell_dim(tau);
  cones.push_back(Cone::zero(k));
  // all cells containing tau (including tau itself: the zero cone)
  for (const std::string& mid : complex.cofaces_of(tau)) cones.push_back(k_cone(tau, mid));
  return Fan::from_cones(cones, k);
}

std::vector<IntVec> TropicalManifold::tangent_lattice_in(const std::string& tau,
                                                         const std::string& sigma) const {
  if (tau == sigma) {
    std::vector<IntVec> basis;
    size_t n = complex.cell(sigma).ambient_dim();
    for (size_t i = 0; i < n; ++i) {
      IntVec e(n, Int(0));
      e[i] = 1;
      basis.push_back(e);
    }
    return basis;
  }
  const Arrow& a = complex.arrow(tau, sigma);
  std::vector<IntVec> img;
  for (size_t j = 0; j < a.map.cols(); ++j) img.push_back(a.map.col(j));
  return lattice_span_basis(img, a.map.rows());
}

Report TropicalManifold::validate() const {
  Report rep = complex.validate();
  size_t n = dim();
  // cache of S_tau-pushforward cones keyed by (tau, mid, sigma)
  std::map<std::tuple<std::string, std::string, std::string>, Cone> cone_cache;
  auto pushed_cone = [&](const std::string& tau, const std::string& mid,
                         const std::string& sigma) -> const Cone& {
    auto key = std::make_tuple(tau, mid, sigma);
    auto it = cone_cache.find(key);
    if (it != cone_cache.end()) return it->second;
    const IntMat& s = chart_map(tau, sigma);
    const Polyhedron& sp = complex.cell(sigma);
    Polyhedron tau_img = (tau == sigma) ? sp : complex.arrow(tau, sigma).image(complex.cell(tau));
    Polyhedron mid_img = (mid == sigma) ? sp : complex.arrow(mid, sigma).image(complex.cell(mid));
    Cone tangent = mid_img.tangent_cone_at(tau_img);
    std::vector<IntVec> rays, lines;
    for (const IntVec& r : tangent.rays()) {
      IntVec v = s.apply(r);
      if (!is_zero(v)) rays.push_back(primitive(v));
    }
    for (const IntVec& l : tangent.lines()) {
      IntVec v = s.apply(l);
      if (!is_zero(v)) lines.push_back(primitive(v));
    }
    return cone_cache.emplace(key, Cone::from_rays(rays, s.rows(), lines)).first->second;
  };
  for (const auto& [tau, p] : complex.cells()) {
    size_t k = n - p.dim();
    std::vector<std::string> tops = complex.maximal_cofaces(tau);
    if (tops.empty()) {
      rep.add("fan-structure", tau, "no maximal cell contains this cell");
      continue;
    }
    auto fs = fan_structures.find(tau);
    if (fs == fan_structures.end()) {
      rep.add("fan-structure", tau, "missing fan structure");
      continue;
    }
    bool shape_ok = true;
    for (const std::string& sigma : tops) {
      auto jt = fs->second.find(sigma);
      if (jt == fs->second.end()) {
        rep.add("fan-structure", tau, "missing matrix for maximal cell " + sigma);
        shape_ok = false;
        continue;
      }
      const IntMat& s = jt->second;
      if (s.rows() != k || s.cols() != complex.cell(sigma).ambient_dim()) {
        rep.add("fan-structure", tau, "matrix shape mismatch for " + sigma);
        shape_ok = false;
        continue;
      }
      // surjectivity onto Z^k (submersion) and kernel = Lambda_tau
      std::vector<IntVec> rows;
      for (size_t i = 0; i < s.rows(); ++i) rows.push_back(s.row(i));
      if (k > 0 && !generates_saturated_lattice(rows, s.cols())) {
        rep.add("fan-structure", tau, "not a submersion at " + tau + " (matrix for " + sigma + ")");
        shape_ok = false;
      }
      if (tau != sigma) {
        const Arrow& a = complex.arrow(tau, sigma);
        IntMat comp = s.multiply(a.map);
        bool zero = true;
        for (size_t i = 0; i < comp.rows(); ++i)
          if (!is_zero(comp.row(i))) zero = false;
        if (!zero) rep.add("fan-structure", tau, "does not kill tangent directions of " + tau);
      }
    }
    if (!shape_ok) continue;
    // cone consistency across different ambient maximal cells
    for (const std::string& mid : complex.cofaces_of(tau)) {
      std::vector<std::string> mtops = complex.maximal_cofaces(mid);
      if (mtops.size() < 2) continue;
      std::optional<Cone> first;
      for (const std::string& sigma : mtops) {
        const Cone& c = pushed_cone(tau, mid, sigma);
        if (!first)
          first = c;
        else if (!first->equals(c))
          rep.add("fan-structure", tau, "cone of " + mid + " disagrees between maximal charts");
      }
    }
    // completeness of Sigma_tau via the maximal star: full-dimensional cones,
    // pairwise disjoint interiors, every facet shared by exactly two cones
    try {
      std::vector<Cone> star;
      for (const std::string& sigma : tops) star.push_back(pushed_cone(tau, sigma, sigma));
      bool complete = true;
      std::string why;
      if (k > 0) {
        for (const Cone& c : star)
          if (c.dim() != k) {
            complete = false;
            why = "star cone not full-dimensional";
          }
        for (size_t a = 0; a < star.size() && complete; ++a)
          for (size_t b = a + 1; b < star.size() && complete; ++b)
            if (star[a].intersect(star[b]).dim() >= k) {
              complete = false;
              why = "star cones overlap";
            }
        for (size_t a = 0; a < star.size() && complete; ++a)
          for (const Cone& f : star[a].facets()) {
            int shared = 0;
            for (size_t b = 0; b < star.size(); ++b)
              if (b != a && star[b].contains_cone(f)) ++shared;
            if (shared != 1) {
              complete = false;
              why = "star facet not shared by exactly two cones";
            }
          }
        if (star.empty()) {
          complete = false;
          why = "empty star";
        }
      }
      if (!complete) rep.add("completeness", tau, "fan along " + tau + " is not complete: " + why);
    } catch (const Error& e) {
      rep.add("completeness", tau, std::string("fan construction failed: ") + e.what());
    }
  }
  // induced fan structure compatibility: for tau subset mid, the fan along
  // mid must be the quotient image of the tau data up to an integral
  // isomorphism of the quotient lattice.
  for (const auto& [key, a0] : complex.arrows()) {
    const std::string& tau = key.first;
    const std::string& mid = key.second;
    size_t n_mid = n - complex.cell_dim(mid);
    if (complex.cell_dim(mid) == n) continue;  // nothing to compare along maximal cells
    size_t k = n - complex.cell_dim(tau);
    // quotient of Q_tau by the image of Lambda_mid directions
    std::vector<std::string> tops = complex.maximal_cofaces(mid);
    if (tops.empty()) continue;
    const std::string& sigma0 = tops.front();
    if (!fan_structures.count(tau) || !fan_structures.count(mid)) continue;
    // lattice of K_tau(mid) directions inside Q_tau
    const IntMat& s_tau = chart_map(tau, sigma0);
    std::vector<IntVec> mid_dirs;
    for (const IntVec& b : tangent_lattice_in(mid, sigma0)) {
      IntVec v = s_tau.apply(b);
      if (!is_zero(v)) mid_dirs.push_back(v);
    }
    std::vector<IntVec> sub = lattice_span_basis(mid_dirs, k);
    if (sub.size() != k - n_mid) {
      rep.add("fan-compatibility", tau + " -> " + mid, "unexpected quotient rank");
      continue;
    }
    // quotient map Q_tau -> Z^{n_mid}: rows = a basis of the dual of sub^perp
    std::vector<IntVec> ann;  // covectors vanishing on sub
    {
      IntMat m = IntMat::from_rows(sub, k).transpose();
      IntMat u;
      IntMat h = hermite_normal_form(m, &u);
      for (size_t i = 0; i < h.rows(); ++i)
        if (is_zero(h.row(i))) ann.push_back(u.row(i));
    }
    if (ann.size() != n_mid) {
      rep.add("fan-compatibility", tau + " -> " + mid, "quotient construction failed");
      continue;
    }
    IntMat qmap = IntMat::from_rows(ann, k);  // Q_tau -> Z^{n_mid}
    // induced matrices: for each maximal sigma >= mid: qmap . S_{tau,sigma}
    // compare with S_{mid,sigma} up to one integral isomorphism psi
    std::optional<IntMat> psi;
    bool compat = true;
    // solve psi . (qmap . S_tau) = S_mid on the span of Lambda_sigma: stack
    // equations over all maximal cells
    std::vector<IntVec> lhs_cols, rhs_cols;
    for (const std::string& sigma : tops) {
      IntMat A = qmap.multiply(chart_map(tau, sigma));
      const IntMat& B = chart_map(mid, sigma);
      for (size_t j = 0; j < A.cols(); ++j) {
        lhs_cols.push_back(A.col(j));
        rhs_cols.push_back(B.col(j));
      }
    }
    // find psi with psi * lhs_col = rhs_col for all columns
    RatMat L = RatMat::from_int(lhs_cols, n_mid);  // rows are the lhs columns
    bool solved = true;
    RatMat psi_rat(n_mid, n_mid);
    for (size_t r = 0; r < n_mid; ++r) {
      RatVec target(lhs_cols.size());
      for (size_t i = 0; i < lhs_cols.size(); ++i) target[i] = Rat(rhs_cols[i][r]);
      auto row = L.solve(target);
      if (!row) {
        solved = false;
        break;
      }
      for (size_t c = 0; c < n_mid; ++c) psi_rat.at(r, c) = (*row)[c];
    }
    if (!solved) {
      rep.add("fan-compatibility", tau + " -> " + mid, "no linear identification of induced structure");
      continue;
    }
    // psi must be an integral isomorphism
    bool integral = true;
    for (size_t i = 0; i < n_mid; ++i)
      for (size_t j = 0; j < n_mid; ++j)
        if (!is_integer(psi_rat.at(i, j))) integral = false;
    Rat det = n_mid == 0 ? Rat(1) : psi_rat.determinant();
    if (!integral || (det != 1 && det != -1)) {
      rep.add("fan-compatibility", tau + " -> " + mid, "induced identification is not integral");
      compat = false;
    }
    (void)compat;
    (void)psi;
  }
  rep.notes.push_back("unverified hypothesis: H^1(B,Q) = 0");
  return rep;
}

std::pair<std::string, std::string> TropicalManifold::adjacent_maximal(const std::string& rho) const {
  if (complex.cell_dim(rho) + 1 != dim()) fail("manifold", rho + " is not a codimension-1 cell");
  std::vector<std::string> tops = complex.maximal_cofaces(rho);
  if (tops.size() != 2) fail("manifold", rho + " does not separate two maximal cells");
  return {tops[0], tops[1]};
}

IntVec TropicalManifold::check_d_rho(const std::string& rho, const std::string& v,
                                     const std::string& sigma_plus) const {
  size_t n = dim();
  const IntMat& x_plus = chart_map(v, sigma_plus);
  // annihilator of the rho tangent directions inside T_v
  std::vector<IntVec> dirs;
  for (const IntVec& b : tangent_lattice_in(rho, sigma_plus)) dirs.push_back(x_plus.apply(b));
  std::vector<IntVec> basis = lattice_span_basis(dirs, n);
  RatMat m = RatMat::from_int(basis, n);
  std::vector<RatVec> ann = m.nullspace();
  if (ann.size() != 1) fail("manifold", "normal direction of " + rho + " is not unique");
  IntVec d = primitive(ann[0]);
  // orient toward sigma_plus
  Cone kplus = k_cone(v, sigma_plus);
  RatVec inside = kplus.interior_point();
  Rat val = dot(d, inside);
  if (val == 0) fail("manifold", "degenerate normal orientation at " + rho);
  if (val < 0) d = negate(d);
  return d;
}

IntVec TropicalManifold::edge_direction(const std::string& omega, const std::string& v,
                                        const std::string& sigma) const {
  if (complex.cell_dim(omega) != 1) fail("manifold", omega + " is not an edge");
  const IntMat& x = chart_map(v, sigma);
  const Arrow& a_edge = complex.arrow(omega, sigma);
  const Arrow& a_v = (v == omega) ? a_edge : complex.arrow(v, sigma);
  // position of v inside the edge chart: solve a_edge(t) = a_v(0)
  RatVec v_pos = a_v.apply(RatVec{});
  RatMat em(a_edge.map.rows(), 1);
  for (size_t i = 0; i < em.rows(); ++i) em.at(i, 0) = Rat(a_edge.map.at(i, 0));
  RatVec rhs(v_pos.size());
  for (size_t i = 0; i < rhs.size(); ++i) rhs[i] = v_pos[i] - Rat(a_edge.shift[i]);
  auto t = em.solve(rhs);
  if (!t) fail("manifold", "vertex " + v + " not on edge " + omega);
  // direction pointing away from v within the edge
  const Polyhedron& ep = complex.cell(omega);
  RatVec inner = ep.relative_interior_point();
  Rat sign = inner[0] - (*t)[0];
  IntVec dir = a_edge.map.col(0);
  if (sign < 0) dir = negate(dir);
  return primitive(x.apply(dir));
}

Rat TropicalManifold::kink(const std::string& rho) const {
  auto [sp, sm] = adjacent_maximal(rho);
  std::vector<std::string> verts = complex.vertices_of(rho);
  if (verts.empty()) fail("manifold", "kink needs a vertex on " + rho);
  Rat result;
  bool have = false;
  for (const std::string& v : verts) {
    auto it = phi.slopes.find(v);
    if (it == phi.slopes.end()) fail("manifold", "phi has no representative at " + v);
    const RatVec& a_p = it->second.at(sp);
    const RatVec& a_m = it->second.at(sm);
    IntVec d = check_d_rho(rho, v, sp);
    RatVec diff = sub(a_p, a_m);
    Rat kappa;
    bool found = false;
    for (size_t i = 0; i < d.size(); ++i)
      if (d[i] != 0) {
        kappa = diff[i] / Rat(d[i]);
        found = true;
        break;
      }
    if (!found) fail("manifold", "degenerate normal at " + rho);
    if (have && kappa != result) fail("manifold", "kink of " + rho + " disagrees between vertices");
    result = kappa;
    have = true;
  }
  return result;
}

std::map<std::string, bool> TropicalManifold::check_strict_convexity(Report* rep) const {
  std::map<std::string, bool> out;
  size_t n = dim();
  for (const std::string& v : complex.vertices()) {
    auto it = phi.slopes.find(v);
    if (it == phi.slopes.end()) {
      if (rep) rep->add("phi", v, "missing representative");
      out[v] = false;
      continue;
    }
    bool strict = true;
    // for every codimension-1 cell rho containing v, compare the two slopes
    for (const std::string& rho : complex.cofaces_of(v)) {
      if (complex.cell_dim(rho) + 1 != n) continue;
      std::vector<std::string> tops = complex.maximal_cofaces(rho);
      if (tops.size() != 2) continue;
      auto jp = it->second.find(tops[0]);
      auto jm = it->second.find(tops[1]);
      if (jp == it->second.end() || jm == it->second.end()) {
        if (rep) rep->add("phi", v, "missing slope on a maximal cell at " + rho);
        strict = false;
        continue;
      }
      IntVec d = check_d_rho(rho, v, tops[0]);
      RatVec diff = sub(jp->second, jm->second);
      // continuity: diff must be a multiple of d (vanish on the wall)
      std::vector<RatVec> pair{to_rat(d), diff};
      if (!is_zero(diff) && RatMat::from_rows(pair, n).rank() > 1) {
        fail("manifold", "phi representative discontinuous across " + rho);
      }
      Rat kappa(0);
      for (size_t i = 0; i < d.size(); ++i)
        if (d[i] != 0) {
          kappa = diff[i] / Rat(d[i]);
          break;
        }
      if (kappa <= 0) strict = false;
    }
    out[v] = strict;
  }
  return out;
}

}  // namespace tropscat
