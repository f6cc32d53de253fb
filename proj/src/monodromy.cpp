#include "tropscat/monodromy.hpp"

#include <algorithm>
#include <set>

namespace tropscat {

IntMat monodromy_matrix(const TropicalManifold& m, const LoopSpec& loop) {
  auto incident = [&](const std::string& v, const std::string& sigma) {
    return m.complex.has_arrow(v, sigma);
  };
  if (!incident(loop.v_plus, loop.sigma_plus) || !incident(loop.v_minus, loop.sigma_plus) ||
      !incident(loop.v_plus, loop.sigma_minus) || !incident(loop.v_minus, loop.sigma_minus))
    fail("monodromy", "loop cells are not incident");
  const IntMat& xpp = m.chart_map(loop.v_plus, loop.sigma_plus);
  const IntMat& xmp = m.chart_map(loop.v_minus, loop.sigma_plus);
  const IntMat& xmm = m.chart_map(loop.v_minus, loop.sigma_minus);
  const IntMat& xpm = m.chart_map(loop.v_plus, loop.sigma_minus);
  return xpm.multiply(xmm.unimodular_inverse()).multiply(xmp).multiply(xpp.unimodular_inverse());
}

namespace {

// factor L as col * row^T; fails if L has rank > 1 or the factorization
// misses, returns row given the column
RatVec extract_covector(const IntMat& l, const IntVec& col) {
  size_t n = l.rows();
  size_t i0 = n;
  for (size_t i = 0; i < n; ++i)
    if (col[i] != 0) {
      i0 = i;
      break;
    }
  if (i0 == n) fail("monodromy", "zero direction in rank-one factorization");
  RatVec row(n);
  for (size_t j = 0; j < n; ++j) row[j] = Rat(l.at(i0, j)) / Rat(col[i0]);
  // verify exactly
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (Rat(l.at(i, j)) != Rat(col[i]) * row[j])
        fail("monodromy", "transform does not factor through the given direction");
  return row;
}

void check_unipotent(const IntMat& t) {
  size_t n = t.rows();
  IntMat l = t;
  for (size_t i = 0; i < n; ++i) l.at(i, i) -= 1;
  IntMat l2 = l.multiply(l);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (l2.at(i, j) != 0) fail("monodromy", "transform is not unipotent of the expected kind");
  if (t.determinant() != 1) fail("monodromy", "transform has determinant != 1");
}

}  // namespace

EdgeLoopData monodromy_via_edge(const TropicalManifold& m, const std::string& omega,
                                const LoopSpec& loop) {
  if (!(m.complex.has_arrow(loop.v_plus, omega) || loop.v_plus == omega) ||
      !(m.complex.has_arrow(loop.v_minus, omega) || loop.v_minus == omega))
    fail("monodromy", "edge does not join the loop vertices");
  EdgeLoopData out;
  out.matrix = monodromy_matrix(m, loop);
  check_unipotent(out.matrix);
  out.d_omega = m.edge_direction(omega, loop.v_plus, loop.sigma_plus);
  IntMat l = out.matrix;
  for (size_t i = 0; i < l.rows(); ++i) l.at(i, i) -= 1;
  out.n_covector = extract_covector(l, out.d_omega);
  return out;
}

Codim1LoopData monodromy_via_rho(const TropicalManifold& m, const std::string& rho,
                                 const LoopSpec& loop) {
  Codim1LoopData out;
  out.matrix = monodromy_matrix(m, loop);
  check_unipotent(out.matrix);
  out.check_d = m.check_d_rho(rho, loop.v_plus, loop.sigma_plus);
  // L = m_vec * check_d^T: transpose the factorization
  IntMat l = out.matrix;
  for (size_t i = 0; i < l.rows(); ++i) l.at(i, i) -= 1;
  RatVec mv = extract_covector(l.transpose(), out.check_d);
  out.m_vec = mv;
  return out;
}

BothLoopData monodromy_via_both(const TropicalManifold& m, const std::string& omega,
                                const std::string& rho, const LoopSpec& loop) {
  BothLoopData out;
  out.matrix = monodromy_matrix(m, loop);
  check_unipotent(out.matrix);
  out.d_omega = m.edge_direction(omega, loop.v_plus, loop.sigma_plus);
  out.check_d = m.check_d_rho(rho, loop.v_plus, loop.sigma_plus);
  // L = kappa * d_omega * check_d^T
  IntMat l = out.matrix;
  for (size_t i = 0; i < l.rows(); ++i) l.at(i, i) -= 1;
  std::optional<Rat> kappa;
  for (size_t i = 0; i < l.rows(); ++i)
    for (size_t j = 0; j < l.cols(); ++j) {
      Rat expect = Rat(out.d_omega[i]) * Rat(out.check_d[j]);
      if (expect == 0) {
        if (l.at(i, j) != 0) fail("monodromy", "transform does not factor as kappa d n");
        continue;
      }
      Rat k = Rat(l.at(i, j)) / expect;
      if (kappa && *kappa != k) fail("monodromy", "transform does not factor as kappa d n");
      kappa = k;
    }
  if (!kappa) kappa = Rat(0);
  if (!is_integer(*kappa)) fail("monodromy", "kappa is not an integer");
  out.kappa = rat_num(*kappa);
  return out;
}

Int kappa_of(const TropicalManifold& m, const std::string& omega, const std::string& rho) {
  std::vector<std::string> verts = m.complex.vertices_of(omega);
  if (verts.size() < 2) return Int(0);
  auto [sp, sm] = m.adjacent_maximal(rho);
  LoopSpec loop{verts[0], sp, verts[1], sm};
  return monodromy_via_both(m, omega, rho, loop).kappa;
}

bool MonodromyTable::positive() const {
  for (const auto& [key, k] : kappa)
    if (k < 0) return false;
  return true;
}

MonodromyTable monodromy_table(const TropicalManifold& m) {
  MonodromyTable t;
  size_t n = m.dim();
  for (const std::string& omega : m.complex.cells_of_dim(1))
    for (const std::string& rho : m.complex.cells_of_dim(n - 1)) {
      bool inside = (omega == rho) || m.complex.has_arrow(omega, rho);
      if (!inside) continue;
      t.kappa[{omega, rho}] = kappa_of(m, omega, rho);
    }
  return t;
}

RatVec monodromy_displacement(const TropicalManifold& m, const std::string& rho,
                              const std::string& tau, const std::string& v0, const std::string& v) {
  auto [sp, sm] = m.adjacent_maximal(rho);
  size_t n = m.dim();
  // basis of Lambda_tau inside T_{v0}
  const IntMat& x = m.chart_map(v0, sp);
  std::vector<IntVec> basis;
  for (const IntVec& b : m.tangent_lattice_in(tau, sp)) basis.push_back(x.apply(b));
  if (v == v0) return RatVec(basis.size(), Rat(0));
  LoopSpec loop{v0, sp, v, sm};
  Codim1LoopData data = monodromy_via_rho(m, rho, loop);
  RatMat bt = RatMat::from_int(basis, n).transpose();
  auto coords = bt.solve(data.m_vec);
  if (!coords) fail("monodromy", "displacement does not lie in the tangent lattice of " + tau);
  return *coords;
}

Polyhedron normalize_translation(const Polyhedron& p) {
  const std::vector<RatVec>& vs = p.vertices();
  RatVec mn = vs.front();
  for (const RatVec& v : vs)
    if (lex_cmp(v, mn) < 0) mn = v;
  std::vector<RatVec> shifted;
  for (const RatVec& v : vs) shifted.push_back(sub(v, mn));
  return Polyhedron::from_points(shifted);
}

MonodromyCertificate certify_monodromy(const TropicalManifold& m) {
  MonodromyCertificate cert;
  cert.table = monodromy_table(m);
  cert.positive = cert.table.positive();
  if (!cert.positive)
    for (const auto& [key, k] : cert.table.kappa)
      if (k < 0) cert.violations.push_back("kappa(" + key.first + "," + key.second + ") < 0");
  size_t n = m.dim();

  for (const auto& [tau, poly] : m.complex.cells()) {
    TauMonodromyData data;
    // P_1(tau): edges inside tau; P_{n-1}(tau): codimension-1 cells over tau
    std::vector<std::string> p1, pn1;
    for (const std::string& omega : m.complex.cells_of_dim(1))
      if (omega == tau || m.complex.has_arrow(omega, tau)) p1.push_back(omega);
    for (const std::string& rho : m.complex.cells_of_dim(n - 1))
      if (rho == tau || m.complex.has_arrow(tau, rho)) pn1.push_back(rho);
    std::sort(p1.begin(), p1.end());
    std::sort(pn1.begin(), pn1.end());
    // kappa subtable and the bipartite components of its support
    std::map<std::pair<std::string, std::string>, Int> sub;
    for (const std::string& o : p1)
      for (const std::string& r : pn1) {
        auto it = cert.table.kappa.find({o, r});
        Int k = (it != cert.table.kappa.end()) ? it->second : kappa_of(m, o, r);
        if (k != 0) sub[{o, r}] = k;
      }
    std::map<std::string, int> comp_of;  // node -> component, nodes prefixed e:/r:
    int ncomp = 0;
    for (const auto& [key, k] : sub) {
      std::string a = "e:" + key.first, b = "r:" + key.second;
      if (!comp_of.count(a) && !comp_of.count(b)) {
        comp_of[a] = comp_of[b] = ncomp++;
      } else if (!comp_of.count(a)) {
        comp_of[a] = comp_of[b];
      } else if (!comp_of.count(b)) {
        comp_of[b] = comp_of[a];
      } else if (comp_of[a] != comp_of[b]) {
        int merge = comp_of[b];
        for (auto& [node, c] : comp_of)
          if (c == merge) c = comp_of[a];
      }
    }
    // normalize component ids and collect classes
    std::map<int, int> renumber;
    for (const auto& [node, c] : comp_of)
      if (!renumber.count(c)) {
        int next = (int)renumber.size();
        renumber[c] = next;
      }
    int p = (int)renumber.size();
    data.omega_classes.resize(p);
    data.rho_classes.resize(p);
    for (const std::string& o : p1)
      if (comp_of.count("e:" + o)) data.omega_classes[renumber[comp_of["e:" + o]]].push_back(o);
    for (const std::string& r : pn1)
      if (comp_of.count("r:" + r)) data.rho_classes[renumber[comp_of["r:" + r]]].push_back(r);
    // simplicity (1): kappa != 0 exactly on the products Omega_i x R_i
    for (int i = 0; i < p && data.simple; ++i)
      for (const std::string& o : data.omega_classes[i])
        for (const std::string& r : data.rho_classes[i])
          if (!sub.count({o, r})) {
            data.simple = false;
            data.violation = "kappa support is not a product at (" + o + "," + r + ")";
          }
    // simplicity (2): Delta and Delta-check constant along each class
    std::vector<std::string> tau_vertices = m.complex.vertices_of(tau);
    std::string v0 = tau_vertices.empty() ? "" : tau_vertices.front();
    for (int i = 0; i < p && data.simple; ++i) {
      std::optional<Polyhedron> delta_i;
      for (const std::string& r : data.rho_classes[i]) {
        std::vector<RatVec> pts;
        for (const std::string& v : tau_vertices)
          pts.push_back(monodromy_displacement(m, r, tau, v0, v));
        Polyhedron d = normalize_translation(Polyhedron::from_points(pts));
        if (!delta_i)
          delta_i = d;
        else if (!delta_i->equals(d)) {
          data.simple = false;
          data.violation = "Delta_rho(" + tau + ") depends on rho within class";
        }
      }
      if (delta_i) data.delta.push_back(*delta_i);
      // dual polytope of the class: covectors n^{sigma0 sigma}_omega over
      // maximal cells containing tau, in Q*_tau coordinates
      std::optional<Polyhedron> check_i;
      for (const std::string& o : data.omega_classes[i]) {
        std::vector<std::string> overts = m.complex.vertices_of(o);
        if (overts.size() < 2) continue;
        std::vector<std::string> tops = m.complex.maximal_cofaces(tau);
        std::sort(tops.begin(), tops.end());
        const std::string& sigma0 = tops.front();
        // Q*_tau basis: annihilator of Lambda_tau in T*_{v}
        const std::string& vb = overts.front();
        const IntMat& x = m.chart_map(vb, sigma0);
        std::vector<IntVec> tdirs;
        for (const IntVec& b : m.tangent_lattice_in(tau, sigma0)) tdirs.push_back(x.apply(b));
        std::vector<IntVec> ann;
        if (tdirs.empty()) {
          for (size_t ii = 0; ii < n; ++ii) {
            IntVec e(n, Int(0));
            e[ii] = 1;
            ann.push_back(e);
          }
        } else {
          IntMat mm = IntMat::from_rows(tdirs, n).transpose();
          IntMat u;
          IntMat h = hermite_normal_form(mm, &u);
          for (size_t ii = 0; ii < h.rows(); ++ii)
            if (is_zero(h.row(ii))) ann.push_back(u.row(ii));
        }
        std::vector<RatVec> pts;
        for (const std::string& sigma : tops) {
          LoopSpec loop{overts[0], sigma0, overts[1], sigma};
          EdgeLoopData d = monodromy_via_edge(m, o, loop);
          // coordinates of n in the Q*_tau basis
          RatMat at = RatMat::from_int(ann, n).transpose();
          auto coords = at.solve(d.n_covector);
          if (!coords) fail("monodromy", "covector outside Q*_tau at " + tau);
          pts.push_back(*coords);
        }
        Polyhedron dc = normalize_translation(Polyhedron::from_points(pts));
        if (!check_i)
          check_i = dc;
        else if (!check_i->equals(dc)) {
          data.simple = false;
          data.violation = "dual polytope depends on omega within class at " + tau;
        }
      }
      if (check_i) data.delta_check.push_back(*check_i);
    }
    // simplicity (3): graded hulls are elementary; strong: standard simplices
    if (data.simple && p > 0 && data.delta.size() == (size_t)p && data.delta_check.size() == (size_t)p) {
      auto graded = [&](const std::vector<Polyhedron>& parts) {
        size_t base_dim = parts[0].ambient_dim();
        std::vector<RatVec> pts;
        for (size_t i = 0; i < parts.size(); ++i)
          for (const RatVec& v : parts[i].vertices()) {
            RatVec w = v;
            for (size_t j = 0; j < parts.size(); ++j) w.push_back(Rat(i == j ? 1 : 0));
            pts.push_back(w);
          }
        (void)base_dim;
        return Polyhedron::from_points(pts);
      };
      Polyhedron g = graded(data.delta);
      Polyhedron gc = graded(data.delta_check);
      data.delta_graded = g;
      data.delta_check_graded = gc;
      if (!is_elementary(g) || !is_elementary(gc)) {
        data.simple = false;
        data.violation = "graded monodromy polytope is not elementary at " + tau;
      }
      if (!is_standard_simplex(g) || !is_standard_simplex(gc)) data.strongly_simple = false;
    }
    if (!data.simple) data.strongly_simple = false;
    if (!data.simple) {
      cert.simple = false;
      cert.violations.push_back(tau + ": " + data.violation);
    }
    if (!data.strongly_simple) cert.strongly_simple = false;
    cert.per_tau[tau] = std::move(data);
  }
  if (!cert.simple) cert.strongly_simple = false;
  return cert;
}

}  // namespace tropscat
