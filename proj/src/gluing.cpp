#include "tropscat/gluing.hpp"

#include <algorithm>
#include <set>

namespace tropscat {

SymMono PMMap::value(const std::string& sigma, const RatVec& m_sigma) const {
  SymMono out;
  for (const auto& [g, per_sigma] : exps) {
    auto it = per_sigma.find(sigma);
    if (it == per_sigma.end()) continue;
    Rat e = dot(it->second, m_sigma);
    out = out.times(SymMono::generator(g, e));
  }
  return out;
}

PMMap PMMap::times(const PMMap& o) const {
  PMMap r = *this;
  for (const auto& [g, per_sigma] : o.exps)
    for (const auto& [sigma, cov] : per_sigma) {
      auto& mine = r.exps[g][sigma];
      if (mine.empty()) mine = RatVec(cov.size(), Rat(0));
      mine = add(mine, cov);
    }
  // prune zeros
  for (auto it = r.exps.begin(); it != r.exps.end();) {
    for (auto jt = it->second.begin(); jt != it->second.end();)
      jt = is_zero(jt->second) ? it->second.erase(jt) : std::next(jt);
    it = it->second.empty() ? r.exps.erase(it) : std::next(it);
  }
  return r;
}

PMMap PMMap::inverse() const {
  PMMap r = *this;
  for (auto& [g, per_sigma] : r.exps)
    for (auto& [sigma, cov] : per_sigma) cov = scale(Rat(-1), cov);
  return r;
}

PMMap PMMap::restrict_to(const std::string& finer, const std::vector<std::string>& kept) const {
  PMMap r;
  r.carrier = finer;
  std::set<std::string> keep(kept.begin(), kept.end());
  for (const auto& [g, per_sigma] : exps)
    for (const auto& [sigma, cov] : per_sigma)
      if (keep.count(sigma)) r.exps[g][sigma] = cov;
  return r;
}

PMMap OpenGluingData::get(const std::string& omega, const std::string& tau) const {
  auto it = s.find({omega, tau});
  if (it != s.end()) return it->second;
  PMMap unit;
  unit.carrier = tau;
  return unit;
}

void OpenGluingData::set(const std::string& omega, const std::string& tau, PMMap pm) {
  pm.carrier = tau;
  s[{omega, tau}] = std::move(pm);
}

Report check_pm_compatibility(const TropicalManifold& m, const PMMap& pm) {
  Report rep;
  const std::string& tau = pm.carrier;
  std::vector<std::string> tops = m.complex.maximal_cofaces(tau);
  // adjacent pairs: maximal cells sharing a codimension-1 cell over tau
  size_t n = m.dim();
  for (const std::string& rho : m.complex.cells_of_dim(n - 1)) {
    if (!(rho == tau || m.complex.has_arrow(tau, rho))) continue;
    std::vector<std::string> pair = m.complex.maximal_cofaces(rho);
    if (pair.size() != 2) continue;
    // basis of Lambda_rho expressed in both charts
    for (const auto& [g, per_sigma] : pm.exps) {
      auto c1 = per_sigma.find(pair[0]);
      auto c2 = per_sigma.find(pair[1]);
      RatVec cov1 = c1 == per_sigma.end() ? RatVec(n, Rat(0)) : c1->second;
      RatVec cov2 = c2 == per_sigma.end() ? RatVec(n, Rat(0)) : c2->second;
      const Arrow& a1 = m.complex.arrow(rho, pair[0]);
      const Arrow& a2 = m.complex.arrow(rho, pair[1]);
      for (size_t j = 0; j < a1.map.cols(); ++j) {
        Rat lhs = dot(cov1, to_rat(a1.map.col(j)));
        Rat rhs = dot(cov2, to_rat(a2.map.col(j)));
        if (lhs != rhs) {
          rep.add("pm-compat", tau, "character of " + g + " differs across " + rho);
          break;
        }
      }
    }
  }
  return rep;
}

Report check_gluing(const TropicalManifold& m, const OpenGluingData& s) {
  Report rep;
  for (const auto& [key, pm] : s.s) {
    if (!m.complex.has_arrow(key.first, key.second) && key.first != key.second) {
      rep.add("cocycle", key.first + " -> " + key.second, "gluing datum on a non-arrow");
      continue;
    }
    if (key.first == key.second && !pm.trivial()) {
      rep.add("cocycle", key.first, "s_{tau tau} must be 1");
      continue;
    }
    Report compat = check_pm_compatibility(m, pm);
    for (const Issue& i : compat.issues) rep.issues.push_back(i);
  }
  // chains omega < tau < rho: s_{omega rho} = s_{tau rho} * s_{omega tau}|_rho
  for (const auto& [k1, a1] : m.complex.arrows())
    for (const auto& [k2, a2] : m.complex.arrows()) {
      if (k1.second != k2.first) continue;
      const std::string& omega = k1.first;
      const std::string& tau = k1.second;
      const std::string& rho = k2.second;
      PMMap lhs = s.get(omega, rho);
      PMMap restricted = s.get(omega, tau).restrict_to(rho, m.complex.maximal_cofaces(rho));
      PMMap rhs = s.get(tau, rho).times(restricted);
      // compare on every maximal chart and symbol
      std::set<std::string> symbols;
      for (const auto& [g, x] : lhs.exps) symbols.insert(g);
      for (const auto& [g, x] : rhs.exps) symbols.insert(g);
      bool bad = false;
      for (const std::string& g : symbols) {
        for (const std::string& sigma : m.complex.maximal_cofaces(rho)) {
          RatVec a(m.dim(), Rat(0)), b(m.dim(), Rat(0));
          if (lhs.exps.count(g) && lhs.exps.at(g).count(sigma)) a = lhs.exps.at(g).at(sigma);
          if (rhs.exps.count(g) && rhs.exps.at(g).count(sigma)) b = rhs.exps.at(g).at(sigma);
          if (a != b) bad = true;
        }
      }
      if (bad)
        rep.add("cocycle", omega + " < " + tau + " < " + rho,
                "s_{omega rho} differs from s_{tau rho} * s_{omega tau}|_rho");
    }
  return rep;
}

OpenGluingData coboundary(const TropicalManifold& m, const std::map<std::string, PMMap>& t) {
  OpenGluingData out;
  auto get_t = [&](const std::string& tau) {
    auto it = t.find(tau);
    if (it != t.end()) return it->second;
    PMMap unit;
    unit.carrier = tau;
    return unit;
  };
  for (const auto& [key, a] : m.complex.arrows()) {
    const std::string& omega = key.first;
    const std::string& tau = key.second;
    PMMap val = get_t(tau).times(get_t(omega).restrict_to(tau, m.complex.maximal_cofaces(tau)).inverse());
    if (!val.trivial()) out.set(omega, tau, val);
  }
  return out;
}

CohomologyWitness are_cohomologous(const TropicalManifold& m, const OpenGluingData& s,
                                   const OpenGluingData& s_prime) {
  CohomologyWitness w;
  // collect symbols
  std::set<std::string> symbols;
  for (const auto* data : {&s, &s_prime})
    for (const auto& [key, pm] : data->s)
      for (const auto& [g, x] : pm.exps) symbols.insert(g);
  size_t n = m.dim();
  // variables: per cell tau, per maximal sigma >= tau: a covector (n entries)
  std::vector<std::pair<std::string, std::string>> vars;  // (tau, sigma)
  std::map<std::pair<std::string, std::string>, size_t> var_index;
  for (const auto& [tau, poly] : m.complex.cells())
    for (const std::string& sigma : m.complex.maximal_cofaces(tau)) {
      var_index[{tau, sigma}] = vars.size() * n;
      vars.push_back({tau, sigma});
    }
  size_t nvars = vars.size() * n;
  // per symbol, solve the linear system
  std::map<std::string, std::map<std::pair<std::string, std::string>, RatVec>> solution;
  for (const std::string& g : symbols) {
    std::vector<RatVec> rows;
    RatVec rhs_col;
    auto add_eq = [&](const RatVec& row, const Rat& rhs) {
      rows.push_back(row);
      rhs_col.push_back(rhs);
    };
    // arrow equations: t_tau,sigma - t_omega,sigma = e^s - e^{s'} on each
    // maximal chart sigma >= tau
    for (const auto& [key, a] : m.complex.arrows()) {
      const std::string& omega = key.first;
      const std::string& tau = key.second;
      PMMap ps = s.get(omega, tau);
      PMMap pq = s_prime.get(omega, tau);
      for (const std::string& sigma : m.complex.maximal_cofaces(tau)) {
        RatVec es(n, Rat(0)), eq(n, Rat(0));
        if (ps.exps.count(g) && ps.exps.at(g).count(sigma)) es = ps.exps.at(g).at(sigma);
        if (pq.exps.count(g) && pq.exps.at(g).count(sigma)) eq = pq.exps.at(g).at(sigma);
        for (size_t c = 0; c < n; ++c) {
          RatVec row(nvars, Rat(0));
          row[var_index[{tau, sigma}] + c] += 1;
          row[var_index[{omega, sigma}] + c] -= 1;
          add_eq(row, es[c] - eq[c]);
        }
      }
    }
    // compatibility equations for each t_tau across shared codim-1 cells
    for (const auto& [tau, poly] : m.complex.cells()) {
      for (const std::string& rho : m.complex.cells_of_dim(n - 1)) {
        if (!(rho == tau || m.complex.has_arrow(tau, rho))) continue;
        std::vector<std::string> pair = m.complex.maximal_cofaces(rho);
        if (pair.size() != 2) continue;
        const Arrow& a1 = m.complex.arrow(rho, pair[0]);
        const Arrow& a2 = m.complex.arrow(rho, pair[1]);
        for (size_t j = 0; j < a1.map.cols(); ++j) {
          RatVec row(nvars, Rat(0));
          for (size_t c = 0; c < n; ++c) {
            row[var_index[{tau, pair[0]}] + c] += Rat(a1.map.at(c, j));
            row[var_index[{tau, pair[1]}] + c] -= Rat(a2.map.at(c, j));
          }
          add_eq(row, Rat(0));
        }
      }
    }
    RatMat a = RatMat::from_rows(rows, nvars);
    auto x = a.solve(rhs_col);
    if (!x) return CohomologyWitness{};  // not cohomologous
    for (size_t v = 0; v < vars.size(); ++v) {
      RatVec cov(n);
      bool nonzero = false;
      for (size_t c = 0; c < n; ++c) {
        cov[c] = (*x)[v * n + c];
        if (cov[c] != 0) nonzero = true;
      }
      if (nonzero) solution[g][vars[v]] = cov;
    }
  }
  w.cohomologous = true;
  for (const auto& [g, per_var] : solution)
    for (const auto& [var, cov] : per_var) {
      PMMap& pm = w.t[var.first];
      pm.carrier = var.first;
      pm.exps[g][var.second] = cov;
    }
  // ensure every witness entry has its carrier set
  for (auto& [tau, pm] : w.t) pm.carrier = tau;
  return w;
}

SymMono d_invariant(const TropicalManifold& m, const PMMap& mu, const std::string& rho,
                    const std::string& v) {
  auto [sp, sm] = m.adjacent_maximal(rho);
  size_t n = m.dim();
  // m0 in T_v with <check_d, m0> = 1 where check_d points toward sigma_prime
  // := sm; the spec convention fixes sigma' as the second adjacent cell
  IntVec d = m.check_d_rho(rho, v, sm);
  // find integral vector pairing 1 with d
  IntVec m0(n, Int(0));
  {
    // solve <d, x> = 1 via extended gcd over the coordinates
    // use HNF on the single row
    IntMat row = IntMat::from_rows({d}, n);
    IntMat u;
    IntMat h = hermite_normal_form(row.transpose(), &u);
    if (h.at(0, 0) != 1) fail("gluing", "normal covector of " + rho + " is not primitive");
    m0 = u.row(0);
    if (dot(d, m0) != 1) fail("gluing", "internal: pairing normalization failed");
  }
  auto value_through = [&](const IntVec& mt) {
    const IntMat& xp = m.chart_map(v, sp);
    const IntMat& xm = m.chart_map(v, sm);
    RatVec m_sig = to_rat(xp.unimodular_inverse().apply(mt));
    RatVec m_sig2 = to_rat(xm.unimodular_inverse().apply(mt));
    return mu.value(sp, m_sig).times(mu.value(sm, m_sig2).inverse());
  };
  SymMono d1 = value_through(m0);
  // independence of the representative: shift by a tangent vector of rho
  std::vector<IntVec> tangent;
  const IntMat& xp = m.chart_map(v, sp);
  for (const IntVec& b : m.tangent_lattice_in(rho, sp)) tangent.push_back(xp.apply(b));
  if (!tangent.empty()) {
    SymMono d2 = value_through(add(m0, tangent.front()));
    if (!(d1 == d2)) fail("gluing", "D(mu, rho, v) depends on the representative");
  }
  return d1;
}

Report check_lifting_condition(const TropicalManifold& m, const OpenGluingData& s) {
  Report rep;
  size_t n = m.dim();
  for (const std::string& rho : m.complex.cells_of_dim(n - 1)) {
    std::vector<std::string> tops = m.complex.maximal_cofaces(rho);
    if (tops.size() != 2) continue;
    // all cells tau inside rho with at least two vertices
    std::vector<std::string> taus{rho};
    for (const std::string& tau : m.complex.faces_of(rho)) taus.push_back(tau);
    for (const std::string& tau : taus) {
      std::vector<std::string> verts = m.complex.vertices_of(tau);
      for (size_t i = 0; i < verts.size(); ++i)
        for (size_t j = i + 1; j < verts.size(); ++j) {
          RatVec disp = monodromy_displacement(m, rho, tau, verts[i], verts[j]);
          if (!is_zero(disp)) continue;
          SymMono da = d_invariant(m, s.get(verts[i], tau), rho, verts[i]);
          SymMono db = d_invariant(m, s.get(verts[j], tau), rho, verts[j]);
          if (!(da == db))
            rep.add("lifting", tau + " in " + rho,
                    "D differs between " + verts[i] + " and " + verts[j]);
        }
    }
  }
  return rep;
}

Poly FanRing::multiply(const Poly& a, const Poly& b) const {
  size_t d = fan_.ambient_dim();
  Poly r(d);
  for (const auto& [p, cp] : a.terms())
    for (const auto& [q, cq] : b.terms()) {
      // common cone?
      bool common = false;
      for (const Cone& c : fan_.cones())
        if (c.contains(p) && c.contains(q)) {
          common = true;
          break;
        }
      if (!common) continue;
      r = r + Poly::monomial(d, cp * cq, add(p, q));
    }
  return r;
}

Poly FanRing::element(const Coeff& c, const IntVec& m) const {
  if (!fan_.contains_point(to_rat(m))) fail("monomial outside support", "lattice point not in the fan");
  return Poly::monomial(fan_.ambient_dim(), c, m);
}

Poly SlabFunctions::get(const std::string& v, const std::string& rho, size_t rank) const {
  auto it = f.find({v, rho});
  if (it != f.end()) return it->second;
  return Poly::one(rank);
}

void SlabFunctions::set(const std::string& v, const std::string& rho, Poly p) { f[{v, rho}] = std::move(p); }

Poly twist_by_gluing_inverse(const TropicalManifold& m, const PMMap& s_vrho, const std::string& rho,
                             const Poly& f) {
  if (s_vrho.trivial()) return f;
  auto tops = m.complex.maximal_cofaces(rho);
  const std::string& sigma = tops.front();
  const Arrow& a = m.complex.arrow(rho, sigma);
  Poly out(f.rank());
  for (const auto& [mm, c] : f.terms()) {
    RatVec m_sigma = to_rat(a.map.apply(mm));
    SymMono val = s_vrho.value(sigma, m_sigma).inverse();
    out = out + Poly::monomial(f.rank(), c * Coeff::monomial(Rat(1), val), mm);
  }
  return out;
}

Report check_slab_functions(const TropicalManifold& m, const SlabFunctions& f,
                            const OpenGluingData& s) {
  Report rep;
  size_t n = m.dim();
  // normalization and support
  for (const auto& [key, poly] : f.f) {
    const std::string& v = key.first;
    const std::string& rho = key.second;
    if (!m.complex.has_arrow(v, rho)) {
      rep.add("slab", v + "," + rho, "slab function on a non-incident pair");
      continue;
    }
    if (!(poly.constant_term() == Coeff(1))) {
      rep.add("normalization", v + "," + rho, "constant term is not 1 at the vertex stratum");
      continue;
    }
    // support must lie in the tangent cone of rho at v
    std::vector<std::string> tops = m.complex.maximal_cofaces(rho);
    const Polyhedron& rp = m.complex.cell(rho);
    Polyhedron vimg = m.complex.arrow(v, rho).image(m.complex.cell(v));
    Cone kv = rp.tangent_cone_at(vimg);
    for (const auto& [mm, c] : poly.terms())
      if (!kv.contains(mm))
        rep.add("normalization", v + "," + rho, "monomial outside the vertex cone");
  }
  // (a) cross-vertex compatibility on every rho with at least two vertices
  for (const std::string& rho : m.complex.cells_of_dim(n - 1)) {
    std::vector<std::string> tops = m.complex.maximal_cofaces(rho);
    if (tops.size() != 2) continue;
    std::vector<std::string> verts = m.complex.vertices_of(rho);
    size_t rank = m.complex.cell(rho).ambient_dim();
    for (size_t i = 0; i < verts.size(); ++i)
      for (size_t j = 0; j < verts.size(); ++j) {
        if (i == j) continue;
        const std::string& v = verts[i];
        const std::string& vp = verts[j];
        Poly fv = f.get(v, rho, rank);
        Poly fvp = f.get(vp, rho, rank);
        PMMap sv = s.get(v, rho);
        PMMap svp = s.get(vp, rho);
        SymMono dv = d_invariant(m, sv, rho, v);
        SymMono dvp = d_invariant(m, svp, rho, vp);
        Poly lhs = twist_by_gluing_inverse(m, svp, rho, fvp).scaled(Coeff::monomial(Rat(1), dvp.inverse()));
        RatVec disp = monodromy_displacement(m, rho, rho, v, vp);
        IntVec mdisp(disp.size());
        for (size_t c = 0; c < disp.size(); ++c) {
          if (!is_integer(disp[c])) fail("gluing", "non-integral displacement");
          mdisp[c] = rat_num(disp[c]);
        }
        Poly rhs = twist_by_gluing_inverse(m, sv, rho, fv).scaled(Coeff::monomial(Rat(1), dv.inverse()));
        rhs = rhs * Poly::monomial(rank, Coeff(1), negate(mdisp));
        if (!(lhs == rhs)) {
          rep.add("change-of-chart", rho, "slab functions at " + v + " and " + vp + " are incompatible");
        }
      }
  }
  // (b) codimension-2 multiplicative condition
  if (n >= 2) {
    for (const std::string& tau : m.complex.cells_of_dim(n - 2)) {
      for (const std::string& v : m.complex.vertices_of(tau)) {
        // codimension-1 cells around tau
        std::vector<std::string> rhos;
        for (const std::string& rho : m.complex.cofaces_of(tau))
          if (m.complex.cell_dim(rho) == n - 1) rhos.push_back(rho);
        if (tau != "" && m.complex.cell_dim(tau) == n - 1) rhos.push_back(tau);
        std::sort(rhos.begin(), rhos.end());
        if (rhos.empty()) continue;
        // restriction of each slab function to the tau stratum, then the
        // signed product per covector coordinate must be 1
        std::vector<std::string> tops = m.complex.maximal_cofaces(tau);
        const std::string& sigma0 = tops.front();
        // tangent cone of tau at v in the tau chart
        Polyhedron vimg_tau = (v == tau) ? m.complex.cell(tau)
                                         : m.complex.arrow(v, tau).image(m.complex.cell(v));
        Cone kv_tau = m.complex.cell(tau).tangent_cone_at(vimg_tau);
        size_t tau_rank = m.complex.cell(tau).ambient_dim();
        std::vector<Poly> restricted;
        std::vector<IntVec> covectors;
        bool degenerate = false;
        for (const std::string& rho : rhos) {
          size_t rank = m.complex.cell(rho).ambient_dim();
          Poly frho = f.get(v, rho, rank);
          frho = twist_by_gluing_inverse(m, s.get(v, rho), rho, frho);
          // express rho-chart monomials in the tau chart where possible
          // (tau embeds into rho); monomials outside Lambda_tau restrict to 0
          const Arrow& atr = m.complex.arrow(tau, rho);
          RatMat emb(atr.map.rows(), atr.map.cols());
          for (size_t r = 0; r < atr.map.rows(); ++r)
            for (size_t c = 0; c < atr.map.cols(); ++c) emb.at(r, c) = Rat(atr.map.at(r, c));
          Poly rf(tau_rank);
          for (const auto& [mm, c] : frho.terms()) {
            auto coords = emb.solve(to_rat(mm));
            if (!coords) continue;  // not tangent to tau: restricts to zero
            bool integral = true;
            IntVec mt(tau_rank);
            for (size_t cc = 0; cc < tau_rank; ++cc) {
              if (!is_integer((*coords)[cc])) integral = false;
              else mt[cc] = rat_num((*coords)[cc]);
            }
            if (!integral) continue;
            if (!kv_tau.contains(mt)) continue;  // vanishes on the stratum at v
            rf = rf + Poly::monomial(tau_rank, c, mt);
          }
          if (rf.is_zero() || rf.constant_term().is_zero()) {
            rep.add("slab degenerate on stratum", v + "," + rho, "restriction is not a unit");
            degenerate = true;
            break;
          }
          restricted.push_back(rf);
          // orientation-coherent normal: positive against the anticlockwise
          // quarter turn of the rho ray in the 2-dimensional quotient Q_tau
          // (lexicographic frame convention)
          IntVec d = m.check_d_rho(rho, v, m.adjacent_maximal(rho).first);
          Cone kray = m.k_cone(tau, rho);
          if (kray.rays().size() == 1 && kray.ambient_dim() == 2) {
            IntVec r = kray.rays()[0];
            IntVec rot{-r[1], r[0]};
            // lift rot through S_{tau,sigma} into the vertex chart
            std::string sig = m.complex.maximal_cofaces(rho).front();
            RatMat smat = m.chart_map(tau, sig).to_rat();
            auto lift = smat.solve(to_rat(rot));
            if (lift) {
              IntVec x = primitive(*lift);
              IntVec w = m.chart_map(v, sig).apply(x);
              Rat pairing = dot(d, to_rat(w));
              if (pairing < 0) d = negate(d);
            }
          }
          covectors.push_back(d);
        }
        if (degenerate) continue;
        // product over each coordinate of T*_v
        for (size_t coord = 0; coord < n; ++coord) {
          Poly pos = Poly::one(tau_rank), neg = Poly::one(tau_rank);
          for (size_t i = 0; i < restricted.size(); ++i) {
            Int e = covectors[i][coord];
            if (e > 0)
              for (Int k(0); k < e; ++k) pos = pos * restricted[i];
            else if (e < 0)
              for (Int k(0); k < -e; ++k) neg = neg * restricted[i];
          }
          if (!(pos == neg)) {
            rep.add("codim2-product", tau + " at " + v,
                    "signed product of restricted slab functions is not 1");
            break;
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace tropscat
