#include "tropscat/fixtures.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tropscat {

namespace {

RatVec rv(std::vector<long> xs) {
  RatVec v;
  for (long x : xs) v.push_back(Rat(x));
  return v;
}
IntVec iv(std::vector<long> xs) {
  IntVec v;
  for (long x : xs) v.push_back(Int(x));
  return v;
}
IntMat im(std::vector<std::vector<long>> rows) {
  std::vector<IntVec> r;
  size_t cols = rows.empty() ? 0 : rows[0].size();
  for (auto& x : rows) r.push_back(iv(x));
  return IntMat::from_rows(r, cols);
}

}  // namespace

TropicalManifold plane_fixture() {
  TropicalManifold m;
  Polyhedron plane = Polyhedron::from_points({rv({0, 0})}, {}, {iv({1, 0}), iv({0, 1})});
  m.complex.add_cell("sigma", plane);
  m.fan_structures["sigma"]["sigma"] = IntMat(0, 2);
  return m;
}

TropicalManifold ff_fixture(long kappa) {
  TropicalManifold m;
  // charts in global-like coordinates; the lower cells carry the shear in
  // their fan structure at v1
  m.complex.add_cell("v0", Polyhedron::from_points({RatVec{}}));
  m.complex.add_cell("v1", Polyhedron::from_points({RatVec{}}));
  m.complex.add_cell("rho", Polyhedron::from_points({rv({0}), rv({1})}));
  for (const char* e : {"lneg", "lpos", "u0", "u1", "d0", "d1"})
    m.complex.add_cell(e, Polyhedron::from_points({rv({0})}, {iv({1})}));
  m.complex.add_cell("Uneg", Polyhedron::from_points({rv({0, 0})}, {iv({-1, 0}), iv({0, 1})}));
  m.complex.add_cell("U0", Polyhedron::from_points({rv({0, 0}), rv({1, 0})}, {iv({0, 1})}));
  m.complex.add_cell("Upos", Polyhedron::from_points({rv({1, 0})}, {iv({1, 0}), iv({0, 1})}));
  m.complex.add_cell("Lneg", Polyhedron::from_points({rv({0, 0})}, {iv({-1, 0}), iv({0, -1})}));
  m.complex.add_cell("L0", Polyhedron::from_points({rv({0, 0}), rv({1, 0})}, {iv({0, -1})}));
  m.complex.add_cell("Lpos", Polyhedron::from_points({rv({1, 0})}, {iv({1, 0}), iv({0, -1})}));

  auto arrow01 = [&](const std::string& src, const std::string& dst, std::vector<std::vector<long>> map,
                     std::vector<long> shift) {
    size_t rows = shift.size();
    std::vector<IntVec> r;
    size_t cols = map.empty() ? 0 : map[0].size();
    for (auto& x : map) r.push_back(iv(x));
    while (r.size() < rows) r.push_back(IntVec(cols, Int(0)));
    m.complex.add_arrow(src, dst, IntMat::from_rows(r, cols), iv(shift));
  };
  // vertices into edges (0-column matrices)
  arrow01("v0", "rho", {}, {0});
  arrow01("v1", "rho", {}, {1});
  for (const char* e : {"lneg", "u0", "d0"}) arrow01("v0", e, {}, {0});
  for (const char* e : {"lpos", "u1", "d1"}) arrow01("v1", e, {}, {0});
  // vertices into maximal cells
  for (const char* s : {"Uneg", "U0", "Lneg", "L0"}) arrow01("v0", s, {}, {0, 0});
  for (const char* s : {"U0", "Upos", "L0", "Lpos"}) arrow01("v1", s, {}, {1, 0});
  // edges into maximal cells
  arrow01("rho", "U0", {{1}, {0}}, {0, 0});
  arrow01("rho", "L0", {{1}, {0}}, {0, 0});
  arrow01("lneg", "Uneg", {{-1}, {0}}, {0, 0});
  arrow01("lneg", "Lneg", {{-1}, {0}}, {0, 0});
  arrow01("lpos", "Upos", {{1}, {0}}, {1, 0});
  arrow01("lpos", "Lpos", {{1}, {0}}, {1, 0});
  arrow01("u0", "Uneg", {{0}, {1}}, {0, 0});
  arrow01("u0", "U0", {{0}, {1}}, {0, 0});
  arrow01("u1", "U0", {{0}, {1}}, {1, 0});
  arrow01("u1", "Upos", {{0}, {1}}, {1, 0});
  arrow01("d0", "Lneg", {{0}, {-1}}, {0, 0});
  arrow01("d0", "L0", {{0}, {-1}}, {0, 0});
  arrow01("d1", "L0", {{0}, {-1}}, {1, 0});
  arrow01("d1", "Lpos", {{0}, {-1}}, {1, 0});

  IntMat id2 = IntMat::identity(2);
  IntMat twist = im({{1, -kappa}, {0, 1}});
  m.fan_structures["v0"] = {{"Uneg", id2}, {"U0", id2}, {"Lneg", id2}, {"L0", id2}};
  m.fan_structures["v1"] = {{"U0", id2}, {"Upos", id2}, {"L0", twist}, {"Lpos", twist}};
  IntMat up = im({{0, 1}});
  IntMat right = im({{1, 0}});
  m.fan_structures["rho"] = {{"U0", up}, {"L0", up}};
  m.fan_structures["lneg"] = {{"Uneg", up}, {"Lneg", up}};
  m.fan_structures["lpos"] = {{"Upos", up}, {"Lpos", up}};
  m.fan_structures["u0"] = {{"Uneg", right}, {"U0", right}};
  m.fan_structures["u1"] = {{"U0", right}, {"Upos", right}};
  m.fan_structures["d0"] = {{"Lneg", right}, {"L0", right}};
  m.fan_structures["d1"] = {{"L0", right}, {"Lpos", right}};
  for (const char* s : {"Uneg", "U0", "Upos", "Lneg", "L0", "Lpos"})
    m.fan_structures[s] = {{s, IntMat(0, 2)}};

  // strictly convex representative with kink kappa across every wall at v0.
  // At v1 the sheared frame forces k1 = k3 and k2 + k4 = k3 among the four
  // kinks, so rational slopes with k1 = k3 = kappa/2 keep all kinks positive
  // while kink(rho) stays kappa at both vertices.
  Rat k(kappa);
  Rat h(1, 2);
  m.phi.slopes["v0"] = {{"Uneg", {Rat(0), k}}, {"U0", {k, k}}, {"Lneg", {Rat(0), Rat(0)}}, {"L0", {k, Rat(0)}}};
  m.phi.slopes["v1"] = {{"U0", {Rat(0), Rat(0)}},
                        {"Upos", {h, Rat(0)}},
                        {"L0", {Rat(0), -k}},
                        {"Lpos", {h, -k / 2}}};
  return m;
}

TropicalManifold torus2_fixture() {
  // 3 cells per direction: with only 2, opposite faces of neighboring cells
  // identify and pairwise intersections stop being single cells
  std::vector<Polyhedron> squares;
  for (long i = 0; i < 3; ++i)
    for (long j = 0; j < 3; ++j)
      squares.push_back(Polyhedron::from_points(
          {rv({i, j}), rv({i + 1, j}), rv({i, j + 1}), rv({i + 1, j + 1})}));
  return periodic_complex(squares, 3);
}

TropicalManifold t3_fixture() {
  std::vector<Polyhedron> prisms;
  for (long i = 0; i < 3; ++i)
    for (long j = 0; j < 3; ++j)
      for (long kk = 0; kk < 3; ++kk) {
        // split the cube along the vertical plane through the diagonal
        // from (i, j) to (i+1, j+1)
        std::vector<RatVec> lower = {rv({i, j, kk}),     rv({i + 1, j, kk}),     rv({i + 1, j + 1, kk}),
                                     rv({i, j, kk + 1}), rv({i + 1, j, kk + 1}), rv({i + 1, j + 1, kk + 1})};
        std::vector<RatVec> upper = {rv({i, j, kk}),     rv({i, j + 1, kk}),     rv({i + 1, j + 1, kk}),
                                     rv({i, j, kk + 1}), rv({i, j + 1, kk + 1}), rv({i + 1, j + 1, kk + 1})};
        prisms.push_back(Polyhedron::from_points(lower));
        prisms.push_back(Polyhedron::from_points(upper));
      }
  return periodic_complex(prisms, 3);
}

namespace {

// canonical representative of a bounded polyhedron modulo period*Z^n: shift
// the lex-min vertex into [0, period)^n
IntVec canonical_shift(const Polyhedron& p, long period) {
  RatVec mn = p.vertices().front();
  for (const RatVec& v : p.vertices())
    if (lex_cmp(v, mn) < 0) mn = v;
  IntVec shift(mn.size());
  for (size_t i = 0; i < mn.size(); ++i) {
    Int q;
    Int num = rat_num(mn[i]), den = rat_den(mn[i]);
    Int scaled_num = num;
    // floor(mn_i / period)
    Int pden = den * period;
    mpz_fdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), pden.get_mpz_t());
    shift[i] = -q * period;
  }
  return shift;
}

Polyhedron translate(const Polyhedron& p, const IntVec& t) {
  std::vector<RatVec> pts;
  for (const RatVec& v : p.points()) pts.push_back(add(v, to_rat(t)));
  return Polyhedron::from_points(pts, p.recession_rays(), p.lines());
}

std::string poly_key(const Polyhedron& p) {
  std::ostringstream os;
  for (const RatVec& v : p.vertices()) os << to_string(v) << ";";
  return os.str();
}

}  // namespace

TropicalManifold periodic_complex(const std::vector<Polyhedron>& maximal, long period) {
  TropicalManifold m;
  size_t n = maximal.empty() ? 0 : maximal[0].ambient_dim();
  // gather all cells in canonical position, keyed by vertex sets
  std::map<std::string, Polyhedron> canon;  // key -> global-position polyhedron
  std::vector<Polyhedron> queue;
  for (const Polyhedron& p : maximal) queue.push_back(translate(p, canonical_shift(p, period)));
  std::vector<Polyhedron> all;
  while (!queue.empty()) {
    Polyhedron p = queue.back();
    queue.pop_back();
    std::string key = poly_key(p);
    if (canon.count(key)) continue;
    canon.emplace(key, p);
    for (const Polyhedron& f : p.facets()) queue.push_back(translate(f, canonical_shift(f, period)));
  }
  // assign ids sorted by (dim, key) for determinism
  std::vector<std::pair<std::string, std::string>> keys;  // (key, id)
  {
    std::vector<std::pair<std::pair<size_t, std::string>, std::string>> sorted;
    for (const auto& [key, p] : canon) sorted.push_back({{p.dim(), key}, key});
    std::sort(sorted.begin(), sorted.end());
    std::map<size_t, int> counter;
    for (auto& [dk, key] : sorted) {
      int idx = counter[dk.first]++;
      keys.push_back({key, "c" + std::to_string(dk.first) + "_" + std::to_string(idx)});
    }
  }
  std::map<std::string, std::string> id_of;
  for (auto& [key, id] : keys) id_of[key] = id;

  // chart data per cell: lattice basis of the tangent span + base point
  struct Chart {
    RatVec base;
    std::vector<IntVec> basis;  // rows: tangent lattice basis in global coords
  };
  std::map<std::string, Chart> charts;
  for (const auto& [key, p] : canon) {
    Chart c;
    c.base = p.vertices().front();
    for (const RatVec& v : p.vertices())
      if (lex_cmp(v, c.base) < 0) c.base = v;
    std::vector<IntVec> dirs;
    for (const RatVec& v : p.vertices()) {
      RatVec d = sub(v, c.base);
      if (!is_zero(d)) dirs.push_back(primitive(d));
    }
    c.basis = lattice_span_basis(dirs, n);
    charts[id_of[key]] = c;
    // cell polyhedron in its own chart coordinates
    RatMat bt = RatMat::from_int(c.basis, n).transpose();
    std::vector<RatVec> pts;
    for (const RatVec& v : p.vertices()) {
      auto coords = bt.solve(sub(v, c.base));
      if (!coords) fail("fixtures", "chart coordinates failed");
      pts.push_back(*coords);
    }
    m.complex.add_cell(id_of[key], Polyhedron::from_points(pts));
  }
  // arrows: faces of each canonical cell, translated back to their canonical
  // representative
  for (const auto& [key, p] : canon) {
    const std::string& dst = id_of[key];
    const Chart& cd = charts.at(dst);
    for (const Polyhedron& f : p.proper_faces()) {
      IntVec t = canonical_shift(f, period);
      Polyhedron fc = translate(f, t);
      auto it = id_of.find(poly_key(fc));
      if (it == id_of.end()) fail("fixtures", "face has no canonical cell");
      const std::string& src = it->second;
      const Chart& cs = charts.at(src);
      // map: src chart -> global (at canonical position) -> -t -> dst chart
      // x |-> B_d^{-1} (cs.base + B_s^T x - t - cd.base)
      RatMat bd = RatMat::from_int(cd.basis, n).transpose();
      IntMat map(cd.basis.size(), cs.basis.size());
      for (size_t j = 0; j < cs.basis.size(); ++j) {
        auto col = bd.solve(to_rat(cs.basis[j]));
        if (!col) fail("fixtures", "arrow solve failed");
        for (size_t i = 0; i < cd.basis.size(); ++i) {
          if (!is_integer((*col)[i])) fail("fixtures", "non-integral arrow entry");
          map.at(i, j) = rat_num((*col)[i]);
        }
      }
      RatVec base_shift = sub(sub(cs.base, to_rat(t)), cd.base);
      auto sh = bd.solve(base_shift);
      if (!sh) fail("fixtures", "arrow shift solve failed");
      IntVec shift(cd.basis.size());
      for (size_t i = 0; i < shift.size(); ++i) {
        if (!is_integer((*sh)[i])) fail("fixtures", "non-integral arrow shift");
        shift[i] = rat_num((*sh)[i]);
      }
      if (!m.complex.has_arrow(src, dst)) m.complex.add_arrow(src, dst, map, shift);
    }
  }
  // fan structures: global flat structure; S_tau = quotient projection by the
  // tangent lattice of tau, expressed in each maximal chart
  size_t topdim = m.complex.dim();
  for (const auto& [key, id] : keys) {
    const Chart& ct = charts.at(id);
    size_t k = topdim - m.complex.cell_dim(id);
    // covectors vanishing on the tangent lattice of tau
    std::vector<IntVec> ann;
    if (ct.basis.empty()) {
      for (size_t i = 0; i < n; ++i) {
        IntVec e(n, Int(0));
        e[i] = 1;
        ann.push_back(e);
      }
    } else {
      IntMat mm = IntMat::from_rows(ct.basis, n).transpose();
      IntMat u;
      IntMat h = hermite_normal_form(mm, &u);
      for (size_t i = 0; i < h.rows(); ++i)
        if (is_zero(h.row(i))) ann.push_back(u.row(i));
    }
    if (ann.size() != k) fail("fixtures", "quotient rank mismatch at " + id);
    for (const std::string& sigma : m.complex.maximal_cofaces(id)) {
      const Chart& cs = charts.at(sigma);
      IntMat s(k, topdim);
      for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < topdim; ++j) s.at(i, j) = dot(ann[i], cs.basis[j]);
      m.fan_structures[id][sigma] = s;
    }
  }
  // flat strictly convex representative: phi = sum of kinked distances; use
  // the standard quadratic-like max assignment: slope at vertex v on maximal
  // sigma = the vertex of sigma opposite-ish; for the flat grid the simple
  // choice slope(sigma) = (coordinates of sigma's lex-min corner relative to
  // v) gives kink 1 across every interior wall.
  for (const std::string& v : m.complex.vertices()) {
    for (const std::string& sigma : m.complex.maximal_cofaces(v)) {
      // position of v in sigma's chart; slope -pos makes phi a max over the
      // corners of each cell, with kink 1 across interior grid walls
      const Arrow& a = m.complex.arrow(v, sigma);
      RatVec pos = a.apply(RatVec{});
      RatVec slope(pos.size());
      for (size_t i = 0; i < slope.size(); ++i) slope[i] = -pos[i];
      m.phi.slopes[v][sigma] = slope;
    }
  }
  return m;
}

}  // namespace tropscat
