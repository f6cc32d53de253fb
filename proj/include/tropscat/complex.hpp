#pragma once

#include <map>

#include "tropscat/polyhedron.hpp"

namespace tropscat {

// One check failure inside a validation report.
struct Issue {
  std::string check;
  std::string where;
  std::string detail;
};

struct Report {
  std::vector<Issue> issues;
  std::vector<std::string> notes;
  bool ok() const { return issues.empty(); }
  void add(const std::string& check, const std::string& where, const std::string& detail) {
    issues.push_back({check, where, detail});
  }
  std::string str() const;
};

// Face arrow tau -> sigma: affine embedding x |-> map x + shift between charts.
struct Arrow {
  std::string src, dst;
  IntMat map;
  IntVec shift;
  RatVec apply(const RatVec& x) const;
  Polyhedron image(const Polyhedron& src_poly) const;
};

// Integral polyhedral complex: cells in their own charts plus face arrows.
class PolyhedralComplex {
 public:
  void add_cell(const std::string& id, const Polyhedron& p);
  void add_arrow(const std::string& src, const std::string& dst, const IntMat& map,
                 const IntVec& shift);

  bool has_cell(const std::string& id) const { return cells_.count(id) > 0; }
  const Polyhedron& cell(const std::string& id) const;
  size_t cell_dim(const std::string& id) const { return cell(id).dim(); }
  const std::map<std::string, Polyhedron>& cells() const { return cells_; }
  const std::map<std::pair<std::string, std::string>, Arrow>& arrows() const { return arrows_; }
  bool has_arrow(const std::string& src, const std::string& dst) const;
  const Arrow& arrow(const std::string& src, const std::string& dst) const;

  size_t dim() const;  // max cell dimension
  std::vector<std::string> cells_of_dim(size_t d) const;
  std::vector<std::string> maximal_cells() const { return cells_of_dim(dim()); }
  std::vector<std::string> vertices() const { return cells_of_dim(0); }
  // faces of id (proper, via arrows) and cells having id as a face
  std::vector<std::string> faces_of(const std::string& id) const;
  std::vector<std::string> cofaces_of(const std::string& id) const;
  std::vector<std::string> maximal_cofaces(const std::string& id) const;
  // vertices of a cell (src of dim-0 arrows)
  std::vector<std::string> vertices_of(const std::string& id) const;

  // structural axioms: arrow embeddings are faces, unique arrow per face,
  // composition closure, pairwise intersections are cells
  Report validate() const;

 private:
  std::map<std::string, Polyhedron> cells_;
  std::map<std::pair<std::string, std::string>, Arrow> arrows_;
};

}  // namespace tropscat
