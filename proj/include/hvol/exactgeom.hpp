#pragma once

// Exact rational convex geometry: halfspaces, polyhedral cones, polytopes.
// Inputs are desk scale (dimension <= 6, a few dozen facets), so vertex and
// facet enumeration are done by exhaustive subset solving.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "hvol/error.hpp"
#include "hvol/rational.hpp"

namespace hvol {

using RMatrix = std::vector<RVector>;

namespace linalg {

/// Gauss-Jordan elimination in place, pivoting only within the first `ncols` columns;
/// returns the pivot column of each nonzero row.
inline std::vector<std::size_t> row_reduce(RMatrix& m, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    const std::size_t width = m[row].size();
    const Rational inv = Rational(1) / m[row][col];
    for (std::size_t j = col; j < width; ++j) m[row][j] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][col] == 0) continue;
      const Rational f = m[i][col];
      for (std::size_t j = col; j < width; ++j) m[i][j] -= f * m[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(RMatrix m) {
  if (m.empty()) return 0;
  const std::size_t ncols = m.front().size();
  return row_reduce(m, ncols).size();
}

/// Unique solution of a square system, or nullopt when singular.
inline std::optional<RVector> solve(RMatrix a, const RVector& b) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  auto pivots = row_reduce(a, n);
  if (pivots.size() < n) return std::nullopt;
  RVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

/// Basis of {x : m x = 0}.
inline RMatrix nullspace(RMatrix m, std::size_t ncols) {
  auto pivots = row_reduce(m, ncols);
  std::vector<bool> is_pivot(ncols, false);
  for (auto p : pivots) is_pivot[p] = true;
  RMatrix basis;
  for (std::size_t free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    RVector v(ncols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

inline Rational determinant(RMatrix m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && m[sel][col] == 0) ++sel;
    if (sel == n) return 0;
    if (sel != col) {
      std::swap(m[sel], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t i = col + 1; i < n; ++i) {
      if (m[i][col] == 0) continue;
      const Rational f = m[i][col] / m[col][col];
      for (std::size_t j = col; j < n; ++j) m[i][j] -= f * m[col][j];
    }
  }
  return det;
}

/// Affine dimension of the selected points (-1 for an empty selection).
inline int affine_dim(const std::vector<RVector>& pts, const std::vector<std::size_t>& idx) {
  if (idx.empty()) return -1;
  RMatrix diffs;
  for (std::size_t i = 1; i < idx.size(); ++i) diffs.push_back(pts[idx[i]] - pts[idx[0]]);
  return static_cast<int>(rank(diffs));
}

}  // namespace linalg

/// {x : <normal, x> + offset >= 0}
struct Halfspace {
  RVector normal;
  Rational offset;

  Rational eval(const RVector& x) const { return dot(normal, x) + offset; }
  bool contains(const RVector& x) const { return eval(x) >= 0; }
};

inline Halfspace make_halfspace(RVector normal, Rational offset) {
  if (is_zero(normal)) throw Error(ErrorCode::kDomainError, "halfspace normal must be nonzero");
  return Halfspace{std::move(normal), std::move(offset)};
}

/// Polyhedral cone. `rays` are the primitive extreme generators (sorted), `facets` the
/// offset-0 halfspaces whose normals generate the dual cone.
struct PolyCone {
  int dim = 0;
  std::vector<RVector> rays;
  std::vector<Halfspace> facets;
};

struct Polytope {
  std::vector<Halfspace> hrep;
  std::vector<RVector> vrep;  // lexicographically sorted, no duplicates

  int dim() const {
    if (!vrep.empty()) return static_cast<int>(vrep.front().size());
    return hrep.empty() ? 0 : static_cast<int>(hrep.front().normal.size());
  }
};

namespace detail {

inline void for_each_subset(std::size_t n, std::size_t k,
                            const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline void sort_unique(std::vector<RVector>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

// Points where `dim` linearly independent constraints are tight and all are satisfied.
// Rows listed in `equalities` are always among the tight set.
inline std::vector<RVector> basic_feasible_points(const std::vector<Halfspace>& hs, int dim,
                                                  const std::vector<Halfspace>& equalities = {}) {
  std::vector<RVector> found;
  const std::size_t need = static_cast<std::size_t>(dim) - equalities.size();
  for_each_subset(hs.size(), need, [&](const std::vector<std::size_t>& sub) {
    RMatrix a;
    RVector b;
    for (const auto& e : equalities) {
      a.push_back(e.normal);
      b.push_back(-e.offset);
    }
    for (auto i : sub) {
      a.push_back(hs[i].normal);
      b.push_back(-hs[i].offset);
    }
    auto x = linalg::solve(a, b);
    if (!x) return;
    for (const auto& h : hs)
      if (!h.contains(*x)) return;
    found.push_back(std::move(*x));
  });
  sort_unique(found);
  return found;
}

inline bool feasible(const std::vector<Halfspace>& hs, int dim);

// Restricts a rank-deficient system to a maximal independent set of columns, which
// leaves the image of the normal matrix and hence feasibility unchanged.
inline bool feasible_rank_deficient(const std::vector<Halfspace>& hs, int dim) {
  RMatrix rows;
  for (const auto& h : hs) rows.push_back(h.normal);
  RMatrix cols(static_cast<std::size_t>(dim), RVector(hs.size()));
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (int j = 0; j < dim; ++j) cols[static_cast<std::size_t>(j)][i] = rows[i][static_cast<std::size_t>(j)];
  std::vector<std::size_t> keep;
  RMatrix acc;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    acc.push_back(cols[j]);
    if (linalg::rank(acc) == acc.size()) {
      keep.push_back(j);
    } else {
      acc.pop_back();
    }
  }
  std::vector<Halfspace> reduced;
  for (const auto& h : hs) {
    RVector n;
    for (auto j : keep) n.push_back(h.normal[j]);
    reduced.push_back(Halfspace{n, h.offset});
  }
  // Constraints whose reduced normal vanished are constants.
  std::vector<Halfspace> live;
  for (const auto& h : reduced) {
    if (is_zero(h.normal)) {
      if (h.offset < 0) return false;
    } else {
      live.push_back(h);
    }
  }
  if (keep.empty()) return true;
  return feasible(live, static_cast<int>(keep.size()));
}

inline bool feasible(const std::vector<Halfspace>& hs, int dim) {
  if (hs.empty()) return true;
  RMatrix rows;
  for (const auto& h : hs) rows.push_back(h.normal);
  if (linalg::rank(rows) < static_cast<std::size_t>(dim)) return feasible_rank_deficient(hs, dim);
  return !basic_feasible_points(hs, dim).empty();
}

// Primitive extreme rays of {y : <y, u> >= 0 for all u in gens}, sorted.
inline std::vector<RVector> dual_extreme_rays(const std::vector<RVector>& gens, int d) {
  std::vector<RVector> out;
  if (d == 1) {
    bool pos = false, neg = false;
    for (const auto& g : gens) (g[0] > 0 ? pos : neg) = true;
    if (!neg) out.push_back(RVector{Rational(1)});
    if (!pos) out.push_back(RVector{Rational(-1)});
    return out;
  }
  for_each_subset(gens.size(), static_cast<std::size_t>(d - 1), [&](const std::vector<std::size_t>& sub) {
    RMatrix rows;
    for (auto i : sub) rows.push_back(gens[i]);
    auto ns = linalg::nullspace(rows, static_cast<std::size_t>(d));
    if (ns.size() != 1) return;
    RVector y = ns.front();
    bool pos = false, neg = false;
    for (const auto& g : gens) {
      Rational v = dot(y, g);
      if (v > 0) pos = true;
      if (v < 0) neg = true;
    }
    if (pos && neg) return;
    if (neg) y = Rational(-1) * y;
    if (!pos && !neg) return;  // lineality, not a ray
    out.push_back(primitive(y));
  });
  sort_unique(out);
  return out;
}

}  // namespace detail

/// All vertices of the bounded region cut out by `hrep`, lexicographically sorted.
/// Throws UnboundedRegion when a recession direction exists and EmptyRegion when infeasible.
inline std::vector<RVector> vertex_enumerate(const std::vector<Halfspace>& hrep, int dim) {
  for (const auto& h : hrep)
    if (static_cast<int>(h.normal.size()) != dim)
      throw Error(ErrorCode::kDomainError, "halfspace dimension does not match ambient dimension");
  RMatrix rows;
  for (const auto& h : hrep) rows.push_back(h.normal);
  if (linalg::rank(rows) < static_cast<std::size_t>(dim)) {
    if (detail::feasible_rank_deficient(hrep, dim))
      throw Error(ErrorCode::kUnboundedRegion, "region contains a line");
    throw Error(ErrorCode::kEmptyRegion, "constraints are infeasible");
  }
  auto verts = detail::basic_feasible_points(hrep, dim);
  if (verts.empty()) throw Error(ErrorCode::kEmptyRegion, "constraints are infeasible");
  // Bounded iff the pointed recession cone {x : N x >= 0} has no extreme ray.
  if (!detail::dual_extreme_rays(rows, dim).empty())
    throw Error(ErrorCode::kUnboundedRegion, "region has a recession direction");
  return verts;
}

inline Polytope polytope_from_hrep(std::vector<Halfspace> hrep, int dim) {
  auto verts = vertex_enumerate(hrep, dim);
  return Polytope{std::move(hrep), std::move(verts)};
}

/// Facets of the convex hull of full-dimensional `points`, as primitive inward halfspaces.
inline std::vector<Halfspace> facets_of_hull(const std::vector<RVector>& points) {
  if (points.empty()) throw Error(ErrorCode::kEmptyRegion, "no points");
  const int d = static_cast<int>(points.front().size());
  std::vector<std::size_t> all(points.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (linalg::affine_dim(points, all) < d)
    throw Error(ErrorCode::kDegeneratePolytope, "points are not full-dimensional");
  std::vector<std::pair<RVector, Rational>> found;
  detail::for_each_subset(points.size(), static_cast<std::size_t>(d), [&](const std::vector<std::size_t>& sub) {
    RMatrix diffs;
    for (std::size_t i = 1; i < sub.size(); ++i) diffs.push_back(points[sub[i]] - points[sub[0]]);
    auto ns = linalg::nullspace(diffs, static_cast<std::size_t>(d));
    if (ns.size() != 1) return;
    RVector normal = primitive(ns.front());
    Rational offset = -dot(normal, points[sub[0]]);
    bool pos = false, neg = false;
    for (const auto& p : points) {
      Rational v = dot(normal, p) + offset;
      if (v > 0) pos = true;
      if (v < 0) neg = true;
    }
    if (pos && neg) return;
    if (neg) {
      normal = Rational(-1) * normal;
      offset = -offset;
    }
    found.emplace_back(std::move(normal), std::move(offset));
  });
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  std::vector<Halfspace> out;
  for (auto& [n, o] : found) out.push_back(Halfspace{n, o});
  return out;
}

inline Polytope polytope_from_vertices(std::vector<RVector> points) {
  auto hrep = facets_of_hull(points);
  detail::sort_unique(points);
  // Keep only extreme points: those where at least d affinely spanning facets are tight.
  std::vector<RVector> verts;
  const int d = static_cast<int>(points.front().size());
  for (const auto& p : points) {
    RMatrix tight;
    for (const auto& h : hrep)
      if (h.eval(p) == 0) tight.push_back(h.normal);
    if (static_cast<int>(linalg::rank(tight)) == d) verts.push_back(p);
  }
  return Polytope{std::move(hrep), std::move(verts)};
}

/// Simplices (as indices into `vertices`) covering a polytope without overlap.
struct Triangulation {
  std::vector<RVector> vertices;
  std::vector<std::vector<std::size_t>> simplices;
};

namespace detail {

// Pulling triangulation: cone the lowest-index vertex of a face over the triangulated
// facets of that face which avoid it. Faces are identified by tight-constraint sets of
// the ambient description, which enumerates every face of every dimension.
inline std::vector<std::vector<std::size_t>> pull_triangulate(const std::vector<RVector>& verts,
                                                              const std::vector<std::vector<bool>>& tight,
                                                              const std::vector<std::size_t>& face, int k) {
  if (k == 0) return {{face.front()}};
  const std::size_t apex = face.front();
  std::vector<std::vector<std::size_t>> out;
  std::set<std::vector<std::size_t>> seen;
  for (const auto& row : tight) {
    if (row[apex]) continue;
    std::vector<std::size_t> sub;
    for (auto v : face)
      if (row[v]) sub.push_back(v);
    if (static_cast<int>(sub.size()) < k || sub.size() == face.size()) continue;
    if (!seen.insert(sub).second) continue;
    if (linalg::affine_dim(verts, sub) != k - 1) continue;
    for (auto s : pull_triangulate(verts, tight, sub, k - 1)) {
      s.insert(s.begin(), apex);
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace detail

/// Triangulates a full-dimensional polytope by pulling from its lexicographically first
/// vertex. A lower-dimensional polytope yields an empty simplex list.
inline Triangulation triangulate(const Polytope& p) {
  Triangulation tri;
  tri.vertices = p.vrep;
  detail::sort_unique(tri.vertices);
  if (tri.vertices.empty()) return tri;
  const int d = p.dim();
  std::vector<std::size_t> all(tri.vertices.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (linalg::affine_dim(tri.vertices, all) < d) return tri;
  std::vector<Halfspace> hrep = p.hrep.empty() ? facets_of_hull(tri.vertices) : p.hrep;
  std::vector<std::vector<bool>> tight;
  for (const auto& h : hrep) {
    std::vector<bool> row(tri.vertices.size());
    for (std::size_t i = 0; i < tri.vertices.size(); ++i) row[i] = h.eval(tri.vertices[i]) == 0;
    tight.push_back(std::move(row));
  }
  tri.simplices = detail::pull_triangulate(tri.vertices, tight, all, d);
  return tri;
}

inline Rational factorial(int n) {
  Rational f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline Rational simplex_volume(const std::vector<RVector>& verts, const std::vector<std::size_t>& s) {
  RMatrix m;
  for (std::size_t i = 1; i < s.size(); ++i) m.push_back(verts[s[i]] - verts[s[0]]);
  Rational det = linalg::determinant(m);
  if (det < 0) det = -det;
  return det / factorial(static_cast<int>(m.size()));
}

struct VolumeResult {
  Rational value;
  bool degenerate = false;  // not full-dimensional; value is 0
};

inline VolumeResult polytope_volume(const Polytope& p) {
  auto tri = triangulate(p);
  if (tri.simplices.empty()) return {Rational(0), true};
  Rational total = 0;
  for (const auto& s : tri.simplices) total += simplex_volume(tri.vertices, s);
  return {total, false};
}

inline RVector centroid(const Polytope& p) {
  auto tri = triangulate(p);
  if (tri.simplices.empty()) throw Error(ErrorCode::kDegeneratePolytope, "centroid of a lower-dimensional polytope");
  const std::size_t d = tri.vertices.front().size();
  RVector acc(d, Rational(0));
  Rational total = 0;
  for (const auto& s : tri.simplices) {
    Rational vol = simplex_volume(tri.vertices, s);
    RVector mean(d, Rational(0));
    for (auto i : s) mean = mean + tri.vertices[i];
    acc = acc + (vol / Rational(static_cast<long>(s.size()))) * mean;
    total += vol;
  }
  return (Rational(1) / total) * acc;
}


/// Builds a pointed full-dimensional cone from generators; redundant generators are dropped.
inline PolyCone cone_from_rays(const std::vector<RVector>& gens) {
  if (gens.empty()) throw Error(ErrorCode::kNotFullDimensional, "cone has no generators");
  const int d = static_cast<int>(gens.front().size());
  for (const auto& g : gens) {
    if (static_cast<int>(g.size()) != d) throw Error(ErrorCode::kDomainError, "generator dimension mismatch");
    if (is_zero(g)) throw Error(ErrorCode::kDomainError, "zero generator");
  }
  if (linalg::rank(gens) < static_cast<std::size_t>(d))
    throw Error(ErrorCode::kNotFullDimensional, "generators do not span the ambient space");
  auto normals = detail::dual_extreme_rays(gens, d);
  if (linalg::rank(normals) < static_cast<std::size_t>(d))
    throw Error(ErrorCode::kNotFullDimensional, "cone is not pointed (its dual is lower-dimensional)");
  PolyCone c;
  c.dim = d;
  for (const auto& g : gens) {
    RMatrix tight;
    for (const auto& nrm : normals)
      if (dot(nrm, g) == 0) tight.push_back(nrm);
    if (static_cast<int>(linalg::rank(tight)) == d - 1) c.rays.push_back(primitive(g));
  }
  detail::sort_unique(c.rays);
  for (auto& nrm : normals) c.facets.push_back(Halfspace{nrm, 0});
  return c;
}

/// sigma^vee = {y : <y, u> >= 0 for every ray u of sigma}, recomputed from the rays.
inline PolyCone dual_cone(const PolyCone& c) {
  if (c.rays.empty()) throw Error(ErrorCode::kNotFullDimensional, "cone has no rays");
  auto normals = detail::dual_extreme_rays(c.rays, c.dim);
  if (linalg::rank(normals) < static_cast<std::size_t>(c.dim))
    throw Error(ErrorCode::kNotFullDimensional, "input cone is not pointed");
  return cone_from_rays(normals);
}

/// {y in c : <y, xi> <= 1}; xi must pair strictly positively with every ray of c.
inline Polytope cut_cone(const PolyCone& c, const RVector& xi) {
  if (static_cast<int>(xi.size()) != c.dim) throw Error(ErrorCode::kDomainError, "xi has the wrong dimension");
  Polytope p;
  p.vrep.push_back(RVector(static_cast<std::size_t>(c.dim), Rational(0)));
  for (const auto& u : c.rays) {
    Rational pairing = dot(u, xi);
    if (pairing <= 0)
      throw Error(ErrorCode::kNotInReebCone, "ray " + to_string(u) + " pairs to " + to_string(pairing) +
                                                 " with xi " + to_string(xi));
    p.vrep.push_back((Rational(1) / pairing) * u);
  }
  detail::sort_unique(p.vrep);
  p.hrep = c.facets;
  p.hrep.push_back(Halfspace{Rational(-1) * xi, 1});
  return p;
}

}  // namespace hvol
