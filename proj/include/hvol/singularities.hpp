#pragma once

// Singularity models: toric cones, weighted-homogeneous hypersurfaces, and cones over
// polarized log-Fano bases described by their numerology.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "hvol/error.hpp"
#include "hvol/exactgeom.hpp"
#include "hvol/rational.hpp"

namespace hvol {

/// Monomial valuation with weight a_i on coordinate z_i; every weight is positive.
class MonomialValuation {
 public:
  explicit MonomialValuation(RVector weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw Error(ErrorCode::kDomainError, "empty weight vector");
    for (const auto& w : weights_)
      if (w <= 0) throw Error(ErrorCode::kDomainError, "weights must be positive, got " + to_string(weights_));
  }

  const RVector& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  MonomialValuation scaled(const Rational& lambda) const { return MonomialValuation(lambda * weights_); }

 private:
  RVector weights_;
};

/// Affine toric cone singularity Spec C[sigma^vee cap M] with M = Z^n.
struct ToricConeSingularity {
  int n = 0;
  PolyCone sigma;       // rays: primitive integer generators
  PolyCone sigma_dual;  // rays generate the weight monoid; they bound the Reeb cone
  RVector m0;           // <m0, u> = 1 for every ray u of sigma
  std::string label;
};

inline ToricConeSingularity make_toric_cone(const std::vector<RVector>& rays, std::string label = "toric") {
  for (const auto& r : rays)
    if (!std::all_of(r.begin(), r.end(), [](const Rational& x) { return is_integral(x); }))
      throw Error(ErrorCode::kModelError, "ray " + to_string(r) + " is not an integer vector");
  ToricConeSingularity x;
  x.sigma = cone_from_rays(rays);
  x.n = x.sigma.dim;
  x.sigma_dual = dual_cone(x.sigma);
  x.label = std::move(label);

  // Solve <m0, u> = 1 on a basis of rays, then verify on the rest.
  RMatrix basis;
  for (const auto& u : x.sigma.rays) {
    basis.push_back(u);
    if (linalg::rank(basis) < basis.size()) basis.pop_back();
    if (static_cast<int>(basis.size()) == x.n) break;
  }
  auto m0 = linalg::solve(basis, RVector(basis.size(), Rational(1)));
  if (!m0) throw Error(ErrorCode::kNotQGorenstein, "ray basis is singular");
  for (const auto& u : x.sigma.rays)
    if (dot(*m0, u) != 1)
      throw Error(ErrorCode::kNotQGorenstein,
                  "no m0 pairs to 1 with every ray; ray " + to_string(u) + " pairs to " + to_string(dot(*m0, u)));
  x.m0 = *m0;
  return x;
}

using Exponent = std::vector<int>;

/// Zero locus of a polynomial with generic nonzero coefficients on the listed monomials.
struct WeightedHomogeneousHypersurface {
  int nvars = 0;  // n + 1
  std::vector<Exponent> monomials;
  std::string label;

  int n() const noexcept { return nvars - 1; }
};

inline WeightedHomogeneousHypersurface make_hypersurface(std::vector<Exponent> monomials, std::string label = "hypersurface") {
  if (monomials.size() < 2) throw Error(ErrorCode::kModelError, "a hypersurface needs at least two monomials");
  const std::size_t nv = monomials.front().size();
  if (nv < 2) throw Error(ErrorCode::kModelError, "a hypersurface needs at least two variables");
  for (const auto& m : monomials) {
    if (m.size() != nv) throw Error(ErrorCode::kModelError, "monomials have inconsistent variable counts");
    if (std::any_of(m.begin(), m.end(), [](int e) { return e < 0; }))
      throw Error(ErrorCode::kModelError, "negative exponent");
    if (std::all_of(m.begin(), m.end(), [](int e) { return e == 0; }))
      throw Error(ErrorCode::kModelError, "constant term: the origin is not on the hypersurface");
  }
  auto sorted = monomials;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(ErrorCode::kModelError, "repeated monomial");
  return WeightedHomogeneousHypersurface{static_cast<int>(nv), std::move(monomials), std::move(label)};
}

inline Rational monomial_weight(const Exponent& e, const RVector& a) {
  Rational w = 0;
  for (std::size_t i = 0; i < e.size(); ++i) w += Rational(e[i]) * a[i];
  return w;
}

/// z_1^2 + ... + z_n^2 + z_{n+1}^k
inline WeightedHomogeneousHypersurface akm_singularity(int n, int k) {
  if (n < 2 || k < 1) throw Error(ErrorCode::kDomainError, "A_{k-1}^n needs n >= 2 and k >= 1");
  std::vector<Exponent> mons;
  for (int i = 0; i < n; ++i) {
    Exponent e(static_cast<std::size_t>(n + 1), 0);
    e[static_cast<std::size_t>(i)] = 2;
    mons.push_back(e);
  }
  Exponent last(static_cast<std::size_t>(n + 1), 0);
  last.back() = k;
  mons.push_back(last);
  return make_hypersurface(std::move(mons), "A_" + std::to_string(k - 1) + "^" + std::to_string(n));
}

/// (k, ..., k, 2): the weights making z_1^2 + ... + z_{n+1}^k homogeneous of degree 2k.
inline MonomialValuation canonical_weights(int n, int k) {
  if (n < 2 || k < 1) throw Error(ErrorCode::kDomainError, "A_{k-1}^n needs n >= 2 and k >= 1");
  RVector w(static_cast<std::size_t>(n), Rational(k));
  w.push_back(2);
  return MonomialValuation(std::move(w));
}

inline bool fano_index_check(const Rational& r, int n) { return r > 0 && r <= n; }

/// Cone over an (n-1)-dimensional log-Fano base, through (n, r, H^{n-1}).
struct PolarizedConeData {
  int n = 0;
  Rational r;
  Rational degH;
};

inline PolarizedConeData make_polarized_cone(int n, Rational r, Rational degH) {
  if (n < 1) throw Error(ErrorCode::kDomainError, "n must be positive");
  if (!fano_index_check(r, n))
    throw Error(ErrorCode::kInvalidIndex, "r = " + to_string(r) + " outside (0, " + std::to_string(n) + "]");
  if (degH <= 0) throw Error(ErrorCode::kDomainError, "degH must be positive");
  return PolarizedConeData{n, std::move(r), std::move(degH)};
}

struct ConeInvariants {
  Rational beta;
  Rational antilog_power;  // (-K - D)^n of the projective cone
  Rational fujita_bound;
  Rational nvol_ordV;
};

inline ConeInvariants cone_invariants(const PolarizedConeData& c) {
  if (!fano_index_check(c.r, c.n))
    throw Error(ErrorCode::kInvalidIndex, "r = " + to_string(c.r) + " outside (0, " + std::to_string(c.n) + "]");
  const Rational n(c.n);
  ConeInvariants out;
  out.beta = c.r / n;
  out.antilog_power = pow(c.r, c.n) * pow((n + 1) / n, c.n) * c.degH;
  out.fujita_bound = pow(n / (n + 1), c.n) * out.antilog_power;
  out.nvol_ordV = pow(c.r, c.n) * c.degH;
  if (out.fujita_bound != out.nvol_ordV)
    throw Error(ErrorCode::kOracleDisagreement, "Fujita bound differs from the canonical normalized volume");
  return out;
}

struct ToricLogFanoReport {
  RVector p_star;
  RVector gammas;
  Polytope lifted;
  RVector frak_p_star;
  Rational s;
  RVector beta_i;
  Rational beta_n;
  bool centroid_identity = false;  // centroid(lifted) == n/(n+1) (p_star, 1)
  bool beta_n_identity = false;    // beta_n == r/n
};

/// P = {x : <eta_i, x> + a_i >= 0} of dimension n-1, lifted to the truncated cone over P x {1}.
inline ToricLogFanoReport toric_log_fano(const std::vector<Halfspace>& facets, const Rational& r) {
  if (facets.empty()) throw Error(ErrorCode::kModelError, "no facets");
  if (r <= 0) throw Error(ErrorCode::kDomainError, "r must be positive");
  const int m = static_cast<int>(facets.front().normal.size());
  const int n = m + 1;
  Polytope base = polytope_from_hrep(facets, m);
  if (polytope_volume(base).degenerate) throw Error(ErrorCode::kDegeneratePolytope, "base polytope is not full-dimensional");

  ToricLogFanoReport rep;
  rep.p_star = centroid(base);
  for (const auto& h : facets) {
    Rational g = r * h.eval(rep.p_star);
    if (g > 1)
      throw Error(ErrorCode::kAngleOutOfRange, "gamma = " + to_string(g) + " exceeds 1 for facet normal " + to_string(h.normal));
    rep.gammas.push_back(g);
  }

  std::vector<Halfspace> lifted;
  for (const auto& h : facets) {
    RVector nrm = h.normal;
    nrm.push_back(h.offset);
    lifted.push_back(Halfspace{nrm, 0});
  }
  RVector top(static_cast<std::size_t>(n), Rational(0));
  top.back() = -1;
  lifted.push_back(Halfspace{top, 1});
  rep.lifted = polytope_from_hrep(lifted, n);

  const Rational ratio = Rational(n) / Rational(n + 1);
  RVector expected = rep.p_star;
  expected.push_back(1);
  rep.frak_p_star = centroid(rep.lifted);
  rep.centroid_identity = rep.frak_p_star == ratio * expected;

  rep.s = r * Rational(n + 1) / Rational(n);
  for (std::size_t i = 0; i < facets.size(); ++i) rep.beta_i.push_back(rep.s * lifted[i].eval(rep.frak_p_star));
  rep.beta_n = rep.s * lifted.back().eval(rep.frak_p_star);
  rep.beta_n_identity = rep.beta_n == r / Rational(n) && rep.beta_n == rep.s / Rational(n + 1);
  return rep;
}

namespace models {

inline std::vector<RVector> int_rays(std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<RVector> out;
  for (const auto& row : rows) {
    RVector v;
    for (int x : row) v.emplace_back(x);
    out.push_back(std::move(v));
  }
  return out;
}

inline ToricConeSingularity affine_space(int n) {
  std::vector<RVector> rays;
  for (int i = 0; i < n; ++i) {
    RVector e(static_cast<std::size_t>(n), Rational(0));
    e[static_cast<std::size_t>(i)] = 1;
    rays.push_back(e);
  }
  return make_toric_cone(rays, "C" + std::to_string(n));
}

/// C^2 / Z_k with weights (1, -1): the A_{k-1} surface singularity.
inline ToricConeSingularity toric_a_surface(int k) {
  return make_toric_cone(int_rays({{1, 0}, {1, k}}), "A_" + std::to_string(k - 1) + "^2 toric");
}

/// xy = zw
inline ToricConeSingularity conifold() {
  return make_toric_cone(int_rays({{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}}), "conifold");
}

/// Cone over the first del Pezzo surface.
inline ToricConeSingularity cone_dp1() {
  return make_toric_cone(int_rays({{1, 1, 0}, {1, 0, 1}, {1, -1, -1}, {1, 1, 1}}), "dP1 cone");
}

/// C^3 / Z_3 acting with weights (1, 1, 1).
inline ToricConeSingularity c3_mod_z3() {
  return make_toric_cone(int_rays({{1, 0, 0}, {0, 1, 0}, {-1, -1, 3}}), "C3/Z3");
}

inline std::vector<ToricConeSingularity> toric_library() {
  return {affine_space(2), affine_space(3), toric_a_surface(2), conifold(), cone_dp1(), c3_mod_z3()};
}

}  // namespace models

}  // namespace hvol
