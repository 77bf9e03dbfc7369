#pragma once

// Log discrepancy, volume and normalized volume of monomial and toric valuations,
// plus the monomial-counting oracle for colengths dim R / a_p(v).

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hvol/error.hpp"
#include "hvol/exactgeom.hpp"
#include "hvol/rational.hpp"
#include "hvol/singularities.hpp"

namespace hvol {

/// Nonnegative rational or +infinity.
struct ExtendedRational {
  bool infinite = false;
  Rational value;

  static ExtendedRational infinity() { return {true, Rational(0)}; }
  static ExtendedRational finite(Rational v) { return {false, std::move(v)}; }

  double approx() const { return infinite ? std::numeric_limits<double>::infinity() : to_double(value); }
  std::string str() const { return infinite ? "inf" : to_string(value); }
  friend bool operator==(const ExtendedRational&, const ExtendedRational&) = default;
};

struct ValuationReport {
  ExtendedRational logdisc;
  Rational volume;
  ExtendedRational nvol;
  std::optional<Rational> logdisc_pair;
  bool nonpositive_logdisc = false;
};

// ---------------------------------------------------------------------------
// toric

inline bool in_reeb_cone(const ToricConeSingularity& x, const RVector& xi) {
  if (static_cast<int>(xi.size()) != x.n) return false;
  for (const auto& u : x.sigma_dual.rays)
    if (dot(u, xi) <= 0) return false;
  return true;
}

inline void require_reeb(const ToricConeSingularity& x, const RVector& xi) {
  if (static_cast<int>(xi.size()) != x.n)
    throw Error(ErrorCode::kDomainError, "xi has dimension " + std::to_string(xi.size()) + ", model has " + std::to_string(x.n));
  for (const auto& u : x.sigma_dual.rays)
    if (dot(u, xi) <= 0)
      throw Error(ErrorCode::kNotInReebCone, "xi " + to_string(xi) + " pairs to " + to_string(dot(u, xi)) + " with " + to_string(u));
}

inline Rational log_discrepancy_toric(const ToricConeSingularity& x, const RVector& xi) {
  require_reeb(x, xi);
  return dot(x.m0, xi);
}

/// n! * vol{y in sigma^vee : <y, xi> <= 1}
inline Rational valuation_volume_toric(const ToricConeSingularity& x, const RVector& xi) {
  require_reeb(x, xi);
  auto res = polytope_volume(cut_cone(x.sigma_dual, xi));
  if (res.degenerate) throw Error(ErrorCode::kDegeneratePolytope, "cut cone collapsed");
  return factorial(x.n) * res.value;
}

/// Simplicial cones (indices into sigma_dual.rays) subdividing sigma^vee.
struct ConeFan {
  std::vector<std::vector<std::size_t>> cones;
  std::vector<Rational> dets;  // |det| of each cone's ray matrix
};

inline ConeFan triangulate_dual_cone(const ToricConeSingularity& x) {
  RVector xi0(static_cast<std::size_t>(x.n), Rational(0));
  for (const auto& u : x.sigma.rays) xi0 = xi0 + u;
  Polytope cut = cut_cone(x.sigma_dual, xi0);
  std::vector<RVector> verts;
  verts.push_back(RVector(static_cast<std::size_t>(x.n), Rational(0)));
  for (const auto& u : x.sigma_dual.rays) verts.push_back((Rational(1) / dot(u, xi0)) * u);
  std::vector<std::vector<bool>> tight;
  for (const auto& h : cut.hrep) {
    std::vector<bool> row(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) row[i] = h.eval(verts[i]) == 0;
    tight.push_back(std::move(row));
  }
  std::vector<std::size_t> cap;
  for (std::size_t i = 1; i < verts.size(); ++i) cap.push_back(i);
  ConeFan fan;
  for (auto s : detail::pull_triangulate(verts, tight, cap, x.n - 1)) {
    RMatrix m;
    std::vector<std::size_t> rays;
    for (auto i : s) {
      rays.push_back(i - 1);
      m.push_back(x.sigma_dual.rays[i - 1]);
    }
    Rational d = linalg::determinant(m);
    fan.cones.push_back(std::move(rays));
    fan.dets.push_back(d < 0 ? Rational(-d) : d);
  }
  return fan;
}

/// vol(xi) = sum over cones S of |det U_S| / prod_{u in S} <u, xi>.
inline Rational fan_volume(const ToricConeSingularity& x, const ConeFan& fan, const RVector& xi) {
  Rational total = 0;
  for (std::size_t c = 0; c < fan.cones.size(); ++c) {
    Rational denom = 1;
    for (auto i : fan.cones[c]) denom *= dot(x.sigma_dual.rays[i], xi);
    total += fan.dets[c] / denom;
  }
  return total;
}

inline double fan_volume(const ToricConeSingularity& x, const ConeFan& fan, const std::vector<double>& xi) {
  double total = 0;
  for (std::size_t c = 0; c < fan.cones.size(); ++c) {
    double denom = 1;
    for (auto i : fan.cones[c]) {
      double p = 0;
      for (std::size_t k = 0; k < xi.size(); ++k) p += to_double(x.sigma_dual.rays[i][k]) * xi[k];
      denom *= p;
    }
    total += to_double(fan.dets[c]) / denom;
  }
  return total;
}

// ---------------------------------------------------------------------------
// hypersurface

inline void require_weights(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a) {
  if (static_cast<int>(a.size()) != w.nvars)
    throw Error(ErrorCode::kDomainError, "weight vector has " + std::to_string(a.size()) + " entries, model has " +
                                             std::to_string(w.nvars) + " variables");
}

/// d(a) = min over monomials of the a-weight.
inline Rational initial_degree(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a) {
  require_weights(w, a);
  Rational d = monomial_weight(w.monomials.front(), a.weights());
  for (const auto& m : w.monomials) d = std::min(d, monomial_weight(m, a.weights()));
  return d;
}

/// Monomials of f achieving d(a).
inline std::vector<std::size_t> initial_monomials(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a) {
  const Rational d = initial_degree(w, a);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < w.monomials.size(); ++i)
    if (monomial_weight(w.monomials[i], a.weights()) == d) out.push_back(i);
  return out;
}

inline Rational log_discrepancy_hypersurface(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a) {
  return sum(a.weights()) - initial_degree(w, a);
}

struct HypersurfaceVolumeOptions {
  bool override_precondition = false;
  std::optional<Rational> oracle_p;  // cross-check against the counting oracle at this p
  double oracle_tolerance = 0.05;
};

inline Rational lattice_count_oracle_volume(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a,
                                            const Rational& p);

/// d(a) / prod a_i; valid when the a-initial form has at least two monomials.
inline Rational valuation_volume_hypersurface(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a,
                                              const HypersurfaceVolumeOptions& opts = {}) {
  if (!opts.override_precondition && initial_monomials(w, a).size() < 2)
    throw Error(ErrorCode::kPreconditionViolated, "initial form of " + w.label + " at weights " + to_string(a.weights()) +
                                                      " is a single monomial");
  Rational prod = 1;
  for (const auto& x : a.weights()) prod *= x;
  Rational vol = initial_degree(w, a) / prod;
  if (opts.oracle_p) {
    double est = to_double(lattice_count_oracle_volume(w, a, *opts.oracle_p));
    double rel = std::abs(est - to_double(vol)) / to_double(vol);
    if (rel > opts.oracle_tolerance)
      throw Error(ErrorCode::kOracleDisagreement, "closed-form volume " + to_string(vol) + " vs oracle estimate " + std::to_string(est));
  }
  return vol;
}

// ---------------------------------------------------------------------------
// normalized volume

inline ExtendedRational normalized_volume(const ExtendedRational& logdisc, const Rational& volume, int n) {
  if (volume < 0) throw Error(ErrorCode::kDomainError, "negative volume");
  if (n < 1) throw Error(ErrorCode::kDomainError, "n must be positive");
  if (logdisc.infinite) return ExtendedRational::infinity();
  return ExtendedRational::finite(pow(logdisc.value, n) * volume);
}

inline Rational normalized_volume(const Rational& logdisc, const Rational& volume, int n) {
  return normalized_volume(ExtendedRational::finite(logdisc), volume, n).value;
}

/// A_{(Y,E)}(v) = A_Y(v) - v(E)
inline Rational log_adjusted_discrepancy(const Rational& logdisc, const Rational& v_of_E) { return logdisc - v_of_E; }

inline ValuationReport evaluate(const ToricConeSingularity& x, const RVector& xi) {
  ValuationReport r;
  Rational a = log_discrepancy_toric(x, xi);
  r.logdisc = ExtendedRational::finite(a);
  r.volume = valuation_volume_toric(x, xi);
  r.nvol = normalized_volume(r.logdisc, r.volume, x.n);
  r.nonpositive_logdisc = a <= 0;
  return r;
}

inline ValuationReport evaluate(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a,
                                const HypersurfaceVolumeOptions& opts = {}) {
  ValuationReport r;
  Rational ld = log_discrepancy_hypersurface(w, a);
  r.logdisc = ExtendedRational::finite(ld);
  r.volume = valuation_volume_hypersurface(w, a, opts);
  r.nvol = normalized_volume(r.logdisc, r.volume, w.n());
  r.nonpositive_logdisc = ld <= 0;
  return r;
}

// ---------------------------------------------------------------------------
// counting oracle

inline constexpr std::int64_t kDefaultCountBudget = 200'000'000;

namespace detail {

// #{e in N^m : <e, w> <= budget}, enumerating all but the last coordinate.
inline std::int64_t count_below(const std::vector<std::int64_t>& w, std::int64_t budget, std::int64_t& work, std::int64_t work_cap) {
  if (budget < 0) return 0;
  const std::size_t m = w.size();
  if (m == 0) return 1;
  std::int64_t total = 0;
  std::vector<std::int64_t> e(m - 1, 0);
  std::int64_t used = 0;
  // odometer over the first m-1 coordinates, constrained by used <= budget
  while (true) {
    total += (budget - used) / w[m - 1] + 1;
    if (++work > work_cap) throw Error(ErrorCode::kBudgetExceeded, "monomial count exceeded its work budget");
    std::size_t i = 0;
    while (i < m - 1) {
      if (used + w[i] <= budget) {
        ++e[i];
        used += w[i];
        break;
      }
      used -= e[i] * w[i];
      e[i] = 0;
      ++i;
    }
    if (i == m - 1) break;
  }
  return total;
}

// Integer scaling of weights and a threshold: returns (L*a, L*p) with L the common denominator.
inline std::pair<std::vector<std::int64_t>, Integer> scale_to_integers(const RVector& a, const Rational& p) {
  RVector all = a;
  all.push_back(p);
  Integer l = lcm_of_denominators(all);
  std::vector<std::int64_t> w;
  for (const auto& x : a) w.push_back(to_int64(num(x) * (l / den(x))));
  return {w, num(p) * (l / den(p))};
}

}  // namespace detail

/// #{e in N^m : <e, a> < p}
inline std::int64_t count_monomials_below(const RVector& a, const Rational& p, std::int64_t budget = kDefaultCountBudget) {
  if (p <= 0) return 0;
  auto [w, P] = detail::scale_to_integers(a, p);
  std::int64_t work = 0;
  return detail::count_below(w, to_int64(P) - 1, work, budget);
}

/// Leading monomial used for standard-monomial counting: a member of the initial form,
/// preferring a pure power whose variable appears in no other initial monomial with a
/// higher exponent.
inline std::size_t choose_leading_monomial(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a) {
  auto init = initial_monomials(w, a);
  for (auto idx : init) {
    const auto& e = w.monomials[idx];
    int support = 0;
    std::size_t var = 0;
    for (std::size_t j = 0; j < e.size(); ++j)
      if (e[j] != 0) {
        ++support;
        var = j;
      }
    if (support != 1) continue;
    bool dominant = true;
    for (auto other : init)
      if (other != idx && w.monomials[other][var] >= e[var]) dominant = false;
    if (dominant) return idx;
  }
  return init.front();
}

/// dim R / a_p(v_a) for R = C[z]/(f): monomials of weight < p not divisible by the leading monomial.
inline std::int64_t lattice_count_oracle(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a, const Rational& p,
                                         std::int64_t budget = kDefaultCountBudget) {
  require_weights(w, a);
  if (p <= 0) throw Error(ErrorCode::kDomainError, "p must be positive");
  const auto& lm = w.monomials[choose_leading_monomial(w, a)];
  const Rational d = monomial_weight(lm, a.weights());
  return count_monomials_below(a.weights(), p, budget) - count_monomials_below(a.weights(), p - d, budget);
}

/// #{alpha in sigma^vee cap Z^n : <alpha, xi> < p}
inline std::int64_t lattice_count_oracle(const ToricConeSingularity& x, const RVector& xi, const Rational& p,
                                         std::int64_t budget = kDefaultCountBudget) {
  require_reeb(x, xi);
  if (p <= 0) throw Error(ErrorCode::kDomainError, "p must be positive");
  const std::size_t n = static_cast<std::size_t>(x.n);
  // Integer constraints: <u_i, alpha> >= 0 for rays u_i of sigma, <L xi, alpha> <= L p - 1 (strict, integral).
  std::vector<std::vector<std::int64_t>> cons;
  std::vector<std::int64_t> rhs;  // <c, alpha> >= rhs
  for (const auto& u : x.sigma.rays) {
    std::vector<std::int64_t> c;
    for (const auto& q : u) c.push_back(to_int64(num(q)));
    cons.push_back(std::move(c));
    rhs.push_back(0);
  }
  auto [lxi, lp] = detail::scale_to_integers(xi, p);
  {
    std::vector<std::int64_t> c;
    for (auto v : lxi) c.push_back(-v);
    cons.push_back(std::move(c));
    rhs.push_back(1 - to_int64(lp));
  }
  // Bounding box from the vertices p * u / <u, xi> of the scaled cut polytope.
  std::vector<std::int64_t> lo(n, 0), hi(n, 0);
  for (const auto& u : x.sigma_dual.rays) {
    RVector v = (p / dot(u, xi)) * u;
    for (std::size_t k = 0; k < n; ++k) {
      Rational f = v[k];
      Integer fl = num(f) / den(f);
      if (f < 0 && Rational(fl) != f) fl -= 1;
      Integer cl = fl + (Rational(fl) == f ? 0 : 1);
      lo[k] = std::min(lo[k], to_int64(fl));
      hi[k] = std::max(hi[k], to_int64(cl));
    }
  }
  std::int64_t count = 0, work = 0;
  std::vector<std::int64_t> alpha(n, 0);
  std::vector<std::int64_t> partial(cons.size(), 0);
  // Enumerate prefixes alpha[0..n-2]; solve the last coordinate as an interval.
  auto last_interval = [&]() {
    std::int64_t l = lo[n - 1], h = hi[n - 1];
    for (std::size_t c = 0; c < cons.size(); ++c) {
      const std::int64_t coef = cons[c][n - 1];
      const std::int64_t need = rhs[c] - partial[c];  // coef * t >= need
      if (coef > 0) {
        std::int64_t q = need >= 0 ? (need + coef - 1) / coef : -((-need) / coef);
        l = std::max(l, q);
      } else if (coef < 0) {
        const std::int64_t pc = -coef;  // t <= -need / pc
        std::int64_t num_ = -need;
        std::int64_t q = num_ >= 0 ? num_ / pc : -((-num_ + pc - 1) / pc);
        h = std::min(h, q);
      } else if (partial[c] < rhs[c]) {
        return std::int64_t{0};
      }
    }
    return h >= l ? h - l + 1 : std::int64_t{0};
  };
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == n - 1) {
      count += last_interval();
      if (++work > budget) throw Error(ErrorCode::kBudgetExceeded, "lattice count exceeded its work budget");
      return;
    }
    for (std::int64_t t = lo[k]; t <= hi[k]; ++t) {
      for (std::size_t c = 0; c < cons.size(); ++c) partial[c] += cons[c][k] * t;
      alpha[k] = t;
      rec(k + 1);
      for (std::size_t c = 0; c < cons.size(); ++c) partial[c] -= cons[c][k] * t;
    }
  };
  rec(0);
  return count;
}

/// n! * count(p) / p^n
inline Rational lattice_count_oracle_volume(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a,
                                            const Rational& p) {
  return factorial(w.n()) * Rational(lattice_count_oracle(w, a, p)) / pow(p, w.n());
}

inline Rational lattice_count_oracle_volume(const ToricConeSingularity& x, const RVector& xi, const Rational& p) {
  return factorial(x.n) * Rational(lattice_count_oracle(x, xi, p)) / pow(p, x.n);
}

}  // namespace hvol
