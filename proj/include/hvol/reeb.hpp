#pragma once

// Minimization of the normalized volume over the Reeb cone of a toric singularity or
// over monomial weights of a hypersurface, with exact re-verification of the result.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "hvol/error.hpp"
#include "hvol/rational.hpp"
#include "hvol/singularities.hpp"
#include "hvol/valuation.hpp"

namespace hvol {

/// {xi : <alpha, xi> > 0 for every generator alpha of the weight monoid}
struct ReebCone {
  std::vector<RVector> generators;
};

inline ReebCone reeb_cone(const ToricConeSingularity& x) { return ReebCone{x.sigma_dual.rays}; }

inline bool reeb_membership(const ReebCone& rc, const RVector& xi) {
  for (const auto& g : rc.generators) {
    if (g.size() != xi.size()) throw Error(ErrorCode::kDomainError, "dimension mismatch in Reeb membership");
    if (dot(g, xi) <= 0) return false;
  }
  return true;
}

/// (n / A(xi)) xi; A of the result is exactly n.
inline RVector normalize_reeb(const ToricConeSingularity& x, const RVector& xi) {
  const Rational a = log_discrepancy_toric(x, xi);
  if (a <= 0) throw Error(ErrorCode::kDomainError, "log discrepancy must be positive to normalize");
  return (Rational(x.n) / a) * xi;
}

inline MonomialValuation normalize_weights(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a) {
  const Rational ld = log_discrepancy_hypersurface(w, a);
  if (ld <= 0) throw Error(ErrorCode::kDomainError, "log discrepancy must be positive to normalize");
  return a.scaled(Rational(w.n()) / ld);
}

/// vol(lambda xi) lambda^n == vol(xi), exactly.
inline bool rescaling_law_check(const ToricConeSingularity& x, const RVector& xi, const Rational& lambda) {
  if (lambda <= 0) throw Error(ErrorCode::kDomainError, "lambda must be positive");
  return valuation_volume_toric(x, lambda * xi) * pow(lambda, x.n) == valuation_volume_toric(x, xi);
}

inline bool rescaling_law_check(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a, const Rational& lambda) {
  if (lambda <= 0) throw Error(ErrorCode::kDomainError, "lambda must be positive");
  return valuation_volume_hypersurface(w, a.scaled(lambda)) * pow(lambda, w.n()) == valuation_volume_hypersurface(w, a);
}

/// (2 pi)^n / n^n * nvol(ord_S)
inline double msy_link_volume(double nvol_ordS, int n) {
  if (nvol_ordS < 0) throw Error(ErrorCode::kDomainError, "normalized volume must be nonnegative");
  if (n < 1) throw Error(ErrorCode::kDomainError, "n must be positive");
  return std::pow(2 * std::numbers::pi / n, n) * nvol_ordS;
}

/// (m - 1) R / (m - R)
inline double ricci_bound_transfer(double R, int m) {
  if (!(R > 0 && R <= 1) || m < 2 || !(m > R))
    throw Error(ErrorCode::kDomainError, "need 0 < R <= 1 and m >= 2");
  return (m - 1) * R / (m - R);
}

/// R^n nvol(ord_S)
inline double hvol_lower(double R, double nvol_ordS, int n) {
  if (!(R > 0 && R <= 1)) throw Error(ErrorCode::kDomainError, "need 0 < R <= 1");
  return std::pow(R, n) * nvol_ordS;
}

// ---------------------------------------------------------------------------
// optimizer

struct MinimizeOptions {
  double tol = 1e-8;
  int max_iter = 500;
  int starts = 5;
  std::uint64_t seed = 0;
};

struct TrajectoryPoint {
  std::vector<double> point;
  double value = 0;
};

struct MinimizeResult {
  RVector argmin;  // full weight / Reeb vector with A(argmin) = n exactly
  std::vector<double> argmin_approx;
  double min_nvol = 0;
  Rational min_nvol_exact;  // exact normalized volume at argmin
  bool snapped = false;     // argmin is a low-denominator rational that did not raise the objective
  int iterations = 0;
  std::vector<TrajectoryPoint> trajectory;
  double grad_norm = 0;
  bool converged = false;
  std::string stop_reason;  // gradient | pattern | trivial | max_iter
  int starts = 1;
  double start_spread = 0;  // max distance of any start's argmin from the reported one
  std::vector<std::vector<double>> start_argmins;
};

namespace detail {

// Scale-invariant objective over a parameter space; infeasible points yield nullopt.
struct Problem {
  int n = 0;
  int dim = 0;
  std::function<std::optional<double>(const std::vector<double>&)> value;
  std::function<std::optional<Rational>(const RVector&)> exact_value;
  std::function<Rational(const RVector&)> exact_logdisc;  // positive and 1-homogeneous on the domain
  std::function<double(const std::vector<double>&)> logdisc;
  std::function<RVector(const RVector&)> expand;           // parameters -> full vector
  std::function<std::vector<double>(std::mt19937_64&)> random_start;
};

inline double norm2(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm_inf(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

inline std::vector<double> normalized(const Problem& p, std::vector<double> x) {
  const double a = p.logdisc(x);
  for (auto& v : x) v *= p.n / a;
  return x;
}

struct LocalResult {
  std::vector<double> x;
  double value = 0;
  int iterations = 0;
  double grad_norm = 0;
  bool converged = false;
  std::string stop_reason;
  std::vector<TrajectoryPoint> trajectory;
};

inline std::optional<double> safe_value(const Problem& p, const std::vector<double>& x) {
  for (double v : x)
    if (!std::isfinite(v)) return std::nullopt;
  if (!(p.logdisc(x) > 0)) return std::nullopt;
  auto f = p.value(x);
  if (!f || !std::isfinite(*f)) return std::nullopt;
  return f;
}

// Central differences with a step relative to the iterate's scale, projected off the radial direction.
inline std::optional<std::vector<double>> gradient(const Problem& p, const std::vector<double>& x) {
  const double h = 1e-6 * norm_inf(x);
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    auto fp = safe_value(p, xp), fm = safe_value(p, xm);
    if (!fp || !fm) return std::nullopt;
    g[i] = (*fp - *fm) / (2 * h);
  }
  const double xx = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
  const double gx = std::inner_product(g.begin(), g.end(), x.begin(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) g[i] -= gx / xx * x[i];
  return g;
}

inline LocalResult local_minimize(const Problem& p, std::vector<double> x, const MinimizeOptions& opts) {
  LocalResult r;
  x = normalized(p, x);
  auto fx = safe_value(p, x);
  if (!fx) throw Error(ErrorCode::kNonFiniteObjective, "objective is not finite at the initial point");
  r.trajectory.push_back({x, *fx});
  double step = 0;
  bool grad_ok = false;
  for (int it = 0; it < opts.max_iter; ++it) {
    auto g = gradient(p, x);
    if (!g) break;  // stencil leaves the domain: finish with the pattern phase
    const double gn = norm2(*g);
    r.grad_norm = gn;
    if (gn < opts.tol) {
      grad_ok = true;
      break;
    }
    if (step == 0) step = 0.1 * norm2(x) / gn;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - step * (*g)[i];
      if (!safe_value(p, y)) continue;  // left the domain: shrink the step
      y = normalized(p, y);
      auto fy = safe_value(p, y);
      if (fy && *fy <= *fx - 1e-4 * step * gn * gn) {
        x = y;
        fx = fy;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    ++r.iterations;
    r.trajectory.push_back({x, *fx});
    step *= 2;
  }

  // Compass search: handles kinks and minimizers on the boundary of the domain.
  double delta = 1e-3 * norm_inf(x);
  const double min_delta = 1e-12 * norm_inf(x);
  int pattern_moves = 0;
  while (delta > min_delta && pattern_moves < 20000) {
    bool improved = false;
    for (std::size_t i = 0; i < x.size() && !improved; ++i)
      for (double sgn : {1.0, -1.0}) {
        auto y = x;
        y[i] += sgn * delta;
        if (!safe_value(p, y)) continue;
        y = normalized(p, y);
        auto fy = safe_value(p, y);
        // strict decrease beyond rounding, so the search cannot cycle on noise
        if (fy && *fy < *fx - 4 * std::numeric_limits<double>::epsilon() * std::abs(*fx)) {
          x = y;
          fx = fy;
          improved = true;
          ++pattern_moves;
          r.trajectory.push_back({x, *fx});
          break;
        }
      }
    if (!improved) delta *= 0.5;
  }
  r.iterations += pattern_moves;
  r.x = x;
  r.value = *fx;
  if (auto g = gradient(p, x)) r.grad_norm = norm2(*g);
  if (grad_ok && pattern_moves == 0) {
    r.converged = true;
    r.stop_reason = "gradient";
  } else if (delta <= min_delta) {
    r.converged = true;
    r.stop_reason = r.grad_norm < opts.tol ? "gradient" : "pattern";
  } else {
    r.stop_reason = "max_iter";
  }
  return r;
}

inline MinimizeResult run(const Problem& p, const RVector& init, const MinimizeOptions& opts) {
  MinimizeResult out;
  auto x0 = to_doubles(init);
  if (!safe_value(p, x0)) throw Error(ErrorCode::kNotInReebCone, "initial point " + to_string(init) + " is outside the domain");

  if (p.dim == 1) {
    RVector exact = (Rational(p.n) / p.exact_logdisc(init)) * init;
    out.argmin = p.expand(exact);
    out.argmin_approx = to_doubles(out.argmin);
    auto v = p.exact_value(exact);
    if (!v) throw Error(ErrorCode::kNonFiniteObjective, "objective undefined on the only normalized point");
    out.min_nvol_exact = *v;
    out.min_nvol = to_double(*v);
    out.snapped = true;
    out.converged = true;
    out.stop_reason = "trivial";
    out.trajectory.push_back({out.argmin_approx, out.min_nvol});
    out.start_argmins.push_back(out.argmin_approx);
    return out;
  }

  std::mt19937_64 rng(opts.seed);
  std::vector<LocalResult> runs;
  runs.push_back(local_minimize(p, x0, opts));
  for (int s = 1; s < std::max(1, opts.starts); ++s) {
    std::vector<double> start;
    for (int tries = 0; tries < 1000; ++tries) {
      start = p.random_start(rng);
      if (safe_value(p, start)) break;
      start.clear();
    }
    if (start.empty()) continue;
    runs.push_back(local_minimize(p, start, opts));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].value < runs[best].value) best = i;
  const LocalResult& b = runs[best];

  out.iterations = b.iterations;
  out.trajectory = b.trajectory;
  out.grad_norm = b.grad_norm;
  out.converged = b.converged;
  out.stop_reason = b.stop_reason;
  out.starts = static_cast<int>(runs.size());
  for (const auto& r : runs) {
    std::vector<double> d(r.x.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = r.x[i] - b.x[i];
    out.start_spread = std::max(out.start_spread, norm_inf(d));
    out.start_argmins.push_back(to_doubles(p.expand(from_doubles(r.x))));
  }

  // Exact verification, with a continued-fraction snap accepted only if it does not raise the objective.
  RVector float_exact = from_doubles(b.x);
  float_exact = (Rational(p.n) / p.exact_logdisc(float_exact)) * float_exact;
  auto float_value = p.exact_value(float_exact);
  if (!float_value) throw Error(ErrorCode::kNonFiniteObjective, "objective undefined at the computed minimizer");
  RVector chosen = float_exact;
  Rational chosen_value = *float_value;
  RVector snapped;
  bool all_snapped = true;
  for (double v : b.x) {
    auto q = snap_rational(v, 1e-6 * std::max(1.0, std::abs(v)));
    if (!q) {
      all_snapped = false;
      break;
    }
    snapped.push_back(*q);
  }
  if (all_snapped) {
    const Rational a = p.exact_logdisc(snapped);
    if (a > 0) {
      snapped = (Rational(p.n) / a) * snapped;
      auto sv = p.exact_value(snapped);
      if (sv && *sv <= *float_value) {
        chosen = snapped;
        chosen_value = *sv;
        out.snapped = true;
      }
    }
  }
  out.argmin = p.expand(chosen);
  out.argmin_approx = to_doubles(out.argmin);
  out.min_nvol_exact = chosen_value;
  out.min_nvol = to_double(chosen_value);
  return out;
}

}  // namespace detail

inline detail::Problem toric_problem(const ToricConeSingularity& x) {
  detail::Problem p;
  p.n = x.n;
  p.dim = x.n;
  auto fan = std::make_shared<ConeFan>(triangulate_dual_cone(x));
  auto m0 = to_doubles(x.m0);
  std::vector<std::vector<double>> gens;
  for (const auto& u : x.sigma_dual.rays) gens.push_back(to_doubles(u));
  p.logdisc = [m0](const std::vector<double>& xi) { return std::inner_product(m0.begin(), m0.end(), xi.begin(), 0.0); };
  p.value = [x, fan, gens, m0](const std::vector<double>& xi) -> std::optional<double> {
    for (const auto& g : gens)
      if (!(std::inner_product(g.begin(), g.end(), xi.begin(), 0.0) > 0)) return std::nullopt;
    const double a = std::inner_product(m0.begin(), m0.end(), xi.begin(), 0.0);
    return std::pow(a, x.n) * fan_volume(x, *fan, xi);
  };
  p.exact_logdisc = [x](const RVector& xi) { return dot(x.m0, xi); };
  p.exact_value = [x, fan](const RVector& xi) -> std::optional<Rational> {
    if (!in_reeb_cone(x, xi)) return std::nullopt;
    return pow(dot(x.m0, xi), x.n) * fan_volume(x, *fan, xi);
  };
  p.expand = [](const RVector& xi) { return xi; };
  auto rays = x.sigma.rays;
  p.random_start = [rays](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> xi(rays.front().size(), 0.0);
    for (const auto& r : rays) {
      const double c = u(rng);
      for (std::size_t i = 0; i < xi.size(); ++i) xi[i] += c * to_double(r[i]);
    }
    return xi;
  };
  return p;
}

/// Orbits of variables under transpositions that preserve the monomial set.
inline std::vector<std::vector<int>> symmetry_classes(const WeightedHomogeneousHypersurface& w) {
  std::vector<int> parent(static_cast<std::size_t>(w.nvars));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) { return parent[static_cast<std::size_t>(i)] == i ? i : parent[static_cast<std::size_t>(i)] = find(parent[static_cast<std::size_t>(i)]); };
  auto mons = w.monomials;
  std::sort(mons.begin(), mons.end());
  for (int i = 0; i < w.nvars; ++i)
    for (int j = i + 1; j < w.nvars; ++j) {
      auto swapped = w.monomials;
      for (auto& m : swapped) std::swap(m[static_cast<std::size_t>(i)], m[static_cast<std::size_t>(j)]);
      std::sort(swapped.begin(), swapped.end());
      if (swapped == mons) parent[static_cast<std::size_t>(find(j))] = find(i);
    }
  std::vector<std::vector<int>> classes;
  std::vector<int> slot(static_cast<std::size_t>(w.nvars), -1);
  for (int i = 0; i < w.nvars; ++i) {
    int r = find(i);
    if (slot[static_cast<std::size_t>(r)] < 0) {
      slot[static_cast<std::size_t>(r)] = static_cast<int>(classes.size());
      classes.emplace_back();
    }
    classes[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(i);
  }
  return classes;
}

/// Domain: positive weights whose initial form has at least two monomials and A > 0.
inline detail::Problem hypersurface_problem(const WeightedHomogeneousHypersurface& w) {
  detail::Problem p;
  p.n = w.n();
  auto classes = symmetry_classes(w);
  p.dim = static_cast<int>(classes.size());
  const int nv = w.nvars;
  auto expand_d = [classes, nv](const std::vector<double>& t) {
    std::vector<double> a(static_cast<std::size_t>(nv));
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (int i : classes[c]) a[static_cast<std::size_t>(i)] = t[c];
    return a;
  };
  p.expand = [classes, nv](const RVector& t) {
    RVector a(static_cast<std::size_t>(nv));
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (int i : classes[c]) a[static_cast<std::size_t>(i)] = t[c];
    return a;
  };
  auto mons = w.monomials;
  auto degree_d = [mons](const std::vector<double>& a, int* ties) {
    double d = std::numeric_limits<double>::infinity();
    std::vector<double> ws;
    for (const auto& m : mons) {
      double s = 0;
      for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * a[i];
      ws.push_back(s);
      d = std::min(d, s);
    }
    if (ties) *ties = static_cast<int>(std::count(ws.begin(), ws.end(), d));
    return d;
  };
  p.logdisc = [expand_d, degree_d](const std::vector<double>& t) {
    auto a = expand_d(t);
    return std::accumulate(a.begin(), a.end(), 0.0) - degree_d(a, nullptr);
  };
  const int n = w.n();
  p.value = [expand_d, degree_d, n](const std::vector<double>& t) -> std::optional<double> {
    auto a = expand_d(t);
    double prod = 1;
    for (double x : a) {
      if (!(x > 0)) return std::nullopt;
      prod *= x;
    }
    int ties = 0;
    const double d = degree_d(a, &ties);
    if (ties < 2) return std::nullopt;
    const double ld = std::accumulate(a.begin(), a.end(), 0.0) - d;
    if (!(ld > 0)) return std::nullopt;
    return std::pow(ld, n) * d / prod;
  };
  auto expand = p.expand;
  p.exact_logdisc = [w, expand](const RVector& t) {
    auto a = expand(t);
    Rational d = monomial_weight(w.monomials.front(), a);
    for (const auto& m : w.monomials) d = std::min(d, monomial_weight(m, a));
    return sum(a) - d;
  };
  p.exact_value = [w, expand](const RVector& t) -> std::optional<Rational> {
    auto a = expand(t);
    for (const auto& x : a)
      if (x <= 0) return std::nullopt;
    MonomialValuation v(a);
    if (initial_monomials(w, v).size() < 2) return std::nullopt;
    const Rational ld = log_discrepancy_hypersurface(w, v);
    if (ld <= 0) return std::nullopt;
    return normalized_volume(ld, valuation_volume_hypersurface(w, v), w.n());
  };
  const int dim = p.dim;
  p.random_start = [dim](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.2, 2.0);
    std::vector<double> t(static_cast<std::size_t>(dim));
    for (auto& x : t) x = u(rng);
    return t;
  };
  return p;
}

inline MinimizeResult minimize_nvol(const ToricConeSingularity& x, const RVector& init, const MinimizeOptions& opts = {}) {
  require_reeb(x, init);
  return detail::run(toric_problem(x), init, opts);
}

/// `init` is a full weight vector; it must be constant on symmetry classes of f.
inline MinimizeResult minimize_nvol(const WeightedHomogeneousHypersurface& w, const MonomialValuation& init,
                                    const MinimizeOptions& opts = {}) {
  require_weights(w, init);
  auto classes = symmetry_classes(w);
  RVector t;
  for (const auto& c : classes) {
    const Rational& v = init.weights()[static_cast<std::size_t>(c.front())];
    for (int i : c)
      if (init.weights()[static_cast<std::size_t>(i)] != v)
        throw Error(ErrorCode::kDomainError, "initial weights must be equal on symmetric variables");
    t.push_back(v);
  }
  return detail::run(hypersurface_problem(w), t, opts);
}

/// Default starting point: the sum of the rays of sigma.
inline RVector default_init(const ToricConeSingularity& x) {
  RVector xi(static_cast<std::size_t>(x.n), Rational(0));
  for (const auto& u : x.sigma.rays) xi = xi + u;
  return xi;
}

/// Default hypersurface start: weights making f homogeneous when they exist, else all ones.
inline MonomialValuation default_init(const WeightedHomogeneousHypersurface& w) {
  RMatrix diffs;
  for (std::size_t i = 1; i < w.monomials.size(); ++i) {
    RVector d;
    for (int j = 0; j < w.nvars; ++j) d.emplace_back(w.monomials[i][static_cast<std::size_t>(j)] - w.monomials[0][static_cast<std::size_t>(j)]);
    diffs.push_back(d);
  }
  auto ns = linalg::nullspace(diffs, static_cast<std::size_t>(w.nvars));
  if (ns.size() == 1) {
    RVector v = ns.front();
    if (v.front() < 0) v = Rational(-1) * v;
    if (std::all_of(v.begin(), v.end(), [](const Rational& q) { return q > 0; })) {
      MonomialValuation a(primitive(v));
      if (initial_monomials(w, a).size() >= 2 && log_discrepancy_hypersurface(w, a) > 0) return a;
    }
  }
  return MonomialValuation(RVector(static_cast<std::size_t>(w.nvars), Rational(1)));
}

struct ConvexityProbe {
  double min_second_difference = 0;
  int segments = 0;
};

/// Second differences of vol along random segments of the slice {A = n} through `center`.
inline ConvexityProbe convexity_probe(const ToricConeSingularity& x, const RVector& center, int segments = 20,
                                      std::uint64_t seed = 0) {
  require_reeb(x, center);
  const auto c = to_doubles(normalize_reeb(x, center));
  const auto m0 = to_doubles(x.m0);
  auto fan = triangulate_dual_cone(x);
  std::vector<std::vector<double>> gens;
  for (const auto& u : x.sigma_dual.rays) gens.push_back(to_doubles(u));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ConvexityProbe out;
  out.min_second_difference = std::numeric_limits<double>::infinity();
  const double mm = std::inner_product(m0.begin(), m0.end(), m0.begin(), 0.0);
  for (int s = 0; s < segments; ++s) {
    std::vector<double> v(c.size());
    for (auto& e : v) e = gauss(rng);
    const double vm = std::inner_product(v.begin(), v.end(), m0.begin(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= vm / mm * m0[i];  // stay on the slice
    // largest t keeping c +- t v inside the cone, then use a quarter of it
    double tmax = std::numeric_limits<double>::infinity();
    for (const auto& g : gens) {
      const double gc = std::inner_product(g.begin(), g.end(), c.begin(), 0.0);
      const double gv = std::abs(std::inner_product(g.begin(), g.end(), v.begin(), 0.0));
      if (gv > 0) tmax = std::min(tmax, gc / gv);
    }
    if (!std::isfinite(tmax)) continue;
    const double len = 0.25 * tmax, h = len / 10;
    auto f = [&](double t) {
      std::vector<double> y(c.size());
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = c[i] + t * v[i];
      return fan_volume(x, fan, y);
    };
    for (int k = -9; k <= 9; ++k) {
      const double t = k * h;
      out.min_second_difference = std::min(out.min_second_difference, f(t + h) + f(t - h) - 2 * f(t));
    }
    ++out.segments;
  }
  return out;
}

}  // namespace hvol
