#pragma once

// Volume profiles t -> vol(R^(t)) of the filtration induced by a valuation v1 on the
// v0-graded ring, and the calculus built on them: Theta, Phi(lambda, s), the derivative of
// Phi at s = 0 in four equivalent forms, and the Fujita gap.
//
// vol_r(t) is normalized so that vol_r(t) = degH = vol(v0) for t <= c1 and vol_r(t) = 0 for
// t >= c2. Model-derived profiles are exact piecewise polynomials of degree <= n - 1, so every
// integral below has a closed form without logarithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "hvol/error.hpp"
#include "hvol/exactgeom.hpp"
#include "hvol/quadrature.hpp"
#include "hvol/rational.hpp"
#include "hvol/singularities.hpp"
#include "hvol/valuation.hpp"

namespace hvol {

/// Polynomial sum_k coeffs[k] t^k on [lo, hi].
struct PolyPiece {
  Rational lo, hi;
  std::vector<Rational> coeffs;

  Rational eval(const Rational& t) const {
    Rational acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
  }
  double eval(double t) const {
    double acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + to_double(*it);
    return acc;
  }
  Rational integral() const {
    Rational acc = 0;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      acc += coeffs[k] * (pow(hi, static_cast<int>(k) + 1) - pow(lo, static_cast<int>(k) + 1)) / Rational(static_cast<long>(k) + 1);
    return acc;
  }
};

struct VolumeProfile {
  enum class Kind { kPiecewise, kSamples };

  Kind kind = Kind::kPiecewise;
  int n = 0;
  Rational degH;
  Rational c1, c2;
  std::vector<PolyPiece> pieces;  // kPiecewise: contiguous cover of [c1, c2]; empty when c1 == c2
  std::vector<double> sample_t;   // kSamples: increasing abscissae inside [c1, c2]
  std::vector<double> sample_v;
  std::optional<Rational> vol_v1;  // vol(v1) from the valuation module when model-derived

  bool exact() const { return kind == Kind::kPiecewise; }

  double value(double t) const {
    if (t < to_double(c1)) return to_double(degH);
    if (t >= to_double(c2)) return 0;
    if (exact()) {
      for (const auto& p : pieces)
        if (t <= to_double(p.hi)) return p.eval(t);
      return 0;
    }
    if (sample_t.empty()) return 0;
    if (t <= sample_t.front()) return sample_v.front();
    if (t >= sample_t.back()) return sample_v.back();
    auto it = std::upper_bound(sample_t.begin(), sample_t.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - sample_t.begin());
    const double w = (t - sample_t[i - 1]) / (sample_t[i] - sample_t[i - 1]);
    return (1 - w) * sample_v[i - 1] + w * sample_v[i];
  }

  Rational exact_value(const Rational& t) const {
    if (!exact()) throw Error(ErrorCode::kDomainError, "sampled profile has no exact values");
    if (t < c1) return degH;
    if (t >= c2) return 0;
    for (const auto& p : pieces)
      if (t <= p.hi) return p.eval(t);
    return 0;
  }

  /// c1, piece boundaries or sample abscissae, c2.
  std::vector<double> knots() const {
    std::vector<double> k{to_double(c1)};
    if (exact())
      for (const auto& p : pieces) k.push_back(to_double(p.hi));
    else
      for (double t : sample_t) k.push_back(t);
    k.push_back(to_double(c2));
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
  }
};

namespace detail {

// Fits a polynomial of degree < n to vol_at on [lo, hi] and checks it at one more point.
inline PolyPiece fit_piece(const Rational& lo, const Rational& hi, int n, const std::function<Rational(const Rational&)>& vol_at) {
  const std::size_t m = static_cast<std::size_t>(n);
  RMatrix vander;
  RVector vals;
  for (std::size_t j = 0; j < m; ++j) {
    const Rational t = lo + (hi - lo) * Rational(static_cast<long>(j) + 1, static_cast<long>(m) + 2);
    RVector row;
    for (std::size_t k = 0; k < m; ++k) row.push_back(pow(t, static_cast<int>(k)));
    vander.push_back(row);
    vals.push_back(vol_at(t));
  }
  auto c = linalg::solve(vander, vals);
  if (!c) throw std::logic_error("singular interpolation system");
  PolyPiece p{lo, hi, *c};
  const Rational check = lo + (hi - lo) * Rational(static_cast<long>(m) + 1, static_cast<long>(m) + 2);
  if (p.eval(check) != vol_at(check)) throw std::logic_error("profile is not polynomial of degree < n between breakpoints");
  return p;
}

inline VolumeProfile build_profile(int n, const Rational& degH, const Rational& c1, std::vector<Rational> breaks,
                                   const std::function<Rational(const Rational&)>& vol_at) {
  breaks.push_back(c1);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  VolumeProfile p;
  p.n = n;
  p.degH = degH;
  p.c1 = breaks.front();
  p.c2 = breaks.back();
  for (std::size_t i = 1; i < breaks.size(); ++i) p.pieces.push_back(fit_piece(breaks[i - 1], breaks[i], n, vol_at));
  if (!p.pieces.empty() && p.pieces.front().eval(p.c1) != degH)
    throw std::logic_error("profile does not start at degH");
  return p;
}

}  // namespace detail

/// vol_r(t) = n! vol{y in sigma^vee : <y, xi0> <= 1, <y, xi1 - t xi0> >= 0}.
inline VolumeProfile profile_from_model(const ToricConeSingularity& x, const RVector& xi0, const RVector& xi1) {
  require_reeb(x, xi0);
  require_reeb(x, xi1);
  const int n = x.n;
  auto vol_at = [&](const Rational& t) {
    std::vector<Halfspace> h = x.sigma_dual.facets;
    h.push_back(make_halfspace(Rational(-1) * xi0, 1));
    const RVector d = xi1 - t * xi0;
    if (!is_zero(d)) h.push_back(Halfspace{d, 0});
    return factorial(n) * polytope_volume(polytope_from_hrep(h, n)).value;
  };
  std::vector<Rational> ratios;
  for (const auto& u : x.sigma_dual.rays) ratios.push_back(dot(u, xi1) / dot(u, xi0));
  const Rational c1 = *std::min_element(ratios.begin(), ratios.end());
  auto p = detail::build_profile(n, valuation_volume_toric(x, xi0), c1, ratios, vol_at);
  p.vol_v1 = valuation_volume_toric(x, xi1);
  return p;
}

/// Index of the variable j with z_j^e in the initial form of f under a, e maximal among initial monomials.
inline std::optional<std::size_t> pure_power_variable(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a) {
  auto init = initial_monomials(w, a);
  for (auto idx : init) {
    const auto& e = w.monomials[idx];
    if (std::count_if(e.begin(), e.end(), [](int v) { return v != 0; }) != 1) continue;
    const std::size_t j = static_cast<std::size_t>(std::find_if(e.begin(), e.end(), [](int v) { return v != 0; }) - e.begin());
    bool dominant = true;
    for (auto other : init)
      if (other != idx && w.monomials[other][j] >= e[j]) dominant = false;
    if (dominant) return j;
  }
  return std::nullopt;
}

/// f must be homogeneous for a0, and the initial form under a1 must contain a pure power z_j^e
/// dominating z_j; then vol_r(t) = e n! vol{beta >= 0 : <beta, a0'> <= 1, <beta, a1' - t a0'> >= 0}
/// over the variables other than j.
inline VolumeProfile profile_from_model(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a0,
                                        const MonomialValuation& a1) {
  require_weights(w, a0);
  require_weights(w, a1);
  const Rational d0 = monomial_weight(w.monomials.front(), a0.weights());
  for (const auto& m : w.monomials)
    if (monomial_weight(m, a0.weights()) != d0)
      throw Error(ErrorCode::kPreconditionViolated, "f is not homogeneous for the weights of v0");
  auto jj = pure_power_variable(w, a1);
  if (!jj) throw Error(ErrorCode::kPreconditionViolated, "initial form of f under v1 has no dominant pure power");
  const std::size_t j = *jj;
  int e = 0;
  for (const auto& m : w.monomials)
    if (std::count_if(m.begin(), m.end(), [](int v) { return v != 0; }) == 1 && m[j] != 0 &&
        monomial_weight(m, a1.weights()) == initial_degree(w, a1))
      e = m[j];
  const int n = w.n();
  RVector b0, b1;
  for (std::size_t i = 0; i < static_cast<std::size_t>(w.nvars); ++i)
    if (i != j) {
      b0.push_back(a0.weights()[i]);
      b1.push_back(a1.weights()[i]);
    }
  auto vol_at = [&](const Rational& t) {
    std::vector<Halfspace> h;
    for (int i = 0; i < n; ++i) {
      RVector unit(static_cast<std::size_t>(n), Rational(0));
      unit[static_cast<std::size_t>(i)] = 1;
      h.push_back(Halfspace{unit, 0});
    }
    h.push_back(make_halfspace(Rational(-1) * b0, 1));
    const RVector d = b1 - t * b0;
    if (!is_zero(d)) h.push_back(Halfspace{d, 0});
    return Rational(e) * factorial(n) * polytope_volume(polytope_from_hrep(h, n)).value;
  };
  std::vector<Rational> ratios;
  for (std::size_t i = 0; i < b0.size(); ++i) ratios.push_back(b1[i] / b0[i]);
  Rational c1 = a1.weights()[j] / a0.weights()[j];
  for (const auto& r : ratios) c1 = std::min(c1, r);
  auto p = detail::build_profile(n, valuation_volume_hypersurface(w, a0), c1, ratios, vol_at);
  p.vol_v1 = valuation_volume_hypersurface(w, a1);
  return p;
}

/// Rejects profiles that break the support invariants the integrals rely on.
inline void validate_profile(const VolumeProfile& p) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::kIntegralDivergence, "invalid volume profile: " + why); };
  if (p.n < 1) fail("n must be positive");
  if (!(p.c1 > 0)) fail("c1 must be positive");
  if (p.c2 < p.c1) fail("c2 < c1");
  if (!(p.degH > 0)) fail("degH must be positive");
  const double H = to_double(p.degH);
  std::vector<double> ts;
  if (p.exact()) {
    Rational at = p.c1;
    for (const auto& q : p.pieces) {
      if (q.lo != at) fail("pieces are not contiguous");
      if (q.hi <= q.lo) fail("empty piece");
      at = q.hi;
      for (int k = 0; k <= 8; ++k) ts.push_back(to_double(q.lo + (q.hi - q.lo) * Rational(k, 8)));
    }
    if (!p.pieces.empty() && at != p.c2) fail("pieces do not reach c2");
  } else {
    if (p.sample_t.size() != p.sample_v.size() || p.sample_t.empty()) fail("sample table is empty or ragged");
    ts = p.sample_t;
  }
  const double tol = 1e-9 * std::max(1.0, H);
  double prev = H;
  for (double t : ts) {
    const double v = p.value(t);
    if (!std::isfinite(v) || v < -tol || v > H + tol) fail("value outside [0, degH]");
    if (v > prev + tol) fail("profile is increasing");
    prev = v;
  }
}

// ---------------------------------------------------------------------------
// Theta

/// Theta as a piecewise polynomial on [0, c2]: degH - vol(v1) x^n on [0, c1], then one piece per
/// profile piece; zero beyond c2.
struct ThetaForm {
  std::vector<PolyPiece> pieces;
  Rational vol_v1;       // degH / c1^n - n int_{c1}^{c2} vol_r t^{-n-1} dt
  Rational weighted_tail;  // int_{c1}^{c2} vol_r t^{-n-1} dt
};

namespace detail {
// sum_k c_k t^(k-n) / (k-n); defined since every k < n.
inline Rational weighted_antiderivative(const std::vector<Rational>& c, int n, const Rational& t) {
  Rational acc = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const int e = static_cast<int>(k) - n;
    acc += c[k] / pow(t, -e) / Rational(e);
  }
  return acc;
}
}  // namespace detail

inline ThetaForm theta_form(const VolumeProfile& p) {
  if (!p.exact()) throw Error(ErrorCode::kDomainError, "closed-form Theta needs a piecewise profile");
  const int n = p.n;
  const std::size_t m = p.pieces.size();
  std::vector<Rational> seg(m), tail(m + 1, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    const auto& q = p.pieces[i];
    if (q.coeffs.size() > static_cast<std::size_t>(n)) throw std::logic_error("profile piece has degree >= n");
    seg[i] = detail::weighted_antiderivative(q.coeffs, n, q.hi) - detail::weighted_antiderivative(q.coeffs, n, q.lo);
  }
  for (std::size_t i = m; i-- > 0;) tail[i] = tail[i + 1] + seg[i];
  ThetaForm out;
  out.weighted_tail = tail[0];
  out.vol_v1 = p.degH / pow(p.c1, n) - Rational(n) * tail[0];
  PolyPiece first{0, p.c1, std::vector<Rational>(static_cast<std::size_t>(n) + 1, Rational(0))};
  first.coeffs[0] = p.degH;
  first.coeffs[static_cast<std::size_t>(n)] = -out.vol_v1;
  out.pieces.push_back(first);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& q = p.pieces[i];
    PolyPiece t{q.lo, q.hi, std::vector<Rational>(static_cast<std::size_t>(n) + 1, Rational(0))};
    for (std::size_t k = 0; k < q.coeffs.size(); ++k) t.coeffs[k] = Rational(n) * q.coeffs[k] / Rational(n - static_cast<int>(k));
    t.coeffs[static_cast<std::size_t>(n)] = Rational(n) * (detail::weighted_antiderivative(q.coeffs, n, q.hi) + tail[i + 1]);
    out.pieces.push_back(t);
  }
  return out;
}

inline Rational theta_exact(const ThetaForm& th, const Rational& x) {
  if (x < 0) throw Error(ErrorCode::kDomainError, "Theta needs x >= 0");
  for (const auto& q : th.pieces)
    if (x <= q.hi) return q.eval(x);
  return 0;
}

inline Rational theta_exact(const VolumeProfile& p, const Rational& x) { return theta_exact(theta_form(p), x); }

/// n x^n int_x^inf vol_r(t) t^{-n-1} dt by adaptive quadrature.
inline double theta_numeric(const VolumeProfile& p, double x) {
  if (!(x > 0)) throw Error(ErrorCode::kDomainError, "Theta needs x > 0");
  const int n = p.n;
  const double c1 = to_double(p.c1), H = to_double(p.degH);
  double head = 0;
  if (x < c1) head = H * (1 - std::pow(x / c1, n));  // vol_r = degH on [x, c1]
  std::vector<double> knots;
  for (double k : p.knots())
    if (k > std::max(x, c1)) knots.push_back(k);
  knots.insert(knots.begin(), std::max(x, c1));
  const double xn = std::pow(x, n);
  auto f = [&](double t) { return n * xn * p.value(t) / std::pow(t, n + 1); };
  return head + integrate_between_knots(f, knots);
}

inline double theta(const VolumeProfile& p, double x) {
  if (!(x > 0)) throw Error(ErrorCode::kDomainError, "Theta needs x > 0");
  return p.exact() ? to_double(theta_exact(p, from_double(x))) : theta_numeric(p, x);
}

/// vol of the filtered section ring at x: degH for x <= 0, else Theta(x).
inline double filtration_section_volume(const VolumeProfile& p, double x) {
  if (x <= 0) return to_double(p.degH);
  return theta(p, x);
}

/// degH / c1^n - n int_{c1}^inf vol_r(t) t^{-n-1} dt.
inline double volume_from_profile(const VolumeProfile& p) {
  if (p.exact()) return to_double(theta_form(p).vol_v1);
  const int n = p.n;
  auto f = [&](double t) { return p.value(t) / std::pow(t, n + 1); };
  return to_double(p.degH) / std::pow(to_double(p.c1), n) - n * integrate_between_knots(f, p.knots());
}

inline Rational volume_from_profile_exact(const VolumeProfile& p) { return theta_form(p).vol_v1; }

/// Theta(x) + vol(v1) x^n >= degH at every x, with equality for x <= c1 (tolerance 1e-8).
inline bool liu_bound_check(const VolumeProfile& p, const std::vector<double>& xs) {
  const double v1 = p.vol_v1 ? to_double(*p.vol_v1) : volume_from_profile(p);
  const double H = to_double(p.degH), c1 = to_double(p.c1);
  for (double x : xs) {
    if (!(x > 0)) throw Error(ErrorCode::kDomainError, "Liu bound samples must be positive");
    const double lhs = filtration_section_volume(p, x) + v1 * std::pow(x, p.n);
    if (lhs < H - 1e-8) return false;
    if (x <= c1 && std::abs(lhs - H) > 1e-8) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Phi

/// degH / (lambda c1 s + 1 - s)^n - n int_{c1}^inf vol_r(t) lambda s dt / (1 - s + lambda s t)^{n+1}
inline Rational phi_exact(const VolumeProfile& p, const Rational& lambda, const Rational& s) {
  if (!(lambda > 0)) throw Error(ErrorCode::kDomainError, "lambda must be positive");
  if (s < 0 || s > 1) throw Error(ErrorCode::kDomainError, "s must lie in [0, 1]");
  if (!p.exact()) throw Error(ErrorCode::kDomainError, "exact Phi needs a piecewise profile");
  validate_profile(p);
  if (s == 0) return p.degH;
  const int n = p.n;
  const Rational alpha = 1 - s, beta = lambda * s;
  Rational integral = 0;  // int poly((u - alpha)/beta) u^{-n-1} du over each piece's u-range
  for (const auto& q : p.pieces) {
    const std::size_t deg = q.coeffs.size();
    std::vector<Rational> d(deg, Rational(0));  // coefficients in u
    for (std::size_t k = 0; k < deg; ++k) {
      const Rational scale = q.coeffs[k] / pow(beta, static_cast<int>(k));
      Rational binom = 1;
      for (std::size_t jx = 0; jx <= k; ++jx) {
        d[jx] += scale * binom * pow(-alpha, static_cast<int>(k - jx));
        binom = binom * Rational(static_cast<long>(k - jx)) / Rational(static_cast<long>(jx) + 1);
      }
    }
    const Rational ua = alpha + beta * q.lo, ub = alpha + beta * q.hi;
    integral += detail::weighted_antiderivative(d, n, ub) - detail::weighted_antiderivative(d, n, ua);
  }
  return p.degH / pow(alpha + beta * p.c1, n) - Rational(n) * integral;
}

inline double phi_numeric(const VolumeProfile& p, double lambda, double s) {
  if (!(lambda > 0)) throw Error(ErrorCode::kDomainError, "lambda must be positive");
  if (s < 0 || s > 1) throw Error(ErrorCode::kDomainError, "s must lie in [0, 1]");
  validate_profile(p);
  const int n = p.n;
  const double H = to_double(p.degH), c1 = to_double(p.c1);
  if (s == 0) return H;
  auto f = [&](double t) { return p.value(t) * lambda * s / std::pow(1 - s + lambda * s * t, n + 1); };
  return H / std::pow(lambda * c1 * s + 1 - s, n) - n * integrate_between_knots(f, p.knots());
}

inline double phi(const VolumeProfile& p, double lambda, double s) {
  return p.exact() ? to_double(phi_exact(p, from_double(lambda), from_double(s))) : phi_numeric(p, lambda, s);
}

struct PhiDerivative {
  double formA = 0, formB1 = 0, formB = 0, formC = 0;
};

/// Integrals entering the derivative formulas.
template <class T>
struct ProfileIntegrals {
  T degH, c1, vol_v1;
  T int_vol_c1;    // int_{c1}^inf vol_r
  T int_theta_c1;  // int_{c1}^inf Theta
  T int_theta_0;   // int_0^inf Theta
  T theta_c1;      // Theta(c1)
};

inline ProfileIntegrals<Rational> profile_integrals_exact(const VolumeProfile& p) {
  auto th = theta_form(p);
  ProfileIntegrals<Rational> r;
  r.degH = p.degH;
  r.c1 = p.c1;
  r.vol_v1 = p.vol_v1 ? *p.vol_v1 : th.vol_v1;
  r.int_vol_c1 = 0;
  for (const auto& q : p.pieces) r.int_vol_c1 += q.integral();
  r.int_theta_c1 = 0;
  for (std::size_t i = 1; i < th.pieces.size(); ++i) r.int_theta_c1 += th.pieces[i].integral();
  r.int_theta_0 = r.int_theta_c1 + th.pieces.front().integral();
  r.theta_c1 = theta_exact(th, p.c1);
  return r;
}

inline ProfileIntegrals<double> profile_integrals_numeric(const VolumeProfile& p) {
  ProfileIntegrals<double> r;
  r.degH = to_double(p.degH);
  r.c1 = to_double(p.c1);
  r.vol_v1 = p.vol_v1 ? to_double(*p.vol_v1) : volume_from_profile(p);
  auto knots = p.knots();
  r.int_vol_c1 = integrate_between_knots([&](double t) { return p.value(t); }, knots);
  auto th = [&](double x) { return theta_numeric(p, x); };
  r.int_theta_c1 = knots.size() > 1 ? integrate_between_knots(th, knots, 1e-9) : 0;
  r.int_theta_0 = r.int_theta_c1 + adaptive_simpson([&](double x) { return x > 0 ? th(x) : r.degH; }, 0, r.c1, 1e-10);
  r.theta_c1 = theta_numeric(p, r.c1);
  return r;
}

namespace detail {
template <class T>
PhiDerivative derivative_forms(const ProfileIntegrals<T>& g, const T& lambda, int n_) {
  const T n(n_), H = g.degH, pre = n * lambda * H;
  const T one(1);
  const T A = pre * (one / lambda - g.c1 - g.int_vol_c1 / H);
  const T B1 = pre * (one / lambda - g.c1 - (n + 1) / (n * H) * g.int_theta_c1 - g.c1 * g.theta_c1 / (n * H));
  T c1pow = g.c1;
  for (int i = 0; i < n_; ++i) c1pow = c1pow * g.c1;
  const T B = pre * (one / lambda - g.c1 * (n + 1) / n - (n + 1) / (n * H) * g.int_theta_c1 + c1pow * g.vol_v1 / (n * H));
  const T C = pre * (one / lambda - (n + 1) / (n * H) * g.int_theta_0);
  auto d = [](const T& v) {
    if constexpr (std::is_same_v<T, double>)
      return v;
    else
      return to_double(v);
  };
  return PhiDerivative{d(A), d(B1), d(B), d(C)};
}
}  // namespace detail

/// d/ds Phi(lambda, s) at s = 0 through four independently assembled formulas.
inline PhiDerivative phi_derivative_s0(const VolumeProfile& p, double lambda) {
  if (!(lambda > 0)) throw Error(ErrorCode::kDomainError, "lambda must be positive");
  validate_profile(p);
  if (p.exact()) return detail::derivative_forms(profile_integrals_exact(p), from_double(lambda), p.n);
  return detail::derivative_forms(profile_integrals_numeric(p), lambda, p.n);
}

struct PhiSurface {
  std::vector<double> lambdas, ss;
  std::vector<std::vector<double>> values;  // values[i][j] = Phi(lambdas[i], ss[j])
  std::vector<PhiDerivative> derivatives;   // one per lambda
};

inline PhiSurface phi_surface(const VolumeProfile& p, const std::vector<double>& lambdas, const std::vector<double>& ss) {
  PhiSurface out{lambdas, ss, {}, {}};
  for (double l : lambdas) {
    std::vector<double> row;
    for (double s : ss) row.push_back(phi(p, l, s));
    out.values.push_back(std::move(row));
    out.derivatives.push_back(phi_derivative_s0(p, l));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fujita gap

inline double integral_theta(const VolumeProfile& p) {
  return p.exact() ? to_double(profile_integrals_exact(p).int_theta_0) : profile_integrals_numeric(p).int_theta_0;
}

/// A_v - delta / Ln * int_0^inf vol(F S^(t)) dt
inline double fujita_gap(const VolumeProfile& p, double A_v, const Rational& delta, const Rational& Ln) {
  if (!std::isfinite(A_v)) throw Error(ErrorCode::kDomainError, "log discrepancy must be finite");
  if (!(delta > 0) || !(Ln > 0)) throw Error(ErrorCode::kDomainError, "delta and Ln must be positive");
  validate_profile(p);
  return A_v - to_double(delta / Ln) * integral_theta(p);
}

inline Rational fujita_gap_exact(const VolumeProfile& p, const Rational& A_v, const Rational& delta, const Rational& Ln) {
  if (!(delta > 0) || !(Ln > 0)) throw Error(ErrorCode::kDomainError, "delta and Ln must be positive");
  validate_profile(p);
  return A_v - delta / Ln * profile_integrals_exact(p).int_theta_0;
}

/// delta = r (n + 1) / n for index r.
inline Rational fujita_delta(const Rational& r, int n) { return r * Rational(n + 1) / Rational(n); }

/// lambda* = r / A(v1).
inline double lambda_star(const Rational& r, const Rational& A_v) {
  if (!(A_v > 0)) throw Error(ErrorCode::kDomainError, "log discrepancy must be positive");
  return to_double(r / A_v);
}

/// nvol(v) >= r^n degH - 1e-9; a violation means a bug or a model outside the theorem's hypotheses.
inline bool fujita_lower_bound_check(int n, const ValuationReport& v, const PolarizedConeData& c) {
  if (n != c.n) throw Error(ErrorCode::kDomainError, "dimension mismatch");
  if (v.nvol.infinite) return true;
  const Rational bound = pow(c.r, n) * c.degH;
  if (to_double(v.nvol.value) < to_double(bound) - 1e-9)
    throw Error(ErrorCode::kBoundViolated, "normalized volume " + v.nvol.str() + " is below r^n degH = " + to_string(bound));
  return true;
}

// ---------------------------------------------------------------------------
// finite-level lattice data

namespace detail {

// Lattice points of a polyhedral region in a box, reduced to integer-scaled levels (L0 <y,v0>, L1 <y,v1>).
struct LevelPairs {
  Integer L0, L1;
  std::vector<std::pair<std::int64_t, std::int64_t>> levels;
};

// All integer y in [lo, hi] with <row, y> >= 0 for every row and L0 <y, v0> < bound0.
inline LevelPairs enumerate_levels(const std::vector<std::vector<std::int64_t>>& rows, const std::vector<std::int64_t>& lo,
                                   const std::vector<std::int64_t>& hi, const RVector& v0, const RVector& v1,
                                   const Rational& bound, std::int64_t budget) {
  LevelPairs out;
  {
    RVector all = v0;
    all.push_back(bound);
    out.L0 = lcm_of_denominators(all);
  }
  out.L1 = lcm_of_denominators(v1);
  std::vector<std::int64_t> w0, w1;
  for (const auto& q : v0) w0.push_back(to_int64(num(q) * (out.L0 / den(q))));
  for (const auto& q : v1) w1.push_back(to_int64(num(q) * (out.L1 / den(q))));
  const std::int64_t B = to_int64(num(bound) * (out.L0 / den(bound)));
  double box = 1;
  for (std::size_t i = 0; i < lo.size(); ++i) box *= static_cast<double>(hi[i] - lo[i] + 1);
  if (box > static_cast<double>(budget)) throw Error(ErrorCode::kBudgetExceeded, "lattice box exceeds the enumeration budget");
  std::vector<std::int64_t> y = lo;
  const std::size_t d = y.size();
  while (true) {
    bool ok = true;
    for (const auto& r : rows) {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < d; ++i) s += r[i] * y[i];
      if (s < 0) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::int64_t l0 = 0, l1 = 0;
      for (std::size_t i = 0; i < d; ++i) {
        l0 += w0[i] * y[i];
        l1 += w1[i] * y[i];
      }
      if (l0 < B) out.levels.emplace_back(l0, l1);
    }
    std::size_t i = 0;
    for (; i < d && y[i] == hi[i]; ++i) y[i] = lo[i];
    if (i == d) break;
    ++y[i];
  }
  return out;
}

inline std::int64_t floor_q(const Rational& q) {
  Integer n = num(q), d = den(q);
  Integer f = n / d;
  if (f * d > n) f -= 1;
  return to_int64(f);
}

inline std::int64_t ceil_q(const Rational& q) { return -floor_q(-q); }

// Lattice points y of sigma^vee with <y, xi0> < K.
inline LevelPairs toric_levels(const ToricConeSingularity& x, const RVector& xi0, const RVector& xi1, const Rational& K,
                               std::int64_t budget) {
  const std::size_t n = static_cast<std::size_t>(x.n);
  std::vector<std::int64_t> lo(n, 0), hi(n, 0);
  for (const auto& u : x.sigma_dual.rays) {
    const RVector v = (K / dot(u, xi0)) * u;
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = std::min(lo[i], floor_q(v[i]));
      hi[i] = std::max(hi[i], ceil_q(v[i]));
    }
  }
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& r : x.sigma.rays) {
    std::vector<std::int64_t> row;
    for (const auto& q : r) row.push_back(to_int64(num(q)));
    rows.push_back(row);
  }
  return enumerate_levels(rows, lo, hi, xi0, xi1, K, budget);
}

// Exponents alpha >= 0 with <alpha, a0> < K; alpha_j < cap_j where caps are given (-1 for none).
inline LevelPairs monomial_levels(const RVector& a0, const RVector& a1, const Rational& K, std::optional<std::size_t> j, int e,
                                  std::int64_t budget) {
  const std::size_t N = a0.size();
  std::vector<std::int64_t> lo(N, 0), hi(N, 0);
  for (std::size_t i = 0; i < N; ++i) hi[i] = std::max<std::int64_t>(0, ceil_q(K / a0[i]));
  if (j) hi[*j] = std::min<std::int64_t>(hi[*j], e - 1);
  return enumerate_levels({}, lo, hi, a0, a1, K, budget);
}

}  // namespace detail

/// Profile sampled from lattice counts: vol_r(t) ~ n! / K^n #{y : <y, v0> < K, <y, v1> >= t <y, v0>}.
inline VolumeProfile sampled_profile(const detail::LevelPairs& lv, int n, const Rational& K, const Rational& degH, int samples) {
  if (samples < 2) throw Error(ErrorCode::kDomainError, "need at least two samples");
  std::vector<double> ratios;
  const double s = to_double(Rational(lv.L0) / Rational(lv.L1));
  for (auto [l0, l1] : lv.levels)
    if (l0 > 0) ratios.push_back(s * static_cast<double>(l1) / static_cast<double>(l0));
  if (ratios.empty()) throw Error(ErrorCode::kDomainError, "no lattice points below the level bound");
  std::sort(ratios.begin(), ratios.end());
  const double norm = to_double(factorial(n) / pow(K, n));
  VolumeProfile p;
  p.kind = VolumeProfile::Kind::kSamples;
  p.n = n;
  p.degH = degH;
  p.c1 = from_double(ratios.front());
  p.c2 = from_double(ratios.back());
  const double a = ratios.front(), b = ratios.back();
  for (int i = 0; i < samples; ++i) {
    const double t = a + (b - a) * i / (samples - 1);
    const auto above = ratios.end() - std::lower_bound(ratios.begin(), ratios.end(), t);
    p.sample_t.push_back(t);
    p.sample_v.push_back(std::min(to_double(degH), norm * static_cast<double>(above)));
  }
  p.sample_v.back() = 0;
  for (std::size_t i = 1; i < p.sample_v.size(); ++i) p.sample_v[i] = std::min(p.sample_v[i], p.sample_v[i - 1]);
  return p;
}

inline VolumeProfile lattice_profile(const ToricConeSingularity& x, const RVector& xi0, const RVector& xi1, const Rational& K,
                                     int samples, std::int64_t budget = kDefaultCountBudget) {
  require_reeb(x, xi0);
  require_reeb(x, xi1);
  auto lv = detail::toric_levels(x, xi0, xi1, K, budget);
  auto p = sampled_profile(lv, x.n, K, valuation_volume_toric(x, xi0), samples);
  p.vol_v1 = valuation_volume_toric(x, xi1);
  return p;
}

inline VolumeProfile lattice_profile(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a0,
                                     const MonomialValuation& a1, const Rational& K, int samples,
                                     std::int64_t budget = kDefaultCountBudget) {
  auto j = pure_power_variable(w, a1);
  if (!j) throw Error(ErrorCode::kPreconditionViolated, "initial form of f under v1 has no dominant pure power");
  int e = 0;
  for (auto idx : initial_monomials(w, a1))
    if (w.monomials[idx][*j] > e) e = w.monomials[idx][*j];
  auto lv = detail::monomial_levels(a0.weights(), a1.weights(), K, j, e, budget);
  auto p = sampled_profile(lv, w.n(), K, valuation_volume_hypersurface(w, a0), samples);
  p.vol_v1 = valuation_volume_hypersurface(w, a1);
  return p;
}

/// min over nonzero lattice points of level <= depth of v1 / v0; never below the true c1.
inline Rational estimate_c1(const detail::LevelPairs& lv) {
  std::optional<std::pair<std::int64_t, std::int64_t>> best;
  for (auto [l0, l1] : lv.levels) {
    if (l0 <= 0) continue;
    if (!best || static_cast<__int128>(l1) * best->first < static_cast<__int128>(best->second) * l0) best = {l0, l1};
  }
  if (!best) throw Error(ErrorCode::kDomainError, "no lattice points below the depth");
  return Rational(best->second) / Rational(best->first) * Rational(lv.L0) / Rational(lv.L1);
}

inline Rational estimate_c1(const ToricConeSingularity& x, const RVector& xi0, const RVector& xi1, int depth,
                            std::int64_t budget = kDefaultCountBudget) {
  return estimate_c1(detail::toric_levels(x, xi0, xi1, Rational(depth) + 1, budget));
}

inline Rational estimate_c1(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a0, const MonomialValuation& a1,
                            int depth, std::int64_t budget = kDefaultCountBudget) {
  auto j = pure_power_variable(w, a1);
  if (!j) throw Error(ErrorCode::kPreconditionViolated, "initial form of f under v1 has no dominant pure power");
  int e = 0;
  for (auto idx : initial_monomials(w, a1))
    if (w.monomials[idx][*j] > e) e = w.monomials[idx][*j];
  return estimate_c1(detail::monomial_levels(a0.weights(), a1.weights(), Rational(depth) + 1, j, e, budget));
}

struct PropdimCheck {
  std::int64_t lhs = 0;  // sum over v0-degrees k of dim R_k / F^m R_k
  std::int64_t rhs = 0;  // dim R / a_m(v1) from the counting oracle
  bool equal() const { return lhs == rhs; }
};

inline PropdimCheck propdim_check(const ToricConeSingularity& x, const RVector& xi0, const RVector& xi1, int m,
                                  std::int64_t budget = kDefaultCountBudget) {
  // levels of xi0 needed: <y, xi1> >= c1 <y, xi0>, so <y, xi0> >= m / c1 forces <y, xi1> >= m
  Rational c1 = -1;
  for (const auto& u : x.sigma_dual.rays) {
    const Rational r = dot(u, xi1) / dot(u, xi0);
    if (c1 < 0 || r < c1) c1 = r;
  }
  auto lv = detail::toric_levels(x, xi0, xi1, Rational(m) / c1 + 1, budget);
  std::map<std::int64_t, std::int64_t> quotient_dim;  // per v0-level: dim R_k - dim F^m R_k
  const Integer M1 = Integer(m) * lv.L1;
  for (auto [l0, l1] : lv.levels)
    if (Integer(l1) < M1) ++quotient_dim[l0];
  PropdimCheck out;
  for (auto [k, c] : quotient_dim) out.lhs += c;
  out.rhs = lattice_count_oracle(x, xi1, Rational(m), budget);
  return out;
}

/// For R = C[z]/(f) with f homogeneous for a0: dim R_k from the ambient Hilbert function
/// h(k) - h(k - deg f), and dim F^m R_k from standard monomials.
inline PropdimCheck propdim_check(const WeightedHomogeneousHypersurface& w, const MonomialValuation& a0,
                                  const MonomialValuation& a1, int m, std::int64_t budget = kDefaultCountBudget) {
  const Rational d0 = monomial_weight(w.monomials.front(), a0.weights());
  for (const auto& mon : w.monomials)
    if (monomial_weight(mon, a0.weights()) != d0) throw Error(ErrorCode::kPreconditionViolated, "f is not homogeneous for v0");
  auto j = pure_power_variable(w, a1);
  if (!j) throw Error(ErrorCode::kPreconditionViolated, "initial form of f under v1 has no dominant pure power");
  int e = 0;
  for (auto idx : initial_monomials(w, a1))
    if (w.monomials[idx][*j] > e) e = w.monomials[idx][*j];
  Rational c1 = -1;
  for (std::size_t i = 0; i < a0.size(); ++i) {
    const Rational r = a1.weights()[i] / a0.weights()[i];
    if (c1 < 0 || r < c1) c1 = r;
  }
  const Rational K = Rational(m) / c1 + 1;
  auto ambient = detail::monomial_levels(a0.weights(), a1.weights(), K, std::nullopt, 0, budget);
  auto standard = detail::monomial_levels(a0.weights(), a1.weights(), K, j, e, budget);
  // both enumerations share L0 because they use the same a0 and K
  std::map<std::int64_t, std::int64_t> h, filtered;
  for (auto [l0, l1] : ambient.levels) ++h[l0];
  const Integer M1 = Integer(m) * standard.L1;
  for (auto [l0, l1] : standard.levels)
    if (Integer(l1) >= M1) ++filtered[l0];
  const std::int64_t shift = to_int64(num(d0) * (ambient.L0 / den(d0)));
  const Integer bound = Integer(m) * ambient.L0;
  PropdimCheck out;
  for (auto [k, hk] : h) {
    // only levels k with c1 k < m can carry elements of v1-value below m
    if (!(c1 * Rational(k) < Rational(bound))) continue;
    std::int64_t dim_rk = hk;
    if (auto it = h.find(k - shift); it != h.end()) dim_rk -= it->second;
    std::int64_t f = 0;
    if (auto it = filtered.find(k); it != filtered.end()) f = it->second;
    out.lhs += dim_rk - f;
  }
  out.rhs = lattice_count_oracle(w, a1, Rational(m), budget);
  return out;
}

}  // namespace hvol
