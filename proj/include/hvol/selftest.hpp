#pragma once

// Acceptance suite: eleven numbered criteria, each a list of checks with both sides recorded.

#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hvol/io.hpp"

namespace hvol::selftest {

using io::Check;

/// Hooks through which the suite reaches the formulas it audits; replaced wholesale by mutation runs.
struct SuiteContext {
  std::function<Rational(const WeightedHomogeneousHypersurface&, const MonomialValuation&)> hyp_volume =
      [](const WeightedHomogeneousHypersurface& f, const MonomialValuation& a) { return valuation_volume_hypersurface(f, a); };
  std::uint64_t seed = 0;
};

/// Volume formula off by a factor 1001/1000; every exact claim that routes through it must fail.
inline SuiteContext mutated_volume_context() {
  SuiteContext c;
  c.hyp_volume = [](const WeightedHomogeneousHypersurface& f, const MonomialValuation& a) {
    return valuation_volume_hypersurface(f, a) * Rational(1001, 1000);
  };
  return c;
}

struct CriterionResult {
  int id = 0;
  std::string name;
  std::vector<std::string> tags;
  std::vector<Check> checks;
  double seconds = 0;
  double time_limit = 0;  // seconds; 0 means none
  std::string error;      // set when the criterion threw

  bool within_time() const { return time_limit <= 0 || seconds <= time_limit; }
  bool pass() const { return error.empty() && within_time() && !checks.empty() && io::all_pass(checks); }
  std::size_t failed_checks() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.pass; }));
  }
};

namespace detail {

inline Rational nvol_of(const SuiteContext& ctx, const WeightedHomogeneousHypersurface& f, const MonomialValuation& a) {
  return normalized_volume(log_discrepancy_hypersurface(f, a), ctx.hyp_volume(f, a), f.n());
}

inline Rational akm_closed_form(int n, int k) { return pow(Rational((n - 2) * k + 2), n) / pow(Rational(k), n - 1); }

inline Rational random_rational(std::mt19937_64& rng, int max_num, int max_den) {
  return Rational(static_cast<long>(1 + rng() % static_cast<std::uint64_t>(max_num)),
                  static_cast<long>(1 + rng() % static_cast<std::uint64_t>(max_den)));
}

/// Positive combination of the rays of sigma; lies in the interior of the Reeb cone.
inline RVector random_reeb(const ToricConeSingularity& x, std::mt19937_64& rng) {
  RVector xi(static_cast<std::size_t>(x.n), Rational(0));
  for (const auto& r : x.sigma.rays) xi = xi + random_rational(rng, 9, 4) * r;
  return xi;
}

/// Pure-power hypersurface sum c_i z_i^{e_i}: weights with two tied initial monomials and the rest strictly above.
inline MonomialValuation random_tie_weights(const WeightedHomogeneousHypersurface& f, std::mt19937_64& rng) {
  const std::size_t nv = static_cast<std::size_t>(f.nvars);
  std::vector<int> expo(nv, 0);
  for (const auto& m : f.monomials)
    for (std::size_t i = 0; i < nv; ++i)
      if (m[i] != 0) expo[i] = m[i];
  const Rational d = random_rational(rng, 12, 3);
  const std::size_t i1 = rng() % nv;
  std::size_t i2 = rng() % (nv - 1);
  if (i2 >= i1) ++i2;
  RVector a(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    const Rational base = d / expo[i];
    a[i] = (i == i1 || i == i2) ? base : base * (1 + random_rational(rng, 3, 4));
  }
  return MonomialValuation(std::move(a));
}

template <class F>
CriterionResult run_timed(int id, std::string name, std::vector<std::string> tags, double limit, F&& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.tags = std::move(tags);
  r.time_limit = limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r.checks);
  } catch (const Error& e) {
    r.error = std::string(error_code_name(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct NamedProfile {
  std::string label;
  VolumeProfile profile;
  Rational A0, A1;  // log discrepancies of v0 and v1
};

}  // namespace detail

// ---------------------------------------------------------------------------
// criteria

inline CriterionResult criterion_quotient_min(const SuiteContext& ctx) {
  return detail::run_timed(1, "quotient_min_nvol", {"quotient"}, 1.0, [&](std::vector<Check>& out) {
    for (int r = 1; r <= 12; ++r)
      for (int a = 0; a < std::max(r, 1); ++a) {
        auto g = cyclic_group(r, a);
        if (!check_free_in_codim1(g)) continue;
        out.push_back(io::check_exact("min_nvol " + g.label, quotient_min_nvol(g).nvol, Rational(4, r)));
      }
    const auto a1 = akm_singularity(2, 2);
    out.push_back(io::check_exact("A_1 hypersurface pipeline equals 4/|Z_2|", detail::nvol_of(ctx, a1, canonical_weights(2, 2)),
                                  quotient_min_nvol(cyclic_group(2, 1)).nvol));
  });
}

inline CriterionResult criterion_pair_identity(const SuiteContext&) {
  return detail::run_timed(2, "pair_identity", {"quotient"}, 5.0, [&](std::vector<Check>& out) {
    for (const auto& g : groups::library()) {
      if (!check_free_in_codim1(g)) continue;
      const auto s = invariant_dimension_series(g, 61);
      int tested = 0;
      bool ok = true;
      for (int m = g.order(); m <= 60; m += g.order()) {
        const Integer lhs = s.dims[static_cast<std::size_t>(m)] + s.dims[static_cast<std::size_t>(m + 1)];
        const Integer rhs_num = Integer(m + 1) * (m + 1) + g.order() - 1;
        ok = ok && rhs_num % g.order() == 0 && lhs == rhs_num / g.order() && pair_identity_check(g, m);
        ++tested;
      }
      Check c{"pair identity " + g.label, ok, static_cast<double>(tested), static_cast<double>(tested), 0,
              "exact over " + std::to_string(tested) + " values of m <= 60 divisible by |G|"};
      out.push_back(c);
    }
  });
}

inline CriterionResult criterion_molien_limit(const SuiteContext&) {
  return detail::run_timed(3, "molien_limit", {"quotient"}, 0, [&](std::vector<Check>& out) {
    constexpr int M = 400;
    for (const auto& g : groups::library()) {
      if (!check_free_in_codim1(g)) continue;
      const auto v = quotient_volume(g, M);
      out.push_back(Check{"d_M/(M^2/2) vs 1/|G| " + g.label, std::abs(v.estimate - to_double(v.exact)) <= 2.0 / M, v.estimate,
                          to_double(v.exact), 2.0 / M, "M = 400"});
    }
  });
}

inline CriterionResult criterion_akm_minimization(const SuiteContext& ctx) {
  return detail::run_timed(4, "akm_minimization", {"minimize"}, 30.0, [&](std::vector<Check>& out) {
    const std::vector<std::pair<int, int>> cases{{2, 2}, {2, 5}, {3, 1}, {3, 2}, {3, 3}, {4, 2}, {3, 4}, {4, 3}};
    for (auto [n, k] : cases) {
      const std::string tag = "A_" + std::to_string(k - 1) + "^" + std::to_string(n);
      const auto f = akm_singularity(n, k);
      MinimizeOptions o;
      o.seed = ctx.seed;
      const auto r = minimize_nvol(f, default_init(f), o);
      const auto expect = to_doubles(normalize_weights(f, canonical_weights(n, k)).weights());
      double dist = 0;
      for (std::size_t i = 0; i < expect.size(); ++i) dist = std::max(dist, std::abs(r.argmin_approx[i] - expect[i]));
      out.push_back(Check{tag + " argmin vs canonical weights", dist <= 1e-6, dist, 0, 1e-6, "max coordinate distance on A = n"});
      out.push_back(io::check_exact(tag + " snapped minimum", r.min_nvol_exact, detail::akm_closed_form(n, k)));
      out.push_back(io::check_exact(tag + " nvol at canonical weights", detail::nvol_of(ctx, f, canonical_weights(n, k)),
                                    detail::akm_closed_form(n, k)));
    }
    const auto named = [&](int n, int k, const Rational& v) {
      out.push_back(io::check_exact("A_" + std::to_string(k - 1) + "^" + std::to_string(n) + " value",
                                    detail::nvol_of(ctx, akm_singularity(n, k), canonical_weights(n, k)), v));
    };
    named(3, 2, 16);
    named(3, 3, Rational(125, 9));
    named(2, 2, 2);
  });
}

inline CriterionResult criterion_conjectured_minimizer(const SuiteContext& ctx) {
  return detail::run_timed(5, "conjectured_minimizer", {"minimize"}, 10.0, [&](std::vector<Check>& out) {
    for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 5}, {4, 4}}) {
      const std::string tag = "A_" + std::to_string(k - 1) + "^" + std::to_string(n);
      const auto f = akm_singularity(n, k);
      MinimizeOptions o;
      o.seed = ctx.seed;
      const auto r = minimize_nvol(f, default_init(f), o);
      const double ratio = r.argmin_approx.back() / r.argmin_approx.front();
      out.push_back(io::check_close(tag + " last weight ratio", ratio, double(n - 2) / (n - 1), 1e-6));
      if (n == 3) {
        out.push_back(io::check_exact(tag + " minimum", r.min_nvol_exact, Rational(27, 2)));
        const Rational v0 = detail::nvol_of(ctx, f, canonical_weights(n, k));
        out.push_back(io::check_exact(tag + " nvol(v0)", v0, Rational(343, 25)));
        out.push_back(Check{tag + " minimum strictly below nvol(v0)", r.min_nvol_exact < v0, to_double(r.min_nvol_exact), to_double(v0), 0,
                            "strict"});
      }
    }
  });
}

inline CriterionResult criterion_fujita_sharpness(const SuiteContext& ctx) {
  return detail::run_timed(6, "fujita_sharpness", {"fujita"}, 0, [&](std::vector<Check>& out) {
    std::mt19937_64 rng(ctx.seed + 6);
    int ok = 0;
    for (int i = 0; i < 50; ++i) {
      const int n = 1 + static_cast<int>(rng() % 6);
      const Rational r = Rational(n) * detail::random_rational(rng, 20, 20) / 21;  // in (0, n)
      const Rational degH = detail::random_rational(rng, 50, 30);
      const auto inv = cone_invariants(make_polarized_cone(n, r, degH));
      const Rational lhs = pow(Rational(n) / (n + 1), n) * pow(r, n) * pow(Rational(n + 1) / n, n) * degH;
      if (lhs == pow(r, n) * degH && inv.fujita_bound == inv.nvol_ordV && inv.nvol_ordV == pow(r, n) * degH) ++ok;
    }
    out.push_back(Check{"random (n, r, degH) triples", ok == 50, double(ok), 50, 0, "exact identity count"});
    const auto r_eq_n = cone_invariants(make_polarized_cone(3, 3, 1));
    out.push_back(io::check_exact("r = n boundary: C^3 over P^2", r_eq_n.fujita_bound, 27));
    // model sharpness: polarization read off the volume formula must reproduce the independent minimum
    for (int k = 2; k <= 6; ++k) {
      const auto f = akm_singularity(2, k);
      const auto a = canonical_weights(2, k);
      const auto inv = cone_invariants(make_polarized_cone(2, log_discrepancy_hypersurface(f, a), ctx.hyp_volume(f, a)));
      out.push_back(io::check_exact("A_" + std::to_string(k - 1) + "^2 bound vs 4/|G|", inv.fujita_bound,
                                    quotient_min_nvol(cyclic_group(k, k - 1)).nvol));
    }
    for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 2}, {3, 3}, {4, 2}}) {
      const auto f = akm_singularity(n, k);
      const auto a = normalize_weights(f, canonical_weights(n, k));
      const auto inv = cone_invariants(make_polarized_cone(n, log_discrepancy_hypersurface(f, a), ctx.hyp_volume(f, a)));
      out.push_back(io::check_exact("A_" + std::to_string(k - 1) + "^" + std::to_string(n) + " bound vs closed form", inv.fujita_bound,
                                    detail::akm_closed_form(n, k)));
    }
  });
}

inline CriterionResult criterion_oracle(const SuiteContext& ctx, int p = 200) {
  return detail::run_timed(7, "oracle_equivalence", {"oracle"}, 60.0, [&](std::vector<Check>& out) {
    const Rational P(p);
    const auto toric = [&](const ToricConeSingularity& x, const std::vector<RVector>& xis) {
      for (const auto& xi : xis) {
        const double exact = to_double(valuation_volume_toric(x, xi));
        const double est = to_double(lattice_count_oracle_volume(x, xi, P));
        out.push_back(Check{x.label + " " + to_string(xi), std::abs(est - exact) / exact <= 0.05, est, exact, 0.05, "relative"});
      }
    };
    toric(models::affine_space(2), {RVector{1, 1}, RVector{1, 2}, RVector{2, 3}});
    toric(models::affine_space(3), {RVector{1, 1, 1}, RVector{1, 1, 2}, RVector{1, 2, 3}});
    const auto hyp = [&](int n, int k, const std::vector<RVector>& ws) {
      const auto f = akm_singularity(n, k);
      for (const auto& w : ws) {
        const MonomialValuation a(w);
        const double exact = to_double(ctx.hyp_volume(f, a));
        const double est = to_double(lattice_count_oracle_volume(f, a, P));
        out.push_back(Check{f.label + " " + to_string(w), std::abs(est - exact) / exact <= 0.05, est, exact, 0.05, "relative"});
      }
    };
    hyp(2, 2, {RVector{1, 1, 1}, RVector{1, 1, 2}, RVector{2, 3, 2}});
    hyp(3, 2, {RVector{1, 1, 1, 1}, RVector{1, 1, 1, 2}, RVector{2, 3, 2, 2}});
    hyp(3, 3, {RVector{3, 3, 3, 2}, RVector{1, 1, 1, 1}, RVector{3, 3, 4, 2}});
  });
}

namespace detail {

inline NamedProfile toric_profile(const ToricConeSingularity& x, const RVector& xi0, const RVector& xi1, std::string label) {
  return NamedProfile{std::move(label), profile_from_model(x, xi0, xi1), log_discrepancy_toric(x, xi0), log_discrepancy_toric(x, xi1)};
}

inline NamedProfile hyp_profile(const WeightedHomogeneousHypersurface& f, const MonomialValuation& a0, const MonomialValuation& a1,
                                std::string label) {
  return NamedProfile{std::move(label), profile_from_model(f, a0, a1), log_discrepancy_hypersurface(f, a0),
                      log_discrepancy_hypersurface(f, a1)};
}

/// Theta, Phi and derivative identities of one profile at one lambda.
inline void phi_checks(const NamedProfile& np, const Rational& lambda, std::vector<Check>& out) {
  const auto& p = np.profile;
  const std::string tag = np.label + " lambda=" + to_string(lambda);
  const int n = p.n;
  const double lam = to_double(lambda);
  out.push_back(io::check_exact(tag + " Phi(lambda,0) = degH", phi_exact(p, lambda, 0), p.degH));
  out.push_back(io::check_close(tag + " Phi(lambda,1) = lambda^-n vol(v1)", phi(p, lam, 1), to_double(pow(lambda, -n) * *p.vol_v1), 1e-8));
  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> f;
  for (int i = 0; i <= 20; ++i) f.push_back(phi(p, lam, i / 20.0));
  for (int i = 1; i < 20; ++i) worst = std::min(worst, 0.5 * (f[static_cast<std::size_t>(i - 1)] + f[static_cast<std::size_t>(i + 1)]) - f[static_cast<std::size_t>(i)]);
  out.push_back(io::check_ge(tag + " midpoint convexity on 21 points", worst, 0, 1e-9));
  const auto d = phi_derivative_s0(p, lam);
  const double scale = std::max(1.0, std::abs(d.formA));
  const double spread = std::max({std::abs(d.formB1 - d.formA), std::abs(d.formB - d.formA), std::abs(d.formC - d.formA)});
  out.push_back(Check{tag + " four derivative forms agree", spread <= 1e-7 * scale, d.formA, d.formA + spread, 1e-7, "relative spread"});
}

inline void profile_identities(const NamedProfile& np, std::vector<Check>& out) {
  const auto& p = np.profile;
  const auto g = profile_integrals_exact(p);
  const int n = p.n;
  const double c1 = to_double(p.c1);
  out.push_back(io::check_close(np.label + " Theta(c1) = degH - c1^n vol(v1)", theta(p, c1), to_double(p.degH - pow(p.c1, n) * *p.vol_v1), 1e-8));
  // independent path: numeric quadrature of the profile and of Theta
  const auto gn = profile_integrals_numeric(p);
  const double rhs = (n + 1.0) / n * gn.int_theta_c1 + c1 / n * gn.theta_c1;
  out.push_back(io::check_close(np.label + " integral identity", gn.int_vol_c1, rhs, 1e-8));
  out.push_back(io::check_close(np.label + " integral identity (exact path)", to_double(g.int_vol_c1),
                                to_double(Rational(n + 1) / n * g.int_theta_c1 + g.c1 / n * g.theta_c1), 1e-12));
  out.push_back(io::check_close(np.label + " vol(v1) from profile", volume_from_profile(p), to_double(*p.vol_v1), 1e-8));
}

}  // namespace detail

inline CriterionResult criterion_phi_calculus(const SuiteContext&) {
  return detail::run_timed(8, "phi_calculus", {"filtration"}, 0, [&](std::vector<Check>& out) {
    const auto a13 = akm_singularity(3, 2);
    const MonomialValuation ones(RVector{1, 1, 1, 1});
    const std::vector<detail::NamedProfile> profiles{
        detail::toric_profile(models::affine_space(2), RVector{1, 1}, RVector{1, 2}, "C^2 v1=(1,2)"),
        detail::hyp_profile(a13, ones, canonical_weights(3, 2), "A_1^3 v1=canonical"),
        detail::hyp_profile(a13, ones, MonomialValuation(RVector{1, 1, 1, 2}), "A_1^3 v1=(1,1,1,2)"),
        detail::toric_profile(models::affine_space(3), RVector{1, 1, 1}, RVector{1, 1, 2}, "C^3 v1=(1,1,2)"),
    };
    for (const auto& np : profiles) {
      detail::profile_identities(np, out);
      const Rational lambda_star = np.A0 / np.A1;
      for (const Rational& lambda : {Rational(1, 2), Rational(1), Rational(2), lambda_star}) detail::phi_checks(np, lambda, out);
    }
    // v1 = v0: the derivative vanishes at lambda = 1
    const std::vector<detail::NamedProfile> trivial{
        detail::toric_profile(models::affine_space(2), RVector{1, 1}, RVector{1, 1}, "C^2 v1=v0"),
        detail::hyp_profile(a13, ones, ones, "A_1^3 v1=v0"),
        detail::toric_profile(models::affine_space(3), RVector{1, 1, 1}, RVector{1, 1, 1}, "C^3 v1=v0"),
    };
    for (const auto& np : trivial) {
      const auto d = phi_derivative_s0(np.profile, 1);
      const double worst = std::max({std::abs(d.formA), std::abs(d.formB1), std::abs(d.formB), std::abs(d.formC)});
      out.push_back(Check{np.label + " derivative at lambda=1", worst <= 1e-9, worst, 0, 1e-9, "max over the four forms"});
    }
  });
}

inline CriterionResult criterion_fujita_gap(const SuiteContext& ctx) {
  return detail::run_timed(9, "fujita_gap", {"fujita", "filtration"}, 0, [&](std::vector<Check>& out) {
    std::mt19937_64 rng(ctx.seed + 9);
    const auto record = [&](const detail::NamedProfile& np, const Rational& r, bool at_v0) {
      const auto& p = np.profile;
      const Rational delta = fujita_delta(r, p.n);
      const Rational gap = fujita_gap_exact(p, np.A1, delta, p.degH);
      if (at_v0) {
        out.push_back(io::check_close(np.label + " gap at v0", to_double(gap), 0, 1e-8));
        return;
      }
      out.push_back(io::check_ge(np.label + " gap", to_double(gap), 0, 1e-9));
      const double lam = lambda_star(r, np.A1);
      const double lhs = phi_derivative_s0(p, lam).formA * to_double(np.A1);
      out.push_back(io::check_close(np.label + " derivative-gap relation", lhs, p.n * to_double(p.degH) * to_double(gap), 1e-7, true));
    };
    // toric models, v0 the exact minimizer normalized to A = n
    for (const auto& x : {models::affine_space(2), models::affine_space(3), models::conifold(), models::c3_mod_z3()}) {
      MinimizeOptions o;
      o.seed = ctx.seed;
      const auto m = minimize_nvol(x, default_init(x), o);
      if (!m.snapped) throw Error(ErrorCode::kOracleDisagreement, x.label + " minimizer is not rational");
      const RVector& xi0 = m.argmin;
      record(detail::toric_profile(x, xi0, xi0, x.label + " v1=v0"), Rational(x.n), true);
      for (int i = 0; i < 10; ++i) {
        const RVector xi1 = detail::random_reeb(x, rng);
        record(detail::toric_profile(x, xi0, xi1, x.label + " v1=" + to_string(xi1)), Rational(x.n), false);
      }
    }
    // certified hypersurfaces, v0 the homogenizing weights
    for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 3}, {3, 4}}) {
      const auto f = akm_singularity(n, k);
      const auto a0 = canonical_weights(n, k);
      const Rational r = log_discrepancy_hypersurface(f, a0);
      record(detail::hyp_profile(f, a0, a0, f.label + " v1=v0"), r, true);
      for (int i = 0; i < 10; ++i) {
        const auto a1 = detail::random_tie_weights(f, rng);
        record(detail::hyp_profile(f, a0, a1, f.label + " v1=" + to_string(a1.weights())), r, false);
      }
    }
  });
}

inline CriterionResult criterion_reeb_laws(const SuiteContext& ctx) {
  return detail::run_timed(10, "reeb_laws", {"minimize", "toric"}, 0, [&](std::vector<Check>& out) {
    std::mt19937_64 rng(ctx.seed + 10);
    for (const auto& x : models::toric_library()) {
      int law = 0, idem = 0;
      for (int i = 0; i < 10; ++i) {
        const RVector xi = detail::random_reeb(x, rng);
        const Rational lambda = detail::random_rational(rng, 7, 5);
        if (valuation_volume_toric(x, lambda * xi) * pow(lambda, x.n) == valuation_volume_toric(x, xi) && rescaling_law_check(x, xi, lambda)) ++law;
        const RVector once = normalize_reeb(x, xi);
        if (normalize_reeb(x, once) == once && log_discrepancy_toric(x, once) == x.n) ++idem;
      }
      out.push_back(Check{x.label + " rescaling law", law == 10, double(law), 10, 0, "exact over 10 random (xi, lambda)"});
      out.push_back(Check{x.label + " normalization idempotent with A = n", idem == 10, double(idem), 10, 0, "exact over 10 random xi"});
      std::vector<std::vector<double>> argmins;
      double spread = 0;
      for (std::uint64_t s = 0; s < 5; ++s) {
        MinimizeOptions o;
        o.seed = ctx.seed + s;
        const auto m = minimize_nvol(x, default_init(x), o);
        spread = std::max(spread, m.start_spread);
        argmins.push_back(m.argmin_approx);
      }
      for (const auto& a : argmins)
        for (std::size_t i = 0; i < a.size(); ++i) spread = std::max(spread, std::abs(a[i] - argmins.front()[i]));
      out.push_back(Check{x.label + " multi-start agreement", spread <= 1e-6, spread, 0, 1e-6, "5 seeds x 5 starts"});
    }
    for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}, {3, 3}}) {
      const auto f = akm_singularity(n, k);
      const Rational lambda = detail::random_rational(rng, 7, 5);
      out.push_back(Check{f.label + " rescaling law", rescaling_law_check(f, canonical_weights(n, k), lambda), 1, 1, 0, "exact"});
    }
  });
}

inline CriterionResult criterion_toric_log_fano(const SuiteContext& ctx) {
  return detail::run_timed(11, "toric_log_fano", {"toric"}, 0, [&](std::vector<Check>& out) {
    std::mt19937_64 rng(ctx.seed + 11);
    int done = 0;
    while (done < 10) {
      const int m = 2 + done % 3;  // base dimension 2, 3, 4
      std::vector<RVector> pts;
      for (int i = 0; i < m + 2; ++i) {
        RVector p;
        for (int j = 0; j < m; ++j) p.emplace_back(static_cast<long>(rng() % 7) - 3);
        pts.push_back(p);
      }
      Polytope poly;
      try {
        poly = polytope_from_vertices(pts);
      } catch (const Error&) {
        continue;  // degenerate draw
      }
      const RVector p_star = centroid(poly);
      Rational worst = 0;
      for (const auto& h : poly.hrep) worst = std::max(worst, h.eval(p_star));
      const Rational r = 1 / worst;  // largest admissible r: max_i r l_i(p*) = 1
      const auto rep = toric_log_fano(poly.hrep, r);
      RVector lift = p_star;
      lift.push_back(1);
      const std::string tag = "dim " + std::to_string(m) + " #" + std::to_string(done);
      out.push_back(Check{tag + " lifted centroid identity", rep.centroid_identity && rep.frak_p_star == Rational(m + 1, m + 2) * lift, 1, 1,
                          0, "exact"});
      out.push_back(io::check_exact(tag + " beta_n = r/n", rep.beta_n, r / (m + 1)));
      out.push_back(io::check_exact(tag + " s = r(n+1)/n", rep.s, r * (m + 2) / (m + 1)));
      ++done;
    }
  });
}

// ---------------------------------------------------------------------------
// driver

struct CriterionSpec {
  int id;
  std::string name;
  std::vector<std::string> tags;
  std::function<CriterionResult(const SuiteContext&)> run;
};

inline std::vector<CriterionSpec> criteria() {
  return {
      {1, "quotient_min_nvol", {"quotient"}, criterion_quotient_min},
      {2, "pair_identity", {"quotient"}, criterion_pair_identity},
      {3, "molien_limit", {"quotient"}, criterion_molien_limit},
      {4, "akm_minimization", {"minimize"}, criterion_akm_minimization},
      {5, "conjectured_minimizer", {"minimize"}, criterion_conjectured_minimizer},
      {6, "fujita_sharpness", {"fujita"}, criterion_fujita_sharpness},
      {7, "oracle_equivalence", {"oracle"}, [](const SuiteContext& c) { return criterion_oracle(c); }},
      {8, "phi_calculus", {"filtration"}, criterion_phi_calculus},
      {9, "fujita_gap", {"fujita", "filtration"}, criterion_fujita_gap},
      {10, "reeb_laws", {"minimize", "toric"}, criterion_reeb_laws},
      {11, "toric_log_fano", {"toric"}, criterion_toric_log_fano},
  };
}

/// Empty filter selects all; otherwise a criterion number, a tag, or a substring of the name.
inline bool matches(const CriterionSpec& c, const std::string& filter) {
  if (filter.empty()) return true;
  if (filter == std::to_string(c.id)) return true;
  if (std::find(c.tags.begin(), c.tags.end(), filter) != c.tags.end()) return true;
  return c.name.find(filter) != std::string::npos;
}

inline std::vector<CriterionResult> run_suite(const SuiteContext& ctx, const std::string& filter = {}) {
  std::vector<CriterionResult> out;
  for (const auto& c : criteria())
    if (matches(c, filter)) out.push_back(c.run(ctx));
  return out;
}

inline io::Json to_json(const CriterionResult& r, bool timing) {
  io::Json j{{"id", r.id},
             {"name", r.name},
             {"pass", r.pass()},
             {"checks", io::checks_json(r.checks)},
             {"failed_checks", r.failed_checks()},
             {"within_time_limit", r.within_time()}};
  if (r.time_limit > 0) j["time_limit_seconds"] = r.time_limit;
  if (timing) j["seconds"] = r.seconds;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace hvol::selftest
