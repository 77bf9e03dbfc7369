#include <gtest/gtest.h>

#include "hvol/valuation.hpp"
#include "test_util.hpp"

using namespace hvol;
using hvol::test::Q;
using hvol::test::V;

namespace {

// Brute-force colength: enumerate every exponent vector in a box and test the condition directly.
std::int64_t brute_hypersurface_count(const WeightedHomogeneousHypersurface& w, const RVector& a, const Rational& p,
                                      const Exponent& lm) {
  std::int64_t count = 0;
  Exponent e(static_cast<std::size_t>(w.nvars), 0);
  std::function<void(std::size_t, Rational)> rec = [&](std::size_t i, Rational used) {
    if (i == e.size()) {
      for (std::size_t j = 0; j < e.size(); ++j)
        if (e[j] < lm[j]) {
          ++count;
          return;
        }
      return;
    }
    for (e[i] = 0; used + Rational(e[i]) * a[i] < p; ++e[i]) rec(i + 1, used + Rational(e[i]) * a[i]);
    e[i] = 0;
  };
  rec(0, 0);
  return count;
}

std::int64_t brute_toric_count(const ToricConeSingularity& x, const RVector& xi, const Rational& p, int box) {
  std::int64_t count = 0;
  RVector y(static_cast<std::size_t>(x.n), Rational(0));
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == y.size()) {
      for (const auto& u : x.sigma.rays)
        if (dot(u, y) < 0) return;
      if (dot(y, xi) < p) ++count;
      return;
    }
    for (int t = -box; t <= box; ++t) {
      y[i] = t;
      rec(i + 1);
    }
  };
  rec(0);
  return count;
}

}  // namespace

TEST(LogDiscrepancy, Toric) {
  EXPECT_EQ(log_discrepancy_toric(models::affine_space(3), V({1, 1, 1})), 3);
  EXPECT_EQ(log_discrepancy_toric(models::affine_space(2), V({2, 3})), 5);
  // conifold canonical Reeb vector agrees with the quadric hypersurface at weights (2,2,2,2)
  EXPECT_EQ(log_discrepancy_toric(models::conifold(), V({4, 2, 2})),
            log_discrepancy_hypersurface(akm_singularity(3, 2), canonical_weights(3, 2)));
  EXPECT_EQ(log_discrepancy_toric(models::conifold(), V({4, 2, 2})), 4);
  try {
    log_discrepancy_toric(models::affine_space(2), V({1, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotInReebCone);
  }
}

TEST(LogDiscrepancy, Hypersurface) {
  for (int n = 2; n <= 5; ++n)
    for (int k = 1; k <= 5; ++k)
      EXPECT_EQ(log_discrepancy_hypersurface(akm_singularity(n, k), canonical_weights(n, k)), (n - 2) * k + 2);
  RVector ones(4, Rational(1));
  ones.back() = 2;
  EXPECT_EQ(log_discrepancy_hypersurface(akm_singularity(3, 1), MonomialValuation(ones)), 3);
  // sum 7/2, initial degree min(2, 5/2) = 2
  EXPECT_EQ(log_discrepancy_hypersurface(akm_singularity(3, 5), MonomialValuation(V({1, 1, 1, Q("1/2")}))), Q("3/2"));
}

TEST(Volume, Toric) {
  EXPECT_EQ(valuation_volume_toric(models::affine_space(3), V({1, 1, 1})), 1);
  EXPECT_EQ(valuation_volume_toric(models::affine_space(2), V({2, 1})), Q("1/2"));
  auto a1 = models::toric_a_surface(2);
  EXPECT_EQ(log_discrepancy_toric(a1, V({1, 1})), 1);
  EXPECT_EQ(valuation_volume_toric(a1, V({1, 1})), 2);
  EXPECT_EQ(log_discrepancy_toric(a1, V({2, 2})), 2);
  EXPECT_EQ(valuation_volume_toric(a1, V({2, 2})), Q("1/2"));
  EXPECT_EQ(evaluate(a1, V({2, 2})).nvol.value, 2);
  EXPECT_EQ(valuation_volume_toric(models::conifold(), V({4, 2, 2})), Q("1/4"));
  // symmetric Reeb vector of C^3/Z_3: A = 3 and vol = 1/|Z_3|
  EXPECT_EQ(log_discrepancy_toric(models::c3_mod_z3(), V({0, 0, 3})), 3);
  EXPECT_EQ(valuation_volume_toric(models::c3_mod_z3(), V({0, 0, 3})), Q("1/3"));
}

TEST(Volume, FanFormulaAgreesWithPolytopeRoute) {
  for (const auto& x : models::toric_library()) {
    auto fan = triangulate_dual_cone(x);
    RVector xi(static_cast<std::size_t>(x.n), Rational(0));
    for (const auto& u : x.sigma.rays) xi = xi + u;
    for (int k = 0; k < 4; ++k) {
      RVector probe = xi + Rational(k, 3) * x.sigma.rays[static_cast<std::size_t>(k) % x.sigma.rays.size()];
      EXPECT_EQ(fan_volume(x, fan, probe), valuation_volume_toric(x, probe)) << x.label;
      EXPECT_NEAR(fan_volume(x, fan, to_doubles(probe)), to_double(valuation_volume_toric(x, probe)), 1e-12);
    }
  }
}

TEST(Volume, Hypersurface) {
  for (int n = 2; n <= 5; ++n)
    for (int k = 1; k <= 5; ++k)
      EXPECT_EQ(valuation_volume_hypersurface(akm_singularity(n, k), canonical_weights(n, k)), Rational(1) / pow(Rational(k), n - 1));
  EXPECT_EQ(valuation_volume_hypersurface(akm_singularity(2, 2), canonical_weights(2, 2)), Q("1/2"));
  EXPECT_EQ(valuation_volume_hypersurface(akm_singularity(3, 5), MonomialValuation(V({1, 1, 1, Q("1/2")}))), 4);
  EXPECT_EQ(valuation_volume_hypersurface(akm_singularity(3, 2), MonomialValuation(V({2, 2, 2, 2}))), Q("1/4"));
}

TEST(Volume, HypersurfacePreconditionAndOracleGuard) {
  auto f = akm_singularity(3, 3);
  MonomialValuation lone(V({1, 1, 1, Q("1/2")}));  // only z4^3 is initial
  try {
    valuation_volume_hypersurface(f, lone);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPreconditionViolated);
  }
  HypersurfaceVolumeOptions opts;
  opts.override_precondition = true;
  EXPECT_EQ(valuation_volume_hypersurface(f, lone, opts), 3);
  opts.oracle_p = Rational(300);
  EXPECT_NO_THROW(valuation_volume_hypersurface(f, canonical_weights(3, 3), opts));
}

TEST(NormalizedVolume, Values) {
  EXPECT_EQ(normalized_volume(2, Q("1/2"), 2), 2);
  EXPECT_EQ(normalized_volume(4, Q("1/4"), 3), 16);
  EXPECT_TRUE(normalized_volume(ExtendedRational::infinity(), 5, 3).infinite);
  EXPECT_LT(normalized_volume(2, 1, 3), normalized_volume(3, 1, 3));
  EXPECT_LT(normalized_volume(2, 1, 3), normalized_volume(2, 2, 3));
}

TEST(NormalizedVolume, RescalingInvariance) {
  const std::vector<Rational> lambdas{Q("1/3"), 2, 7};
  for (const auto& x : models::toric_library()) {
    RVector xi(static_cast<std::size_t>(x.n), Rational(0));
    for (const auto& u : x.sigma.rays) xi = xi + u;
    auto base = evaluate(x, xi).nvol;
    for (const auto& l : lambdas) EXPECT_EQ(evaluate(x, l * xi).nvol, base) << x.label;
  }
  for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 3}, {3, 5}, {4, 4}}) {
    auto f = akm_singularity(n, k);
    auto a = canonical_weights(n, k);
    auto base = evaluate(f, a).nvol;
    for (const auto& l : lambdas) EXPECT_EQ(evaluate(f, a.scaled(l)).nvol, base);
  }
}

TEST(NormalizedVolume, ToricHypersurfaceConsistency) {
  // A_1^2 and A_1^3 each have both descriptions; the canonical valuations must agree exactly
  auto t2 = evaluate(models::toric_a_surface(2), V({2, 2}));
  auto h2 = evaluate(akm_singularity(2, 2), canonical_weights(2, 2));
  EXPECT_EQ(t2.logdisc, h2.logdisc);
  EXPECT_EQ(t2.volume, h2.volume);
  EXPECT_EQ(t2.nvol, h2.nvol);
  auto t3 = evaluate(models::conifold(), V({4, 2, 2}));
  auto h3 = evaluate(akm_singularity(3, 2), canonical_weights(3, 2));
  EXPECT_EQ(t3.logdisc, h3.logdisc);
  EXPECT_EQ(t3.volume, h3.volume);
  EXPECT_EQ(t3.nvol.value, 16);
}

TEST(LogAdjusted, Values) {
  EXPECT_EQ(log_adjusted_discrepancy(5, 0), 5);
  EXPECT_EQ(log_adjusted_discrepancy(3, 1), 2);
  const Rational beta = Q("2/7");
  EXPECT_EQ(log_adjusted_discrepancy(3, 1 - beta), 2 + beta);
}

TEST(Oracle, SmallCountsByHand) {
  EXPECT_EQ(lattice_count_oracle(models::affine_space(2), V({1, 1}), 3), 6);
  EXPECT_EQ(lattice_count_oracle(akm_singularity(2, 2), MonomialValuation(V({1, 1, 1})), 2), 4);
}

TEST(Oracle, AgreesWithBruteForce) {
  for (const auto& x : models::toric_library()) {
    RVector xi(static_cast<std::size_t>(x.n), Rational(0));
    for (const auto& u : x.sigma.rays) xi = xi + u;
    for (const Rational& p : {Rational(3), Rational(11, 2), Rational(9)})
      EXPECT_EQ(lattice_count_oracle(x, xi, p), brute_toric_count(x, xi, p, 30)) << x.label;
  }
  for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 2}, {2, 5}, {3, 3}, {3, 5}}) {
    auto f = akm_singularity(n, k);
    for (const auto& a : {canonical_weights(n, k).weights(), RVector(static_cast<std::size_t>(n + 1), Rational(1))}) {
      MonomialValuation v(a);
      auto lm = f.monomials[choose_leading_monomial(f, v)];
      for (const Rational& p : {Rational(5), Rational(17, 2), Rational(13)})
        EXPECT_EQ(lattice_count_oracle(f, v, p), brute_hypersurface_count(f, a, p, lm));
    }
  }
}

TEST(Oracle, ConvergesToClosedForm) {
  const Rational p(200);
  for (const auto& x : {models::affine_space(2), models::affine_space(3), models::toric_a_surface(2)}) {
    RVector xi(static_cast<std::size_t>(x.n), Rational(0));
    for (const auto& u : x.sigma.rays) xi = xi + u;
    double exact = to_double(valuation_volume_toric(x, xi));
    double est = to_double(lattice_count_oracle_volume(x, xi, p));
    EXPECT_LT(std::abs(est - exact) / exact, 0.05) << x.label;
    double coarse = to_double(lattice_count_oracle_volume(x, xi, Rational(20)));
    EXPECT_LE(std::abs(est - exact), std::abs(coarse - exact)) << x.label;
  }
  for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 3}}) {
    auto f = akm_singularity(n, k);
    auto a = canonical_weights(n, k);
    double exact = to_double(valuation_volume_hypersurface(f, a));
    double est = to_double(lattice_count_oracle_volume(f, a, p));
    EXPECT_LT(std::abs(est - exact) / exact, 0.05);
  }
}

TEST(Oracle, Budget) {
  try {
    lattice_count_oracle(models::affine_space(3), V({1, 1, 1}), 400, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetExceeded);
  }
}
