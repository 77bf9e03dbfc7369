#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hvol/reeb.hpp"
#include "test_util.hpp"

using namespace hvol;
using hvol::test::Q;
using hvol::test::V;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// One-variable objective for weights (1,...,1,x) on x^k + sum z_i^2 inside the tie region x >= 2/k.
Rational akm_profile(int n, const Rational& x) { return pow(Rational(n - 2) + x, n) * 2 / x; }

// Exhaustive search of akm_profile over x = j/600 with x >= 2/k.
Rational akm_grid_min(int n, int k, int steps, Rational* at) {
  Rational best = -1;
  for (int j = 1; j <= steps; ++j) {
    Rational x(j, 600);
    if (x < Rational(2, k)) continue;
    Rational v = akm_profile(n, x);
    if (best < 0 || v < best) {
      best = v;
      *at = x;
    }
  }
  return best;
}

}  // namespace

TEST(Reeb, Membership) {
  auto c3 = models::affine_space(3);
  auto rc = reeb_cone(c3);
  EXPECT_TRUE(reeb_membership(rc, V({1, 1, 1})));
  EXPECT_FALSE(reeb_membership(rc, V({1, 0, 1})));
  auto con = models::conifold();
  EXPECT_TRUE(reeb_membership(reeb_cone(con), default_init(con)));
  for (const auto& u : con.sigma_dual.rays) EXPECT_GT(dot(u, default_init(con)), 0);
  EXPECT_THROW(reeb_membership(rc, V({1, 1})), Error);
}

TEST(Reeb, Normalize) {
  EXPECT_EQ(normalize_reeb(models::affine_space(3), V({2, 2, 2})), V({1, 1, 1}));
  EXPECT_EQ(normalize_reeb(models::affine_space(2), V({1, 3})), V({Q("1/2"), Q("3/2")}));
  std::mt19937_64 rng(3);
  for (const auto& x : models::toric_library())
    for (int t = 0; t < 10; ++t) {
      RVector xi(static_cast<std::size_t>(x.n), Rational(0));
      for (const auto& r : x.sigma.rays) xi = xi + Rational(static_cast<long>(1 + rng() % 9), static_cast<long>(1 + rng() % 5)) * r;
      auto once = normalize_reeb(x, xi);
      EXPECT_EQ(log_discrepancy_toric(x, once), x.n);
      EXPECT_EQ(normalize_reeb(x, once), once);
    }
  EXPECT_THROW(normalize_reeb(models::affine_space(2), V({1, -1})), Error);
}

TEST(Reeb, RescalingLaw) {
  auto c3 = models::affine_space(3);
  EXPECT_EQ(valuation_volume_toric(c3, V({2, 2, 2})), Q("1/8"));
  EXPECT_TRUE(rescaling_law_check(c3, V({1, 1, 1}), 2));
  EXPECT_TRUE(rescaling_law_check(models::conifold(), default_init(models::conifold()), 3));
  EXPECT_TRUE(rescaling_law_check(akm_singularity(3, 2), canonical_weights(3, 2), Q("1/2")));
  EXPECT_THROW(rescaling_law_check(c3, V({1, 1, 1}), 0), Error);
}

TEST(Reeb, Transfers) {
  EXPECT_NEAR(msy_link_volume(27, 3), std::pow(2 * std::numbers::pi, 3), 1e-9);
  EXPECT_EQ(msy_link_volume(0, 3), 0);
  EXPECT_NEAR(msy_link_volume(10, 4), 2 * msy_link_volume(5, 4), 1e-12);
  EXPECT_DOUBLE_EQ(ricci_bound_transfer(1, 7), 1);
  EXPECT_NEAR(ricci_bound_transfer(0.5, 3), 0.4, 1e-15);
  double prev = 0;
  for (int m = 2; m < 200; ++m) {
    double v = ricci_bound_transfer(0.3, m);
    EXPECT_GT(v, prev);
    EXPECT_LT(v, 0.3);
    prev = v;
  }
  EXPECT_THROW(ricci_bound_transfer(0, 3), Error);
  EXPECT_THROW(ricci_bound_transfer(1.5, 3), Error);
  EXPECT_THROW(ricci_bound_transfer(0.5, 1), Error);
  EXPECT_DOUBLE_EQ(hvol_lower(0.5, 16, 2), 4);
}

TEST(Minimize, AffineSpaceFromSkewedStart) {
  auto c3 = models::affine_space(3);
  auto r = minimize_nvol(c3, V({1, 2, 5}));
  EXPECT_TRUE(r.converged);
  EXPECT_LT(max_abs_diff(r.argmin_approx, {1, 1, 1}), 1e-6);
  EXPECT_EQ(r.min_nvol_exact, 27);
  EXPECT_EQ(log_discrepancy_toric(c3, r.argmin), 3);
  EXPECT_GT(r.trajectory.size(), 1u);
  EXPECT_GE(r.trajectory.front().value, r.trajectory.back().value);
  for (std::size_t i = 1; i < r.trajectory.size(); ++i) EXPECT_LE(r.trajectory[i].value, r.trajectory[i - 1].value);
}

TEST(Minimize, RejectsStartOutsideCone) {
  try {
    minimize_nvol(models::affine_space(2), V({1, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotInReebCone);
  }
}

TEST(Minimize, ToricLibraryAgainstGridSearch) {
  // Brute-force oracle: scan the slice A = n on a grid through the polytope route.
  for (const auto& x : models::toric_library()) {
    auto r = minimize_nvol(x, default_init(x));
    EXPECT_TRUE(r.converged) << x.label;
    EXPECT_EQ(r.starts, 5);
    EXPECT_LT(r.start_spread, 1e-6) << x.label;
    EXPECT_TRUE(in_reeb_cone(x, r.argmin));
    EXPECT_EQ(log_discrepancy_toric(x, r.argmin), x.n);
    EXPECT_EQ(r.min_nvol_exact, normalized_volume(Rational(x.n), valuation_volume_toric(x, r.argmin), x.n));
    // grid over positive combinations of sigma rays, coarse but exhaustive in a box
    double grid_best = std::numeric_limits<double>::infinity();
    const auto& rays = x.sigma.rays;
    std::vector<int> c(rays.size(), 1);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == c.size()) {
        RVector xi(static_cast<std::size_t>(x.n), Rational(0));
        for (std::size_t j = 0; j < c.size(); ++j) xi = xi + Rational(c[j], 4) * rays[j];
        if (!in_reeb_cone(x, xi)) return;
        grid_best = std::min(grid_best, to_double(normalized_volume(log_discrepancy_toric(x, xi), valuation_volume_toric(x, xi), x.n)));
        return;
      }
      for (c[i] = 1; c[i] <= 8; ++c[i]) rec(i + 1);
    };
    if (rays.size() <= 4) rec(0);
    EXPECT_LE(r.min_nvol, grid_best + 1e-9) << x.label;
  }
}

TEST(Minimize, KnownToricMinima) {
  EXPECT_EQ(minimize_nvol(models::affine_space(2), V({1, 3})).min_nvol_exact, 4);
  EXPECT_EQ(minimize_nvol(models::conifold(), default_init(models::conifold())).min_nvol_exact, 16);
  EXPECT_EQ(minimize_nvol(models::c3_mod_z3(), default_init(models::c3_mod_z3())).min_nvol_exact, 9);
  EXPECT_EQ(minimize_nvol(models::toric_a_surface(2), default_init(models::toric_a_surface(2))).min_nvol_exact, 2);
}

TEST(Minimize, AkmCertifiedCases) {
  const std::vector<std::pair<int, int>> cases{{2, 2}, {2, 5}, {3, 1}, {3, 2}, {3, 3}, {4, 2}, {3, 4}, {4, 3}};
  for (auto [n, k] : cases) {
    auto f = akm_singularity(n, k);
    auto r = minimize_nvol(f, default_init(f));
    auto expect = to_doubles(normalize_weights(f, canonical_weights(n, k)).weights());
    EXPECT_LT(max_abs_diff(r.argmin_approx, expect), 1e-6) << n << "," << k;
    EXPECT_EQ(r.min_nvol_exact, pow(Rational((n - 2) * k + 2), n) / pow(Rational(k), n - 1)) << n << "," << k;
    EXPECT_TRUE(r.converged) << n << "," << k << " " << r.stop_reason << " " << r.iterations;
  }
}

TEST(Minimize, AkmConjecturedWeight) {
  for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 5}, {4, 4}}) {
    auto f = akm_singularity(n, k);
    auto r = minimize_nvol(f, default_init(f));
    const double ratio = r.argmin_approx.back() / r.argmin_approx.front();
    EXPECT_NEAR(ratio, double(n - 2) / (n - 1), 1e-6);
    Rational at;
    Rational grid = akm_grid_min(n, k, 4000, &at);
    EXPECT_LE(r.min_nvol_exact, grid);
    EXPECT_EQ(at, Rational(n - 2, n - 1));
  }
  auto f = akm_singularity(3, 5);
  auto r = minimize_nvol(f, default_init(f));
  EXPECT_EQ(r.min_nvol_exact, Q("27/2"));
  EXPECT_LT(r.min_nvol_exact, evaluate(f, canonical_weights(3, 5)).nvol.value);
  EXPECT_EQ(evaluate(f, canonical_weights(3, 5)).nvol.value, Q("343/25"));
}

TEST(Minimize, SymmetryClasses) {
  auto c = symmetry_classes(akm_singularity(3, 3));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(c[1], (std::vector<int>{3}));
  EXPECT_EQ(symmetry_classes(akm_singularity(3, 2)).size(), 1u);
  auto g = make_hypersurface({{2, 0, 0}, {0, 3, 0}, {0, 0, 5}});
  EXPECT_EQ(symmetry_classes(g).size(), 3u);
}

TEST(Minimize, SeedDeterminism) {
  auto x = models::cone_dp1();
  MinimizeOptions o;
  o.seed = 11;
  auto a = minimize_nvol(x, default_init(x), o);
  auto b = minimize_nvol(x, default_init(x), o);
  EXPECT_EQ(a.argmin, b.argmin);
  EXPECT_EQ(a.start_argmins, b.start_argmins);
}

TEST(Minimize, ConvexityProbe) {
  for (const auto& x : models::toric_library()) {
    auto r = minimize_nvol(x, default_init(x));
    auto probe = convexity_probe(x, r.argmin);
    EXPECT_EQ(probe.segments, 20) << x.label;
    EXPECT_GE(probe.min_second_difference, -1e-9) << x.label;
  }
}
