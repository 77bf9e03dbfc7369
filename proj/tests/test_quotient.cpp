#include <gtest/gtest.h>

#include <complex>
#include <numbers>

#include "hvol/quotient.hpp"
#include "hvol/valuation.hpp"
#include "test_util.hpp"

using namespace hvol;
using hvol::test::Q;

namespace {

// Invariant monomials x^i y^j of degree < m under the generator (zeta, zeta^a), counted directly.
long cyclic_monomial_count(int r, int a, int m) {
  long c = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; i + j < m; ++j)
      if ((i + static_cast<long>(a) * j) % r == 0) ++c;
  return c;
}

// Floating-point group average of tr Sym^l, rounded.
long float_molien(const FiniteGroupAction& g, int m) {
  std::complex<double> total = 0;
  for (const auto& e : g.elements) {
    const auto l1 = std::polar(1.0, 2 * std::numbers::pi * to_double(e.eig1()));
    const auto l2 = std::polar(1.0, 2 * std::numbers::pi * to_double(e.eig2()));
    for (int l = 0; l < m; ++l)
      for (int i = 0; i <= l; ++i) total += std::pow(l1, i) * std::pow(l2, l - i);
  }
  return std::lround(total.real() / g.order());
}

// Sum of coefficients below degree m of (1 + t^h) / ((1 - t^a)(1 - t^b)).
long klein_series_count(int a, int b, int h, int m) {
  long c = 0;
  for (int i = 0; i * a < m; ++i)
    for (int j = 0; i * a + j * b < m; ++j) {
      ++c;
      if (i * a + j * b + h < m) ++c;
    }
  return c;
}

}  // namespace

TEST(Quotient, CyclicElements) {
  auto z2 = cyclic_group(2, 1);
  ASSERT_EQ(z2.order(), 2);
  EXPECT_EQ(z2.elements[1].eig1(), Q("1/2"));
  EXPECT_EQ(z2.elements[1].eig2(), Q("1/2"));
  auto z3 = cyclic_group(3, 2);
  EXPECT_EQ(z3.elements[2].eig2(), Q("1/3"));
  EXPECT_TRUE(z3.elements[0].is_identity());
  EXPECT_THROW(cyclic_group(0, 1), Error);
  EXPECT_THROW(make_group({GroupElement(Q("1/2"), Q("1/2"))}), Error);
}

TEST(Quotient, FreeInCodimOne) {
  EXPECT_TRUE(check_free_in_codim1(cyclic_group(2, 1)));
  EXPECT_FALSE(check_free_in_codim1(cyclic_group(4, 2)));
  EXPECT_TRUE(check_free_in_codim1(cyclic_group(1, 0)));
  for (const auto& g : groups::library()) EXPECT_TRUE(check_free_in_codim1(g)) << g.label;
}

TEST(Quotient, HandSeries) {
  auto s = invariant_dimension_series(cyclic_group(3, 2), 4);
  EXPECT_EQ(s.dims[3], 2);
  EXPECT_EQ(s.dims[4], 4);
  auto t = invariant_dimension_series(cyclic_group(1, 0), 30);
  for (int m = 0; m <= 30; ++m) EXPECT_EQ(t.dims[static_cast<std::size_t>(m)], m * (m + 1) / 2);
  EXPECT_EQ(t.dims[0], 0);
}

TEST(Quotient, CyclicSeriesAgainstMonomialCount) {
  for (int r = 1; r <= 12; ++r)
    for (int a = 0; a < r; ++a) {
      auto s = invariant_dimension_series(cyclic_group(r, a), 40);
      for (int m = 0; m <= 40; ++m) EXPECT_EQ(s.dims[static_cast<std::size_t>(m)], cyclic_monomial_count(r, a, m)) << r << "," << a;
    }
}

TEST(Quotient, PolyhedralSeriesAgainstKleinInvariants) {
  struct Case {
    FiniteGroupAction g;
    int a, b, h;
  };
  std::vector<Case> cases{{groups::quaternion8(), 4, 4, 6},
                          {groups::binary_dihedral12(), 4, 6, 8},
                          {groups::binary_tetrahedral(), 6, 8, 12},
                          {groups::binary_octahedral(), 8, 12, 18},
                          {groups::binary_icosahedral(), 12, 20, 30}};
  for (const auto& c : cases) {
    auto s = invariant_dimension_series(c.g, 90);
    for (int m = 0; m <= 90; ++m) EXPECT_EQ(s.dims[static_cast<std::size_t>(m)], klein_series_count(c.a, c.b, c.h, m)) << c.g.label << " m=" << m;
    for (int m = 0; m <= 30; m += 7) EXPECT_EQ(s.dims[static_cast<std::size_t>(m)], float_molien(c.g, m));
  }
}

TEST(Quotient, SeriesMonotoneAndConjugationInvariant) {
  for (const auto& g : groups::library()) {
    auto s = invariant_dimension_series(g, 50);
    EXPECT_EQ(s.dims[1], 1);
    for (std::size_t m = 1; m < s.dims.size(); ++m) EXPECT_LE(s.dims[m - 1], s.dims[m]);
    FiniteGroupAction sw = g;
    for (auto& e : sw.elements) e = e.swapped();
    EXPECT_EQ(invariant_dimension_series(sw, 50).dims, s.dims) << g.label;
  }
}

TEST(Quotient, ClosureBugIsDetected) {
  // an element list that is not a group: averaging gives a non-integer
  auto bad = make_group({GroupElement(0, 0), GroupElement(Q("1/3"), Q("2/3"))});
  try {
    invariant_dimension_series(bad, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonIntegerDimension);
  }
}

TEST(Quotient, PairIdentity) {
  EXPECT_TRUE(pair_identity_check(cyclic_group(3, 2), 3));
  EXPECT_TRUE(pair_identity_check(cyclic_group(2, 1), 2));
  EXPECT_TRUE(pair_identity_check(cyclic_group(1, 0), 1));
  auto s = invariant_dimension_series(cyclic_group(2, 1), 3);
  EXPECT_EQ(s.dims[2] + s.dims[3], 5);
  for (const auto& g : groups::library())
    for (int m = g.order(); m <= 60; m += g.order()) EXPECT_TRUE(pair_identity_check(g, m)) << g.label << " m=" << m;
  EXPECT_THROW(pair_identity_check(cyclic_group(3, 2), 4), Error);
  EXPECT_THROW(pair_identity_check(cyclic_group(4, 2), 4), Error);
}

TEST(Quotient, VolumeAndMinimum) {
  EXPECT_EQ(quotient_volume(cyclic_group(2, 1), 10).exact, Q("1/2"));
  EXPECT_EQ(quotient_volume(cyclic_group(5, 2), 10).exact, Q("1/5"));
  EXPECT_EQ(quotient_volume(cyclic_group(1, 0), 10).exact, 1);
  for (const auto& g : groups::library()) {
    auto v = quotient_volume(g, 400);
    EXPECT_LE(std::abs(v.estimate - to_double(v.exact)), 2.0 / 400) << g.label;
  }
  EXPECT_EQ(quotient_min_nvol(cyclic_group(2, 1)).nvol, 2);
  EXPECT_EQ(quotient_min_nvol(cyclic_group(7, 3)).nvol, Q("4/7"));
  auto triv = quotient_min_nvol(cyclic_group(1, 0));
  EXPECT_EQ(triv.nvol, 4);
  EXPECT_EQ(triv.logdisc, 2);
  EXPECT_EQ(triv.volume, 1);
  EXPECT_THROW(quotient_min_nvol(cyclic_group(4, 2)), Error);
  EXPECT_THROW(quotient_volume(cyclic_group(4, 2), 10), Error);
}

TEST(Quotient, AgreesWithHypersurfaceRoute) {
  // C^2 / Z_k in SU(2) is the surface x^2 + y^2 + z^k
  for (int k = 1; k <= 8; ++k) {
    auto f = akm_singularity(2, k);
    EXPECT_EQ(quotient_min_nvol(cyclic_group(k, k - 1 == 0 ? 0 : k - 1)).nvol, evaluate(f, canonical_weights(2, k)).nvol.value);
  }
}
