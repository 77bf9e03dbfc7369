#pragma once

// Quotient surface singularities C^2/G: dimensions of invariant polynomials of bounded degree
// by group averaging in exact cyclotomic arithmetic, and the resulting volume invariants.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "hvol/error.hpp"
#include "hvol/rational.hpp"

namespace hvol {

namespace detail {
inline Rational mod_one(const Rational& q) {
  Integer n = num(q), d = den(q);
  Integer r = n % d;
  if (r < 0) r += d;
  return Rational(r, d);
}
}  // namespace detail

/// A diagonalizable element of U(2) given by the rotation numbers of its eigenvalues exp(2 pi i eig).
class GroupElement {
 public:
  GroupElement(const Rational& eig1, const Rational& eig2) : eig1_(detail::mod_one(eig1)), eig2_(detail::mod_one(eig2)) {}
  const Rational& eig1() const { return eig1_; }
  const Rational& eig2() const { return eig2_; }
  bool is_identity() const { return eig1_ == 0 && eig2_ == 0; }
  /// Same element with the eigenvalues listed in the other order.
  GroupElement swapped() const { return GroupElement(eig2_, eig1_); }

 private:
  Rational eig1_, eig2_;  // in [0, 1)
};

struct FiniteGroupAction {
  std::string label;
  std::vector<GroupElement> elements;
  int order() const { return static_cast<int>(elements.size()); }
};

inline FiniteGroupAction make_group(std::vector<GroupElement> elements, std::string label = {}) {
  if (elements.empty()) throw Error(ErrorCode::kModelError, "group has no elements");
  if (std::none_of(elements.begin(), elements.end(), [](const GroupElement& g) { return g.is_identity(); }))
    throw Error(ErrorCode::kModelError, "group element list lacks the identity");
  return FiniteGroupAction{std::move(label), std::move(elements)};
}

/// 1/r(1, a): the generator acts by (zeta, zeta^a) with zeta a primitive r-th root of unity.
inline FiniteGroupAction cyclic_group(int r, int a) {
  if (r < 1) throw Error(ErrorCode::kDomainError, "cyclic group order must be positive");
  std::vector<GroupElement> els;
  for (int j = 0; j < r; ++j) els.emplace_back(Rational(j, r), Rational(static_cast<long>(a) * j, r));
  return make_group(std::move(els), "1/" + std::to_string(r) + "(1," + std::to_string(a) + ")");
}

/// No non-identity element has 1 as an eigenvalue.
inline bool check_free_in_codim1(const FiniteGroupAction& g) {
  for (const auto& e : g.elements)
    if (!e.is_identity() && (e.eig1() == 0 || e.eig2() == 0)) return false;
  return true;
}

namespace detail {

using IntPoly = std::vector<Integer>;  // coefficient of x^i at index i

inline void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division of a by a monic b.
inline IntPoly divide_monic(IntPoly a, const IntPoly& b) {
  trim(a);
  const std::size_t db = b.size() - 1;
  if (a.size() < b.size()) return {};
  IntPoly q(a.size() - db, 0);
  for (std::size_t i = a.size(); i-- > db;) {
    const Integer c = a[i];
    if (c == 0) continue;
    q[i - db] = c;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  trim(a);
  if (!a.empty()) throw Error(ErrorCode::kNonIntegerDimension, "cyclotomic division left a remainder");
  return q;
}

inline IntPoly remainder_monic(IntPoly a, const IntPoly& b) {
  const std::size_t db = b.size() - 1;
  for (std::size_t i = a.size(); i-- > db;) {
    const Integer c = a[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  trim(a);
  return a;
}

/// Phi_N from x^N - 1 = prod over d | N of Phi_d.
inline IntPoly cyclotomic(int N) {
  IntPoly p(static_cast<std::size_t>(N) + 1, 0);
  p[0] = -1;
  p[static_cast<std::size_t>(N)] = 1;
  for (int d = 1; d < N; ++d)
    if (N % d == 0) p = divide_monic(p, cyclotomic(d));
  return p;
}

}  // namespace detail

struct DimensionSeries {
  std::vector<Integer> dims;  // dims[m] = dim of invariant polynomials of degree < m
};

/// d_m for m = 0..M by averaging traces of Sym^l over the group.
inline DimensionSeries invariant_dimension_series(const FiniteGroupAction& g, int M) {
  if (M < 1) throw Error(ErrorCode::kDomainError, "M must be at least 1");
  Integer lcm = 1;
  for (const auto& e : g.elements) {
    lcm = boost::multiprecision::lcm(lcm, den(e.eig1()));
    lcm = boost::multiprecision::lcm(lcm, den(e.eig2()));
  }
  const int N = static_cast<int>(to_int64(lcm));
  const auto phi = detail::cyclotomic(N);
  // exponents of zeta = exp(2 pi i / N) for each eigenvalue
  std::vector<std::pair<int, int>> ex;
  for (const auto& e : g.elements)
    ex.emplace_back(static_cast<int>(to_int64(num(e.eig1() * N))), static_cast<int>(to_int64(num(e.eig2() * N))));

  // counts[k]: multiplicity of zeta^k in the running sum of all traces
  detail::IntPoly counts(static_cast<std::size_t>(N), 0);
  DimensionSeries out;
  out.dims.push_back(0);
  const Integer order = g.order();
  for (int l = 0; l < M; ++l) {
    for (const auto& [a, b] : ex)
      for (int i = 0; i <= l; ++i) {
        const long k = (static_cast<long>(a) * i + static_cast<long>(b) * (l - i)) % N;
        counts[static_cast<std::size_t>(k)] += 1;
      }
    auto r = detail::remainder_monic(counts, phi);
    if (r.size() > 1) throw Error(ErrorCode::kNonIntegerDimension, "averaged trace is not rational; element list is not closed");
    const Integer total = r.empty() ? Integer(0) : r[0];
    if (total % order != 0) throw Error(ErrorCode::kNonIntegerDimension, "averaged trace is not an integer at degree " + std::to_string(l));
    out.dims.push_back(total / order);
  }
  return out;
}

/// d_m + d_{m+1} == ((m+1)^2 + |G| - 1) / |G| for |G| dividing m.
inline bool pair_identity_check(const FiniteGroupAction& g, int m) {
  if (m < 1 || m % g.order() != 0) throw Error(ErrorCode::kPreconditionViolated, "|G| must divide m");
  if (!check_free_in_codim1(g)) throw Error(ErrorCode::kPreconditionViolated, "group is not free in codimension 1");
  const auto s = invariant_dimension_series(g, m + 1);
  const Integer lhs = s.dims[static_cast<std::size_t>(m)] + s.dims[static_cast<std::size_t>(m + 1)];
  const Integer rhs_num = Integer(m + 1) * (m + 1) + g.order() - 1;
  return rhs_num % g.order() == 0 && lhs == rhs_num / g.order();
}

struct QuotientVolume {
  double estimate = 0;  // d_M / (M^2 / 2)
  Rational exact;       // 1 / |G|
};

inline void require_free(const FiniteGroupAction& g) {
  if (!check_free_in_codim1(g)) throw Error(ErrorCode::kPreconditionViolated, "group is not free in codimension 1");
}

inline QuotientVolume quotient_volume(const FiniteGroupAction& g, int M) {
  require_free(g);
  const auto s = invariant_dimension_series(g, M);
  const Rational est = Rational(s.dims.back()) / (Rational(M) * M / 2);
  return QuotientVolume{to_double(est), Rational(1, g.order())};
}

struct QuotientMinimum {
  Rational nvol;     // 4 / |G|
  Rational logdisc;  // 2 at the minimizer
  Rational volume;   // 1 / |G| at the minimizer
};

inline QuotientMinimum quotient_min_nvol(const FiniteGroupAction& g) {
  require_free(g);
  const Rational vol(1, g.order());
  return QuotientMinimum{4 * vol, 2, vol};
}

namespace groups {

namespace detail {
inline void add(std::vector<GroupElement>& els, int count, const Rational& e1, const Rational& e2) {
  for (int i = 0; i < count; ++i) els.emplace_back(e1, e2);
}
inline void add_core(std::vector<GroupElement>& els) {
  add(els, 1, 0, 0);
  add(els, 1, Rational(1, 2), Rational(1, 2));
}
}  // namespace detail

// Binary polyhedral groups in SU(2), given by eigenvalue pairs per conjugacy class.

inline FiniteGroupAction quaternion8() {
  std::vector<GroupElement> e;
  detail::add_core(e);
  detail::add(e, 6, Rational(1, 4), Rational(3, 4));
  return make_group(std::move(e), "Q8");
}

inline FiniteGroupAction binary_dihedral12() {
  std::vector<GroupElement> e;
  for (int j = 0; j < 6; ++j) e.emplace_back(Rational(j, 6), Rational(-j, 6));
  detail::add(e, 6, Rational(1, 4), Rational(3, 4));
  return make_group(std::move(e), "BD12");
}

inline FiniteGroupAction binary_tetrahedral() {
  std::vector<GroupElement> e;
  detail::add_core(e);
  detail::add(e, 6, Rational(1, 4), Rational(3, 4));
  detail::add(e, 8, Rational(1, 6), Rational(5, 6));
  detail::add(e, 8, Rational(1, 3), Rational(2, 3));
  return make_group(std::move(e), "BT24");
}

inline FiniteGroupAction binary_octahedral() {
  std::vector<GroupElement> e;
  detail::add_core(e);
  detail::add(e, 18, Rational(1, 4), Rational(3, 4));
  detail::add(e, 8, Rational(1, 6), Rational(5, 6));
  detail::add(e, 8, Rational(1, 3), Rational(2, 3));
  detail::add(e, 6, Rational(1, 8), Rational(7, 8));
  detail::add(e, 6, Rational(3, 8), Rational(5, 8));
  return make_group(std::move(e), "BO48");
}

inline FiniteGroupAction binary_icosahedral() {
  std::vector<GroupElement> e;
  detail::add_core(e);
  detail::add(e, 30, Rational(1, 4), Rational(3, 4));
  detail::add(e, 20, Rational(1, 6), Rational(5, 6));
  detail::add(e, 20, Rational(1, 3), Rational(2, 3));
  detail::add(e, 12, Rational(1, 10), Rational(9, 10));
  detail::add(e, 12, Rational(3, 10), Rational(7, 10));
  detail::add(e, 12, Rational(1, 5), Rational(4, 5));
  detail::add(e, 12, Rational(2, 5), Rational(3, 5));
  return make_group(std::move(e), "BI120");
}

/// Cyclic 1/r(1,a) for r <= 12 and gcd(a, r) = 1, followed by the binary polyhedral groups.
inline std::vector<FiniteGroupAction> library() {
  std::vector<FiniteGroupAction> out;
  for (int r = 1; r <= 12; ++r)
    for (int a = (r == 1 ? 0 : 1); a < std::max(r, 1); ++a)
      if (std::gcd(a, r) == 1) out.push_back(cyclic_group(r, a));
  out.push_back(quaternion8());
  out.push_back(binary_dihedral12());
  out.push_back(binary_tetrahedral());
  out.push_back(binary_octahedral());
  out.push_back(binary_icosahedral());
  return out;
}

}  // namespace groups

}  // namespace hvol
