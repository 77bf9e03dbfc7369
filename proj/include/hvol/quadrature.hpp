#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace hvol {

namespace detail {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol) return left + right + delta / 15;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) + simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] with absolute tolerance `tol`.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-10, int max_depth = 50) {
  if (a == b) return 0;
  if (a > b) return -adaptive_simpson(f, b, a, tol, max_depth);
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Sum of adaptive Simpson integrals over consecutive knots; f need only be smooth between knots.
inline double integrate_between_knots(const std::function<double(double)>& f, const std::vector<double>& knots, double tol = 1e-10) {
  double total = 0;
  const double per = knots.size() > 1 ? tol / static_cast<double>(knots.size() - 1) : tol;
  for (std::size_t i = 1; i < knots.size(); ++i) total += adaptive_simpson(f, knots[i - 1], knots[i], per);
  return total;
}

}  // namespace hvol
