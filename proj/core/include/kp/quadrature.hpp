#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "kp/error.hpp"

namespace kp {

struct QuadratureOptions {
  double rel_tol = 1e-8;
  int initial_panels = 8;
  int max_depth = 48;
};

/// Adaptive Simpson integration of f over [a, b]. Each panel is split until
/// the halves agree with the whole to within the panel's share of the
/// tolerance (with the usual Richardson correction). A non-finite sample
/// throws kNumerical naming the abscissa.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               const QuadratureOptions& options = {}) {
  auto eval = [&](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kNumerical, "integrand is not finite at s = " + std::to_string(x), "s");
    }
    return v;
  };
  if (a == b) return 0.0;

  struct Panel {
    double a, b, fa, fm, fb, whole;
  };
  auto refine = [&](auto&& self, const Panel& p, double tol, int depth) -> double {
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return self(self, Panel{p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
           self(self, Panel{m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
  };

  const int n = std::max(1, options.initial_panels);
  const double h = (b - a) / n;
  std::vector<Panel> panels;
  double coarse = 0.0;
  double fa = eval(a);
  for (int k = 0; k < n; ++k) {
    const double pa = a + k * h;
    const double pb = k + 1 == n ? b : a + (k + 1) * h;
    const double fm = eval(0.5 * (pa + pb));
    const double fb = eval(pb);
    const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
    panels.push_back({pa, pb, fa, fm, fb, whole});
    coarse += whole;
    fa = fb;
  }
  // The absolute budget comes from the coarse estimate; a floor keeps
  // integrals that vanish from recursing to max depth.
  const double budget = options.rel_tol * std::max(std::abs(coarse), 1e-300);
  double total = 0.0;
  for (const Panel& p : panels) total += refine(refine, p, budget / n, options.max_depth);
  return total;
}

}  // namespace kp
