#include "ossp/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ossp {

Minimum2 nelder_mead(const std::function<double(const std::array<double, 2>&)>& f,
                     std::array<double, 2> start, const NelderMeadOptions& options) {
  using Point = std::array<double, 2>;
  std::array<Point, 3> p{start, start, start};
  p[1][0] += options.initial_step;
  p[2][1] += options.initial_step;
  std::array<double, 3> v{};
  int evals = 0;
  auto eval = [&](const Point& x) {
    ++evals;
    const double y = f(x);
    return std::isnan(y) ? std::numeric_limits<double>::infinity() : y;
  };
  for (int i = 0; i < 3; ++i) v[i] = eval(p[i]);

  auto along = [](const Point& c, const Point& w, double t) {
    return Point{c[0] + t * (w[0] - c[0]), c[1] + t * (w[1] - c[1])};
  };

  bool converged = false;
  while (evals < options.max_evaluations) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    std::array<Point, 3> sp{p[idx[0]], p[idx[1]], p[idx[2]]};
    std::array<double, 3> sv{v[idx[0]], v[idx[1]], v[idx[2]]};
    p = sp;
    v = sv;

    double diameter = 0.0;
    for (int i = 1; i < 3; ++i)
      diameter = std::max(diameter, std::hypot(p[i][0] - p[0][0], p[i][1] - p[0][1]));
    const double spread = std::abs(v[2] - v[0]);
    if (std::isfinite(v[0]) &&
        (spread <= options.ftol * (std::abs(v[0]) + 1e-300) || diameter <= options.xtol)) {
      converged = true;
      break;
    }

    const Point c{(p[0][0] + p[1][0]) / 2, (p[0][1] + p[1][1]) / 2};
    const Point xr = along(c, p[2], -1.0);
    const double fr = eval(xr);
    if (fr < v[0]) {
      const Point xe = along(c, p[2], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        p[2] = xe;
        v[2] = fe;
      } else {
        p[2] = xr;
        v[2] = fr;
      }
      continue;
    }
    if (fr < v[1]) {
      p[2] = xr;
      v[2] = fr;
      continue;
    }
    const bool outside = fr < v[2];
    const Point xc = along(c, p[2], outside ? -0.5 : 0.5);
    const double fc = eval(xc);
    if (fc < (outside ? fr : v[2])) {
      p[2] = xc;
      v[2] = fc;
      continue;
    }
    for (int i = 1; i < 3; ++i) {
      p[i] = along(p[0], p[i], 0.5);
      v[i] = eval(p[i]);
    }
  }
  const int best = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
  return {p[best], v[best], evals, converged};
}

Minimum1 golden_section(const std::function<double(double)>& f, double lo, double hi,
                        double tol) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  int evals = 2;
  while (b - a > tol && evals < 400) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = f(x2);
    }
    ++evals;
  }
  const bool converged = b - a <= tol;
  return f1 <= f2 ? Minimum1{x1, f1, evals, converged} : Minimum1{x2, f2, evals, converged};
}

Minimum1 scan_then_golden(const std::function<double(double)>& f, double lo, double hi,
                          int points, double tol) {
  const double h = (hi - lo) / (points - 1);
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double y = f(lo + i * h);
    if (y < best_value) {
      best_value = y;
      best = i;
    }
  }
  const double a = lo + std::max(0, best - 1) * h;
  const double b = lo + std::min(points - 1, best + 1) * h;
  Minimum1 refined = golden_section(f, a, b, tol);
  refined.evaluations += points;
  if (best_value < refined.value) {
    refined.x = lo + best * h;
    refined.value = best_value;
  }
  return refined;
}

}  // namespace ossp
