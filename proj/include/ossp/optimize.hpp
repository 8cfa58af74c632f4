#ifndef OSSP_OPTIMIZE_HPP
#define OSSP_OPTIMIZE_HPP

// Derivative-free minimizers used by the estimators.

#include <array>
#include <functional>

namespace ossp {

struct NelderMeadOptions {
  double initial_step = 0.5;
  double ftol = 1e-13;   // relative spread of simplex values
  double xtol = 1e-9;    // simplex diameter
  int max_evaluations = 4000;
};

struct Minimum2 {
  std::array<double, 2> x{};
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

Minimum2 nelder_mead(const std::function<double(const std::array<double, 2>&)>& f,
                     std::array<double, 2> start, const NelderMeadOptions& options = {});

struct Minimum1 {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Golden-section search on [lo, hi] for a unimodal f, stopping when the
/// bracket is narrower than tol.
Minimum1 golden_section(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-10);

/// Scans `points` equally spaced abscissae over [lo, hi] and refines the best
/// one by golden section on its neighbouring bracket.
Minimum1 scan_then_golden(const std::function<double(double)>& f, double lo, double hi,
                          int points, double tol = 1e-10);

}  // namespace ossp

#endif  // OSSP_OPTIMIZE_HPP
