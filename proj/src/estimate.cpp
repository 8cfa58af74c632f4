#include "ossp/estimate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ossp/error.hpp"
#include "ossp/laws.hpp"
#include "ossp/optimize.hpp"
#include "ossp/parallel.hpp"

namespace ossp {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::StdPYP: return "stdPYP";
    case Method::OrdPYP: return "ordPYP";
    case Method::OrdDP: return "ordDP";
    case Method::LsK: return "lsK";
    case Method::LsX1: return "lsX1";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods)
    if (method_name(m) == name) return m;
  return std::nullopt;
}

namespace {

bool is_least_squares(Method m) { return m == Method::LsK || m == Method::LsX1; }

// E[K_{n_i}] at every grid size in one pass.
double lsk_loss(const PrefixStats& ps, double a, double t) {
  double loss = 0.0;
  double acc = 0.0;
  std::size_t g = 0;
  const int n = ps.grid.back();
  for (int i = 0; i < n && g < ps.grid.size(); ++i) {
    acc += a == 0.0 ? t / (t + i) : std::log1p(a / (t + i));
    if (i + 1 == ps.grid[g]) {
      const double e = a == 0.0 ? acc : t / a * std::expm1(acc);
      const double d = e - ps.k_at[g];
      loss += d * d;
      ++g;
    }
  }
  return loss;
}

double expected_m1_fast(int n, double a, double t) {
  auto lead = [&](int m1) { return a * (n - m1) + t * m1; };
  double log_p = std::log(lead(1)) - std::log(t + n - 1);
  double e = std::exp(log_p);
  for (int m1 = 1; m1 < n; ++m1) {
    log_p += std::log(static_cast<double>(n - m1) / (m1 + 1)) + std::log(lead(m1 + 1) / lead(m1)) +
             std::log((m1 - a) / (t + n - m1 - 1));
    e += (m1 + 1) * std::exp(log_p);
  }
  return e;
}

double lsx1_loss(const PrefixStats& ps, double a, double t) {
  double loss = 0.0;
  for (std::size_t g = 0; g < ps.grid.size(); ++g) {
    const double d = expected_m1_fast(ps.grid[g], a, t) - ps.m1_at[g];
    loss += d * d;
  }
  return loss;
}

}  // namespace

Objective::Objective(Method method, const ObservedSample& sample, int grid_d)
    : method_(method), freqs_(sample.partition.freqs().begin(), sample.partition.freqs().end()) {
  const int n = sample.n();
  if (is_least_squares(method)) {
    if (grid_d < 1) throw DomainError("grid size d must be >= 1");
    if (n < 2 || n < grid_d) throw DegenerateSample("least-squares fit needs n >= max(2, d)");
    prefix_ = prefix_stats(sample, grid_d);
  } else if (method != Method::OrdDP && n < 2) {
    throw DegenerateSample("likelihood fit needs n >= 2");
  }
}

bool Objective::maximizes() const { return !is_least_squares(method_); }

double Objective::value(const PypParams& params) const {
  const double a = params.alpha();
  const double t = params.theta();
  switch (method_) {
    case Method::StdPYP: return log_eppf(freqs_, params).log_magnitude;
    case Method::OrdPYP: return log_ordered_eppf(freqs_, params).log_magnitude;
    case Method::OrdDP: return log_ordered_eppf(freqs_, PypParams(0.0, t)).log_magnitude;
    case Method::LsK: return lsk_loss(prefix_, a, t);
    case Method::LsX1: return lsx1_loss(prefix_, a, t);
  }
  return 0.0;
}

namespace {

const double kLogThetaMin = std::log(kThetaMin);
const double kLogThetaMax = std::log(kThetaMax);

double alpha_of(double u) { return kAlphaMax / (1.0 + std::exp(-u)); }
double theta_of(double v) { return std::exp(std::clamp(v, kLogThetaMin, kLogThetaMax)); }

struct Candidate {
  double alpha;
  double theta;
  double loss;
};

bool at_boundary(const PypParams& p, bool alpha_free) {
  return (alpha_free && (p.alpha() == 0.0 || p.alpha() > 1.0 - 1e-4)) ||
         p.theta() < 10 * kThetaMin || p.theta() > kThetaMax / 10;
}

FitResult theta_only_fit(const Objective& obj, Method method) {
  FitResult out;
  out.method = method;
  auto f = [&](double v) { return obj.loss(PypParams(0.0, theta_of(v))); };
  const Minimum1 best = scan_then_golden(f, kLogThetaMin, kLogThetaMax, 57, 1e-11);
  const double at_one = f(0.0);
  out.evaluations = best.evaluations + 1;
  if (std::abs(best.value - at_one) <= 1e-14 * std::max(1.0, std::abs(at_one)) &&
      std::abs(f(kLogThetaMin) - at_one) <= 1e-14 * std::max(1.0, std::abs(at_one)) &&
      std::abs(f(kLogThetaMax) - at_one) <= 1e-14 * std::max(1.0, std::abs(at_one))) {
    out.flat = true;
    out.params = PypParams(0.0, 1.0);
  } else {
    out.params = PypParams(0.0, theta_of(best.x));
  }
  out.objective = obj.value(out.params);
  out.converged = best.converged || out.flat;
  out.boundary = !out.flat && at_boundary(out.params, false);
  return out;
}

}  // namespace

FitResult fit(Method method, const ObservedSample& sample, int grid_d) {
  const Objective obj(method, sample, grid_d);
  if (method == Method::OrdDP) return theta_only_fit(obj, method);

  // Stage 1: coarse grid over (alpha, log theta).
  static constexpr std::array<double, 12> kAlphaGrid{0.01, 0.05, 0.1, 0.2, 0.3, 0.4,
                                                     0.5,  0.6,  0.7, 0.8, 0.9, 0.99};
  constexpr int kThetaPoints = 25;  // 1e-3 .. 1e5, three per decade
  std::vector<Candidate> grid(kAlphaGrid.size() * kThetaPoints);
  parallel_for(grid.size(), [&](std::size_t i) {
    const double a = kAlphaGrid[i / kThetaPoints];
    const double t = std::pow(10.0, -3.0 + static_cast<double>(i % kThetaPoints) / 3.0);
    grid[i] = {a, t, obj.loss(PypParams(a, t))};
  });
  int evaluations = static_cast<int>(grid.size());
  std::stable_sort(grid.begin(), grid.end(),
                   [](const Candidate& x, const Candidate& y) { return x.loss < y.loss; });

  // Stage 2: simplex in (logit alpha, log theta) from the three best grid points,
  // restarted once from its own optimum.
  auto f = [&](const std::array<double, 2>& x) {
    return obj.loss(PypParams(alpha_of(x[0]), theta_of(x[1])));
  };
  Candidate best{0.0, 1.0, std::numeric_limits<double>::infinity()};
  bool converged = false;
  for (std::size_t s = 0; s < 3 && s < grid.size(); ++s) {
    const double u = std::log(grid[s].alpha / (kAlphaMax - grid[s].alpha));
    Minimum2 r = nelder_mead(f, {u, std::log(grid[s].theta)});
    const Minimum2 again = nelder_mead(f, r.x);
    evaluations += r.evaluations + again.evaluations;
    if (again.value <= r.value) r = Minimum2{again.x, again.value, 0, again.converged};
    if (r.value < best.loss) {
      best = {alpha_of(r.x[0]), theta_of(r.x[1]), r.value};
      converged = r.converged;
    }
  }
  if (grid.front().loss < best.loss) best = grid.front();

  // Stage 3: the alpha = 0 edge as a one-dimensional profile.
  const FitResult edge = theta_only_fit(obj, method);
  evaluations += edge.evaluations;
  const double edge_loss = obj.loss(edge.params);

  FitResult out;
  out.method = method;
  if (edge_loss <= best.loss) {
    out.params = edge.params;
    converged = edge.converged;
  } else {
    out.params = PypParams(best.alpha, best.theta);
  }
  out.objective = obj.value(out.params);
  out.converged = converged;
  out.evaluations = evaluations;
  const double spread = grid.back().loss - grid.front().loss;
  out.flat = std::abs(spread) <= 1e-14 * std::max(1.0, std::abs(grid.front().loss)) && edge.flat;
  out.boundary = !out.flat && at_boundary(out.params, true);
  return out;
}

FitResult fit_mle_std(const ObservedSample& sample) { return fit(Method::StdPYP, sample); }
FitResult fit_mle_ordered(const ObservedSample& sample) { return fit(Method::OrdPYP, sample); }
FitResult fit_mle_ordered_dp(const ObservedSample& sample) { return fit(Method::OrdDP, sample); }
FitResult fit_lsK(const ObservedSample& sample, int d) { return fit(Method::LsK, sample, d); }
FitResult fit_lsX1(const ObservedSample& sample, int d) { return fit(Method::LsX1, sample, d); }

}  // namespace ossp
