#ifndef OSSP_ESTIMATE_HPP
#define OSSP_ESTIMATE_HPP

// Empirical-Bayes estimation of (alpha, theta).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ossp/partition.hpp"

namespace ossp {

enum class Method { StdPYP, OrdPYP, OrdDP, LsK, LsX1 };

inline constexpr Method kAllMethods[] = {Method::StdPYP, Method::OrdPYP, Method::OrdDP,
                                         Method::LsK, Method::LsX1};

std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);

/// Search box. alpha = 0 is reached through a separate profile over theta.
inline constexpr double kAlphaMax = 1.0 - 1e-6;
inline constexpr double kThetaMin = 1e-6;
inline constexpr double kThetaMax = 1e6;
inline constexpr int kDefaultGridD = 20;

struct FitResult {
  PypParams params{0.0, 1.0};
  Method method = Method::OrdPYP;
  /// Log-likelihood for the likelihood methods, sum of squares for lsK/lsX1.
  double objective = 0.0;
  bool converged = false;
  /// Estimate sits on or within 1e-4 (alpha) or a factor 10 (theta) of the box edge,
  /// or at alpha = 0 for a method that also searches alpha.
  bool boundary = false;
  /// Objective constant over the search box; params follow a fixed convention.
  bool flat = false;
  int evaluations = 0;
};

/// The criterion of one method on one sample. For likelihood methods value()
/// is the log-likelihood; for least-squares methods it is the sum of squares.
class Objective {
 public:
  Objective(Method method, const ObservedSample& sample, int grid_d = kDefaultGridD);

  double value(const PypParams& params) const;
  /// Quantity minimized by the optimizer.
  double loss(const PypParams& params) const { return maximizes() ? -value(params) : value(params); }
  bool maximizes() const;
  Method method() const { return method_; }

 private:
  Method method_;
  std::vector<int> freqs_;
  PrefixStats prefix_;
};

FitResult fit(Method method, const ObservedSample& sample, int grid_d = kDefaultGridD);

FitResult fit_mle_std(const ObservedSample& sample);
FitResult fit_mle_ordered(const ObservedSample& sample);
FitResult fit_mle_ordered_dp(const ObservedSample& sample);
FitResult fit_lsK(const ObservedSample& sample, int d = kDefaultGridD);
FitResult fit_lsX1(const ObservedSample& sample, int d = kDefaultGridD);

}  // namespace ossp

#endif  // OSSP_ESTIMATE_HPP
