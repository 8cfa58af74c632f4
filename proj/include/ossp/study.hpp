#ifndef OSSP_STUDY_HPP
#define OSSP_STUDY_HPP

// Prediction curves and the simulation / cross-validation studies. Every
// writer emits long-format CSV with a fixed header; missing values are "NA".

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ossp/estimate.hpp"
#include "ossp/laws.hpp"
#include "ossp/ocrp.hpp"
#include "ossp/partition.hpp"

namespace ossp {

struct PredictionRow {
  int m_partial = 0;
  double pred_K = 0.0;
  double pred_W1 = 0.0;
  double pred_W1_given_A1 = 0.0;  // NaN at m_partial = 0
  double pred_W1_given_B1 = 0.0;
  double prob_A1 = 0.0;
};

/// `points` equally spaced sizes from 0 to m inclusive, deduplicated.
std::vector<int> curve_sizes(int m, int points);

PredictionRow predict_at(int n, int k, int m1, int m, const PypParams& params);
std::vector<PredictionRow> predict_curve(const ObservedSample& sample, const PypParams& params,
                                         int m, int points);
void write_prediction_csv(std::ostream& out, const std::vector<PredictionRow>& rows);

enum class Quantity { K, W1, W1GivenA1, W1GivenB1 };
const char* quantity_name(Quantity q);

struct SyntheticConfig {
  int datasets = 20;
  int continuations = 10;
  int n = 500;
  int m = 2000;
  int grid_d = kDefaultGridD;
  std::uint64_t seed = 1;
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  // Parameter draws per dataset: alpha ~ U[alpha_lo, alpha_hi], theta ~ U[theta_lo, theta_hi],
  // Zipf s ~ U[zipf_lo, zipf_hi], alpha-stable ordering alpha ~ U[order_alpha_lo, order_alpha_hi].
  double alpha_lo = 0.0, alpha_hi = 0.8;
  double theta_lo = 1.0, theta_hi = 50.0;
  double zipf_lo = 1.5, zipf_hi = 3.0;
  double order_alpha_lo = 0.1, order_alpha_hi = 0.9;
};

/// One output line. table "dataset": median error over the continuations of
/// one dataset (conditional quantities use only continuations where the event
/// occurred). table "summary": median of the dataset medians.
struct SyntheticRow {
  std::string table;
  std::string scenario;
  int dataset = -1;
  Method method = Method::OrdPYP;
  Quantity quantity = Quantity::K;
  double value = 0.0;  // NaN if no continuation qualified
  int count = 0;       // continuations (dataset) or datasets (summary) behind value
  double alpha_hat = 0.0;
  double theta_hat = 0.0;
};

/// Data drawn from the ordered PYP itself; scenario "model".
std::vector<SyntheticRow> synthetic_correct(const SyntheticConfig& config);
/// Crossed {DP, PYP, zipf} x {alpha-stable, arrival-weighted} generators.
std::vector<SyntheticRow> synthetic_misspec(const SyntheticConfig& config);
void write_synthetic_csv(std::ostream& out, const std::vector<SyntheticRow>& rows);

struct OrderingPanel {
  double alpha;
  double theta;
};

/// Ordered DP, alpha < theta, alpha = theta, alpha > theta, and the
/// alpha-stable limit (theta = 1e-12).
std::vector<OrderingPanel> default_ordering_panels();

/// Columns: panel,alpha,theta,k_n,order,order_from_youngest,mean,se,visits.
/// order 1 is the largest weight; order_from_youngest = k_n + 2 - order.
/// Marginal rows carry k_n = all.
void write_ordering_csv(std::ostream& out, const std::vector<OrderingPanel>& panels, int n,
                        std::uint64_t replicates, std::uint64_t seed);

/// Columns: alpha,theta,n,i,prob.
void write_prob_oldest_csv(std::ostream& out, const std::vector<double>& alphas,
                           const std::vector<double>& thetas, int n, OldestFormula formula);

struct CrossvalConfig {
  int splits = 100;
  double train_frac = 1.0 / 21.0;  // test set about 20 times the training set
  int curve_points = 11;
  int grid_d = kDefaultGridD;
  std::uint64_t seed = 1;
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
};

/// Columns: table,split,method,quantity,m_partial,predicted,observed,error,lower,upper.
/// table split: whole-test-set prediction per split; curve: prediction at each
/// partial test size; band: 2.5% and 97.5% quantiles of the predicted curve
/// across splits. Throws SplitTooSmall when the training part is too small.
void write_crossval_csv(std::ostream& out, const std::vector<Record>& records,
                        const CrossvalConfig& config);

/// Empirical quantile with linear interpolation (type 7).
double quantile(std::vector<double> xs, double p);
double median(std::vector<double> xs);

}  // namespace ossp

#endif  // OSSP_STUDY_HPP
