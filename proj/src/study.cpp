#include "ossp/study.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "ossp/csv.hpp"
#include "ossp/error.hpp"
#include "ossp/parallel.hpp"
#include "ossp/posterior.hpp"
#include "ossp/rng.hpp"

namespace ossp {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double x) { return std::isnan(x) ? "NA" : format_double(x); }

}  // namespace

double quantile(std::vector<double> xs, double p) {
  std::erase_if(xs, [](double x) { return std::isnan(x); });
  if (xs.empty()) return kNaN;
  std::sort(xs.begin(), xs.end());
  const double h = (static_cast<double>(xs.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

std::vector<int> curve_sizes(int m, int points) {
  if (m < 0) throw DomainError("curve needs m >= 0");
  if (points < 2) throw DomainError("curve needs at least 2 points");
  std::vector<int> out;
  for (int i = 0; i < points; ++i) {
    const int v = static_cast<int>(std::llround(static_cast<double>(i) * m / (points - 1)));
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

PredictionRow predict_at(int n, int k, int m1, int m, const PypParams& params) {
  const W1Moments w = expected_W1(n, m, k, m1, params);
  return {m, predict_K(n, k, m, params), w.expected, w.given_A1, w.given_B1, w.prob_A1};
}

std::vector<PredictionRow> predict_curve(const ObservedSample& sample, const PypParams& params,
                                         int m, int points) {
  std::vector<PredictionRow> rows;
  for (int mp : curve_sizes(m, points))
    rows.push_back(predict_at(sample.n(), sample.k(), sample.m1(), mp, params));
  return rows;
}

void write_prediction_csv(std::ostream& out, const std::vector<PredictionRow>& rows) {
  out << "m_partial,pred_K,pred_W1,pred_W1_given_A1,pred_W1_given_B1,prob_A1\n";
  for (const auto& r : rows) {
    out << r.m_partial << ',' << num(r.pred_K) << ',' << num(r.pred_W1) << ','
        << num(r.pred_W1_given_A1) << ',' << num(r.pred_W1_given_B1) << ',' << num(r.prob_A1)
        << '\n';
  }
}

const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::K: return "K";
    case Quantity::W1: return "W1";
    case Quantity::W1GivenA1: return "W1|A1";
    case Quantity::W1GivenB1: return "W1|B1";
  }
  return "?";
}

namespace {

constexpr Quantity kQuantities[] = {Quantity::K, Quantity::W1, Quantity::W1GivenA1,
                                    Quantity::W1GivenB1};

struct Truth {
  int k;
  int w1;
  bool a1;
};

template <typename Process>
Truth continue_process(Process process, int m, Rng& rng) {
  process.mark_all_old();
  process.run(m, rng);
  const auto tables = process.tables();
  return {process.k(), tables[0].count, !tables[0].old};
}

// Fits every method on the initial sample and scores the predictions against
// each continuation.
template <typename Process>
std::vector<SyntheticRow> score_dataset(const Process& initial, const SyntheticConfig& config,
                                        const std::string& scenario, int dataset, Rng& rng) {
  const ObservedSample sample = initial.to_sample();
  std::vector<Truth> truths;
  for (int c = 0; c < config.continuations; ++c) {
    Rng child = rng.split(static_cast<std::uint64_t>(c));
    truths.push_back(continue_process(initial, config.m, child));
  }
  std::vector<SyntheticRow> rows;
  for (Method method : config.methods) {
    const FitResult fitted = fit(method, sample, config.grid_d);
    const PredictionRow pred =
        predict_at(sample.n(), sample.k(), sample.m1(), config.m, fitted.params);
    for (Quantity q : kQuantities) {
      std::vector<double> errors;
      for (const Truth& t : truths) {
        auto err = [](double p, double o) { return std::abs(p - o) / o; };
        switch (q) {
          case Quantity::K: errors.push_back(err(pred.pred_K, t.k)); break;
          case Quantity::W1: errors.push_back(err(pred.pred_W1, t.w1)); break;
          case Quantity::W1GivenA1:
            if (t.a1) errors.push_back(err(pred.pred_W1_given_A1, t.w1));
            break;
          case Quantity::W1GivenB1:
            if (!t.a1) errors.push_back(err(pred.pred_W1_given_B1, t.w1));
            break;
        }
      }
      rows.push_back({"dataset", scenario, dataset, method, q, median(errors),
                      static_cast<int>(errors.size()), fitted.params.alpha(),
                      fitted.params.theta()});
    }
  }
  return rows;
}

void append_summary(std::vector<SyntheticRow>& rows, const std::string& scenario,
                    const SyntheticConfig& config) {
  for (Method method : config.methods) {
    for (Quantity q : kQuantities) {
      std::vector<double> values;
      for (const auto& r : rows) {
        if (r.table == "dataset" && r.scenario == scenario && r.method == method &&
            r.quantity == q && !std::isnan(r.value))
          values.push_back(r.value);
      }
      rows.push_back({"summary", scenario, -1, method, q, median(values),
                      static_cast<int>(values.size()), kNaN, kNaN});
    }
  }
}

void check_config(const SyntheticConfig& c) {
  if (c.datasets < 1 || c.continuations < 1 || c.n < 2 || c.m < 1)
    throw DomainError("study needs datasets, continuations, m >= 1 and n >= 2");
  if (c.methods.empty()) throw DomainError("study needs at least one method");
}

template <typename MakeProcess>
std::vector<SyntheticRow> run_scenario(const SyntheticConfig& config, const std::string& scenario,
                                       std::uint64_t scenario_index, MakeProcess make) {
  std::vector<std::vector<SyntheticRow>> per(config.datasets);
  parallel_for(per.size(), [&](std::size_t d) {
    Rng rng(config.seed, (scenario_index << 32) + d);
    auto process = make(rng);
    Rng sim = rng.split(1000003);
    process.run(config.n, sim);
    Rng cont = rng.split(1000033);
    per[d] = score_dataset(process, config, scenario, static_cast<int>(d), cont);
  });
  std::vector<SyntheticRow> rows;
  for (auto& p : per) rows.insert(rows.end(), p.begin(), p.end());
  append_summary(rows, scenario, config);
  return rows;
}

}  // namespace

std::vector<SyntheticRow> synthetic_correct(const SyntheticConfig& config) {
  check_config(config);
  return run_scenario(config, "model", 0, [&](Rng& rng) {
    const double a = rng.uniform(config.alpha_lo, config.alpha_hi);
    const double t = rng.uniform(config.theta_lo, config.theta_hi);
    return OrderedRestaurant(PypParams(a, t));
  });
}

std::vector<SyntheticRow> synthetic_misspec(const SyntheticConfig& config) {
  check_config(config);
  std::vector<SyntheticRow> rows;
  const ClusteringKind clusterings[] = {ClusteringKind::DP, ClusteringKind::PYP,
                                        ClusteringKind::Zipf};
  const char* cluster_names[] = {"DP", "PYP", "zipf"};
  const OrderingKind orderings[] = {OrderingKind::AlphaStable, OrderingKind::ArrivalWeighted};
  const char* ordering_names[] = {"alpha-stable", "arrival-weighted"};
  std::uint64_t index = 1;
  for (int oi = 0; oi < 2; ++oi) {
    for (int ci = 0; ci < 3; ++ci, ++index) {
      const std::string scenario = std::string(cluster_names[ci]) + "/" + ordering_names[oi];
      auto part = run_scenario(config, scenario, index, [&](Rng& rng) {
        ClusteringSpec cs;
        cs.kind = clusterings[ci];
        cs.alpha = rng.uniform(config.alpha_lo, config.alpha_hi);
        cs.theta = rng.uniform(config.theta_lo, config.theta_hi);
        cs.zipf_s = rng.uniform(config.zipf_lo, config.zipf_hi);
        OrderingSpec os;
        os.kind = orderings[oi];
        os.alpha = rng.uniform(config.order_alpha_lo, config.order_alpha_hi);
        return MisspecProcess(cs, os);
      });
      rows.insert(rows.end(), part.begin(), part.end());
    }
  }
  return rows;
}

void write_synthetic_csv(std::ostream& out, const std::vector<SyntheticRow>& rows) {
  out << "table,scenario,dataset,method,quantity,value,count,alpha_hat,theta_hat\n";
  for (const auto& r : rows) {
    out << r.table << ',' << csv_field(r.scenario) << ','
        << (r.dataset < 0 ? std::string("NA") : std::to_string(r.dataset)) << ','
        << method_name(r.method) << ',' << csv_field(quantity_name(r.quantity)) << ','
        << num(r.value) << ',' << r.count << ',' << num(r.alpha_hat) << ',' << num(r.theta_hat)
        << '\n';
  }
}

std::vector<OrderingPanel> default_ordering_panels() {
  return {{0.0, 1.0}, {0.25, 1.0}, {0.5, 0.5}, {0.75, 0.25}, {0.5, 1e-12}};
}

void write_ordering_csv(std::ostream& out, const std::vector<OrderingPanel>& panels, int n,
                        std::uint64_t replicates, std::uint64_t seed) {
  out << "panel,alpha,theta,k_n,order,order_from_youngest,mean,se,visits\n";
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const PypParams params(panels[p].alpha, panels[p].theta);
    const auto dist = ordering_distribution(n, params, replicates, seed + p);
    const std::string head =
        std::to_string(p + 1) + ',' + num(panels[p].alpha) + ',' + num(panels[p].theta) + ',';
    for (int k = 1; k <= n; ++k) {
      const auto visits = dist.visits[k - 1];
      for (int j = 1; j <= k + 1; ++j) {
        out << head << k << ',' << j << ',' << (k + 2 - j) << ','
            << (visits ? num(dist.mean[k - 1][j - 1]) : "NA") << ','
            << (visits ? num(dist.se[k - 1][j - 1]) : "NA") << ',' << visits << '\n';
      }
    }
    for (int j = 1; j <= n + 1; ++j) {
      out << head << "all," << j << ",NA," << num(dist.marginal[j - 1]) << ','
          << num(dist.marginal_se[j - 1]) << ',' << dist.replicates << '\n';
    }
  }
}

void write_prob_oldest_csv(std::ostream& out, const std::vector<double>& alphas,
                           const std::vector<double>& thetas, int n, OldestFormula formula) {
  out << "alpha,theta,n,i,prob\n";
  for (double a : alphas) {
    for (double t : thetas) {
      const auto curve = prob_oldest_curve(n, PypParams(a, t), formula);
      for (int i = 1; i <= n; ++i) {
        out << num(a) << ',' << num(t) << ',' << n << ',' << i << ',' << num(curve[i - 1])
            << '\n';
      }
    }
  }
}

namespace {

struct SplitOutcome {
  // [method][point]: predicted K and W1 along the curve; last point is the whole test set.
  std::vector<std::vector<PredictionRow>> curves;
  std::vector<int> observed_k;
  std::vector<int> observed_w1;
};

}  // namespace

void write_crossval_csv(std::ostream& out, const std::vector<Record>& records,
                        const CrossvalConfig& config) {
  if (config.splits < 1) throw DomainError("crossval needs splits >= 1");
  if (!(config.train_frac > 0.0 && config.train_frac <= 1.0))
    throw DomainError("train fraction must lie in (0, 1]");
  if (config.methods.empty()) throw DomainError("crossval needs at least one method");
  const int total = static_cast<int>(records.size());
  const int n_train = static_cast<int>(std::llround(config.train_frac * total));
  const bool needs_grid = std::any_of(config.methods.begin(), config.methods.end(),
                                      [](Method m) { return m == Method::LsK || m == Method::LsX1; });
  if (n_train < 2 || (needs_grid && n_train < config.grid_d))
    throw SplitTooSmall("training part has " + std::to_string(n_train) +
                        " records; need at least " +
                        std::to_string(needs_grid ? std::max(2, config.grid_d) : 2));
  const int m = total - n_train;
  const std::vector<int> sizes = curve_sizes(m, config.curve_points);

  std::vector<SplitOutcome> outcomes(config.splits);
  parallel_for(outcomes.size(), [&](std::size_t s) {
    std::vector<Record> shuffled = records;
    Rng rng(config.seed, s);
    for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.index(i)]);
    const ObservedSample train =
        reduce(std::vector<Record>(shuffled.begin(), shuffled.begin() + n_train));
    const ObservedSample full = reduce(shuffled);
    std::vector<int> at;
    for (int mp : sizes) at.push_back(n_train + mp);
    const PrefixStats observed = prefix_stats_at(full, at);
    SplitOutcome& o = outcomes[s];
    o.observed_k = observed.k_at;
    o.observed_w1 = observed.m1_at;
    for (Method method : config.methods) {
      const FitResult fitted = fit(method, train, config.grid_d);
      std::vector<PredictionRow> curve;
      for (int mp : sizes)
        curve.push_back(predict_at(train.n(), train.k(), train.m1(), mp, fitted.params));
      o.curves.push_back(std::move(curve));
    }
  });

  out << "table,split,method,quantity,m_partial,predicted,observed,error,lower,upper\n";
  auto line = [&](const char* table, const std::string& split, Method method, const char* q,
                  int mp, double pred, double obs, double lower, double upper) {
    const double err = std::isnan(obs) ? kNaN : std::abs(pred - obs) / obs;
    out << table << ',' << split << ',' << method_name(method) << ',' << q << ',' << mp << ','
        << num(pred) << ',' << num(obs) << ',' << num(err) << ',' << num(lower) << ','
        << num(upper) << '\n';
  };
  const std::size_t last = sizes.size() - 1;
  for (int s = 0; s < config.splits; ++s) {
    const auto& o = outcomes[s];
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      const auto& end = o.curves[mi][last];
      line("split", std::to_string(s), config.methods[mi], "K", m, end.pred_K, o.observed_k[last],
           kNaN, kNaN);
      line("split", std::to_string(s), config.methods[mi], "W1", m, end.pred_W1,
           o.observed_w1[last], kNaN, kNaN);
    }
  }
  for (int s = 0; s < config.splits; ++s) {
    const auto& o = outcomes[s];
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      for (std::size_t p = 0; p < sizes.size(); ++p) {
        const auto& row = o.curves[mi][p];
        line("curve", std::to_string(s), config.methods[mi], "K", sizes[p], row.pred_K,
             o.observed_k[p], kNaN, kNaN);
        line("curve", std::to_string(s), config.methods[mi], "W1", sizes[p], row.pred_W1,
             o.observed_w1[p], kNaN, kNaN);
      }
    }
  }
  for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
    for (std::size_t p = 0; p < sizes.size(); ++p) {
      std::vector<double> ks, ws;
      for (const auto& o : outcomes) {
        ks.push_back(o.curves[mi][p].pred_K);
        ws.push_back(o.curves[mi][p].pred_W1);
      }
      line("band", "NA", config.methods[mi], "K", sizes[p], median(ks), kNaN,
           quantile(ks, 0.025), quantile(ks, 0.975));
      line("band", "NA", config.methods[mi], "W1", sizes[p], median(ws), kNaN,
           quantile(ws, 0.025), quantile(ws, 0.975));
    }
  }
}

}  // namespace ossp
