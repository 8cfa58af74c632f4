// ossp: command-line front end for the ordered species-sampling library.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ossp/csv.hpp"
#include "ossp/error.hpp"
#include "ossp/estimate.hpp"
#include "ossp/laws.hpp"
#include "ossp/ocrp.hpp"
#include "ossp/study.hpp"

namespace {

using namespace ossp;

constexpr int kExitParse = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitOther = 1;

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

ObservedSample load(const std::string& path) { return reduce(read_records_file(path)); }

std::vector<Method> methods_from(const std::string& name) {
  if (name == "all") return {std::begin(kAllMethods), std::end(kAllMethods)};
  const auto m = parse_method(name);
  if (!m) throw DomainError("unknown method '" + name + "'");
  return {*m};
}

nlohmann::ordered_json to_json(const FitResult& r, const ObservedSample& sample) {
  nlohmann::ordered_json j;
  j["method"] = std::string(method_name(r.method));
  j["alpha"] = r.params.alpha();
  j["theta"] = r.params.theta();
  j["objective"] = r.objective;
  j["converged"] = r.converged;
  j["boundary"] = r.boundary;
  j["flat"] = r.flat;
  j["evaluations"] = r.evaluations;
  j["n"] = sample.n();
  j["k"] = sample.k();
  j["m1"] = sample.m1();
  return j;
}

const std::map<std::string, ClusteringKind> kClusterings{
    {"dp", ClusteringKind::DP}, {"pyp", ClusteringKind::PYP}, {"zipf", ClusteringKind::Zipf}};
const std::map<std::string, OrderingKind> kOrderings{
    {"alpha-stable", OrderingKind::AlphaStable}, {"arrival-weighted", OrderingKind::ArrivalWeighted}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ordered Pitman-Yor species sampling: simulate, fit, predict, study."};
  app.require_subcommand(1);
  std::string output;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Draw an ordered sample as weight,species CSV");
  int sim_n = 100;
  double sim_alpha = 0.5, sim_theta = 1.0;
  std::uint64_t sim_seed = 1;
  std::string sim_clustering, sim_ordering = "alpha-stable";
  double sim_zipf = 2.0, sim_order_alpha = 0.5;
  sim->add_option("-n", sim_n, "Sample size")->check(CLI::PositiveNumber);
  sim->add_option("--alpha", sim_alpha, "Discount alpha in [0,1)");
  sim->add_option("--theta", sim_theta, "Concentration theta > 0");
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--clustering", sim_clustering,
                  "Misspecified generator clustering: dp, pyp or zipf (default: ordered CRP)")
      ->check(CLI::IsMember({"dp", "pyp", "zipf"}));
  sim->add_option("--ordering", sim_ordering, "Misspecified ordering: alpha-stable or arrival-weighted")
      ->check(CLI::IsMember({"alpha-stable", "arrival-weighted"}));
  sim->add_option("--zipf-s", sim_zipf, "Zipf exponent s > 1");
  sim->add_option("--order-alpha", sim_order_alpha, "alpha of the alpha-stable ordering");
  sim->add_option("-o,--output", output, "Output file (default stdout)");

  // fit
  auto* fitc = app.add_subcommand("fit", "Estimate (alpha, theta); prints JSON");
  std::string fit_input, fit_method = "all";
  int fit_d = kDefaultGridD;
  fitc->add_option("input", fit_input, "weight,species CSV")->required();
  fitc->add_option("--method", fit_method, "stdPYP, ordPYP, ordDP, lsK, lsX1 or all")
      ->check(CLI::IsMember({"stdPYP", "ordPYP", "ordDP", "lsK", "lsX1", "all"}));
  fitc->add_option("--grid-d", fit_d, "Prefix grid size for lsK/lsX1")->check(CLI::PositiveNumber);
  fitc->add_option("-o,--output", output, "Output file (default stdout)");

  // predict
  auto* pred = app.add_subcommand("predict", "Posterior-mean predictions for m further draws");
  std::string pred_input, pred_from = "fit", pred_method = "ordPYP";
  int pred_m = 100, pred_points = 11, pred_d = kDefaultGridD;
  double pred_alpha = 0.5, pred_theta = 1.0;
  pred->add_option("input", pred_input, "weight,species CSV")->required();
  pred->add_option("--m", pred_m, "Additional sample size")->check(CLI::PositiveNumber);
  pred->add_option("--params-from", pred_from, "fit or explicit")
      ->check(CLI::IsMember({"fit", "explicit"}));
  pred->add_option("--method", pred_method, "Estimation method when --params-from fit")
      ->check(CLI::IsMember({"stdPYP", "ordPYP", "ordDP", "lsK", "lsX1"}));
  pred->add_option("--alpha", pred_alpha, "alpha when --params-from explicit");
  pred->add_option("--theta", pred_theta, "theta when --params-from explicit");
  pred->add_option("--curve-points", pred_points, "Equally spaced sizes from 0 to m")
      ->check(CLI::Range(2, 1000000));
  pred->add_option("--grid-d", pred_d, "Prefix grid size for lsK/lsX1")->check(CLI::PositiveNumber);
  pred->add_option("-o,--output", output, "Output file (default stdout)");

  // study
  auto* study = app.add_subcommand("study", "Simulation studies; prints long-format CSV");
  std::string study_kind;
  SyntheticConfig sc;
  int ord_n = 10;
  std::uint64_t ord_reps = 100000;
  std::vector<double> st_alpha, st_theta;
  int po_n = 1000;
  std::string po_formula = "exact";
  std::uint64_t study_seed = 1;
  study->add_option("--kind", study_kind, "synthetic-correct, synthetic-misspec, ordering-dist or prob-oldest")
      ->required()
      ->check(CLI::IsMember({"synthetic-correct", "synthetic-misspec", "ordering-dist", "prob-oldest"}));
  study->add_option("--seed", study_seed, "RNG seed");
  study->add_option("--datasets", sc.datasets, "Synthetic: initial datasets")->check(CLI::PositiveNumber);
  study->add_option("--continuations", sc.continuations, "Synthetic: continuations per dataset")
      ->check(CLI::PositiveNumber);
  study->add_option("--n", sc.n, "Synthetic: initial sample size")->check(CLI::Range(2, 100000000));
  study->add_option("--m", sc.m, "Synthetic: additional sample size")->check(CLI::PositiveNumber);
  study->add_option("--grid-d", sc.grid_d, "Prefix grid size for lsK/lsX1")->check(CLI::PositiveNumber);
  study->add_option("--ordering-n", ord_n, "Ordering-dist: sample size")->check(CLI::PositiveNumber);
  study->add_option("--replicates", ord_reps, "Ordering-dist: Monte Carlo runs per panel")
      ->check(CLI::PositiveNumber);
  study->add_option("--alpha", st_alpha, "Ordering-dist / prob-oldest alpha values");
  study->add_option("--theta", st_theta, "Ordering-dist / prob-oldest theta values");
  study->add_option("--oldest-n", po_n, "Prob-oldest: sample size")->check(CLI::PositiveNumber);
  study->add_option("--formula", po_formula, "Prob-oldest: exact or unshifted")
      ->check(CLI::IsMember({"exact", "unshifted"}));
  study->add_option("-o,--output", output, "Output file (default stdout)");

  // crossval
  auto* cv = app.add_subcommand("crossval", "Random train/test splits of a CSV");
  std::string cv_input, cv_method = "all";
  CrossvalConfig cc;
  cv->add_option("input", cv_input, "weight,species CSV")->required();
  cv->add_option("--splits", cc.splits, "Number of random splits")->check(CLI::PositiveNumber);
  cv->add_option("--train-frac", cc.train_frac, "Training fraction in (0,1]");
  cv->add_option("--seed", cc.seed, "RNG seed");
  cv->add_option("--curve-points", cc.curve_points, "Curve sizes from 0 to the test size")
      ->check(CLI::Range(2, 1000000));
  cv->add_option("--grid-d", cc.grid_d, "Prefix grid size for lsK/lsX1")->check(CLI::PositiveNumber);
  cv->add_option("--method", cv_method, "One method or all")
      ->check(CLI::IsMember({"stdPYP", "ordPYP", "ordDP", "lsK", "lsX1", "all"}));
  cv->add_option("-o,--output", output, "Output file (default stdout)");

  // probability-oldest
  auto* po = app.add_subcommand("probability-oldest", "P_n(i): a frequency-i species has order 1");
  int po_i = 0;
  double po_alpha = 0.5, po_theta = 1.0;
  std::string po_formula1 = "exact";
  po->add_option("--n", po_n, "Sample size")->check(CLI::PositiveNumber);
  po->add_option("--i", po_i, "Frequency (default: every i = 1..n)");
  po->add_option("--alpha", po_alpha, "alpha in [0,1)");
  po->add_option("--theta", po_theta, "theta > 0");
  po->add_option("--formula", po_formula1, "exact or unshifted")
      ->check(CLI::IsMember({"exact", "unshifted"}));
  po->add_option("-o,--output", output, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ostringstream out;
    if (*sim) {
      ObservedSample s;
      if (sim_clustering.empty()) {
        s = simulate(sim_n, PypParams(sim_alpha, sim_theta), sim_seed);
      } else {
        ClusteringSpec cs{kClusterings.at(sim_clustering), sim_alpha, sim_theta, sim_zipf};
        OrderingSpec os{kOrderings.at(sim_ordering), sim_order_alpha};
        s = misspec_simulate(sim_n, cs, os, sim_seed);
      }
      write_records(out, s.records);
    } else if (*fitc) {
      const ObservedSample s = load(fit_input);
      if (fit_method == "all") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (Method m : kAllMethods) arr.push_back(to_json(fit(m, s, fit_d), s));
        out << arr.dump(2) << '\n';
      } else {
        out << to_json(fit(*parse_method(fit_method), s, fit_d), s).dump(2) << '\n';
      }
    } else if (*pred) {
      const ObservedSample s = load(pred_input);
      const PypParams params = pred_from == "explicit"
                                   ? PypParams(pred_alpha, pred_theta)
                                   : fit(*parse_method(pred_method), s, pred_d).params;
      write_prediction_csv(out, predict_curve(s, params, pred_m, pred_points));
    } else if (*study) {
      sc.seed = study_seed;
      if (study_kind == "synthetic-correct") {
        write_synthetic_csv(out, synthetic_correct(sc));
      } else if (study_kind == "synthetic-misspec") {
        write_synthetic_csv(out, synthetic_misspec(sc));
      } else if (study_kind == "ordering-dist") {
        std::vector<OrderingPanel> panels;
        if (st_alpha.empty() && st_theta.empty()) {
          panels = default_ordering_panels();
        } else {
          if (st_alpha.size() != st_theta.size())
            throw DomainError("ordering-dist needs matching --alpha and --theta lists");
          for (std::size_t i = 0; i < st_alpha.size(); ++i) panels.push_back({st_alpha[i], st_theta[i]});
        }
        write_ordering_csv(out, panels, ord_n, ord_reps, study_seed);
      } else {
        if (st_alpha.empty()) st_alpha = {0.0, 0.25, 0.5, 0.75};
        if (st_theta.empty()) st_theta = {1.0, 10.0, 100.0, 500.0};
        write_prob_oldest_csv(out, st_alpha, st_theta, po_n,
                              po_formula == "exact" ? OldestFormula::Exact : OldestFormula::Unshifted);
      }
    } else if (*cv) {
      cc.methods = methods_from(cv_method);
      write_crossval_csv(out, read_records_file(cv_input), cc);
    } else if (*po) {
      const PypParams params(po_alpha, po_theta);
      const OldestFormula f = po_formula1 == "exact" ? OldestFormula::Exact : OldestFormula::Unshifted;
      out << "alpha,theta,n,i,prob\n";
      auto row = [&](int i, double p) {
        out << format_double(po_alpha) << ',' << format_double(po_theta) << ',' << po_n << ',' << i
            << ',' << format_double(p) << '\n';
      };
      if (po_i > 0) {
        row(po_i, prob_oldest(po_i, po_n, params, f));
      } else {
        const auto curve = prob_oldest_curve(po_n, params, f);
        for (int i = 1; i <= po_n; ++i) row(i, curve[i - 1]);
      }
    }
    emit(output, out.str());
  } catch (const ParseError& e) {
    std::cerr << "ossp: input error: " << e.what() << '\n';
    return kExitParse;
  } catch (const DegenerateSample& e) {
    std::cerr << "ossp: degenerate sample: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "ossp: " << e.what() << '\n';
    return kExitOther;
  }
  return 0;
}
