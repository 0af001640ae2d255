//
// Copyright 2026 The Coincidence Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Command-line front end.
//
//   coincidence nn -D 10 -n 1 -N 2e11 --both
//   coincidence risk --D 10 --population ever_will_live_median
//   coincidence simulate --D 2 --N 1024 --trials 100 --seed 7 --out sim.json
//   coincidence audit --records audit.csv --pairs pairs.csv
//   coincidence population --json
//
// Exit status: 0 success, 1 usage error, 2 data or domain error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "coincidence/audit.h"
#include "coincidence/geometry_sim.h"
#include "coincidence/nn_stats.h"
#include "coincidence/perception.h"
#include "coincidence/population.h"
#include "coincidence/report.h"
#include "json.hpp"

namespace coincidence {
namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status.message() << "\n";
  return kExitData;
}

int Usage(std::string_view message) {
  std::cerr << "usage error: " << message << "\n";
  return kExitUsage;
}

json Bundle(std::string_view scenario, json inputs, json results,
            std::optional<uint64_t> seed = std::nullopt) {
  return {
      {"scenario", scenario},
      {"version", kToolVersion},
      {"seed", seed ? json(*seed) : json(nullptr)},
      {"inputs", std::move(inputs)},
      {"results", std::move(results)},
  };
}

void PrintJson(const json& j) { std::cout << j.dump(2) << "\n"; }

// Counts may be given in scientific notation; they must still be integral.
absl::StatusOr<int> IntegralCount(double value, std::string_view flag) {
  if (!std::isfinite(value) || value != std::floor(value) || value < 0 ||
      value > 2147483647.0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s must be a non-negative integer, got %g",
                        std::string(flag),
                        value));
  }
  return static_cast<int>(value);
}

struct NNArgs {
  int dimension = 0;
  int rank = 1;
  double points = 0;
  bool exact = false;
  bool approx = false;
  bool both = false;
};

int RunNN(const NNArgs& args, bool as_json) {
  const bool want_exact = args.exact || args.both || !args.approx;
  const bool want_approx = args.approx || args.both || !args.exact;
  const NNQuery query{
      .dimension = args.dimension, .rank = args.rank, .points = args.points};

  json results = json::object();
  std::optional<double> exact, approx;
  if (want_exact) {
    absl::StatusOr<double> value = NNMeanExact(query);
    if (!value.ok()) return Fail(value.status());
    exact = *value;
    results["exact"] = *exact;
  }
  if (want_approx) {
    absl::StatusOr<double> value = NNMeanApprox(query);
    if (!value.ok()) return Fail(value.status());
    approx = *value;
    results["approx"] = *approx;
  }
  if (exact && approx) {
    results["ratio"] = *exact / *approx;
    absl::StatusOr<double> limit = ApproximationRatio(args.dimension, args.rank);
    if (!limit.ok()) return Fail(limit.status());
    results["limit_ratio"] = *limit;
  }

  if (as_json) {
    const std::string mode = want_exact && want_approx ? "both"
                             : want_exact              ? "exact"
                                                       : "approx";
    PrintJson(Bundle("nn",
                     {{"D", args.dimension},
                      {"n", args.rank},
                      {"N", args.points},
                      {"mode", mode}},
                     results));
    return kExitOk;
  }
  std::cout << absl::StrFormat("D=%d n=%d N=%g\n", args.dimension, args.rank,
                               args.points);
  if (exact) std::cout << absl::StrFormat("exact   %.10g\n", *exact);
  if (approx) std::cout << absl::StrFormat("approx  %.10g\n", *approx);
  if (exact && approx) {
    std::cout << absl::StrFormat("ratio   %.10g\n",
                                 results["ratio"].get<double>());
  }
  return kExitOk;
}

struct RiskArgs {
  int dimension = kDefaultFaceDimension;
  std::optional<double> points;
  std::optional<std::string> population;
  double dprime = 1.0;
  double c = 1.0;
};

int RunRisk(const RiskArgs& args, bool as_json) {
  if (args.points.has_value() == args.population.has_value()) {
    return Usage("risk needs exactly one of --N or --population");
  }
  double population = 0;
  if (args.population) {
    absl::StatusOr<PopulationEstimate> estimate =
        FindEstimate(*args.population);
    if (!estimate.ok()) return Fail(estimate.status());
    population = estimate->count;
  } else {
    population = *args.points;
  }
  const PerceptualParams params{.d_bar_prime = args.dprime, .c = args.c};
  absl::StatusOr<RiskAssessment> risk =
      RiskVerdict(params, population, args.dimension);
  if (!risk.ok()) return Fail(risk.status());

  if (as_json) {
    json inputs = {{"D", args.dimension},
                   {"N", population},
                   {"dprime", args.dprime},
                   {"c", args.c}};
    inputs["population_label"] =
        args.population ? json(*args.population) : json(nullptr);
    PrintJson(Bundle("risk", std::move(inputs), ToJson(*risk)));
    return kExitOk;
  }
  std::cout << absl::StrFormat(
      "%s: mean nearest-neighbor distance %.6g JND %s threshold %.6g JND "
      "(D=%d, N=%g)\n",
      risk->at_risk ? "AT RISK" : "not at risk", risk->mean_nn_jnd,
      risk->at_risk ? "<" : ">=", risk->threshold_jnd, args.dimension,
      population);
  std::cout << absl::StrFormat("confusion probability  %.6g\n",
                               risk->confusion_probability);
  if (risk->critical_population) {
    std::cout << absl::StrFormat("critical population    %.6g\n",
                                 *risk->critical_population);
  } else {
    std::cout << "critical population    none (d' = 0: every N is at risk)\n";
  }
  return kExitOk;
}

struct SimulateArgs {
  int dimension = 2;
  double points = 1024;
  double trials = 100;
  uint64_t seed = 0;
  std::string topology = "torus";
  int max_rank = 1;
  std::optional<std::string> out;
  std::optional<std::string> format;
  int threads = 0;
};

int RunSimulate(const SimulateArgs& args, bool as_json) {
  absl::StatusOr<int> points = IntegralCount(args.points, "--N");
  if (!points.ok()) return Fail(points.status());
  absl::StatusOr<int> trials = IntegralCount(args.trials, "--trials");
  if (!trials.ok()) return Fail(trials.status());
  absl::StatusOr<Topology> topology = ParseTopology(args.topology);
  if (!topology.ok()) return Fail(topology.status());

  const SimConfig config{.dimension = args.dimension,
                         .points = *points,
                         .trials = *trials,
                         .seed = args.seed,
                         .topology = *topology,
                         .max_rank = args.max_rank};
  if (absl::Status status = ValidateSimConfig(config); !status.ok()) {
    return Fail(status);
  }

  std::string format;
  if (args.out) {
    if (args.format) {
      format = *args.format;
    } else {
      format = args.out->ends_with(".csv") ? "csv" : "json";
    }
    if (format != "csv" && format != "json") {
      return Usage("--format must be csv or json");
    }
  }

  absl::StatusOr<SimResult> result = RunSimulation(config, args.threads);
  if (!result.ok()) return Fail(result.status());

  json comparison = json::array();
  for (const RankStats& r : result->ranks) {
    absl::StatusOr<double> theory = NNMeanExact(NNQuery{
        .dimension = config.dimension,
        .rank = r.rank,
        .points = static_cast<double>(config.points)});
    if (!theory.ok()) return Fail(theory.status());
    const double z = r.standard_error > 0
                         ? (r.mean - *theory) / r.standard_error
                         : 0.0;
    comparison.push_back({{"rank", r.rank}, {"theory", *theory}, {"z", z}});
  }

  if (args.out) {
    std::ofstream file(*args.out, std::ios::binary);
    if (!file) {
      return Fail(absl::InvalidArgumentError(
          absl::StrFormat("cannot open '%s' for writing", *args.out)));
    }
    if (format == "csv") {
      WriteSimResultCsv(*result, file);
    } else {
      file << ToJson(*result).dump(2) << "\n";
    }
    if (!file) {
      return Fail(absl::DataLossError(
          absl::StrFormat("failed writing '%s'", *args.out)));
    }
  }

  if (as_json) {
    json inputs = ToJson(config);
    inputs["threads"] = args.threads;
    PrintJson(Bundle("simulate", std::move(inputs),
                     {{"simulation", ToJson(*result)},
                      {"theory_comparison", comparison}},
                     config.seed));
    return kExitOk;
  }
  std::cout << absl::StrFormat(
      "D=%d N=%d trials=%d seed=%d topology=%s\n", config.dimension,
      config.points, config.trials, config.seed,
      std::string(TopologyName(config.topology)));
  std::cout << absl::StrFormat("%5s %14s %12s %10s %14s %8s\n", "rank", "mean",
                               "se", "count", "theory", "z");
  for (size_t i = 0; i < result->ranks.size(); ++i) {
    const RankStats& r = result->ranks[i];
    std::cout << absl::StrFormat(
        "%5d %14.8g %12.4g %10d %14.8g %8.3f\n", r.rank, r.mean,
        r.standard_error, r.count, comparison[i]["theory"].get<double>(),
        comparison[i]["z"].get<double>());
  }
  return kExitOk;
}

struct AuditArgs {
  std::string records;
  std::optional<std::string> pairs;
  double gallery = 8e6;
  std::string population = "ever_lived";
  int curve_steps = 11;
  std::optional<std::string> curve_out;
};

template <typename Parse>
auto ReadCsvFile(const std::string& path, Parse parse)
    -> decltype(parse(std::declval<std::istream&>())) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot read '%s'", path));
  }
  auto parsed = parse(in);
  if (!parsed.ok()) {
    return absl::Status(parsed.status().code(),
                        absl::StrFormat("%s:\n%s", path,
                                        parsed.status().message()));
  }
  return parsed;
}

int RunAudit(const AuditArgs& args, bool as_json) {
  auto records = ReadCsvFile(args.records, [](std::istream& in) {
    return ParseAuditCsv(in);
  });
  if (!records.ok()) return Fail(records.status());
  absl::StatusOr<PopulationEstimate> target = FindEstimate(args.population);
  if (!target.ok()) return Fail(target.status());
  absl::StatusOr<std::vector<double>> criteria = EvenCriteria(args.curve_steps);
  if (!criteria.ok()) return Fail(criteria.status());

  absl::StatusOr<FalseAlarmRate> far = ComputeFalseAlarmRate(*records);
  if (!far.ok()) return Fail(far.status());
  absl::StatusOr<std::vector<FARCurvePoint>> curve =
      FarCurve(*records, *criteria);
  if (!curve.ok()) return Fail(curve.status());

  json report = {{"far", ToJson(*far)}, {"curve", json::array()}};
  for (const FARCurvePoint& p : *curve) report["curve"].push_back(ToJson(p));
  json notes = json::array();
  notes.push_back(
      "far.se is the binomial Wald standard error sqrt(p(1-p)/n); other "
      "estimators give wider intervals");

  std::optional<double> jnd, extrapolated;
  std::optional<Discrimination> discrimination;
  if (args.pairs) {
    auto pairs = ReadCsvFile(*args.pairs, [](std::istream& in) {
      return ParsePairedCsv(in);
    });
    if (!pairs.ok()) return Fail(pairs.status());
    absl::StatusOr<Discrimination> d = PairedDiscrimination(*pairs);
    if (!d.ok()) return Fail(d.status());
    discrimination = *d;
    absl::StatusOr<double> fraction =
        JndFraction(far->rate, d->proportion_real_wins);
    if (!fraction.ok()) return Fail(fraction.status());
    jnd = *fraction;
    absl::StatusOr<double> scaled =
        ExtrapolateJndFraction(*jnd, args.gallery, target->count);
    if (!scaled.ok()) return Fail(scaled.status());
    extrapolated = *scaled;

    report["discrimination"] = ToJson(*d);
    report["jnd_fraction"] = *jnd;
    json gallery_share = json::object();
    for (const PopulationEstimate& e : BuiltinEstimates()) {
      gallery_share[e.label] = args.gallery / e.count;
    }
    report["extrapolation"] = {
        {"gallery_size", args.gallery},
        {"target_label", target->label},
        {"target_population", target->count},
        {"fraction", *extrapolated},
        {"clamped", *extrapolated >= 1.0},
        {"gallery_share_of_population", std::move(gallery_share)},
    };
    notes.push_back(
        "jnd_fraction uses the unrounded false-alarm rate; extrapolation is a "
        "linear small-probability rescaling clamped at 1");
  }
  report["notes"] = std::move(notes);

  if (args.curve_out) {
    std::ofstream file(*args.curve_out, std::ios::binary);
    if (!file) {
      return Fail(absl::InvalidArgumentError(
          absl::StrFormat("cannot open '%s' for writing", *args.curve_out)));
    }
    WriteFarCurveCsv(*curve, file);
  }

  if (as_json) {
    json inputs = {{"records", args.records},
                   {"gallery", args.gallery},
                   {"population", args.population},
                   {"curve_steps", args.curve_steps}};
    inputs["pairs"] = args.pairs ? json(*args.pairs) : json(nullptr);
    PrintJson(Bundle("audit", std::move(inputs), std::move(report)));
    return kExitOk;
  }
  std::cout << absl::StrFormat("false-alarm rate  %d/%d = %.4g (se %.4g)\n",
                               far->k, far->n, far->rate, far->standard_error);
  std::cout << "criterion  rate\n";
  for (const FARCurvePoint& p : *curve) {
    std::cout << absl::StrFormat("%9.4f  %.4g\n", p.criterion, p.rate);
  }
  if (discrimination) {
    std::cout << absl::StrFormat(
        "paired discrimination  %.4g over %d pairs\n",
        discrimination->proportion_real_wins, discrimination->n_pairs);
    std::cout << absl::StrFormat("within-1-JND fraction  %.4g\n", *jnd);
    std::cout << absl::StrFormat(
        "extrapolated to %s (%g) from gallery %g  %.4g\n", target->label,
        target->count, args.gallery, *extrapolated);
  }
  return kExitOk;
}

struct PopulationArgs {
  double known_faces = kDefaultKnownFaces;
};

int RunPopulation(const PopulationArgs& args, bool as_json) {
  json estimates = json::array();
  for (const PopulationEstimate& e : BuiltinEstimates()) {
    estimates.push_back(ToJson(e));
  }
  json datasets = json::array();
  for (const DatasetInfo& d : BuiltinDatasets()) datasets.push_back(ToJson(d));

  json folds = json::array();
  json familiarity = json::array();
  for (const PopulationEstimate& e : BuiltinEstimates()) {
    for (const DatasetInfo& d : BuiltinDatasets()) {
      const double size =
          static_cast<double>(d.image_count.value_or(d.identity_count_upper_bound));
      absl::StatusOr<double> fold = FoldRatio(e.count, size);
      if (!fold.ok()) return Fail(fold.status());
      folds.push_back(
          {{"population", e.label}, {"dataset", d.name}, {"fold", *fold}});
    }
    absl::StatusOr<FamiliarityStats> fam = Familiarity(args.known_faces, e.count);
    if (!fam.ok()) return Fail(fam.status());
    familiarity.push_back({{"population", e.label},
                           {"known_count", fam->known_count},
                           {"familiar_fraction", fam->familiar_fraction},
                           {"one_in", 1.0 / fam->familiar_fraction}});
  }
  json copernican = json::array();
  const double past = FindEstimate("ever_lived")->count;
  for (double q : {0.5, 0.05}) {
    copernican.push_back(
        {{"past_count", past}, {"rank_quantile", q},
         {"total", *CopernicanTotal(past, q)}});
  }

  if (as_json) {
    PrintJson(Bundle("population", {{"known_faces", args.known_faces}},
                     {{"estimates", estimates},
                      {"datasets", datasets},
                      {"fold_ratios", folds},
                      {"familiarity", familiarity},
                      {"copernican", copernican}}));
    return kExitOk;
  }
  std::cout << "estimates\n";
  for (const PopulationEstimate& e : BuiltinEstimates()) {
    std::cout << absl::StrFormat("  %-22s %10.4g  %s\n", e.label, e.count,
                                 e.provenance);
  }
  std::cout << "datasets\n";
  for (const DatasetInfo& d : BuiltinDatasets()) {
    std::cout << absl::StrFormat("  %-8s identities <= %d%s\n", d.name,
                                 d.identity_count_upper_bound,
                                 d.approximate ? " (approximate)" : "");
  }
  std::cout << "fold ratios (population / dataset size)\n";
  for (const json& f : folds) {
    std::cout << absl::StrFormat("  %-22s %-8s %14.1f\n",
                                 f["population"].get<std::string>(),
                                 f["dataset"].get<std::string>(),
                                 f["fold"].get<double>());
  }
  std::cout << absl::StrFormat("familiarity (%g known faces)\n",
                               args.known_faces);
  for (const json& f : familiarity) {
    std::cout << absl::StrFormat("  %-22s %.4g (1 in %.4g)\n",
                                 f["population"].get<std::string>(),
                                 f["familiar_fraction"].get<double>(),
                                 f["one_in"].get<double>());
  }
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Coincidental-resemblance risk calculator"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Emit a JSON report");

  NNArgs nn;
  CLI::App* nn_cmd =
      app.add_subcommand("nn", "Mean n-th nearest-neighbor distance");
  nn_cmd->fallthrough();
  nn_cmd->add_option("-D,--D", nn.dimension, "Dimensionality")->required();
  nn_cmd->add_option("-n,--n", nn.rank, "Neighbor rank");
  nn_cmd->add_option("-N,--N", nn.points, "Point count (2e11 accepted)")
      ->required();
  nn_cmd->add_flag("--exact", nn.exact, "Exact mean only");
  nn_cmd->add_flag("--approx", nn.approx, "(n/N)^(1/D) approximation only");
  nn_cmd->add_flag("--both", nn.both, "Both, with their ratio (default)");

  RiskArgs risk;
  CLI::App* risk_cmd = app.add_subcommand("risk", "Perceptual risk verdict");
  risk_cmd->fallthrough();
  risk_cmd->add_option("--D", risk.dimension, "Face-space dimensionality");
  risk_cmd->add_option("--N", risk.points, "Population size");
  risk_cmd->add_option("--population", risk.population,
                       "Builtin population label");
  risk_cmd->add_option("--dprime", risk.dprime, "Mean observer d'");
  risk_cmd->add_option("--c", risk.c, "Likeness threshold in JND");

  SimulateArgs sim;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Monte Carlo neighbor distances");
  sim_cmd->fallthrough();
  sim_cmd->add_option("--D", sim.dimension, "Dimensionality");
  sim_cmd->add_option("--N", sim.points, "Points per trial");
  sim_cmd->add_option("--trials", sim.trials, "Trial count");
  sim_cmd->add_option("--seed", sim.seed, "RNG seed");
  sim_cmd->add_option("--topology", sim.topology, "torus or cube");
  sim_cmd->add_option("--max-rank", sim.max_rank, "Highest neighbor rank");
  sim_cmd->add_option("--out", sim.out, "Write the result to this file");
  sim_cmd->add_option("--format", sim.format,
                      "csv or json (default: from --out extension)");
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (0 = all)");

  AuditArgs audit;
  CLI::App* audit_cmd =
      app.add_subcommand("audit", "False-alarm analysis of recognizer output");
  audit_cmd->fallthrough();
  audit_cmd->add_option("--records", audit.records, "Audit CSV")->required();
  audit_cmd->add_option("--pairs", audit.pairs, "Paired-confidence CSV");
  audit_cmd->add_option("--gallery", audit.gallery, "Recognizer gallery size");
  audit_cmd->add_option("--population", audit.population,
                        "Builtin population label for extrapolation");
  audit_cmd->add_option("--curve-steps", audit.curve_steps,
                        "Criteria spaced evenly over [0.5, 1]");
  audit_cmd->add_option("--curve-out", audit.curve_out,
                        "Write the FAR curve as CSV");

  PopulationArgs pop;
  CLI::App* pop_cmd =
      app.add_subcommand("population", "Population and dataset figures");
  pop_cmd->fallthrough();
  pop_cmd->add_option("--known-faces", pop.known_faces,
                      "Faces known to an average person");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (nn_cmd->parsed()) return RunNN(nn, as_json);
  if (risk_cmd->parsed()) return RunRisk(risk, as_json);
  if (sim_cmd->parsed()) return RunSimulate(sim, as_json);
  if (audit_cmd->parsed()) return RunAudit(audit, as_json);
  return RunPopulation(pop, as_json);
}

}  // namespace
}  // namespace coincidence

int main(int argc, char** argv) { return coincidence::Main(argc, argv); }
