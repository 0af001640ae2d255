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

#include "coincidence/report.h"

#include <string>

#include "absl/strings/str_format.h"

namespace coincidence {

nlohmann::json ToJson(const SimConfig& config) {
  return {
      {"D", config.dimension},
      {"N", config.points},
      {"trials", config.trials},
      {"seed", config.seed},
      {"topology", std::string(TopologyName(config.topology))},
      {"max_rank", config.max_rank},
  };
}

nlohmann::json ToJson(const SimResult& result) {
  nlohmann::json ranks = nlohmann::json::array();
  for (const RankStats& r : result.ranks) {
    ranks.push_back(
        {{"rank", r.rank}, {"mean", r.mean}, {"se", r.standard_error},
         {"count", r.count}});
  }
  return {{"config", ToJson(result.config)}, {"ranks", std::move(ranks)}};
}

nlohmann::json ToJson(const RiskAssessment& a) {
  return {
      {"D", a.dimension},
      {"N", a.population},
      {"mean_nn_distance", a.mean_nn_distance},
      {"mean_nn_jnd", a.mean_nn_jnd},
      {"threshold_jnd", a.threshold_jnd},
      {"at_risk", a.at_risk},
      {"confusion_probability", a.confusion_probability},
      {"critical_population", a.critical_population
                                  ? nlohmann::json(*a.critical_population)
                                  : nlohmann::json(nullptr)},
  };
}

nlohmann::json ToJson(const PopulationEstimate& e) {
  return {{"label", e.label}, {"count", e.count}, {"provenance", e.provenance}};
}

nlohmann::json ToJson(const DatasetInfo& d) {
  return {
      {"name", d.name},
      {"image_count",
       d.image_count ? nlohmann::json(*d.image_count) : nlohmann::json(nullptr)},
      {"identity_count_upper_bound", d.identity_count_upper_bound},
      {"approximate", d.approximate},
      {"provenance", d.provenance},
  };
}

nlohmann::json ToJson(const FalseAlarmRate& far) {
  return {{"rate", far.rate}, {"se", far.standard_error}, {"k", far.k},
          {"n", far.n}};
}

nlohmann::json ToJson(const FARCurvePoint& p) {
  return {{"criterion", p.criterion}, {"rate", p.rate},
          {"se", p.standard_error}};
}

nlohmann::json ToJson(const Discrimination& d) {
  return {{"proportion_real_wins", d.proportion_real_wins},
          {"n_pairs", d.n_pairs}};
}

void WriteSimResultCsv(const SimResult& result, std::ostream& out) {
  out << "rank,mean,se,count\n";
  for (const RankStats& r : result.ranks) {
    out << absl::StrFormat("%d,%.17g,%.17g,%d\n", r.rank, r.mean,
                           r.standard_error, r.count);
  }
}

void WriteFarCurveCsv(std::span<const FARCurvePoint> curve, std::ostream& out) {
  out << "criterion,rate,se\n";
  for (const FARCurvePoint& p : curve) {
    out << absl::StrFormat("%.17g,%.17g,%.17g\n", p.criterion, p.rate,
                           p.standard_error);
  }
}

}  // namespace coincidence
