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

// JSON and CSV renderings of the library's result types.

#ifndef COINCIDENCE_REPORT_H_
#define COINCIDENCE_REPORT_H_

#include <ostream>
#include <span>

#include "coincidence/audit.h"
#include "coincidence/geometry_sim.h"
#include "coincidence/perception.h"
#include "coincidence/population.h"
#include "json.hpp"

namespace coincidence {

inline constexpr char kToolVersion[] = "1.0.0";

nlohmann::json ToJson(const SimConfig& config);
// {"config": {...}, "ranks": [{"rank", "mean", "se", "count"}, ...]}
nlohmann::json ToJson(const SimResult& result);
nlohmann::json ToJson(const RiskAssessment& assessment);
nlohmann::json ToJson(const PopulationEstimate& estimate);
nlohmann::json ToJson(const DatasetInfo& dataset);
nlohmann::json ToJson(const FalseAlarmRate& far);
nlohmann::json ToJson(const FARCurvePoint& point);
nlohmann::json ToJson(const Discrimination& discrimination);

// Columns: rank,mean,se,count.
void WriteSimResultCsv(const SimResult& result, std::ostream& out);

// Columns: criterion,rate,se.
void WriteFarCurveCsv(std::span<const FARCurvePoint> curve, std::ostream& out);

}  // namespace coincidence

#endif  // COINCIDENCE_REPORT_H_
