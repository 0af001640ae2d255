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

// False-alarm analysis of a face recognizer run on purely synthetic
// portraits. The recognizer is not called here; its outputs arrive as CSV.
//
// Audit CSV, one row per synthetic image:
//
//   image_id,matched,identity,confidence
//   s001,true,CelebX,0.83
//   s002,false,,
//
// A positive match always carries an identity and a confidence in [0.5, 1].
//
// Paired CSV, one row per falsely matched identity, giving the recognizer's
// confidence for the synthetic image and for a genuine photo of that person:
//
//   identity,synthetic_confidence,real_confidence

#ifndef COINCIDENCE_AUDIT_H_
#define COINCIDENCE_AUDIT_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace coincidence {

inline constexpr char kAuditCsvHeader[] = "image_id,matched,identity,confidence";
inline constexpr char kPairedCsvHeader[] =
    "identity,synthetic_confidence,real_confidence";

// The recognizer reports a match only at or above this confidence.
inline constexpr double kMatchFloor = 0.5;

struct AuditRecord {
  std::string image_id;
  bool matched = false;
  std::optional<std::string> identity;
  std::optional<double> confidence;

  friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

struct PairedRecord {
  std::string identity;
  double synthetic_confidence = 0;
  double real_confidence = 0;

  friend bool operator==(const PairedRecord&, const PairedRecord&) = default;
};

struct FalseAlarmRate {
  double rate = 0;
  // Binomial Wald standard error sqrt(p (1 - p) / n).
  double standard_error = 0;
  int64_t k = 0;
  int64_t n = 0;
};

struct FARCurvePoint {
  double criterion = 0;
  double rate = 0;
  double standard_error = 0;
};

struct Discrimination {
  double proportion_real_wins = 0;
  int64_t n_pairs = 0;
};

// Rejects the whole file if any row is invalid; the status message lists
// every offending line.
absl::StatusOr<std::vector<AuditRecord>> ParseAuditCsv(std::istream& in);
absl::StatusOr<std::vector<PairedRecord>> ParsePairedCsv(std::istream& in);

void WriteAuditCsv(std::span<const AuditRecord> records, std::ostream& out);
void WritePairedCsv(std::span<const PairedRecord> pairs, std::ostream& out);

absl::StatusOr<FalseAlarmRate> ComputeFalseAlarmRate(
    std::span<const AuditRecord> records);

// Fraction of all records that matched with confidence >= each criterion.
// Criteria must lie in [0, 1] and be non-decreasing.
absl::StatusOr<std::vector<FARCurvePoint>> FarCurve(
    std::span<const AuditRecord> records, std::span<const double> criteria);

// `steps` evenly spaced criteria from the match floor to 1 inclusive.
absl::StatusOr<std::vector<double>> EvenCriteria(int steps);

// Share of pairs in which the genuine photo scores higher; ties count 1/2.
absl::StatusOr<Discrimination> PairedDiscrimination(
    std::span<const PairedRecord> pairs);

// far * (1 - discrimination): synthetic images that are both falsely
// matched and preferred over a real photo of the matched person.
absl::StatusOr<double> JndFraction(double far, double discrimination);

// Linear rescaling of a small per-gallery rate to a larger population,
// clamped at 1. Only meaningful while the result stays well below 1.
absl::StatusOr<double> ExtrapolateJndFraction(double jnd_fraction,
                                              double gallery_size,
                                              double target_population);

}  // namespace coincidence

#endif  // COINCIDENCE_AUDIT_H_
