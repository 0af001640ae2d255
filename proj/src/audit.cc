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

#include "coincidence/audit.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string_view>
#include <system_error>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"

namespace coincidence {
namespace {

constexpr std::string_view kUtf8Bom = "\xEF\xBB\xBF";

// Splits one CSV line into fields. Supports RFC 4180 quoting within a line;
// embedded newlines are not supported.
absl::StatusOr<std::vector<std::string>> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back().push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back().push_back(ch);
      }
    } else if (ch == '"' && fields.back().empty()) {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(ch);
    }
  }
  if (quoted) return absl::InvalidArgumentError("unterminated quoted field");
  return fields;
}

std::string QuoteField(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string FormatDouble(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

absl::StatusOr<double> ParseProbability(std::string_view text,
                                        std::string_view column) {
  double value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s '%s' is not a number", std::string(column),
                        std::string(text)));
  }
  if (!(value >= 0 && value <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s %s is outside [0, 1]", std::string(column),
                        std::string(text)));
  }
  return value;
}

// Reads header and data lines, handing each data line to `parse_row`.
// Collects every row error before failing.
template <typename Record, typename ParseRow>
absl::StatusOr<std::vector<Record>> ParseCsv(std::istream& in,
                                             std::string_view header,
                                             size_t columns,
                                             ParseRow parse_row) {
  std::string line;
  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError("empty file: missing header");
  }
  if (line.starts_with(kUtf8Bom)) line.erase(0, kUtf8Bom.size());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "line 1: expected header '%s', got '%s'", std::string(header), line));
  }

  std::vector<Record> records;
  std::vector<std::string> errors;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    absl::StatusOr<std::vector<std::string>> fields = SplitCsvLine(line);
    if (fields.ok() && fields->size() != columns) {
      fields = absl::InvalidArgumentError(absl::StrFormat(
          "expected %d fields, got %d", columns, fields->size()));
    }
    absl::StatusOr<Record> record =
        fields.ok() ? parse_row(*fields) : absl::StatusOr<Record>(fields.status());
    if (record.ok()) {
      records.push_back(*std::move(record));
    } else {
      errors.push_back(absl::StrFormat("line %d: %s", line_number,
                                       record.status().message()));
    }
  }
  if (!errors.empty()) {
    return absl::InvalidArgumentError(absl::StrJoin(errors, "\n"));
  }
  if (records.empty()) {
    return absl::InvalidArgumentError("no data rows after header");
  }
  return records;
}

absl::StatusOr<AuditRecord> ParseAuditRow(const std::vector<std::string>& f) {
  AuditRecord record;
  record.image_id = f[0];
  if (record.image_id.empty()) {
    return absl::InvalidArgumentError("image_id is empty");
  }
  if (f[1] == "true") {
    record.matched = true;
  } else if (f[1] != "false") {
    return absl::InvalidArgumentError(absl::StrFormat(
        "matched must be 'true' or 'false', got '%s'", f[1]));
  }
  if (!f[2].empty()) record.identity = f[2];
  if (!f[3].empty()) {
    absl::StatusOr<double> confidence = ParseProbability(f[3], "confidence");
    if (!confidence.ok()) return confidence.status();
    record.confidence = *confidence;
  }
  if (record.matched) {
    if (!record.identity) {
      return absl::InvalidArgumentError("matched row has no identity");
    }
    if (!record.confidence) {
      return absl::InvalidArgumentError("matched row has no confidence");
    }
    if (*record.confidence < kMatchFloor) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "matched confidence %s is below the %.2f match floor", f[3],
          kMatchFloor));
    }
  }
  return record;
}

absl::StatusOr<PairedRecord> ParsePairedRow(const std::vector<std::string>& f) {
  if (f[0].empty()) return absl::InvalidArgumentError("identity is empty");
  absl::StatusOr<double> synthetic =
      ParseProbability(f[1], "synthetic_confidence");
  if (!synthetic.ok()) return synthetic.status();
  absl::StatusOr<double> real = ParseProbability(f[2], "real_confidence");
  if (!real.ok()) return real.status();
  return PairedRecord{.identity = f[0],
                      .synthetic_confidence = *synthetic,
                      .real_confidence = *real};
}

absl::Status CheckUnit(double value, std::string_view what) {
  if (!(value >= 0 && value <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s must be in [0, 1], got %g", std::string(what), value));
  }
  return absl::OkStatus();
}

double WaldError(double rate, int64_t n) {
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(n));
}

}  // namespace

absl::StatusOr<std::vector<AuditRecord>> ParseAuditCsv(std::istream& in) {
  return ParseCsv<AuditRecord>(in, kAuditCsvHeader, 4, ParseAuditRow);
}

absl::StatusOr<std::vector<PairedRecord>> ParsePairedCsv(std::istream& in) {
  return ParseCsv<PairedRecord>(in, kPairedCsvHeader, 3, ParsePairedRow);
}

void WriteAuditCsv(std::span<const AuditRecord> records, std::ostream& out) {
  out << kAuditCsvHeader << '\n';
  for (const AuditRecord& r : records) {
    out << QuoteField(r.image_id) << ',' << (r.matched ? "true" : "false")
        << ',' << (r.identity ? QuoteField(*r.identity) : "") << ','
        << (r.confidence ? FormatDouble(*r.confidence) : "") << '\n';
  }
}

void WritePairedCsv(std::span<const PairedRecord> pairs, std::ostream& out) {
  out << kPairedCsvHeader << '\n';
  for (const PairedRecord& p : pairs) {
    out << QuoteField(p.identity) << ',' << FormatDouble(p.synthetic_confidence)
        << ',' << FormatDouble(p.real_confidence) << '\n';
  }
}

absl::StatusOr<FalseAlarmRate> ComputeFalseAlarmRate(
    std::span<const AuditRecord> records) {
  if (records.empty()) {
    return absl::InvalidArgumentError("false-alarm rate needs >= 1 record");
  }
  FalseAlarmRate out;
  out.n = static_cast<int64_t>(records.size());
  for (const AuditRecord& r : records) out.k += r.matched ? 1 : 0;
  out.rate = static_cast<double>(out.k) / static_cast<double>(out.n);
  out.standard_error = WaldError(out.rate, out.n);
  return out;
}

absl::StatusOr<std::vector<FARCurvePoint>> FarCurve(
    std::span<const AuditRecord> records, std::span<const double> criteria) {
  if (records.empty()) {
    return absl::InvalidArgumentError("FAR curve needs >= 1 record");
  }
  if (criteria.empty()) {
    return absl::InvalidArgumentError("FAR curve needs >= 1 criterion");
  }
  for (size_t i = 0; i < criteria.size(); ++i) {
    if (absl::Status status = CheckUnit(criteria[i], "criterion");
        !status.ok()) {
      return status;
    }
    if (i > 0 && criteria[i] < criteria[i - 1]) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "criteria must be ascending: %g follows %g", criteria[i],
          criteria[i - 1]));
    }
  }
  const int64_t n = static_cast<int64_t>(records.size());
  std::vector<FARCurvePoint> curve;
  curve.reserve(criteria.size());
  for (double t : criteria) {
    int64_t k = 0;
    for (const AuditRecord& r : records) {
      if (r.matched && *r.confidence >= t) ++k;
    }
    const double rate = static_cast<double>(k) / static_cast<double>(n);
    curve.push_back(FARCurvePoint{
        .criterion = t, .rate = rate, .standard_error = WaldError(rate, n)});
  }
  return curve;
}

absl::StatusOr<std::vector<double>> EvenCriteria(int steps) {
  if (steps < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("curve steps must be >= 1, got %d", steps));
  }
  if (steps == 1) return std::vector<double>{kMatchFloor};
  std::vector<double> criteria(steps);
  for (int i = 0; i < steps; ++i) {
    criteria[i] = kMatchFloor + (1.0 - kMatchFloor) * i / (steps - 1);
  }
  criteria.back() = 1.0;
  return criteria;
}

absl::StatusOr<Discrimination> PairedDiscrimination(
    std::span<const PairedRecord> pairs) {
  if (pairs.empty()) {
    return absl::InvalidArgumentError("paired discrimination needs >= 1 pair");
  }
  // Counted in half-wins so ties stay exact.
  int64_t half_wins = 0;
  for (const PairedRecord& p : pairs) {
    if (p.real_confidence > p.synthetic_confidence) {
      half_wins += 2;
    } else if (p.real_confidence == p.synthetic_confidence) {
      half_wins += 1;
    }
  }
  const int64_t n = static_cast<int64_t>(pairs.size());
  return Discrimination{
      .proportion_real_wins =
          static_cast<double>(half_wins) / static_cast<double>(2 * n),
      .n_pairs = n};
}

absl::StatusOr<double> JndFraction(double far, double discrimination) {
  if (absl::Status status = CheckUnit(far, "false-alarm rate"); !status.ok()) {
    return status;
  }
  if (absl::Status status = CheckUnit(discrimination, "discrimination");
      !status.ok()) {
    return status;
  }
  return far * (1.0 - discrimination);
}

absl::StatusOr<double> ExtrapolateJndFraction(double jnd_fraction,
                                              double gallery_size,
                                              double target_population) {
  if (absl::Status status = CheckUnit(jnd_fraction, "jnd fraction");
      !status.ok()) {
    return status;
  }
  if (!std::isfinite(gallery_size) || gallery_size <= 0 ||
      !std::isfinite(target_population) || target_population <= 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "gallery and target sizes must be finite and > 0, got %g and %g",
        gallery_size, target_population));
  }
  return std::min(1.0, jnd_fraction * (target_population / gallery_size));
}

}  // namespace coincidence
