/*
 * Copyright 2026 The Sensbench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sensbench/panel.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "sensbench/error.h"
#include "sensbench/file_util.h"
#include "sensbench/rank.h"

namespace sensbench {
namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

bool is_missing_token(std::string_view token) {
  return token.empty() || token == "NA" || token == "NaN" || token == "nan" ||
         token == "null";
}

double parse_cell(std::string_view token, std::size_t line_no) {
  if (is_missing_token(token)) return kMissing;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(),
                                   value);
  if (ec != std::errc() || ptr != token.data() + token.size() ||
      !std::isfinite(value)) {
    throw DataError("line " + std::to_string(line_no) +
                    ": cannot parse number '" + std::string(token) + "'");
  }
  return value;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Forward-fills one strided series in place. `series[i * stride]` for
// i in [0, n). Throws if a run of missing cells exceeds `max_gap` or the
// series starts with a missing cell.
void forward_fill(double* series, std::size_t n, std::size_t stride,
                  int max_gap, const std::string& what) {
  int run = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double& cell = series[i * stride];
    if (!std::isnan(cell)) {
      run = 0;
      continue;
    }
    ++run;
    if (i == 0 || run > max_gap) {
      throw DataError("missing value in " + what + " at time index " +
                      std::to_string(i) + " exceeds fill policy (max gap " +
                      std::to_string(max_gap) + ")");
    }
    cell = series[(i - 1) * stride];
  }
}

}  // namespace

Date parse_date(std::string_view text) {
  int y = 0;
  unsigned m = 0, d = 0;
  const std::string s = trim(text);
  char tail = 0;
  if (s.size() != 10 ||
      std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
    throw DataError("invalid ISO-8601 date '" + s + "'");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) throw DataError("invalid calendar date '" + s + "'");
  return std::chrono::sys_days{ymd};
}

std::string format_date(Date date) {
  const std::chrono::year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

void Panel::validate() const {
  if (features.empty()) throw DataError("panel has no features");
  if (std::set<std::string>(features.begin(), features.end()).size() !=
      features.size()) {
    throw DataError("panel feature names are not unique");
  }
  if (static_mask.size() != features.size()) {
    throw DataError("static mask length does not match feature count");
  }
  for (std::size_t t = 1; t < timestamps.size(); ++t) {
    if ((timestamps[t] - timestamps[t - 1]).count() != 1) {
      throw DataError("non-uniform spacing between " +
                      format_date(timestamps[t - 1]) + " and " +
                      format_date(timestamps[t]));
    }
  }
  const std::size_t cells = num_entities() * num_times();
  if (values.size() != cells * num_features() || target.size() != cells) {
    throw DataError("panel tensor shape does not match its axes");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw DataError("panel values contain non-finite entries");
  }
  for (double v : target) {
    if (!std::isfinite(v)) throw DataError("panel target contains non-finite entries");
  }
  for (std::size_t f = 0; f < num_features(); ++f) {
    if (!static_mask[f]) continue;
    for (std::size_t e = 0; e < num_entities(); ++e) {
      for (std::size_t t = 1; t < num_times(); ++t) {
        if (value(e, t, f) != value(e, 0, f)) {
          throw DataError("static feature '" + features[f] +
                          "' varies in time for entity '" + entities[e] + "'");
        }
      }
    }
  }
}

Panel load_panel(const std::filesystem::path& path, const PanelSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open panel file " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw SchemaError("panel file is empty: " + path.string());
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trim(h);

  auto column = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw SchemaError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t entity_col = column(schema.entity_column);
  const std::size_t date_col = column(schema.date_column);
  const std::size_t target_col = column(schema.target_column);

  std::vector<std::string> feature_names = schema.feature_columns;
  if (feature_names.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c != entity_col && c != date_col && c != target_col) {
        feature_names.push_back(header[c]);
      }
    }
  }
  if (feature_names.empty()) throw SchemaError("schema selects no feature columns");
  std::vector<std::size_t> feature_cols;
  for (const auto& name : feature_names) feature_cols.push_back(column(name));
  for (const auto& name : schema.static_features) {
    if (std::find(feature_names.begin(), feature_names.end(), name) ==
        feature_names.end()) {
      throw SchemaError("static feature '" + name + "' is not a feature column");
    }
  }
  if (schema.max_fill_gap < 0) throw SchemaError("max_fill_gap must be >= 0");

  struct Row {
    std::string entity;
    Date date;
    double target;
    std::vector<double> features;
  };
  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    Row row;
    row.entity = trim(fields[entity_col]);
    row.date = parse_date(fields[date_col]);
    row.target = parse_cell(trim(fields[target_col]), line_no);
    for (std::size_t c : feature_cols) {
      row.features.push_back(parse_cell(trim(fields[c]), line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("panel file has no data rows");

  std::set<Date> date_set;
  std::set<std::string> entity_set;
  for (const auto& row : rows) {
    date_set.insert(row.date);
    entity_set.insert(row.entity);
  }

  Panel panel;
  panel.entities.assign(entity_set.begin(), entity_set.end());
  panel.timestamps.assign(date_set.begin(), date_set.end());
  panel.features = feature_names;
  for (std::size_t t = 1; t < panel.timestamps.size(); ++t) {
    if ((panel.timestamps[t] - panel.timestamps[t - 1]).count() != 1) {
      throw DataError("non-uniform spacing between " +
                      format_date(panel.timestamps[t - 1]) + " and " +
                      format_date(panel.timestamps[t]));
    }
  }

  const std::size_t n_e = panel.num_entities();
  const std::size_t n_t = panel.num_times();
  const std::size_t k = panel.num_features();
  std::unordered_map<std::string, std::size_t> entity_index;
  for (std::size_t e = 0; e < n_e; ++e) entity_index[panel.entities[e]] = e;
  const Date first = panel.timestamps.front();

  panel.values.assign(n_e * n_t * k, kMissing);
  panel.target.assign(n_e * n_t, kMissing);
  std::vector<bool> seen(n_e * n_t, false);
  for (const auto& row : rows) {
    const std::size_t e = entity_index.at(row.entity);
    const auto t = static_cast<std::size_t>((row.date - first).count());
    if (seen[e * n_t + t]) {
      throw DataError("duplicate row for entity '" + row.entity + "' on " +
                      format_date(row.date));
    }
    seen[e * n_t + t] = true;
    panel.target[e * n_t + t] = row.target;
    std::copy(row.features.begin(), row.features.end(),
              panel.values.begin() + static_cast<std::ptrdiff_t>((e * n_t + t) * k));
  }

  for (std::size_t e = 0; e < n_e; ++e) {
    forward_fill(&panel.target[e * n_t], n_t, 1, schema.max_fill_gap,
                 "target of entity '" + panel.entities[e] + "'");
    for (std::size_t f = 0; f < k; ++f) {
      forward_fill(&panel.values[e * n_t * k + f], n_t, k, schema.max_fill_gap,
                   "feature '" + panel.features[f] + "' of entity '" +
                       panel.entities[e] + "'");
    }
  }

  panel.static_mask.assign(k, false);
  for (const auto& name : schema.static_features) {
    const auto f = static_cast<std::size_t>(
        std::find(feature_names.begin(), feature_names.end(), name) -
        feature_names.begin());
    panel.static_mask[f] = true;
  }

  if (schema.zscore_target) {
    for (std::size_t e = 0; e < n_e; ++e) {
      double* series = &panel.target[e * n_t];
      double mean = 0.0;
      for (std::size_t t = 0; t < n_t; ++t) mean += series[t];
      mean /= static_cast<double>(n_t);
      double ss = 0.0;
      for (std::size_t t = 0; t < n_t; ++t) ss += (series[t] - mean) * (series[t] - mean);
      const double sd = std::sqrt(ss / static_cast<double>(n_t));
      for (std::size_t t = 0; t < n_t; ++t) {
        series[t] = sd > 0.0 ? (series[t] - mean) / sd : series[t] - mean;
      }
    }
  }

  panel.validate();
  return panel;
}

void write_panel_csv(const Panel& panel, const std::filesystem::path& path) {
  std::string out;
  out += "entity,date,target";
  for (const auto& name : panel.features) out += "," + csv_escape(name);
  out += '\n';
  for (std::size_t e = 0; e < panel.num_entities(); ++e) {
    const std::string entity = csv_escape(panel.entities[e]);
    for (std::size_t t = 0; t < panel.num_times(); ++t) {
      out += entity;
      out += ',';
      out += format_date(panel.timestamps[t]);
      out += ',';
      out += format_double(panel.target_at(e, t));
      for (std::size_t f = 0; f < panel.num_features(); ++f) {
        out += ',';
        out += format_double(panel.value(e, t, f));
      }
      out += '\n';
    }
  }
  write_file_atomic(path, out);
}

FeatureStats feature_stats(const Panel& panel) {
  const std::size_t k = panel.num_features();
  const std::size_t cells = panel.num_entities() * panel.num_times();
  FeatureStats stats;
  stats.features.resize(k);
  if (cells == 0) return stats;
  for (std::size_t f = 0; f < k; ++f) {
    FeatureStat& s = stats.features[f];
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
      const double v = panel.values[c * k + f];
      sum += v;
      s.min = std::min(s.min, v);
      s.max = std::max(s.max, v);
    }
    if (s.min == s.max) {
      s.mean = s.min;
      s.std = 0.0;
      continue;
    }
    s.mean = std::clamp(sum / static_cast<double>(cells), s.min, s.max);
    double ss = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
      const double d = panel.values[c * k + f] - s.mean;
      ss += d * d;
    }
    s.std = std::sqrt(ss / static_cast<double>(cells));
  }
  return stats;
}

void standardize_features(Panel& panel) {
  const FeatureStats stats = feature_stats(panel);
  const std::size_t k = panel.num_features();
  const std::size_t cells = panel.num_entities() * panel.num_times();
  for (std::size_t f = 0; f < k; ++f) {
    const double mean = stats[f].mean;
    const double sd = stats[f].std;
    for (std::size_t c = 0; c < cells; ++c) {
      double& v = panel.values[c * k + f];
      v = sd > 0.0 ? (v - mean) / sd : v - mean;
    }
  }
}

}  // namespace sensbench
