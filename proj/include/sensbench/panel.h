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

#ifndef SENSBENCH_PANEL_H_
#define SENSBENCH_PANEL_H_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sensbench {

using Date = std::chrono::sys_days;

// Parses "YYYY-MM-DD". Throws DataError on anything else.
Date parse_date(std::string_view text);
std::string format_date(Date date);

// Entity x time x feature observations with one target series per entity.
//
// Invariants (checked by validate()):
//   - timestamps strictly increasing with uniform daily spacing;
//   - no NaN in values or target;
//   - static-masked features are constant in time within each entity;
//   - at least one feature, names unique.
struct Panel {
  std::vector<std::string> entities;
  std::vector<Date> timestamps;
  std::vector<std::string> features;
  std::vector<double> values;  // [entity][time][feature], row-major
  std::vector<double> target;  // [entity][time]
  std::vector<bool> static_mask;

  std::size_t num_entities() const { return entities.size(); }
  std::size_t num_times() const { return timestamps.size(); }
  std::size_t num_features() const { return features.size(); }

  double value(std::size_t e, std::size_t t, std::size_t f) const {
    return values[(e * num_times() + t) * num_features() + f];
  }
  double target_at(std::size_t e, std::size_t t) const {
    return target[e * num_times() + t];
  }

  // Throws DataError describing the first violated invariant.
  void validate() const;
};

// Column mapping for the long-form panel CSV.
struct PanelSchema {
  std::string entity_column = "entity";
  std::string date_column = "date";
  std::string target_column = "target";
  // Empty means every column not named above, in file order.
  std::vector<std::string> feature_columns;
  std::vector<std::string> static_features;
  // Longest run of missing cells that forward-fill may bridge; 0 rejects
  // any missing cell.
  int max_fill_gap = 0;
  // Per-entity z-score of the target after loading.
  bool zscore_target = false;
};

// Loads a long-form CSV (one row per entity and date).
//   SchemaError: a mapped column is missing from the header.
//   DataError:   non-uniform date spacing, duplicate rows, unparsable cells,
//                gaps longer than the fill policy, non-constant static columns.
Panel load_panel(const std::filesystem::path& path, const PanelSchema& schema);

// Writes the panel in the same long-form layout using shortest round-trip
// decimal text, so load_panel() recovers bitwise-equal values.
void write_panel_csv(const Panel& panel, const std::filesystem::path& path);

struct FeatureStat {
  double mean = 0.0;
  double std = 0.0;  // population convention
  double min = 0.0;
  double max = 0.0;
};

struct FeatureStats {
  std::vector<FeatureStat> features;

  std::size_t size() const { return features.size(); }
  const FeatureStat& operator[](std::size_t f) const { return features[f]; }
};

// Statistics over every (entity, time) cell, per feature.
FeatureStats feature_stats(const Panel& panel);

// Rescales every feature to zero mean and unit population std over the whole
// panel. Globally constant features are only centred.
void standardize_features(Panel& panel);

}  // namespace sensbench

#endif  // SENSBENCH_PANEL_H_
