// Copyright 2026 The Gazette Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace gazette {

struct FuzzyConfig {
  bool enabled = false;
  std::size_t max_cost = 0;       // total edit budget per entity
  std::size_t min_token_len = 5;  // shorter tokens only match exactly

  bool operator==(const FuzzyConfig&) const = default;
};

// Declarative tuning state. Every field affects matching.
struct AnnotationConfig {
  bool case_insensitive = false;
  bool strip_diacritics = false;
  bool lemmatize = false;
  std::optional<std::string> lemma_table;  // path, relative to the project
  std::optional<std::string> stopword_language;
  std::set<std::string> false_positives;
  std::map<std::string, std::vector<std::string>> extra_aliases;
  std::set<std::string> split_names;  // lexicons whose names are split
  std::size_t min_length = 0;         // characters of the normalized surface
  std::vector<std::string> priority_order;
  FuzzyConfig fuzzy;

  bool operator==(const AnnotationConfig&) const = default;
};

nlohmann::json to_json(const AnnotationConfig& config);

// Rejects unknown fields and wrongly typed values with ConfigError naming
// the field. Does not check cross-field invariants; see validate().
AnnotationConfig config_from_json(const nlohmann::json& j);

// Throws ConfigError on the first violated invariant. When `lexicons` is
// given, priority_order must list exactly those names.
void validate(const AnnotationConfig& config,
              std::optional<std::span<const std::string>> lexicons = std::nullopt);

// Applies a field-level change set (JSON merge patch over the config
// fields) and validates the result. `current` is never modified; on error
// the caller keeps it.
AnnotationConfig update_config(const AnnotationConfig& current, const nlohmann::json& edit,
                               std::optional<std::span<const std::string>> lexicons = std::nullopt);

// SHA-256 of the canonical JSON serialization.
std::string config_hash(const AnnotationConfig& config);

AnnotationConfig load_config(const std::filesystem::path& path);
void save_config(const AnnotationConfig& config, const std::filesystem::path& path);

// surface -> lemma lookup table.
class LemmaTable {
 public:
  LemmaTable() = default;
  explicit LemmaTable(std::unordered_map<std::string, std::string> entries)
      : entries_(std::move(entries)) {}

  // `surface<TAB>lemma` per line; blank lines ignored.
  static LemmaTable parse(std::string_view text);
  static LemmaTable load(const std::filesystem::path& path);

  // Runs an external lemmatizer over `vocabulary`, one token per line in and
  // one lemma per line out.
  static LemmaTable from_command(const std::string& command,
                                 std::span<const std::string> vocabulary);

  const std::string* find(std::string_view surface) const;
  std::size_t size() const { return entries_.size(); }
  const std::unordered_map<std::string, std::string>& entries() const { return entries_; }

  // Tab-separated, sorted by surface.
  std::string serialize() const;

 private:
  std::unordered_map<std::string, std::string> entries_;
};

// Exact lookup; unknown tokens pass through unchanged.
std::string lemmatize_token(std::string_view token, const LemmaTable& table);

// External data a config refers to, resolved once per compile.
struct Resources {
  std::optional<LemmaTable> lemma_table;
  std::set<std::string> stopwords;
  std::string digest;  // content hash of everything above
};

// Loads the lemma table (relative paths resolve against `base_dir`) and
// the bundled stopword list. Throws ConfigError naming the field when a
// resource is missing.
Resources load_resources(const AnnotationConfig& config, const std::filesystem::path& base_dir);

// Token normalization shared by lexicon compilation and annotation:
// diacritics, then case, then lemma. The lemma table is normalized the
// same way so lookups line up.
class Normalizer {
 public:
  Normalizer() = default;
  Normalizer(const AnnotationConfig& config, const LemmaTable* table);

  std::string operator()(std::string_view token) const;

 private:
  std::string pre_lemma(std::string_view token) const;

  bool strip_diacritics_ = false;
  bool lowercase_ = false;
  std::optional<LemmaTable> lemmas_;
};

struct Scores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;

  bool operator==(const Scores&) const = default;
};

using MetricsSummary = std::map<std::string, Scores>;

struct TuningStep {
  std::size_t index = 0;
  std::string description;
  AnnotationConfig config;
  std::optional<MetricsSummary> metrics;

  bool operator==(const TuningStep&) const = default;
};

// Append-only record of tuning steps.
class TuningHistory {
 public:
  std::span<const TuningStep> steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }

  // One JSON document per line; appending a step appends one line.
  std::string serialize() const;
  static TuningHistory parse(std::string_view text);

 private:
  friend TuningHistory record_step(TuningHistory, std::string, AnnotationConfig,
                                   std::optional<MetricsSummary>);
  std::vector<TuningStep> steps_;
};

TuningHistory record_step(TuningHistory history, std::string description, AnnotationConfig config,
                          std::optional<MetricsSummary> metrics);

nlohmann::json to_json(const TuningStep& step);

}  // namespace gazette
