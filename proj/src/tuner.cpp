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

#include "gazette/tuner.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "gazette/corpus_io.hpp"
#include "gazette/error.hpp"
#include "gazette/hash.hpp"
#include "gazette/process.hpp"
#include "gazette/unicode.hpp"

namespace gazette {
namespace {

using nlohmann::json;

bool get_bool(const json& j, const std::string& field) {
  if (!j.is_boolean()) throw ConfigError(field, "expected a boolean");
  return j.get<bool>();
}

std::size_t get_count(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    throw ConfigError(field, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::string get_string(const json& j, const std::string& field) {
  if (!j.is_string()) throw ConfigError(field, "expected a string");
  return j.get<std::string>();
}

std::optional<std::string> get_optional_string(const json& j, const std::string& field) {
  if (j.is_null()) return std::nullopt;
  return get_string(j, field);
}

std::vector<std::string> get_strings(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) out.push_back(get_string(v, field));
  return out;
}

FuzzyConfig fuzzy_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("fuzzy", "expected an object");
  FuzzyConfig f;
  for (const auto& [key, value] : j.items()) {
    const std::string field = "fuzzy." + key;
    if (key == "enabled") {
      f.enabled = get_bool(value, field);
    } else if (key == "max_cost") {
      f.max_cost = get_count(value, field);
    } else if (key == "min_token_len") {
      f.min_token_len = get_count(value, field);
    } else {
      throw ConfigError(field, "unknown field");
    }
  }
  return f;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

json to_json(const AnnotationConfig& c) {
  json j;
  j["case_insensitive"] = c.case_insensitive;
  j["strip_diacritics"] = c.strip_diacritics;
  j["lemmatize"] = c.lemmatize;
  j["lemma_table"] = c.lemma_table ? json(*c.lemma_table) : json(nullptr);
  j["stopword_language"] = c.stopword_language ? json(*c.stopword_language) : json(nullptr);
  j["false_positives"] = c.false_positives;
  j["extra_aliases"] = json::object();
  for (const auto& [surface, aliases] : c.extra_aliases) j["extra_aliases"][surface] = aliases;
  j["split_names"] = c.split_names;
  j["min_length"] = c.min_length;
  j["priority_order"] = c.priority_order;
  j["fuzzy"] = {{"enabled", c.fuzzy.enabled},
                {"max_cost", c.fuzzy.max_cost},
                {"min_token_len", c.fuzzy.min_token_len}};
  return j;
}

AnnotationConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  AnnotationConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "case_insensitive") {
      c.case_insensitive = get_bool(value, key);
    } else if (key == "strip_diacritics") {
      c.strip_diacritics = get_bool(value, key);
    } else if (key == "lemmatize") {
      c.lemmatize = get_bool(value, key);
    } else if (key == "lemma_table") {
      c.lemma_table = get_optional_string(value, key);
    } else if (key == "stopword_language") {
      c.stopword_language = get_optional_string(value, key);
    } else if (key == "false_positives") {
      auto v = get_strings(value, key);
      c.false_positives = {v.begin(), v.end()};
    } else if (key == "extra_aliases") {
      if (!value.is_object()) throw ConfigError(key, "expected an object of surface -> aliases");
      for (const auto& [surface, aliases] : value.items()) {
        c.extra_aliases[surface] = get_strings(aliases, key + "." + surface);
      }
    } else if (key == "split_names") {
      auto v = get_strings(value, key);
      c.split_names = {v.begin(), v.end()};
    } else if (key == "min_length") {
      c.min_length = get_count(value, key);
    } else if (key == "priority_order") {
      c.priority_order = get_strings(value, key);
    } else if (key == "fuzzy") {
      c.fuzzy = fuzzy_from_json(value);
    } else {
      throw ConfigError(key, "unknown field");
    }
  }
  return c;
}

void validate(const AnnotationConfig& c, std::optional<std::span<const std::string>> lexicons) {
  std::set<std::string> seen;
  for (const auto& name : c.priority_order) {
    if (name.empty()) throw ConfigError("priority_order", "empty lexicon name");
    if (!seen.insert(name).second) {
      throw ConfigError("priority_order", "duplicate lexicon '" + name + "'");
    }
  }
  if (lexicons) {
    for (const auto& name : *lexicons) {
      if (!seen.contains(name)) {
        throw ConfigError("priority_order", "lexicon '" + name + "' is not listed");
      }
    }
    for (const auto& name : c.priority_order) {
      if (std::find(lexicons->begin(), lexicons->end(), name) == lexicons->end()) {
        throw ConfigError("priority_order", "unknown lexicon '" + name + "'");
      }
    }
  }
  if (c.lemmatize && (!c.lemma_table || c.lemma_table->empty())) {
    throw ConfigError("lemma_table", "lemmatize is enabled but no lemma table is set");
  }
  if (c.fuzzy.enabled && c.fuzzy.max_cost == 0) {
    throw ConfigError("fuzzy.max_cost", "must be positive when fuzzy matching is enabled");
  }
  if (!c.fuzzy.enabled && c.fuzzy.max_cost != 0) {
    throw ConfigError("fuzzy.max_cost", "must be 0 when fuzzy matching is disabled");
  }
  if (c.fuzzy.min_token_len == 0) {
    throw ConfigError("fuzzy.min_token_len", "must be positive");
  }
  for (const auto& fp : c.false_positives) {
    if (fp.empty()) throw ConfigError("false_positives", "empty entry");
  }
  for (const auto& [surface, aliases] : c.extra_aliases) {
    if (surface.empty()) throw ConfigError("extra_aliases", "empty surface");
    for (const auto& a : aliases) {
      if (a.empty()) throw ConfigError("extra_aliases", "empty alias for '" + surface + "'");
    }
  }
}

AnnotationConfig update_config(const AnnotationConfig& current, const json& edit,
                               std::optional<std::span<const std::string>> lexicons) {
  if (!edit.is_object()) throw ConfigError("config", "edit must be a JSON object");
  json merged = to_json(current);
  for (const auto& [key, value] : edit.items()) {
    if (!merged.contains(key)) throw ConfigError(key, "unknown field");
    if (key == "fuzzy" && value.is_object()) {
      for (const auto& [sub, v] : value.items()) merged["fuzzy"][sub] = v;
    } else {
      merged[key] = value;
    }
  }
  AnnotationConfig next = config_from_json(merged);
  validate(next, lexicons);
  return next;
}

std::string config_hash(const AnnotationConfig& config) {
  return sha256_hex(to_json(config).dump());
}

AnnotationConfig load_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  AnnotationConfig c = config_from_json(j);
  validate(c);
  return c;
}

void save_config(const AnnotationConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(config).dump(2) << '\n';
}

LemmaTable LemmaTable::parse(std::string_view text) {
  std::unordered_map<std::string, std::string> entries;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string_view::npos) {
      throw FormatError("lemma table line " + std::to_string(line_no) +
                        ": expected surface<TAB>lemma");
    }
    entries.emplace(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
  }
  return LemmaTable(std::move(entries));
}

LemmaTable LemmaTable::load(const std::filesystem::path& path) { return parse(read_file(path)); }

LemmaTable LemmaTable::from_command(const std::string& command,
                                    std::span<const std::string> vocabulary) {
  const auto lemmas = run_line_filter(command, vocabulary);
  if (lemmas.size() != vocabulary.size()) {
    throw FormatError("external lemmatizer returned " + std::to_string(lemmas.size()) +
                      " lines for " + std::to_string(vocabulary.size()) + " tokens");
  }
  std::unordered_map<std::string, std::string> entries;
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    if (!lemmas[i].empty() && lemmas[i] != vocabulary[i]) entries.emplace(vocabulary[i], lemmas[i]);
  }
  return LemmaTable(std::move(entries));
}

const std::string* LemmaTable::find(std::string_view surface) const {
  auto it = entries_.find(std::string(surface));
  return it == entries_.end() ? nullptr : &it->second;
}

std::string LemmaTable::serialize() const {
  std::vector<std::pair<std::string, std::string>> sorted(entries_.begin(), entries_.end());
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  for (const auto& [surface, lemma] : sorted) out += surface + '\t' + lemma + '\n';
  return out;
}

std::string lemmatize_token(std::string_view token, const LemmaTable& table) {
  const std::string* lemma = table.find(token);
  return lemma ? *lemma : std::string(token);
}

Resources load_resources(const AnnotationConfig& config, const std::filesystem::path& base_dir) {
  Resources r;
  Sha256 digest;
  if (config.lemmatize) {
    if (!config.lemma_table) throw ConfigError("lemma_table", "lemmatize requires a lemma table");
    std::filesystem::path path = *config.lemma_table;
    if (path.is_relative()) path = base_dir / path;
    if (!std::filesystem::exists(path)) {
      throw ConfigError("lemma_table", "file not found: " + path.string());
    }
    r.lemma_table = LemmaTable::load(path);
    digest.update("lemmas\n").update(r.lemma_table->serialize());
  }
  if (config.stopword_language) {
    try {
      r.stopwords = load_stopwords(*config.stopword_language);
    } catch (const Error& e) {
      throw ConfigError("stopword_language", e.what());
    }
    digest.update("stopwords\n");
    for (const auto& w : r.stopwords) digest.update(w).update("\n");
  }
  r.digest = digest.hex();
  return r;
}

Normalizer::Normalizer(const AnnotationConfig& config, const LemmaTable* table)
    : strip_diacritics_(config.strip_diacritics), lowercase_(config.case_insensitive) {
  if (config.lemmatize && table != nullptr) {
    std::unordered_map<std::string, std::string> normalized;
    for (const auto& [surface, lemma] : table->entries()) {
      normalized.emplace(pre_lemma(surface), pre_lemma(lemma));
    }
    lemmas_ = LemmaTable(std::move(normalized));
  }
}

std::string Normalizer::pre_lemma(std::string_view token) const {
  std::string out(token);
  if (strip_diacritics_) out = unicode::strip_diacritics(out);
  if (lowercase_) {
    std::string lower = unicode::to_lower(out);
    // Lowercasing can introduce marks again (U+0130 -> i + U+0307).
    if (strip_diacritics_ && lower != out) lower = unicode::strip_diacritics(lower);
    out = std::move(lower);
  }
  return out;
}

std::string Normalizer::operator()(std::string_view token) const {
  std::string out = pre_lemma(token);
  if (lemmas_) out = lemmatize_token(out, *lemmas_);
  return out;
}

json to_json(const TuningStep& step) {
  json j;
  j["index"] = step.index;
  j["description"] = step.description;
  j["config"] = to_json(step.config);
  if (step.metrics) {
    json m = json::object();
    for (const auto& [label, s] : *step.metrics) {
      m[label] = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
    }
    j["metrics"] = m;
  } else {
    j["metrics"] = nullptr;
  }
  return j;
}

std::string TuningHistory::serialize() const {
  std::string out;
  for (const auto& step : steps_) out += to_json(step).dump() + '\n';
  return out;
}

TuningHistory TuningHistory::parse(std::string_view text) {
  TuningHistory h;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      TuningStep step;
      step.index = j.at("index").get<std::size_t>();
      step.description = j.at("description").get<std::string>();
      step.config = config_from_json(j.at("config"));
      if (!j.at("metrics").is_null()) {
        MetricsSummary m;
        for (const auto& [label, s] : j.at("metrics").items()) {
          m[label] = Scores{s.at("precision").get<double>(), s.at("recall").get<double>(),
                            s.at("f1").get<double>()};
        }
        step.metrics = std::move(m);
      }
      if (!h.steps_.empty() && step.index <= h.steps_.back().index) {
        throw FormatError("history line " + std::to_string(line_no) + ": index not increasing");
      }
      h.steps_.push_back(std::move(step));
    } catch (const json::exception& e) {
      throw FormatError("history line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return h;
}

TuningHistory record_step(TuningHistory history, std::string description, AnnotationConfig config,
                          std::optional<MetricsSummary> metrics) {
  TuningStep step;
  step.index = history.steps_.empty() ? 0 : history.steps_.back().index + 1;
  step.description = std::move(description);
  step.config = std::move(config);
  step.metrics = std::move(metrics);
  history.steps_.push_back(std::move(step));
  return history;
}

}  // namespace gazette
