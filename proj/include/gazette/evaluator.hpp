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
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gazette/annotator.hpp"
#include "gazette/corpus_io.hpp"
#include "gazette/tuner.hpp"

// Token-level scoring of predicted tags against gold tags. The B-/I-
// prefix is ignored: a token counts for label X when its tag type is X.
// Degenerate ratios (0/0) are 0.
namespace gazette {

struct LabelCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  Scores scores() const;
  LabelCounts& operator+=(const LabelCounts& o);
  bool operator==(const LabelCounts&) const = default;
};

Scores prf(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);

// Throws Error naming the first sentence whose lengths differ.
LabelCounts count_label(std::span<const TagSequence> pred, std::span<const TagSequence> gold,
                        std::string_view label);
Scores token_prf(std::span<const TagSequence> pred, std::span<const TagSequence> gold,
                 std::string_view label);

using TokenCount = std::pair<std::string, std::uint64_t>;

struct ErrorRanking {
  std::vector<TokenCount> false_positives;
  std::vector<TokenCount> false_negatives;
};

// Tokens ranked by descending error count, ties lexicographic, at most k
// each.
ErrorRanking top_errors(std::span<const std::vector<std::string>> tokens,
                        std::span<const TagSequence> pred, std::span<const TagSequence> gold,
                        std::size_t k);

struct EvalReport {
  std::map<std::string, LabelCounts> per_label;
  LabelCounts micro;  // counts summed over labels
  std::vector<TokenCount> top_false_positives;
  std::vector<TokenCount> top_false_negatives;
};

// Scores the merged layer (predictions with manual overrides) against
// gold. Throws Error when either layer is missing.
EvalReport evaluate(const LabeledCorpus& corpus, std::size_t top_k);

// Scores an explicit prediction/gold pair, e.g. two CoNLL files.
EvalReport evaluate(std::span<const std::vector<std::string>> tokens,
                    std::span<const TagSequence> pred, std::span<const TagSequence> gold,
                    std::size_t top_k);

MetricsSummary summarize(const EvalReport& report);
nlohmann::json to_json(const EvalReport& report);

// Table of per-label percentages with one decimal plus error rankings.
std::string format_report(const EvalReport& report);

struct InspectionCandidate {
  std::string label;
  Provenance provenance;
  std::size_t start = 0;
  std::size_t length = 0;
  std::size_t fuzzy_cost = 0;
  bool won = false;
};

struct TokenInspection {
  std::string token;
  std::optional<std::string> gold;
  std::string predicted;                    // automatic annotation
  std::optional<std::string> override_tag;  // manual correction, if any
  std::vector<InspectionCandidate> candidates;
};

// Every entry whose match covers `index`, without greedy suppression,
// marked with whether it produced the automatic prediction.
TokenInspection inspect_token(const CompiledMatcher& matcher, std::span<const std::string> tokens,
                              std::size_t index, const AnnotationConfig& config,
                              const std::optional<TagSequence>& gold = std::nullopt);

nlohmann::json to_json(const TokenInspection& inspection);

// Records a manual correction; label "O" removes entities in the range.
// Throws Error for an invalid range or one overlapping an earlier override.
LabeledCorpus override_label(LabeledCorpus corpus, std::size_t sentence, LabelOverride change);

}  // namespace gazette
