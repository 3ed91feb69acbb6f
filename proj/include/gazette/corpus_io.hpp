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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gazette/tags.hpp"

namespace gazette {

// A manual correction of the predicted layer; label "O" clears the range.
struct LabelOverride {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;

  bool operator==(const LabelOverride&) const = default;
};

struct Sentence {
  std::vector<std::string> tokens;
  // Opaque middle CoNLL columns per token (POS, chunk, ...); either empty
  // or one entry per token.
  std::vector<std::vector<std::string>> payload;
  std::optional<TagSequence> gold;
  std::optional<TagSequence> predicted;
  std::vector<LabelOverride> overrides;

  // Predicted tags with overrides applied, BIO-repaired.
  TagSequence merged() const;
};

struct LabeledCorpus {
  std::vector<Sentence> sentences;
  std::string language;
  std::string source_name;
  char column_separator = ' ';
  std::size_t repaired_tags = 0;  // IOB1 -> BIO rewrites applied by the parser

  bool has_gold() const;
  bool has_predicted() const;
};

enum class TagLayer { kGold, kPredicted, kMerged };

// Blank lines separate sentences; the first column is the token, the last
// the tag when a line has two or more columns. -DOCSTART- lines are
// skipped. Throws FormatError naming the line for invalid tags.
LabeledCorpus parse_conll(std::string_view text);

// Throws Error when a sentence lacks the requested layer.
std::string write_conll(const LabeledCorpus& corpus, TagLayer layer);

// Default rule-based tokenizer: whitespace split, edge punctuation split
// off, sentence break after . ! ? when the next word starts uppercase or
// with an opening quote.
std::vector<std::vector<std::string>> tokenize(std::string_view raw,
                                               std::string_view language = {});

// Same token rules without sentence splitting; used for lexicon surfaces.
std::vector<std::string> tokenize_words(std::string_view text);

// External tokenizer: each input line goes to `command` as one line, which
// must answer with exactly one line of tab-separated tokens.
std::vector<std::vector<std::string>> tokenize_external(std::string_view raw,
                                                        const std::string& command);

// Builds an unlabeled corpus from raw text with the default tokenizer.
LabeledCorpus corpus_from_text(std::string_view raw, std::string language,
                               std::string source_name);

// Bundled stopword list, lowercased. Throws Error listing the available
// codes for unknown languages.
std::set<std::string> load_stopwords(std::string_view language);
std::vector<std::string> stopword_languages();

}  // namespace gazette
