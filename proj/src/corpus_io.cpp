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

#include "gazette/corpus_io.hpp"

#include <algorithm>
#include <iterator>

#include "gazette/error.hpp"
#include "gazette/process.hpp"
#include "gazette/unicode.hpp"
#include "stopwords_data.hpp"

namespace gazette {
namespace {

constexpr std::u32string_view kEdgePunctuation = U".,;:!?()\"'«»„“”";
constexpr std::u32string_view kOpeningQuotes = U"\"'«„“";
constexpr std::u32string_view kSentenceFinal = U".!?";

bool contains(std::u32string_view set, char32_t cp) {
  return set.find(cp) != std::u32string_view::npos;
}

std::vector<std::u32string> whitespace_chunks(std::u32string_view text) {
  std::vector<std::u32string> chunks;
  std::u32string current;
  for (char32_t cp : text) {
    if (unicode::is_whitespace(cp)) {
      if (!current.empty()) chunks.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(cp);
    }
  }
  if (!current.empty()) chunks.push_back(std::move(current));
  return chunks;
}

void split_chunk(std::u32string_view chunk, std::vector<std::string>& out) {
  std::size_t begin = 0;
  std::size_t end = chunk.size();
  while (begin < end && contains(kEdgePunctuation, chunk[begin])) {
    out.push_back(unicode::encode(chunk.substr(begin, 1)));
    ++begin;
  }
  std::vector<std::string> trailing;
  while (end > begin && contains(kEdgePunctuation, chunk[end - 1])) {
    // A final period stays on a token that already has an inner period
    // ("U.A.E.").
    if (chunk[end - 1] == U'.' &&
        chunk.substr(begin, end - 1 - begin).find(U'.') != std::u32string_view::npos) {
      break;
    }
    trailing.push_back(unicode::encode(chunk.substr(end - 1, 1)));
    --end;
  }
  if (end > begin) out.push_back(unicode::encode(chunk.substr(begin, end - begin)));
  std::move(trailing.rbegin(), trailing.rend(), std::back_inserter(out));
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string> split_columns(std::string_view line) {
  std::vector<std::string> cols;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) cols.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return cols;
}

std::string_view strip_bom(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  return text;
}

}  // namespace

TagSequence Sentence::merged() const {
  if (!predicted) throw Error("sentence has no predicted tags");
  TagSequence tags = *predicted;
  for (const auto& o : overrides) {
    for (std::size_t i = o.start; i < o.end && i < tags.size(); ++i) {
      if (o.label == kOutside) {
        tags[i] = std::string(kOutside);
      } else {
        tags[i] = (i == o.start ? "B-" : "I-") + o.label;
      }
    }
    // The token after an override may now be an orphaned I- tag.
  }
  repair_bio(tags);
  return tags;
}

bool LabeledCorpus::has_gold() const {
  return !sentences.empty() &&
         std::all_of(sentences.begin(), sentences.end(), [](const Sentence& s) { return s.gold.has_value(); });
}

bool LabeledCorpus::has_predicted() const {
  return !sentences.empty() && std::all_of(sentences.begin(), sentences.end(),
                                           [](const Sentence& s) { return s.predicted.has_value(); });
}

LabeledCorpus parse_conll(std::string_view text) {
  LabeledCorpus corpus;
  text = strip_bom(text);
  const auto lines = split_lines(text);

  Sentence current;
  TagSequence current_tags;
  std::optional<bool> current_tagged;
  std::size_t first_line_of_sentence = 0;

  auto finish = [&] {
    if (!current.tokens.empty()) {
      if (*current_tagged) {
        corpus.repaired_tags += repair_bio(current_tags);
        current.gold = std::move(current_tags);
      }
      if (std::all_of(current.payload.begin(), current.payload.end(),
                      [](const auto& cols) { return cols.empty(); })) {
        current.payload.clear();
      }
      corpus.sentences.push_back(std::move(current));
    }
    current = Sentence{};
    current_tags.clear();
    current_tagged.reset();
  };

  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    auto cols = split_columns(lines[n]);
    if (cols.empty()) {
      finish();
      continue;
    }
    if (cols.front() == "-DOCSTART-") continue;
    if (lines[n].find('\t') != std::string_view::npos) corpus.column_separator = '\t';

    const bool tagged = cols.size() >= 2;
    if (!current_tagged) {
      current_tagged = tagged;
      first_line_of_sentence = line_no;
    } else if (*current_tagged != tagged) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": column count inconsistent with sentence starting at line " +
                        std::to_string(first_line_of_sentence));
    }
    current.tokens.push_back(cols.front());
    if (tagged) {
      const std::string& tag = cols.back();
      if (!parse_tag(tag)) {
        throw FormatError("line " + std::to_string(line_no) + ": invalid tag '" + tag + "'");
      }
      current_tags.push_back(tag);
      current.payload.emplace_back(std::make_move_iterator(cols.begin() + 1),
                                   std::make_move_iterator(cols.end() - 1));
    } else {
      current.payload.emplace_back();
    }
  }
  finish();
  return corpus;
}

std::string write_conll(const LabeledCorpus& corpus, TagLayer layer) {
  std::string out;
  const char sep = corpus.column_separator;
  for (std::size_t si = 0; si < corpus.sentences.size(); ++si) {
    const Sentence& s = corpus.sentences[si];
    TagSequence tags;
    switch (layer) {
      case TagLayer::kGold:
        if (!s.gold) throw Error("sentence " + std::to_string(si) + " has no gold tags");
        tags = *s.gold;
        break;
      case TagLayer::kPredicted:
        if (!s.predicted) throw Error("sentence " + std::to_string(si) + " has no predicted tags");
        tags = *s.predicted;
        break;
      case TagLayer::kMerged:
        if (!s.predicted) throw Error("sentence " + std::to_string(si) + " has no predicted tags");
        tags = s.merged();
        break;
    }
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      out += s.tokens[i];
      if (!s.payload.empty()) {
        for (const auto& col : s.payload[i]) {
          out.push_back(sep);
          out += col;
        }
      }
      out.push_back(sep);
      out += tags[i];
      out.push_back('\n');
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<std::vector<std::string>> tokenize(std::string_view raw, std::string_view) {
  std::vector<std::vector<std::string>> sentences;
  const auto chunks = whitespace_chunks(unicode::decode(strip_bom(raw)));
  std::vector<std::string> current;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    split_chunk(chunks[i], current);
    const bool final_mark = contains(kSentenceFinal, chunks[i].back());
    const bool next_opens = i + 1 < chunks.size() && (unicode::is_upper(chunks[i + 1].front()) ||
                                                      contains(kOpeningQuotes, chunks[i + 1].front()));
    if (final_mark && next_opens) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> tokens;
  for (const auto& chunk : whitespace_chunks(unicode::decode(text))) split_chunk(chunk, tokens);
  return tokens;
}

std::vector<std::vector<std::string>> tokenize_external(std::string_view raw,
                                                        const std::string& command) {
  std::vector<std::string> inputs;
  for (auto line : split_lines(strip_bom(raw))) {
    if (!split_columns(line).empty()) inputs.emplace_back(line);
  }
  const auto outputs = run_line_filter(command, inputs);
  if (outputs.size() != inputs.size()) {
    throw FormatError("external tokenizer returned " + std::to_string(outputs.size()) +
                      " lines for " + std::to_string(inputs.size()) + " input lines");
  }
  std::vector<std::vector<std::string>> sentences;
  for (const auto& line : outputs) {
    std::vector<std::string> tokens;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) tab = line.size();
      if (tab > start) tokens.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    sentences.push_back(std::move(tokens));
  }
  return sentences;
}

LabeledCorpus corpus_from_text(std::string_view raw, std::string language, std::string source_name) {
  LabeledCorpus corpus;
  corpus.language = std::move(language);
  corpus.source_name = std::move(source_name);
  for (auto& tokens : tokenize(raw, corpus.language)) {
    Sentence s;
    s.tokens = std::move(tokens);
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

std::vector<std::string> stopword_languages() {
  std::vector<std::string> codes;
  for (const auto& list : detail::kStopwordLists) codes.emplace_back(list.language);
  std::sort(codes.begin(), codes.end());
  return codes;
}

std::set<std::string> load_stopwords(std::string_view language) {
  const std::string code = unicode::to_lower(language);
  for (const auto& list : detail::kStopwordLists) {
    if (list.language != code) continue;
    std::set<std::string> words;
    for (auto line : split_lines(list.words)) {
      auto cols = split_columns(line);
      if (cols.empty() || cols.front().starts_with('#')) continue;
      std::string word = cols.front();
      for (std::size_t i = 1; i < cols.size(); ++i) word += " " + cols[i];
      words.insert(unicode::to_lower(word));
    }
    return words;
  }
  std::string available;
  for (const auto& code : stopword_languages()) {
    if (!available.empty()) available += ", ";
    available += code;
  }
  throw Error("no stopword list for language '" + std::string(language) + "' (available: " +
              available + ")");
}

}  // namespace gazette
