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

#include "gazette/annotator.hpp"

#include <algorithm>
#include <thread>

#include "gazette/error.hpp"
#include "gazette/unicode.hpp"

namespace gazette {

bool better_match(const Match& a, const Match& b) {
  if (a.length() != b.length()) return a.length() > b.length();
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.entry->priority != b.entry->priority) return a.entry->priority < b.entry->priority;
  if (a.entry->provenance.lexicon != b.entry->provenance.lexicon) {
    return a.entry->provenance.lexicon < b.entry->provenance.lexicon;
  }
  return a.entry->key.tokens < b.entry->key.tokens;
}

Annotator::Annotator(const CompiledMatcher& matcher, const AnnotationConfig& config)
    : matcher_(matcher) {
  if (matcher.config_hash() != config_hash(config)) {
    throw StaleMatcherError("matcher was compiled from a different configuration");
  }
  if (config.fuzzy.enabled) {
    budget_ = config.fuzzy.max_cost;
    min_fuzzy_len_ = config.fuzzy.min_token_len;
  }
}

std::vector<std::string> Annotator::normalize(std::span<const std::string> tokens) const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(matcher_.normalizer()(t));
  return out;
}

void Annotator::collect(std::span<const std::string> normalized,
                        std::span<const std::u32string> decoded, std::size_t start,
                        CompiledMatcher::NodeId node_id, std::size_t depth, std::size_t cost,
                        std::vector<Match>& out) const {
  const auto& node = matcher_.node(node_id);
  for (auto idx : node.entries) {
    out.push_back(Match{start, start + depth, &matcher_.entries()[idx], cost});
  }
  const std::size_t pos = start + depth;
  if (pos >= normalized.size()) return;
  const std::string& token = normalized[pos];
  if (const auto* next = matcher_.child(node_id, token)) {
    collect(normalized, decoded, start, *next, depth + 1, cost, out);
  }
  if (cost >= budget_ || decoded.empty() || decoded[pos].size() < min_fuzzy_len_) return;
  const std::size_t remaining = budget_ - cost;
  for (const auto& child : node.fuzzy_children) {
    if (child.token.size() < min_fuzzy_len_ || child.token == decoded[pos]) continue;
    const std::size_t d = unicode::bounded_edit_distance(child.token, decoded[pos], remaining);
    if (d <= remaining) collect(normalized, decoded, start, child.node, depth + 1, cost + d, out);
  }
}

std::vector<Match> Annotator::matches_at(std::span<const std::string> normalized,
                                         std::span<const std::u32string> decoded,
                                         std::size_t start) const {
  std::vector<Match> out;
  collect(normalized, decoded, start, CompiledMatcher::kRoot, 0, 0, out);
  return out;
}

std::vector<Match> Annotator::matches_at(std::span<const std::string> normalized,
                                         std::size_t start) const {
  std::vector<std::u32string> decoded;
  if (budget_ > 0) {
    for (const auto& t : normalized) decoded.push_back(unicode::decode(t));
  }
  return matches_at(normalized, decoded, start);
}

std::vector<Match> Annotator::select(std::span<const std::string> normalized) const {
  std::vector<std::u32string> decoded;
  if (budget_ > 0) {
    for (const auto& t : normalized) decoded.push_back(unicode::decode(t));
  }
  std::vector<Match> chosen;
  std::size_t i = 0;
  while (i < normalized.size()) {
    auto matches = matches_at(normalized, decoded, i);
    if (matches.empty()) {
      ++i;
      continue;
    }
    chosen.push_back(*std::min_element(matches.begin(), matches.end(), better_match));
    i = chosen.back().end;
  }
  return chosen;
}

std::vector<Span> Annotator::operator()(std::span<const std::string> tokens) const {
  std::vector<Span> spans;
  for (const Match& m : select(normalize(tokens))) {
    spans.push_back(Span{m.start, m.end, m.entry->label, m.entry->provenance, m.cost});
  }
  return spans;
}

std::vector<Span> annotate(const CompiledMatcher& matcher, std::span<const std::string> tokens,
                           const AnnotationConfig& config) {
  return Annotator(matcher, config)(tokens);
}

LabeledCorpus annotate_corpus(const CompiledMatcher& matcher, LabeledCorpus corpus,
                              const AnnotationConfig& config, unsigned threads) {
  const Annotator annotator(matcher, config);
  auto& sentences = corpus.sentences;
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto& s = sentences[i];
      s.predicted = spans_to_tags(annotator(s.tokens), s.tokens.size());
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, sentences.size()));
  if (threads <= 1) {
    work(0, sentences.size());
    return corpus;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (sentences.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(sentences.size(), begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(work, begin, end);
  }
  for (auto& th : pool) th.join();
  return corpus;
}

}  // namespace gazette
