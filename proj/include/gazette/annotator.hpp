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
#include <span>
#include <string>
#include <vector>

#include "gazette/corpus_io.hpp"
#include "gazette/lexicon.hpp"
#include "gazette/tags.hpp"
#include "gazette/tuner.hpp"

namespace gazette {

// One lexicon entry matching tokens [start, end).
struct Match {
  std::size_t start = 0;
  std::size_t end = 0;
  const CompiledEntry* entry = nullptr;
  std::size_t cost = 0;  // fuzzy edit operations used

  std::size_t length() const { return end - start; }
};

// Strict preference between two matches starting at the same position:
// longer, then cheaper, then lower priority number, then lexicon name,
// then key tokens.
bool better_match(const Match& a, const Match& b);

// Greedy leftmost-longest annotation against one compiled matcher.
class Annotator {
 public:
  // Throws StaleMatcherError when `matcher` was compiled from another
  // configuration.
  Annotator(const CompiledMatcher& matcher, const AnnotationConfig& config);

  std::vector<Span> operator()(std::span<const std::string> tokens) const;

  // The matches chosen by the greedy scan over already normalized tokens.
  std::vector<Match> select(std::span<const std::string> normalized) const;

  // Every match starting at `start`, in no particular order.
  // `normalized` must come from normalize().
  std::vector<Match> matches_at(std::span<const std::string> normalized, std::size_t start) const;

  std::vector<std::string> normalize(std::span<const std::string> tokens) const;

  const CompiledMatcher& matcher() const { return matcher_; }

 private:
  void collect(std::span<const std::string> normalized, std::span<const std::u32string> decoded,
               std::size_t start, CompiledMatcher::NodeId node, std::size_t depth,
               std::size_t cost, std::vector<Match>& out) const;
  std::vector<Match> matches_at(std::span<const std::string> normalized,
                                std::span<const std::u32string> decoded, std::size_t start) const;

  const CompiledMatcher& matcher_;
  std::size_t budget_ = 0;
  std::size_t min_fuzzy_len_ = 0;
};

std::vector<Span> annotate(const CompiledMatcher& matcher, std::span<const std::string> tokens,
                           const AnnotationConfig& config);

// Fills the predicted layer of every sentence. Sentences are independent
// and may be processed on `threads` workers (0 = hardware concurrency);
// output order always equals input order.
LabeledCorpus annotate_corpus(const CompiledMatcher& matcher, LabeledCorpus corpus,
                              const AnnotationConfig& config, unsigned threads = 1);

}  // namespace gazette
