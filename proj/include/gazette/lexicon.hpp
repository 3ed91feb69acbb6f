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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gazette/kb_extractor.hpp"
#include "gazette/tags.hpp"
#include "gazette/tuner.hpp"

namespace gazette {

// Normalized token sequence of a lexicon surface.
struct SurfaceKey {
  std::vector<std::string> tokens;

  std::string joined() const;
  bool operator==(const SurfaceKey&) const = default;
};

struct CompiledEntry {
  SurfaceKey key;
  std::string label;
  std::size_t priority = 0;  // position of the lexicon in priority_order; lower wins
  Provenance provenance;

  bool operator==(const CompiledEntry&) const = default;
};

struct NamedLexicon {
  std::string name;
  RawLexicon lexicon;
};

// Transform pipeline, in this order:
//   1. add config aliases        2. split names (lexicons in split_names)
//   3. tokenize                  4. strip diacritics
//   5. lowercase                 6. lemmatize
//   7. drop stopword surfaces    8. drop surfaces shorter than min_length
//   9. drop false positives
// Entries with equal keys collapse onto the first occurrence. Throws
// ConfigError when the lexicon is missing from priority_order or the lemma
// table is required but absent.
std::vector<CompiledEntry> apply_transforms(std::string_view lexicon_name, const RawLexicon& raw,
                                            const AnnotationConfig& config,
                                            const Resources& resources);
std::vector<CompiledEntry> apply_transforms(std::string_view lexicon_name, const RawLexicon& raw,
                                            const AnnotationConfig& config,
                                            const Resources& resources,
                                            const Normalizer& normalizer);

struct EntryList {
  std::string lexicon;
  std::vector<CompiledEntry> entries;
};

// Token trie over every compiled entry. Immutable once built and safe to
// share between threads.
class CompiledMatcher {
 public:
  using NodeId = std::uint32_t;
  static constexpr NodeId kRoot = 0;

  struct Child {
    std::u32string token;  // decoded, for fuzzy comparison
    NodeId node;
  };

  struct Node {
    std::unordered_map<std::string, NodeId> children;
    std::vector<Child> fuzzy_children;   // filled only when fuzzy matching is on
    std::vector<std::uint32_t> entries;  // indices into entries(), best first
  };

  const std::string& fingerprint() const { return fingerprint_; }
  const std::string& config_hash() const { return config_hash_; }
  const AnnotationConfig& config() const { return config_; }
  const Normalizer& normalizer() const { return normalizer_; }

  std::span<const CompiledEntry> entries() const { return entries_; }
  const Node& node(NodeId id) const { return nodes_[id]; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t accepting_nodes() const;

  // Child reached by `token`, or nullptr.
  const NodeId* child(NodeId id, const std::string& token) const;

  // Entries stored under exactly `key`, best first.
  std::vector<const CompiledEntry*> lookup(std::span<const std::string> key) const;

 private:
  friend CompiledMatcher compile(std::span<const EntryList>, const AnnotationConfig&,
                                 const Resources&);

  std::vector<Node> nodes_;
  std::vector<CompiledEntry> entries_;
  AnnotationConfig config_;
  Normalizer normalizer_;
  std::string config_hash_;
  std::string fingerprint_;
};

// Priority order comes from config.priority_order, which must name every
// lexicon exactly once. Deterministic; the fingerprint covers the config,
// the resources and every entry.
CompiledMatcher compile(std::span<const EntryList> entry_lists, const AnnotationConfig& config,
                        const Resources& resources);

// apply_transforms over every lexicon followed by compile.
CompiledMatcher build_matcher(std::span<const NamedLexicon> lexicons,
                              const AnnotationConfig& config, const Resources& resources);

}  // namespace gazette
