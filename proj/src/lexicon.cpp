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

#include "gazette/lexicon.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "gazette/corpus_io.hpp"
#include "gazette/error.hpp"
#include "gazette/hash.hpp"
#include "gazette/unicode.hpp"

namespace gazette {
namespace {

struct Candidate {
  std::string surface;
  std::string source_item;
};

std::vector<std::string> whitespace_parts(const std::string& s) {
  std::vector<std::string> parts;
  std::string current;
  for (char32_t cp : unicode::decode(s)) {
    if (unicode::is_whitespace(cp)) {
      if (!current.empty()) parts.push_back(std::move(current));
      current.clear();
    } else {
      unicode::append_utf8(current, cp);
    }
  }
  if (!current.empty()) parts.push_back(std::move(current));
  return parts;
}

std::string join(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::vector<std::string> normalize_surface(std::string_view surface, const Normalizer& normalize) {
  std::vector<std::string> tokens;
  for (const auto& t : tokenize_words(surface)) {
    auto n = normalize(t);
    if (!n.empty()) tokens.push_back(std::move(n));
  }
  return tokens;
}

std::size_t priority_of(std::string_view name, const AnnotationConfig& config) {
  auto it = std::find(config.priority_order.begin(), config.priority_order.end(), name);
  if (it == config.priority_order.end()) {
    throw ConfigError("priority_order", "lexicon '" + std::string(name) + "' is not listed");
  }
  return static_cast<std::size_t>(it - config.priority_order.begin());
}

void hash_entry(Sha256& h, const CompiledEntry& e) {
  for (const auto& t : e.key.tokens) h.update(t).update("\x1f");
  h.update("\x1e").update(e.label).update("\x1e").update(std::to_string(e.priority));
  h.update("\x1e").update(e.provenance.lexicon).update("\x1e").update(e.provenance.source_item);
  h.update("\x1e").update(e.provenance.surface).update("\n");
}

}  // namespace

std::string SurfaceKey::joined() const { return join(tokens); }

std::vector<CompiledEntry> apply_transforms(std::string_view lexicon_name, const RawLexicon& raw,
                                            const AnnotationConfig& config,
                                            const Resources& resources) {
  if (config.lemmatize && !resources.lemma_table) {
    throw ConfigError("lemma_table", "lemmatize is enabled but no lemma table is loaded");
  }
  const Normalizer normalizer(config, resources.lemma_table ? &*resources.lemma_table : nullptr);
  return apply_transforms(lexicon_name, raw, config, resources, normalizer);
}

std::vector<CompiledEntry> apply_transforms(std::string_view lexicon_name, const RawLexicon& raw,
                                            const AnnotationConfig& config,
                                            const Resources& resources,
                                            const Normalizer& normalizer) {
  if (config.lemmatize && !resources.lemma_table) {
    throw ConfigError("lemma_table", "lemmatize is enabled but no lemma table is loaded");
  }
  const std::size_t priority = priority_of(lexicon_name, config);

  // 1. config aliases
  std::vector<Candidate> candidates;
  candidates.reserve(raw.entries.size());
  for (const auto& e : raw.entries) {
    candidates.push_back({e.surface, e.source_item});
    auto extra = config.extra_aliases.find(e.surface);
    if (extra != config.extra_aliases.end() && !e.is_alias) {
      for (const auto& alias : extra->second) candidates.push_back({alias, e.source_item});
    }
  }

  // 2. name parts
  if (config.split_names.contains(std::string(lexicon_name))) {
    std::vector<Candidate> with_parts;
    with_parts.reserve(candidates.size() * 2);
    for (auto& c : candidates) {
      auto parts = whitespace_parts(c.surface);
      with_parts.push_back(c);
      if (parts.size() < 2) continue;
      for (auto& part : parts) {
        if (unicode::length(part) >= 2) with_parts.push_back({std::move(part), c.source_item});
      }
    }
    candidates = std::move(with_parts);
  }

  std::unordered_set<std::string> false_positives;
  for (const auto& fp : config.false_positives) {
    false_positives.insert(join(normalize_surface(fp, normalizer)));
  }

  std::vector<CompiledEntry> out;
  std::unordered_set<std::string> seen;
  for (auto& c : candidates) {
    // 3.-6. tokenize and normalize
    auto tokens = normalize_surface(c.surface, normalizer);
    if (tokens.empty()) continue;
    std::string joined = join(tokens);
    // 7. stopwords
    if (!resources.stopwords.empty() && resources.stopwords.contains(unicode::to_lower(joined))) {
      continue;
    }
    // 8. minimum length
    if (unicode::length(joined) < config.min_length) continue;
    // 9. false positives
    if (false_positives.contains(joined)) continue;
    if (!seen.insert(joined).second) continue;
    out.push_back(CompiledEntry{SurfaceKey{std::move(tokens)}, raw.label, priority,
                                Provenance{std::string(lexicon_name), c.source_item, c.surface}});
  }
  return out;
}

std::size_t CompiledMatcher::accepting_nodes() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const Node& n) { return !n.entries.empty(); }));
}

const CompiledMatcher::NodeId* CompiledMatcher::child(NodeId id, const std::string& token) const {
  const auto& children = nodes_[id].children;
  auto it = children.find(token);
  return it == children.end() ? nullptr : &it->second;
}

std::vector<const CompiledEntry*> CompiledMatcher::lookup(std::span<const std::string> key) const {
  NodeId at = kRoot;
  for (const auto& token : key) {
    const NodeId* next = child(at, token);
    if (next == nullptr) return {};
    at = *next;
  }
  std::vector<const CompiledEntry*> out;
  for (auto idx : nodes_[at].entries) out.push_back(&entries_[idx]);
  return out;
}

CompiledMatcher compile(std::span<const EntryList> entry_lists, const AnnotationConfig& config,
                        const Resources& resources) {
  std::set<std::string> names;
  for (const auto& list : entry_lists) {
    if (!names.insert(list.lexicon).second) {
      throw ConfigError("priority_order", "duplicate lexicon name '" + list.lexicon + "'");
    }
  }
  validate(config);
  for (const auto& name : names) priority_of(name, config);

  CompiledMatcher m;
  m.config_ = config;
  m.normalizer_ = Normalizer(config, resources.lemma_table ? &*resources.lemma_table : nullptr);
  m.config_hash_ = config_hash(config);
  m.nodes_.emplace_back();

  // Lists are consumed in priority order so the fingerprint does not
  // depend on the order they were passed in.
  std::vector<const EntryList*> ordered;
  for (const auto& list : entry_lists) ordered.push_back(&list);
  std::sort(ordered.begin(), ordered.end(), [&](const EntryList* a, const EntryList* b) {
    return priority_of(a->lexicon, config) < priority_of(b->lexicon, config);
  });

  Sha256 fingerprint;
  fingerprint.update(m.config_hash_).update("\n").update(resources.digest).update("\n");
  for (const EntryList* list : ordered) {
    fingerprint.update("lexicon ").update(list->lexicon).update("\n");
    for (const auto& entry : list->entries) {
      if (entry.key.tokens.empty()) throw Error("compiled entry with empty key");
      hash_entry(fingerprint, entry);
      CompiledMatcher::NodeId at = CompiledMatcher::kRoot;
      for (const auto& token : entry.key.tokens) {
        auto it = m.nodes_[at].children.find(token);
        if (it == m.nodes_[at].children.end()) {
          const auto id = static_cast<CompiledMatcher::NodeId>(m.nodes_.size());
          m.nodes_[at].children.emplace(token, id);
          if (config.fuzzy.enabled) m.nodes_[at].fuzzy_children.push_back({unicode::decode(token), id});
          m.nodes_.emplace_back();
          at = id;
        } else {
          at = it->second;
        }
      }
      m.nodes_[at].entries.push_back(static_cast<std::uint32_t>(m.entries_.size()));
      m.entries_.push_back(entry);
    }
  }
  m.fingerprint_ = fingerprint.hex();

  for (auto& node : m.nodes_) {
    std::sort(node.entries.begin(), node.entries.end(), [&](std::uint32_t a, std::uint32_t b) {
      const auto& ea = m.entries_[a];
      const auto& eb = m.entries_[b];
      if (ea.priority != eb.priority) return ea.priority < eb.priority;
      if (ea.provenance.lexicon != eb.provenance.lexicon) {
        return ea.provenance.lexicon < eb.provenance.lexicon;
      }
      return a < b;
    });
  }
  return m;
}

CompiledMatcher build_matcher(std::span<const NamedLexicon> lexicons,
                              const AnnotationConfig& config, const Resources& resources) {
  if (config.lemmatize && !resources.lemma_table) {
    throw ConfigError("lemma_table", "lemmatize is enabled but no lemma table is loaded");
  }
  const Normalizer normalizer(config, resources.lemma_table ? &*resources.lemma_table : nullptr);
  std::vector<EntryList> lists;
  lists.reserve(lexicons.size());
  for (const auto& lex : lexicons) {
    lists.push_back({lex.name, apply_transforms(lex.name, lex.lexicon, config, resources, normalizer)});
  }
  return compile(lists, config, resources);
}

}  // namespace gazette
