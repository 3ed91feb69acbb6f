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

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "gazette/kb_extractor.hpp"
#include "gazette/lexicon.hpp"
#include "gazette/tuner.hpp"

// Reference implementations used to cross-check the library. They share
// no code with the code under test.
namespace gazette::testing {

inline std::u32string utf32(std::string_view s) {
  std::u32string out;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    int n = c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
    char32_t cp = n == 1 ? c : n == 2 ? (c & 0x1F) : n == 3 ? (c & 0x0F) : (c & 0x07);
    for (int k = 1; k < n; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out.push_back(cp);
    i += n;
  }
  return out;
}

// Full-table Levenshtein distance.
inline std::size_t levenshtein(std::string_view a8, std::string_view b8) {
  const std::u32string a = utf32(a8), b = utf32(b8);
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

inline std::vector<std::string> split_spaces(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct OracleEntry {
  std::vector<std::string> key;
  std::string label;
  std::size_t priority;
  std::string lexicon;
};

struct OracleSpan {
  std::size_t start, end;
  std::string label;
  std::size_t cost;
  std::string lexicon;

  bool operator==(const OracleSpan&) const = default;
};

// Entries of space-separated lexicons under the identity configuration.
// Repeated keys within one lexicon keep the first occurrence.
inline std::vector<OracleEntry> oracle_entries(const std::vector<NamedLexicon>& lexicons,
                                               const std::vector<std::string>& priority_order) {
  std::vector<OracleEntry> out;
  for (const auto& named : lexicons) {
    const auto pos = std::find(priority_order.begin(), priority_order.end(), named.name);
    const std::size_t priority = static_cast<std::size_t>(pos - priority_order.begin());
    std::vector<std::vector<std::string>> seen;
    for (const auto& e : named.lexicon.entries) {
      auto key = split_spaces(e.surface);
      if (key.empty() || std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(key);
      out.push_back({key, named.lexicon.label, priority, named.name});
    }
  }
  return out;
}

// Cost of `key` against tokens[start...], or nullopt when it does not fit
// the budget. Fuzzy comparison applies only when both tokens have at least
// `min_len` code points.
inline std::optional<std::size_t> oracle_cost(const std::vector<std::string>& tokens,
                                              std::size_t start,
                                              const std::vector<std::string>& key,
                                              std::size_t budget, std::size_t min_len) {
  if (start + key.size() > tokens.size()) return std::nullopt;
  std::size_t total = 0;
  for (std::size_t i = 0; i < key.size(); ++i) {
    const std::string& t = tokens[start + i];
    if (t == key[i]) continue;
    if (budget == 0 || utf32(t).size() < min_len || utf32(key[i]).size() < min_len) {
      return std::nullopt;
    }
    total += levenshtein(t, key[i]);
    if (total > budget) return std::nullopt;
  }
  return total;
}

// Scans left to right; at each position takes the best match over all
// entries (longest, cheapest, highest priority, lexicon name, key) and
// jumps past it.
inline std::vector<OracleSpan> oracle_annotate(const std::vector<std::string>& tokens,
                                               const std::vector<OracleEntry>& entries,
                                               std::size_t budget, std::size_t min_len) {
  std::vector<OracleSpan> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const OracleEntry* best = nullptr;
    std::size_t best_cost = 0;
    auto rank = [](const OracleEntry& e, std::size_t cost) {
      return std::make_tuple(-static_cast<long>(e.key.size()), cost, e.priority, e.lexicon, e.key);
    };
    for (const auto& e : entries) {
      auto cost = oracle_cost(tokens, i, e.key, budget, min_len);
      if (!cost) continue;
      if (!best || rank(e, *cost) < rank(*best, best_cost)) {
        best = &e;
        best_cost = *cost;
      }
    }
    if (best) {
      out.push_back({i, i + best->key.size(), best->label, best_cost, best->lexicon});
      i += best->key.size();
    } else {
      ++i;
    }
  }
  return out;
}

struct RandomInstance {
  std::vector<std::string> tokens;
  std::vector<NamedLexicon> lexicons;
  AnnotationConfig config;
};

// Small vocabulary with near-miss pairs so that long, overlapping and
// fuzzy matches are all frequent.
inline const std::vector<std::string>& random_vocabulary() {
  static const std::vector<std::string> words = {"alpha", "alpho", "bravo", "bravos", "delta",
                                                 "deltx", "kilo",  "kila",  "ox",     "oy"};
  return words;
}

// Up to 30 tokens, up to 20 entries spread over up to 3 lexicons, keys of
// 1 to 4 tokens.
inline RandomInstance random_instance(std::mt19937_64& rng, std::size_t budget) {
  const auto& vocab = random_vocabulary();
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  RandomInstance inst;
  const std::size_t n_tokens = pick(31);
  for (std::size_t i = 0; i < n_tokens; ++i) inst.tokens.push_back(vocab[pick(vocab.size())]);

  const std::size_t n_lexicons = 1 + pick(3);
  for (std::size_t l = 0; l < n_lexicons; ++l) {
    NamedLexicon named;
    named.name = "lex" + std::to_string(l);
    named.lexicon.label = "T" + std::to_string(l);
    named.lexicon.language = "en";
    inst.lexicons.push_back(std::move(named));
  }
  const std::size_t n_entries = pick(21);
  for (std::size_t e = 0; e < n_entries; ++e) {
    std::string surface;
    const std::size_t len = 1 + pick(4);
    // Half of the keys are copied from the token stream so they match.
    if (n_tokens > 0 && pick(2) == 0) {
      const std::size_t from = pick(n_tokens);
      for (std::size_t k = 0; k < len && from + k < n_tokens; ++k) {
        surface += (k ? " " : "") + inst.tokens[from + k];
      }
    } else {
      for (std::size_t k = 0; k < len; ++k) surface += (k ? " " : "") + vocab[pick(vocab.size())];
    }
    auto& lex = inst.lexicons[pick(n_lexicons)].lexicon;
    lex.entries.push_back({surface, "Q" + std::to_string(e), false});
  }
  for (const auto& named : inst.lexicons) inst.config.priority_order.push_back(named.name);
  std::shuffle(inst.config.priority_order.begin(), inst.config.priority_order.end(), rng);
  if (budget > 0) {
    inst.config.fuzzy.enabled = true;
    inst.config.fuzzy.max_cost = budget;
    inst.config.fuzzy.min_token_len = 5;
  }
  return inst;
}

// Random BIO tag sequence over `labels`.
inline std::vector<std::string> random_tags(std::mt19937_64& rng, std::size_t n,
                                            const std::vector<std::string>& labels) {
  std::vector<std::string> tags;
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<std::size_t> label(0, labels.size() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const int k = kind(rng);
    if (k == 0) {
      tags.push_back("O");
    } else if (k == 1 || tags.empty() || tags.back() == "O") {
      tags.push_back("B-" + labels[label(rng)]);
    } else {
      tags.push_back("I-" + tags.back().substr(2));
    }
  }
  return tags;
}

// Random string mixing ASCII, Latin letters with diacritics, combining
// marks, Cyrillic, Greek and CJK.
inline std::string random_unicode(std::mt19937_64& rng, std::size_t max_len) {
  static const std::vector<std::pair<char32_t, char32_t>> ranges = {
      {0x20, 0x7E},     {0xC0, 0x17F},   {0x300, 0x36F}, {0x370, 0x3FF},
      {0x400, 0x4FF},   {0x1E00, 0x1EFF}, {0x4E00, 0x4E40}, {0x1F600, 0x1F610},
      {0x130, 0x131}};
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> which(0, ranges.size() - 1);
  std::string out;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [lo, hi] = ranges[which(rng)];
    const char32_t cp = std::uniform_int_distribution<char32_t>(lo, hi)(rng);
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

// Temporary directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "gazette-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) std::abort();
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace gazette::testing
