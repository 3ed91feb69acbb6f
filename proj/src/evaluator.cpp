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

#include "gazette/evaluator.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "gazette/error.hpp"

namespace gazette {
namespace {

void check_aligned(std::span<const TagSequence> pred, std::span<const TagSequence> gold) {
  if (pred.size() != gold.size()) {
    throw Error("prediction has " + std::to_string(pred.size()) + " sentences, gold has " +
                std::to_string(gold.size()));
  }
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i].size() != gold[i].size()) {
      throw Error("sentence " + std::to_string(i) + ": " + std::to_string(pred[i].size()) +
                  " predicted tags vs " + std::to_string(gold[i].size()) + " gold tags");
    }
  }
}

std::vector<TokenCount> rank(const std::unordered_map<std::string, std::uint64_t>& counts,
                             std::size_t k) {
  std::vector<TokenCount> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const TokenCount& a, const TokenCount& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

nlohmann::json counts_json(const LabelCounts& c) {
  const Scores s = c.scores();
  return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn},
          {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

}  // namespace

Scores prf(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  Scores s;
  s.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  s.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  s.f1 = s.precision + s.recall == 0.0
             ? 0.0
             : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

Scores LabelCounts::scores() const { return prf(tp, fp, fn); }

LabelCounts& LabelCounts::operator+=(const LabelCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

LabelCounts count_label(std::span<const TagSequence> pred, std::span<const TagSequence> gold,
                        std::string_view label) {
  check_aligned(pred, gold);
  LabelCounts c;
  for (std::size_t s = 0; s < pred.size(); ++s) {
    for (std::size_t i = 0; i < pred[s].size(); ++i) {
      const bool p = tag_type(pred[s][i]) == label;
      const bool g = tag_type(gold[s][i]) == label;
      if (p && g) {
        ++c.tp;
      } else if (p) {
        ++c.fp;
      } else if (g) {
        ++c.fn;
      }
    }
  }
  return c;
}

Scores token_prf(std::span<const TagSequence> pred, std::span<const TagSequence> gold,
                 std::string_view label) {
  return count_label(pred, gold, label).scores();
}

ErrorRanking top_errors(std::span<const std::vector<std::string>> tokens,
                        std::span<const TagSequence> pred, std::span<const TagSequence> gold,
                        std::size_t k) {
  check_aligned(pred, gold);
  if (tokens.size() != pred.size()) throw Error("token and tag sentence counts differ");
  std::unordered_map<std::string, std::uint64_t> fp, fn;
  for (std::size_t s = 0; s < pred.size(); ++s) {
    if (tokens[s].size() != pred[s].size()) {
      throw Error("sentence " + std::to_string(s) + ": token and tag counts differ");
    }
    for (std::size_t i = 0; i < pred[s].size(); ++i) {
      const auto p = tag_type(pred[s][i]);
      const auto g = tag_type(gold[s][i]);
      if (p == g) continue;
      if (!p.empty()) ++fp[tokens[s][i]];
      if (!g.empty()) ++fn[tokens[s][i]];
    }
  }
  return ErrorRanking{rank(fp, k), rank(fn, k)};
}

EvalReport evaluate(std::span<const std::vector<std::string>> tokens,
                    std::span<const TagSequence> pred, std::span<const TagSequence> gold,
                    std::size_t top_k) {
  check_aligned(pred, gold);
  std::set<std::string> labels;
  for (auto layer : {pred, gold}) {
    for (const auto& tags : layer) {
      for (const auto& t : tags) {
        auto type = tag_type(t);
        if (!type.empty()) labels.emplace(type);
      }
    }
  }
  EvalReport report;
  for (const auto& label : labels) {
    report.per_label[label] = count_label(pred, gold, label);
    report.micro += report.per_label[label];
  }
  auto ranking = top_errors(tokens, pred, gold, top_k);
  report.top_false_positives = std::move(ranking.false_positives);
  report.top_false_negatives = std::move(ranking.false_negatives);
  return report;
}

EvalReport evaluate(const LabeledCorpus& corpus, std::size_t top_k) {
  std::vector<std::vector<std::string>> tokens;
  std::vector<TagSequence> pred, gold;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    const auto& s = corpus.sentences[i];
    if (!s.gold) throw Error("sentence " + std::to_string(i) + " has no gold tags");
    if (!s.predicted) throw Error("sentence " + std::to_string(i) + " has no predicted tags");
    tokens.push_back(s.tokens);
    pred.push_back(s.merged());
    gold.push_back(*s.gold);
  }
  return evaluate(tokens, pred, gold, top_k);
}

MetricsSummary summarize(const EvalReport& report) {
  MetricsSummary m;
  for (const auto& [label, counts] : report.per_label) m[label] = counts.scores();
  return m;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json j;
  j["per_label"] = nlohmann::json::object();
  for (const auto& [label, counts] : report.per_label) j["per_label"][label] = counts_json(counts);
  j["micro"] = counts_json(report.micro);
  auto ranking = [](const std::vector<TokenCount>& r) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [token, n] : r) a.push_back({{"token", token}, {"count", n}});
    return a;
  };
  j["top_false_positives"] = ranking(report.top_false_positives);
  j["top_false_negatives"] = ranking(report.top_false_negatives);
  return j;
}

std::string format_report(const EvalReport& report) {
  std::string out;
  auto row = [&](std::string_view name, const LabelCounts& c) {
    const Scores s = c.scores();
    out += fmt::format("{:<12} P={:.1f} R={:.1f} F1={:.1f}  (tp={} fp={} fn={})\n", name,
                       100.0 * s.precision, 100.0 * s.recall, 100.0 * s.f1, c.tp, c.fp, c.fn);
  };
  for (const auto& [label, counts] : report.per_label) row(label, counts);
  row("micro", report.micro);
  auto ranking = [&](std::string_view title, const std::vector<TokenCount>& r) {
    out += fmt::format("\n{}:\n", title);
    if (r.empty()) out += "  (none)\n";
    for (const auto& [token, n] : r) out += fmt::format("  {:>6}  {}\n", n, token);
  };
  ranking("most frequent false positives", report.top_false_positives);
  ranking("most frequent false negatives", report.top_false_negatives);
  return out;
}

TokenInspection inspect_token(const CompiledMatcher& matcher, std::span<const std::string> tokens,
                              std::size_t index, const AnnotationConfig& config,
                              const std::optional<TagSequence>& gold) {
  if (index >= tokens.size()) {
    throw Error("token index " + std::to_string(index) + " outside sentence of length " +
                std::to_string(tokens.size()));
  }
  const Annotator annotator(matcher, config);
  const auto normalized = annotator.normalize(tokens);
  const auto chosen = annotator.select(normalized);

  TokenInspection out;
  out.token = tokens[index];
  if (gold && index < gold->size()) out.gold = (*gold)[index];
  out.predicted = std::string(kOutside);

  const Match* winner = nullptr;
  for (const auto& m : chosen) {
    if (m.start <= index && index < m.end) {
      winner = &m;
      out.predicted = (index == m.start ? "B-" : "I-") + m.entry->label;
    }
  }

  std::vector<Match> covering;
  for (std::size_t start = 0; start <= index; ++start) {
    for (const auto& m : annotator.matches_at(normalized, start)) {
      if (m.end > index) covering.push_back(m);
    }
  }
  std::sort(covering.begin(), covering.end(), [](const Match& a, const Match& b) {
    if (a.start != b.start) return a.start < b.start;
    return better_match(a, b);
  });
  for (const auto& m : covering) {
    const bool won = winner != nullptr && m.start == winner->start && m.end == winner->end &&
                     m.entry == winner->entry && m.cost == winner->cost;
    out.candidates.push_back(
        InspectionCandidate{m.entry->label, m.entry->provenance, m.start, m.length(), m.cost, won});
  }
  return out;
}

nlohmann::json to_json(const TokenInspection& inspection) {
  nlohmann::json j;
  j["token"] = inspection.token;
  j["gold"] = inspection.gold ? nlohmann::json(*inspection.gold) : nlohmann::json(nullptr);
  j["predicted"] = inspection.predicted;
  j["override"] = inspection.override_tag ? nlohmann::json(*inspection.override_tag)
                                          : nlohmann::json(nullptr);
  j["candidates"] = nlohmann::json::array();
  for (const auto& c : inspection.candidates) {
    j["candidates"].push_back({{"label", c.label},
                               {"lexicon", c.provenance.lexicon},
                               {"source_item", c.provenance.source_item},
                               {"surface", c.provenance.surface},
                               {"start", c.start},
                               {"length", c.length},
                               {"fuzzy_cost", c.fuzzy_cost},
                               {"won", c.won}});
  }
  return j;
}

LabeledCorpus override_label(LabeledCorpus corpus, std::size_t sentence, LabelOverride change) {
  if (sentence >= corpus.sentences.size()) {
    throw Error("sentence index " + std::to_string(sentence) + " out of range");
  }
  auto& s = corpus.sentences[sentence];
  if (change.start >= change.end || change.end > s.tokens.size()) {
    throw Error("override range [" + std::to_string(change.start) + ", " +
                std::to_string(change.end) + ") is invalid for a sentence of " +
                std::to_string(s.tokens.size()) + " tokens");
  }
  if (change.label.empty() || change.label.find_first_of(" \t\n") != std::string::npos) {
    throw Error("invalid override label '" + change.label + "'");
  }
  for (const auto& o : s.overrides) {
    if (change.start < o.end && o.start < change.end) {
      throw Error("override overlaps existing override [" + std::to_string(o.start) + ", " +
                  std::to_string(o.end) + ")");
    }
  }
  s.overrides.push_back(std::move(change));
  return corpus;
}

}  // namespace gazette
