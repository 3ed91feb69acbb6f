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

#include "gazette/tags.hpp"

#include <algorithm>

#include "gazette/error.hpp"

namespace gazette {

std::optional<TagParts> parse_tag(std::string_view tag) {
  if (tag == kOutside) return TagParts{};
  if (tag.size() < 3 || tag[1] != '-') return std::nullopt;
  if (tag[0] == 'B') return TagParts{TagKind::kBegin, tag.substr(2)};
  if (tag[0] == 'I') return TagParts{TagKind::kInside, tag.substr(2)};
  return std::nullopt;
}

std::string_view tag_type(std::string_view tag) {
  auto parts = parse_tag(tag);
  return parts ? parts->type : std::string_view{};
}

TagSequence spans_to_tags(std::span<const Span> spans, std::size_t n) {
  TagSequence tags(n, std::string(kOutside));
  std::vector<bool> used(n, false);
  for (const Span& s : spans) {
    if (s.start >= s.end || s.end > n) {
      throw Error("span [" + std::to_string(s.start) + ", " + std::to_string(s.end) +
                  ") outside sentence of length " + std::to_string(n));
    }
    for (std::size_t i = s.start; i < s.end; ++i) {
      if (used[i]) throw Error("overlapping spans at token " + std::to_string(i));
      used[i] = true;
      tags[i] = (i == s.start ? "B-" : "I-") + s.label;
    }
  }
  return tags;
}

std::vector<Span> tags_to_spans(std::span<const std::string> tags) {
  std::vector<Span> spans;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    auto parts = parse_tag(tags[i]);
    if (!parts || parts->kind == TagKind::kOutside) continue;
    const bool continues = parts->kind == TagKind::kInside && !spans.empty() &&
                           spans.back().end == i && spans.back().label == parts->type;
    if (continues) {
      spans.back().end = i + 1;
    } else {
      spans.push_back(Span{i, i + 1, std::string(parts->type), std::nullopt, 0});
    }
  }
  return spans;
}

std::size_t repair_bio(TagSequence& tags) {
  std::size_t repaired = 0;
  std::string_view previous_type;
  for (auto& tag : tags) {
    auto parts = parse_tag(tag);
    if (!parts) {
      previous_type = {};
      continue;
    }
    if (parts->kind == TagKind::kInside && parts->type != previous_type) {
      tag = "B-" + std::string(parts->type);
      ++repaired;
    }
    previous_type = tag_type(tag);
  }
  return repaired;
}

}  // namespace gazette
