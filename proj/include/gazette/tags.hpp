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
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Entity spans and their BIO tag encoding.
namespace gazette {

// Where a compiled lexicon entry came from.
struct Provenance {
  std::string lexicon;      // lexicon name
  std::string source_item;  // knowledge-base item id or synthetic id
  std::string surface;      // original surface before transforms

  bool operator==(const Provenance&) const = default;
};

// A labeled token range [start, end).
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;
  std::optional<Provenance> provenance;
  std::size_t fuzzy_cost = 0;

  std::size_t length() const { return end - start; }
  bool operator==(const Span&) const = default;
};

// One tag per token over {O, B-X, I-X}.
using TagSequence = std::vector<std::string>;

inline constexpr std::string_view kOutside = "O";

enum class TagKind { kOutside, kBegin, kInside };

struct TagParts {
  TagKind kind = TagKind::kOutside;
  std::string_view type;  // empty for O
};

// Parses "O", "B-X" or "I-X". Anything else yields nullopt.
std::optional<TagParts> parse_tag(std::string_view tag);

// Entity type of a tag with the B-/I- prefix removed; empty for O.
std::string_view tag_type(std::string_view tag);

// Throws Error when spans overlap or fall outside [0, n).
TagSequence spans_to_tags(std::span<const Span> spans, std::size_t n);

// Inverse of spans_to_tags. An I-X that does not continue an X entity
// starts a new span. Spans carry no provenance.
std::vector<Span> tags_to_spans(std::span<const std::string> tags);

// Rewrites every I-X that does not continue an X entity into B-X, which
// turns IOB1 input into BIO. Returns the number of rewritten tags.
std::size_t repair_bio(TagSequence& tags);

}  // namespace gazette
