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
#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers shared by the tokenizer, the normalizer and the matcher.
namespace gazette::unicode {

// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

// Number of code points.
std::size_t length(std::string_view utf8);

// Canonical decomposition, removal of nonspacing combining marks (Mn),
// canonical recomposition of what remains. Idempotent.
std::string strip_diacritics(std::string_view utf8);

// Locale-independent full lowercase mapping.
std::string to_lower(std::string_view utf8);

// Simple case folding, used for case-insensitive search.
std::string fold_case(std::string_view utf8);

bool is_upper(char32_t cp);
bool is_whitespace(char32_t cp);

// Levenshtein distance over code points. Returns `limit + 1` as soon as the
// distance is known to exceed `limit`.
std::size_t bounded_edit_distance(std::u32string_view a, std::u32string_view b,
                                  std::size_t limit);

}  // namespace gazette::unicode
