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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

// Streaming extraction of entity names from a knowledge-base entity dump
// (one entity JSON object per line, optionally inside array framing).
// Only direct "instance of" (P31) membership is used; subclass chains are
// not followed.
namespace gazette {

struct KbItem {
  std::string item_id;
  std::map<std::string, std::string> labels;                // language -> label
  std::map<std::string, std::vector<std::string>> aliases;  // language -> aliases
  std::vector<std::string> instance_of;                     // class ids

  bool operator==(const KbItem&) const = default;
};

struct ClassIndexEntry {
  std::string class_id;
  std::string label;
  std::string language;
  std::uint64_t instance_count = 0;

  bool operator==(const ClassIndexEntry&) const = default;
};

struct LexiconEntry {
  std::string surface;
  std::string source_item;
  bool is_alias = false;

  bool operator==(const LexiconEntry&) const = default;
};

struct RawLexicon {
  std::string label;
  std::string language;
  std::vector<LexiconEntry> entries;

  bool operator==(const RawLexicon&) const = default;
};

enum class DumpFormat {
  kAuto,       // tolerate array framing
  kNdjson,     // one bare object per line
  kJsonArray,  // "[", entity lines ending in ",", "]"
};

struct ReadOptions {
  DumpFormat format = DumpFormat::kAuto;
  // Keep only labels and aliases in this language.
  std::optional<std::string> language;
  bool want_labels = true;
  bool want_aliases = true;
};

struct DumpStats {
  std::uint64_t lines = 0;
  std::uint64_t items = 0;
  std::uint64_t malformed = 0;
  std::uint64_t bytes = 0;
};

// Single-pass reader. Memory is bounded by the longest line plus the item
// being returned. Malformed lines are counted and skipped; when more than
// half of the first 1000 entity lines are malformed the reader throws
// FormatError ("format mismatch"). Stream failures throw IoError.
class DumpReader {
 public:
  explicit DumpReader(std::istream& in, ReadOptions options = {});

  // Fills `item` with the next entity; false at end of stream.
  bool next(KbItem& item);
  const DumpStats& stats() const { return stats_; }

 private:
  std::istream& in_;
  ReadOptions options_;
  DumpStats stats_;
  std::uint64_t entity_lines_ = 0;
  bool checked_ratio_ = false;
  std::string line_;

  void check_ratio();
};

// Reads everything into memory; for tests and small dumps.
std::vector<KbItem> stream_items(std::istream& in, DumpFormat format = DumpFormat::kAuto);

// Parses one entity line; nullopt for malformed lines.
std::optional<KbItem> parse_item_line(std::string_view line, const ReadOptions& options = {});

// Opens a dump file, decompressing .gz and .bz2 by extension.
std::unique_ptr<std::istream> open_dump(const std::filesystem::path& path);

using StreamOpener = std::function<std::unique_ptr<std::istream>()>;
using ProgressFn = std::function<void(const DumpStats&)>;

// One entry per class id occurring in any instance_of. Labels come from
// the class's own item when present, otherwise the raw id. Sorted by
// descending count, then class id.
std::vector<ClassIndexEntry> build_class_index(std::span<const KbItem> items,
                                               std::string_view language);

// Streaming equivalent of build_class_index: one sweep counts class
// memberships, a second resolves labels of the class items only.
std::vector<ClassIndexEntry> index_dump(const StreamOpener& open, std::string_view language,
                                        const ProgressFn& progress = {});

// Case-insensitive substring search ranked exact > prefix > substring,
// then by descending count, then class id. Throws Error on a blank query.
std::vector<ClassIndexEntry> search_classes(std::span<const ClassIndexEntry> index,
                                            std::string_view query);

struct Extraction {
  RawLexicon lexicon;
  bool no_matches = false;  // warning: no item matched the classes
  DumpStats stats;
};

// Collects labels (is_alias=false) and aliases (is_alias=true) in
// `language` of every item whose instance_of meets `class_ids`. Items
// without a label in `language` contribute nothing.
Extraction extract_lexicon(std::istream& dump, const std::set<std::string>& class_ids,
                           const std::string& language, const std::string& label,
                           const ProgressFn& progress = {});

// One surface per line, "surface | alias | alias" attaches aliases, '#'
// starts a comment line.
RawLexicon load_user_list(std::string_view text, const std::string& label,
                          const std::string& language);

nlohmann::json to_json(const RawLexicon& lexicon);
RawLexicon lexicon_from_json(const nlohmann::json& j);
void save_lexicon(const RawLexicon& lexicon, const std::filesystem::path& path);
RawLexicon load_lexicon(const std::filesystem::path& path);

// Sidecar cache of a class index, keyed by dump checksum and language.
std::filesystem::path class_index_cache_path(const std::filesystem::path& dir,
                                             std::string_view dump_checksum,
                                             std::string_view language);
void save_class_index(std::span<const ClassIndexEntry> index, std::string_view dump_checksum,
                      const std::filesystem::path& path);
// nullopt when the file is absent or belongs to another dump.
std::optional<std::vector<ClassIndexEntry>> load_class_index(const std::filesystem::path& path,
                                                             std::string_view dump_checksum);

}  // namespace gazette
