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

#include "gazette/kb_extractor.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <boost/iostreams/device/file.hpp>
#include <boost/iostreams/filter/bzip2.hpp>
#include <boost/iostreams/filter/gzip.hpp>
#include <boost/iostreams/filtering_stream.hpp>

#include "gazette/error.hpp"
#include "gazette/unicode.hpp"

namespace gazette {
namespace {

using nlohmann::json;

constexpr std::uint64_t kRatioWindow = 1000;

std::string ascii_lower(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(kSpace);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(kSpace);
  return s.substr(b, e - b + 1);
}

template <typename T>
void dedupe_in_order(std::vector<T>& v) {
  std::vector<T> out;
  out.reserve(v.size());
  for (auto& x : v) {
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(std::move(x));
  }
  v = std::move(out);
}

// Collects the handful of fields we need from one entity object while the
// JSON is being scanned; nothing else is materialized.
class ItemSax {
 public:
  using number_integer_t = json::number_integer_t;
  using number_unsigned_t = json::number_unsigned_t;
  using number_float_t = json::number_float_t;
  using string_t = json::string_t;
  using binary_t = json::binary_t;

  ItemSax(KbItem& item, const ReadOptions& options) : item_(item), options_(options) {}

  bool null() { return scalar(); }
  bool boolean(bool) { return scalar(); }
  bool number_integer(number_integer_t v) {
    if (v >= 0) on_numeric_id(static_cast<std::uint64_t>(v));
    return scalar();
  }
  bool number_unsigned(number_unsigned_t v) {
    on_numeric_id(v);
    return scalar();
  }
  bool number_float(number_float_t, const string_t&) { return scalar(); }
  bool binary(binary_t&) { return scalar(); }

  bool string(string_t& v) {
    if (depth_ == 0) return false;
    on_string(v);
    return true;
  }

  bool start_object(std::size_t) {
    if (depth_ == 0) {
      if (saw_root_) return false;
      saw_root_ = true;
    }
    push("");
    return true;
  }
  bool key(string_t& k) {
    path_[depth_ - 1].assign(k);
    return true;
  }
  bool end_object() {
    --depth_;
    return true;
  }
  bool start_array(std::size_t) {
    if (depth_ == 0) return false;
    push("#");
    return true;
  }
  bool end_array() {
    --depth_;
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) {
    return false;
  }

 private:
  bool scalar() const { return depth_ > 0; }

  void push(std::string_view marker) {
    if (path_.size() <= depth_) path_.emplace_back();
    path_[depth_].assign(marker);
    ++depth_;
  }

  bool language_ok(const std::string& lang) const {
    return !options_.language || ascii_lower(lang) == *options_.language;
  }

  bool at_p31_value() const {
    return depth_ == 7 && path_[0] == "claims" && path_[1] == "P31" && path_[2] == "#" &&
           path_[3] == "mainsnak" && path_[4] == "datavalue" && path_[5] == "value";
  }

  void on_string(string_t& v) {
    if (depth_ == 1 && path_[0] == "id") {
      item_.item_id = std::move(v);
    } else if (depth_ == 3 && options_.want_labels && path_[0] == "labels" &&
               path_[2] == "value") {
      if (language_ok(path_[1])) item_.labels[ascii_lower(path_[1])] = std::move(v);
    } else if (depth_ == 4 && options_.want_aliases && path_[0] == "aliases" &&
               path_[2] == "#" && path_[3] == "value") {
      if (language_ok(path_[1])) item_.aliases[ascii_lower(path_[1])].push_back(std::move(v));
    } else if (at_p31_value() && path_[6] == "id") {
      item_.instance_of.push_back(std::move(v));
    }
  }

  void on_numeric_id(std::uint64_t v) {
    // Older dumps carry only "numeric-id".
    if (at_p31_value() && path_[6] == "numeric-id") {
      item_.instance_of.push_back("Q" + std::to_string(v));
    }
  }

  KbItem& item_;
  const ReadOptions& options_;
  std::vector<std::string> path_;
  std::size_t depth_ = 0;
  bool saw_root_ = false;
};

enum class LineKind { kBlank, kFraming, kEntity };

LineKind classify(std::string_view& line, DumpFormat format) {
  line = trim(line);
  if (line.empty()) return LineKind::kBlank;
  if (line == "[" || line == "]" || line == "],") return LineKind::kFraming;
  if (format != DumpFormat::kNdjson) {
    if (line.front() == '[') line.remove_prefix(1);
    if (!line.empty() && line.back() == ']') line.remove_suffix(1);
    if (!line.empty() && line.back() == ',') line.remove_suffix(1);
    line = trim(line);
    if (line.empty()) return LineKind::kFraming;
  }
  return LineKind::kEntity;
}

}  // namespace

std::optional<KbItem> parse_item_line(std::string_view line, const ReadOptions& options) {
  KbItem item;
  ItemSax sax(item, options);
  if (!json::sax_parse(line.begin(), line.end(), &sax)) return std::nullopt;
  if (item.item_id.empty()) return std::nullopt;
  for (auto& [lang, aliases] : item.aliases) dedupe_in_order(aliases);
  dedupe_in_order(item.instance_of);
  return item;
}

DumpReader::DumpReader(std::istream& in, ReadOptions options)
    : in_(in), options_(std::move(options)) {
  if (options_.language) options_.language = ascii_lower(*options_.language);
}

void DumpReader::check_ratio() {
  checked_ratio_ = true;
  if (stats_.malformed * 2 > entity_lines_) {
    throw FormatError("format mismatch: " + std::to_string(stats_.malformed) + " of the first " +
                      std::to_string(entity_lines_) + " entity lines are not entity JSON");
  }
}

bool DumpReader::next(KbItem& item) {
  for (;;) {
    if (!std::getline(in_, line_)) {
      if (in_.bad()) throw IoError("error reading dump", stats_.lines + 1);
      if (!checked_ratio_ && entity_lines_ > 0) check_ratio();
      return false;
    }
    ++stats_.lines;
    stats_.bytes += line_.size() + 1;
    std::string_view view = line_;
    if (classify(view, options_.format) != LineKind::kEntity) continue;

    ++entity_lines_;
    auto parsed = parse_item_line(view, options_);
    if (!parsed) ++stats_.malformed;
    if (!checked_ratio_ && entity_lines_ >= kRatioWindow) check_ratio();
    if (!parsed) continue;
    ++stats_.items;
    item = std::move(*parsed);
    return true;
  }
}

std::vector<KbItem> stream_items(std::istream& in, DumpFormat format) {
  ReadOptions options;
  options.format = format;
  DumpReader reader(in, options);
  std::vector<KbItem> items;
  KbItem item;
  while (reader.next(item)) items.push_back(std::move(item));
  return items;
}

std::unique_ptr<std::istream> open_dump(const std::filesystem::path& path) {
  namespace io = boost::iostreams;
  if (!std::filesystem::is_regular_file(path)) {
    throw Error("dump not found: " + path.string());
  }
  auto stream = std::make_unique<io::filtering_istream>();
  const auto ext = path.extension().string();
  if (ext == ".gz") {
    stream->push(io::gzip_decompressor());
  } else if (ext == ".bz2") {
    stream->push(io::bzip2_decompressor());
  }
  stream->push(io::file_source(path.string(), std::ios::in | std::ios::binary));
  return stream;
}

std::vector<ClassIndexEntry> build_class_index(std::span<const KbItem> items,
                                               std::string_view language) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& item : items) {
    for (const auto& cls : item.instance_of) ++counts[cls];
  }
  std::vector<ClassIndexEntry> index;
  index.reserve(counts.size());
  for (const auto& [cls, n] : counts) {
    index.push_back(ClassIndexEntry{cls, cls, std::string(language), n});
  }
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < index.size(); ++i) position[index[i].class_id] = i;
  for (const auto& item : items) {
    auto it = position.find(item.item_id);
    if (it == position.end()) continue;
    auto label = item.labels.find(std::string(language));
    if (label != item.labels.end()) index[it->second].label = label->second;
  }
  std::sort(index.begin(), index.end(), [](const auto& a, const auto& b) {
    if (a.instance_count != b.instance_count) return a.instance_count > b.instance_count;
    return a.class_id < b.class_id;
  });
  return index;
}

std::vector<ClassIndexEntry> index_dump(const StreamOpener& open, std::string_view language,
                                        const ProgressFn& progress) {
  std::unordered_map<std::string, std::uint64_t> counts;
  {
    auto in = open();
    ReadOptions options;
    options.want_labels = false;
    options.want_aliases = false;
    DumpReader reader(*in, options);
    KbItem item;
    while (reader.next(item)) {
      for (const auto& cls : item.instance_of) ++counts[cls];
      if (progress && reader.stats().items % 100000 == 0) progress(reader.stats());
    }
  }

  std::unordered_map<std::string, std::string> labels;
  {
    auto in = open();
    ReadOptions options;
    options.language = ascii_lower(std::string(language));
    options.want_aliases = false;
    DumpReader reader(*in, options);
    KbItem item;
    while (reader.next(item)) {
      if (counts.contains(item.item_id)) {
        auto label = item.labels.find(*options.language);
        if (label != item.labels.end()) labels[item.item_id] = label->second;
      }
      if (progress && reader.stats().items % 100000 == 0) progress(reader.stats());
    }
  }

  std::vector<ClassIndexEntry> index;
  index.reserve(counts.size());
  for (const auto& [cls, n] : counts) {
    auto label = labels.find(cls);
    index.push_back(ClassIndexEntry{cls, label == labels.end() ? cls : label->second,
                                    std::string(language), n});
  }
  std::sort(index.begin(), index.end(), [](const auto& a, const auto& b) {
    if (a.instance_count != b.instance_count) return a.instance_count > b.instance_count;
    return a.class_id < b.class_id;
  });
  return index;
}

std::vector<ClassIndexEntry> search_classes(std::span<const ClassIndexEntry> index,
                                            std::string_view query) {
  const std::string needle = unicode::fold_case(trim(query));
  if (needle.empty()) throw Error("class search query is empty");
  struct Hit {
    int rank;
    const ClassIndexEntry* entry;
  };
  std::vector<Hit> hits;
  for (const auto& e : index) {
    const std::string label = unicode::fold_case(e.label);
    const auto pos = label.find(needle);
    if (pos == std::string::npos) continue;
    const int rank = label == needle ? 0 : pos == 0 ? 1 : 2;
    hits.push_back({rank, &e});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    if (a.entry->instance_count != b.entry->instance_count) {
      return a.entry->instance_count > b.entry->instance_count;
    }
    return a.entry->class_id < b.entry->class_id;
  });
  std::vector<ClassIndexEntry> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(*h.entry);
  return out;
}

Extraction extract_lexicon(std::istream& dump, const std::set<std::string>& class_ids,
                           const std::string& language, const std::string& label,
                           const ProgressFn& progress) {
  if (class_ids.empty()) throw Error("no class ids given");
  Extraction result;
  result.lexicon.label = label;
  result.lexicon.language = ascii_lower(language);

  ReadOptions options;
  options.language = result.lexicon.language;
  DumpReader reader(dump, options);
  std::unordered_set<std::string> seen;
  auto add = [&](std::string_view surface, const std::string& item, bool is_alias) {
    surface = trim(surface);
    if (surface.empty()) return;
    std::string key = std::string(surface) + '\x1f' + item;
    if (!seen.insert(std::move(key)).second) return;
    result.lexicon.entries.push_back(LexiconEntry{std::string(surface), item, is_alias});
  };

  KbItem item;
  while (reader.next(item)) {
    if (progress && reader.stats().items % 100000 == 0) progress(reader.stats());
    const bool member = std::any_of(item.instance_of.begin(), item.instance_of.end(),
                                    [&](const std::string& c) { return class_ids.contains(c); });
    if (!member) continue;
    auto name = item.labels.find(result.lexicon.language);
    if (name == item.labels.end()) continue;
    add(name->second, item.item_id, false);
    auto aliases = item.aliases.find(result.lexicon.language);
    if (aliases != item.aliases.end()) {
      for (const auto& a : aliases->second) add(a, item.item_id, true);
    }
  }
  result.stats = reader.stats();
  result.no_matches = result.lexicon.entries.empty();
  return result;
}

RawLexicon load_user_list(std::string_view text, const std::string& label,
                          const std::string& language) {
  RawLexicon lexicon{label, ascii_lower(language), {}};
  std::unordered_map<std::string, std::string> primary_ids;
  std::unordered_set<std::string> seen;
  std::size_t next_id = 1;
  auto add = [&](std::string surface, const std::string& id, bool is_alias) {
    if (!seen.insert(surface + '\x1f' + id).second) return;
    lexicon.entries.push_back(LexiconEntry{std::move(surface), id, is_alias});
  };

  std::size_t start = 0;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") start = 3;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(start, nl - start));
    start = nl + 1;
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string> parts;
    std::size_t p = 0;
    while (p <= line.size()) {
      std::size_t bar = line.find('|', p);
      if (bar == std::string_view::npos) bar = line.size();
      auto part = trim(line.substr(p, bar - p));
      if (!part.empty()) parts.emplace_back(part);
      p = bar + 1;
    }
    if (parts.empty()) continue;
    auto [it, inserted] = primary_ids.try_emplace(parts.front(), "");
    if (inserted) it->second = "user:" + label + ":" + std::to_string(next_id++);
    const std::string id = it->second;
    add(parts.front(), id, false);
    for (std::size_t i = 1; i < parts.size(); ++i) add(parts[i], id, true);
  }
  return lexicon;
}

json to_json(const RawLexicon& lexicon) {
  json entries = json::array();
  for (const auto& e : lexicon.entries) {
    entries.push_back({{"surface", e.surface}, {"source_item", e.source_item}, {"is_alias", e.is_alias}});
  }
  return {{"label", lexicon.label}, {"language", lexicon.language}, {"entries", std::move(entries)}};
}

RawLexicon lexicon_from_json(const json& j) {
  try {
    RawLexicon lexicon;
    lexicon.label = j.at("label").get<std::string>();
    lexicon.language = j.at("language").get<std::string>();
    for (const auto& e : j.at("entries")) {
      LexiconEntry entry{e.at("surface").get<std::string>(), e.at("source_item").get<std::string>(),
                         e.at("is_alias").get<bool>()};
      if (trim(entry.surface).empty()) throw FormatError("lexicon entry with empty surface");
      lexicon.entries.push_back(std::move(entry));
    }
    if (lexicon.label.empty()) throw FormatError("lexicon label is empty");
    return lexicon;
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid lexicon JSON: ") + e.what());
  }
}

void save_lexicon(const RawLexicon& lexicon, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(lexicon).dump(2) << '\n';
}

RawLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return lexicon_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::filesystem::path class_index_cache_path(const std::filesystem::path& dir,
                                             std::string_view dump_checksum,
                                             std::string_view language) {
  return dir / ("class_index-" + std::string(dump_checksum.substr(0, 16)) + "-" +
                std::string(language) + ".json");
}

void save_class_index(std::span<const ClassIndexEntry> index, std::string_view dump_checksum,
                      const std::filesystem::path& path) {
  json classes = json::array();
  for (const auto& e : index) {
    classes.push_back({e.class_id, e.label, e.language, e.instance_count});
  }
  json doc = {{"dump_checksum", dump_checksum}, {"classes", std::move(classes)}};
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump() << '\n';
}

std::optional<std::vector<ClassIndexEntry>> load_class_index(const std::filesystem::path& path,
                                                             std::string_view dump_checksum) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    const json doc = json::parse(in);
    if (doc.at("dump_checksum").get<std::string>() != dump_checksum) return std::nullopt;
    std::vector<ClassIndexEntry> index;
    for (const auto& c : doc.at("classes")) {
      index.push_back(ClassIndexEntry{c.at(0).get<std::string>(), c.at(1).get<std::string>(),
                                      c.at(2).get<std::string>(), c.at(3).get<std::uint64_t>()});
    }
    return index;
  } catch (const json::exception&) {
    return std::nullopt;  // stale or damaged cache; rebuild
  }
}

}  // namespace gazette
