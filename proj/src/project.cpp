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

#include "gazette/project.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gazette/error.hpp"

namespace gazette {
namespace fs = std::filesystem;

bool valid_resource_name(const std::string& name) {
  if (name.empty() || name.size() > 100 || name.front() == '.') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '-' || c == '_' || c == '.';
  });
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error("error reading " + path.string());
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out) throw Error("error writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::optional<fs::path> Project::resolve_root(const std::optional<fs::path>& explicit_root) {
  if (explicit_root) return explicit_root;
  if (const char* env = std::getenv(kRootVariable); env != nullptr && *env != '\0') {
    return fs::path(env);
  }
  return std::nullopt;
}

Project Project::open(const fs::path& root) {
  Project p(root);
  if (!fs::is_regular_file(p.config_path())) {
    throw Error("not a project directory (no config.json): " + root.string());
  }
  p.config_ = load_config(p.config_path());
  const auto names = p.lexicon_names();
  for (const auto& name : p.config_.priority_order) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw ConfigError("priority_order", "lexicon file missing for '" + name + "'");
    }
  }
  return p;
}

Project Project::init(const fs::path& root) {
  Project p(root);
  fs::create_directories(p.lexicon_dir());
  fs::create_directories(p.corpus_dir());
  fs::create_directories(p.cache_dir());
  if (!fs::exists(p.config_path())) {
    AnnotationConfig config;
    config.priority_order = p.lexicon_names();
    save_config(config, p.config_path());
  }
  return open(root);
}

void Project::set_config(AnnotationConfig config) {
  const auto names = lexicon_names();
  validate(config, std::span<const std::string>(names));
  std::ostringstream ss;
  ss << to_json(config).dump(2) << '\n';
  write_text_file(config_path(), ss.str());
  config_ = std::move(config);
}

std::vector<std::string> Project::lexicon_names() const {
  std::vector<std::string> names;
  if (!fs::is_directory(lexicon_dir())) return names;
  for (const auto& entry : fs::directory_iterator(lexicon_dir())) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      names.push_back(entry.path().stem().string());
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::vector<NamedLexicon> Project::load_lexicons() const {
  std::vector<NamedLexicon> out;
  for (const auto& name : lexicon_names()) {
    out.push_back({name, load_lexicon(lexicon_dir() / (name + ".json"))});
  }
  return out;
}

void Project::save_lexicon(const std::string& name, const RawLexicon& lexicon) const {
  if (!valid_resource_name(name)) throw Error("invalid lexicon name '" + name + "'");
  fs::create_directories(lexicon_dir());
  write_text_file(lexicon_dir() / (name + ".json"), to_json(lexicon).dump(2) + "\n");
}

Resources Project::load_resources() const { return gazette::load_resources(config_, root_); }

CompiledMatcher Project::compile_matcher() const {
  const auto lexicons = load_lexicons();
  std::vector<std::string> names;
  for (const auto& l : lexicons) names.push_back(l.name);
  validate(config_, std::span<const std::string>(names));
  return build_matcher(lexicons, config_, load_resources());
}

std::vector<std::string> Project::corpus_ids() const {
  std::vector<std::string> ids;
  if (!fs::is_directory(corpus_dir())) return ids;
  for (const auto& entry : fs::directory_iterator(corpus_dir())) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".conll" || ext == ".txt")) {
      ids.push_back(entry.path().stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

LabeledCorpus Project::load_corpus(const std::string& id) const {
  if (!valid_resource_name(id)) throw Error("invalid corpus id '" + id + "'");
  LabeledCorpus corpus;
  const fs::path conll = corpus_dir() / (id + ".conll");
  const fs::path text = corpus_dir() / (id + ".txt");
  if (fs::is_regular_file(conll)) {
    corpus = parse_conll(read_text_file(conll));
  } else if (fs::is_regular_file(text)) {
    corpus = corpus_from_text(read_text_file(text), {}, id);
  } else {
    throw Error("unknown corpus '" + id + "'");
  }
  corpus.source_name = id;

  const fs::path overrides = corpus_dir() / (id + ".overrides.json");
  if (fs::is_regular_file(overrides)) {
    try {
      const auto j = nlohmann::json::parse(read_text_file(overrides));
      for (const auto& o : j) {
        const auto s = o.at("sentence").get<std::size_t>();
        if (s >= corpus.sentences.size()) throw FormatError("override for missing sentence");
        corpus.sentences[s].overrides.push_back(LabelOverride{
            o.at("start").get<std::size_t>(), o.at("end").get<std::size_t>(),
            o.at("label").get<std::string>()});
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(overrides.string() + ": " + e.what());
    }
  }
  return corpus;
}

void Project::save_corpus_text(const std::string& id, const std::string& text, bool conll) const {
  if (!valid_resource_name(id)) throw Error("invalid corpus id '" + id + "'");
  fs::create_directories(corpus_dir());
  // Parse first so a broken upload never lands in the project.
  if (conll) parse_conll(text);
  fs::remove(corpus_dir() / (id + (conll ? ".txt" : ".conll")));
  fs::remove(corpus_dir() / (id + ".overrides.json"));
  write_text_file(corpus_dir() / (id + (conll ? ".conll" : ".txt")), text);
}

void Project::save_overrides(const std::string& id, const LabeledCorpus& corpus) const {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    for (const auto& o : corpus.sentences[s].overrides) {
      j.push_back({{"sentence", s}, {"start", o.start}, {"end", o.end}, {"label", o.label}});
    }
  }
  write_text_file(corpus_dir() / (id + ".overrides.json"), j.dump(2) + "\n");
}

TuningHistory Project::load_history() const {
  if (!fs::is_regular_file(history_path())) return {};
  return TuningHistory::parse(read_text_file(history_path()));
}

void Project::append_history(const TuningHistory& history) const {
  // Only the new tail is written; earlier lines are never rewritten.
  const std::string serialized = history.serialize();
  std::string existing;
  if (fs::is_regular_file(history_path())) existing = read_text_file(history_path());
  if (serialized.compare(0, existing.size(), existing) != 0) {
    throw Error("history on disk is not a prefix of the new history");
  }
  std::ofstream out(history_path(), std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot write " + history_path().string());
  out << serialized.substr(existing.size());
}

}  // namespace gazette
