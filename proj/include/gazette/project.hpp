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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gazette/annotator.hpp"
#include "gazette/corpus_io.hpp"
#include "gazette/kb_extractor.hpp"
#include "gazette/lexicon.hpp"
#include "gazette/tuner.hpp"

namespace gazette {

// On-disk project layout:
//   config.json                 AnnotationConfig
//   lexicons/<name>.json        one RawLexicon per file; name = file stem
//   corpora/<id>.conll|.txt     corpora; <id>.overrides.json holds manual fixes
//   history.jsonl               tuning history, one step per line
//   cache/                      class index sidecars
class Project {
 public:
  // Environment variable that overrides the project root.
  static constexpr const char* kRootVariable = "GAZETTE_PROJECT";

  // Opens an existing project. Throws Error when config.json is missing or
  // invalid or names a lexicon without a file.
  static Project open(const std::filesystem::path& root);

  // Creates the layout (idempotent). A new config lists existing lexicons
  // in name order.
  static Project init(const std::filesystem::path& root);

  // `explicit_root` when given, else $GAZETTE_PROJECT, else nullopt.
  static std::optional<std::filesystem::path> resolve_root(
      const std::optional<std::filesystem::path>& explicit_root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path config_path() const { return root_ / "config.json"; }
  std::filesystem::path lexicon_dir() const { return root_ / "lexicons"; }
  std::filesystem::path corpus_dir() const { return root_ / "corpora"; }
  std::filesystem::path cache_dir() const { return root_ / "cache"; }
  std::filesystem::path history_path() const { return root_ / "history.jsonl"; }

  const AnnotationConfig& config() const { return config_; }
  // Validates against the lexicon files, then writes config.json.
  void set_config(AnnotationConfig config);

  std::vector<std::string> lexicon_names() const;
  std::vector<NamedLexicon> load_lexicons() const;
  void save_lexicon(const std::string& name, const RawLexicon& lexicon) const;

  Resources load_resources() const;
  CompiledMatcher compile_matcher() const;

  std::vector<std::string> corpus_ids() const;
  // Loads corpora/<id>.conll or corpora/<id>.txt plus its overrides.
  LabeledCorpus load_corpus(const std::string& id) const;
  void save_corpus_text(const std::string& id, const std::string& text, bool conll) const;
  void save_overrides(const std::string& id, const LabeledCorpus& corpus) const;

  TuningHistory load_history() const;
  void append_history(const TuningHistory& history) const;

 private:
  explicit Project(std::filesystem::path root) : root_(std::move(root)) {}

  std::filesystem::path root_;
  AnnotationConfig config_;
};

// Lexicon and corpus names become file names: letters, digits, '-', '_',
// '.' (not leading), at most 100 characters.
bool valid_resource_name(const std::string& name);

std::string read_text_file(const std::filesystem::path& path);
// Writes via a temporary file and rename.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace gazette
