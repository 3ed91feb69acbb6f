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

#include <gtest/gtest.h>

#include <cstdlib>

#include "gazette/error.hpp"
#include "oracle.hpp"

namespace gazette {
namespace {

namespace fs = std::filesystem;

RawLexicon lexicon(std::string label, std::vector<std::string> surfaces) {
  RawLexicon lex{std::move(label), "et", {}};
  for (std::size_t i = 0; i < surfaces.size(); ++i) lex.entries.push_back({surfaces[i], "Q" + std::to_string(i), false});
  return lex;
}

TEST(ProjectTest, InitAndOpen) {
  testing::TempDir tmp;
  EXPECT_THROW(Project::open(tmp / "p"), Error);
  Project p = Project::init(tmp / "p");
  EXPECT_TRUE(fs::is_directory(p.lexicon_dir()));
  EXPECT_TRUE(fs::is_directory(p.corpus_dir()));
  EXPECT_TRUE(fs::is_regular_file(p.config_path()));
  EXPECT_EQ(p.config(), AnnotationConfig{});

  p.save_lexicon("loc", lexicon("LOC", {"Tallinn"}));
  auto c = p.config();
  c.priority_order = {"loc"};
  p.set_config(c);
  // Re-running init keeps the existing config.
  EXPECT_EQ(Project::init(tmp / "p").config(), c);
  EXPECT_EQ(Project::open(tmp / "p").config(), c);
}

TEST(ProjectTest, ConfigValidatedAgainstLexicons) {
  testing::TempDir tmp;
  Project p = Project::init(tmp.path());
  p.save_lexicon("loc", lexicon("LOC", {"Tallinn"}));
  auto c = p.config();
  c.priority_order = {"loc", "per"};
  EXPECT_THROW(p.set_config(c), ConfigError);
  EXPECT_EQ(p.config(), AnnotationConfig{});

  c.priority_order = {"loc"};
  p.set_config(c);
  fs::remove(p.lexicon_dir() / "loc.json");
  EXPECT_THROW(Project::open(tmp.path()), ConfigError);
}

TEST(ProjectTest, LexiconsAndMatcher) {
  testing::TempDir tmp;
  Project p = Project::init(tmp.path());
  p.save_lexicon("per", lexicon("PER", {"Tõnis Mägi"}));
  p.save_lexicon("loc", lexicon("LOC", {"Tallinnas"}));
  EXPECT_EQ(p.lexicon_names(), (std::vector<std::string>{"loc", "per"}));
  EXPECT_THROW(p.save_lexicon("../evil", lexicon("X", {"x"})), Error);

  write_text_file(tmp / "lemmas.tsv", "Tallinnas\tTallinn\n");
  auto c = p.config();
  c.priority_order = {"per", "loc"};
  c.lemmatize = true;
  c.lemma_table = "lemmas.tsv";
  p.set_config(c);
  const auto matcher = p.compile_matcher();
  const std::vector<std::string> key = {"Tallinn"};
  ASSERT_EQ(matcher.lookup(key).size(), 1u);
  EXPECT_EQ(matcher.fingerprint(), p.compile_matcher().fingerprint());
  write_text_file(tmp / "lemmas.tsv", "Tallinnas\tTallinna\n");
  EXPECT_NE(matcher.fingerprint(), p.compile_matcher().fingerprint());
}

TEST(ProjectTest, CorporaAndOverrides) {
  testing::TempDir tmp;
  Project p = Project::init(tmp.path());
  p.save_corpus_text("gold", "Of O\ncourse O\n\nTallinn B-LOC\n", true);
  p.save_corpus_text("raw", "Alan Turing lived. He died.", false);
  EXPECT_THROW(p.save_corpus_text("bad", "a X-Y\n", true), FormatError);
  EXPECT_EQ(p.corpus_ids(), (std::vector<std::string>{"gold", "raw"}));
  EXPECT_EQ(p.load_corpus("raw").sentences.size(), 2u);

  auto corpus = p.load_corpus("gold");
  ASSERT_EQ(corpus.sentences.size(), 2u);
  corpus.sentences[0].overrides.push_back({0, 1, "O"});
  p.save_overrides("gold", corpus);
  const auto reloaded = p.load_corpus("gold");
  ASSERT_EQ(reloaded.sentences[0].overrides.size(), 1u);
  EXPECT_EQ(reloaded.sentences[0].overrides[0].label, "O");
  EXPECT_THROW(p.load_corpus("missing"), Error);

  // Replacing the corpus drops stale overrides.
  p.save_corpus_text("gold", "Tallinn B-LOC\n", true);
  EXPECT_TRUE(p.load_corpus("gold").sentences[0].overrides.empty());
}

TEST(ProjectTest, HistoryAppendOnly) {
  testing::TempDir tmp;
  Project p = Project::init(tmp.path());
  auto h = p.load_history();
  EXPECT_TRUE(h.empty());
  std::string before;
  for (int i = 0; i < 3; ++i) {
    h = record_step(p.load_history(), "step", p.config(), std::nullopt);
    p.append_history(h);
    const std::string now = read_text_file(p.history_path());
    EXPECT_TRUE(now.starts_with(before));
    before = now;
  }
  EXPECT_EQ(p.load_history().steps().size(), 3u);
  EXPECT_EQ(p.load_history().steps().back().index, 2u);
  EXPECT_THROW(p.append_history(record_step(TuningHistory{}, "other", p.config(), std::nullopt)), Error);
}

TEST(ProjectTest, ResolveRoot) {
  ::unsetenv(Project::kRootVariable);
  EXPECT_FALSE(Project::resolve_root(std::nullopt));
  ::setenv(Project::kRootVariable, "/tmp/from-env", 1);
  EXPECT_EQ(Project::resolve_root(std::nullopt), fs::path("/tmp/from-env"));
  EXPECT_EQ(Project::resolve_root(fs::path("/x")), fs::path("/x"));
  ::unsetenv(Project::kRootVariable);
}

TEST(ProjectTest, ResourceNames) {
  EXPECT_TRUE(valid_resource_name("loc_v2.et"));
  EXPECT_FALSE(valid_resource_name(""));
  EXPECT_FALSE(valid_resource_name(".hidden"));
  EXPECT_FALSE(valid_resource_name("a/b"));
  EXPECT_FALSE(valid_resource_name(std::string(101, 'a')));
}

}  // namespace
}  // namespace gazette
