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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gazette/annotator.hpp"
#include "gazette/corpus_io.hpp"
#include "gazette/evaluator.hpp"
#include "gazette/kb_extractor.hpp"
#include "gazette/lexicon.hpp"
#include "gazette/project.hpp"
#include "gazette/unicode.hpp"
#include "metric_fixtures.hpp"
#include "oracle.hpp"

namespace gazette {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

RawLexicon raw(std::string label, std::vector<std::string> surfaces) {
  RawLexicon lex{std::move(label), "en", {}};
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    lex.entries.push_back({surfaces[i], "Q" + std::to_string(i + 1), false});
  }
  return lex;
}

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  std::size_t cases = 0, spans = 0, fuzzy_spans = 0;
  for (std::size_t budget : {0u, 1u}) {
    std::mt19937_64 rng(9000 + budget);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto inst = testing::random_instance(rng, budget);
      const auto matcher = build_matcher(inst.lexicons, inst.config, Resources{});
      const auto got = annotate(matcher, inst.tokens, inst.config);
      const auto expected = testing::oracle_annotate(
          inst.tokens, testing::oracle_entries(inst.lexicons, inst.config.priority_order), budget, 5);
      std::vector<testing::OracleSpan> actual;
      for (const auto& s : got) actual.push_back({s.start, s.end, s.label, s.fuzzy_cost, s.provenance->lexicon});
      if (actual != expected) {
        return {false, "mismatch at budget " + std::to_string(budget) + ", case " + std::to_string(trial)};
      }
      ++cases;
      spans += got.size();
      for (const auto& s : got) fuzzy_spans += s.fuzzy_cost > 0;
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream d;
  d << cases << " cases, " << spans << " spans (" << fuzzy_spans << " fuzzy), " << elapsed << " s";
  return {elapsed < 10.0 && fuzzy_spans > 0, d.str()};
}

Outcome longest_match() {
  const std::vector<NamedLexicon> lexicons = {{"country", raw("COUNTRY", {"United Arab Emirates"})},
                                              {"airline", raw("AIRLINE", {"United"})}};
  AnnotationConfig c;
  c.priority_order = {"airline", "country"};
  const auto matcher = build_matcher(lexicons, c, Resources{});
  const std::vector<std::string> tokens = {"United", "Arab", "Emirates"};
  const auto spans = annotate(matcher, tokens, c);
  const bool ok = spans.size() == 1 && spans[0].start == 0 && spans[0].end == 3 && spans[0].label == "COUNTRY";
  return {ok, std::to_string(spans.size()) + " span(s)" + (spans.empty() ? "" : ", first " + spans[0].label)};
}

Outcome priority_flip() {
  const std::vector<NamedLexicon> lexicons = {{"per", raw("PER", {"Washington"})},
                                              {"loc", raw("LOC", {"Washington"})}};
  const std::vector<std::string> tokens = {"Washington"};
  std::string winners;
  bool ok = true;
  for (const auto& order : {std::vector<std::string>{"per", "loc"}, std::vector<std::string>{"loc", "per"}}) {
    AnnotationConfig c;
    c.priority_order = order;
    const auto spans = annotate(build_matcher(lexicons, c, Resources{}), tokens, c);
    const std::string expected = order.front() == "per" ? "PER" : "LOC";
    ok = ok && spans.size() == 1 && spans[0].label == expected;
    winners += (winners.empty() ? "" : " then ") + (spans.empty() ? std::string("none") : spans[0].label);
  }
  return {ok, winners};
}

Outcome metric_correctness() {
  std::size_t fixtures = 0;
  for (const auto& f : testing::metric_fixtures()) {
    const auto s = token_prf(testing::tag_lines(f.pred), testing::tag_lines(f.gold), f.label);
    if (std::abs(s.precision - f.precision) > 1e-12 || std::abs(s.recall - f.recall) > 1e-12 ||
        std::abs(s.f1 - f.f1) > 1e-12) {
      return {false, "fixture '" + f.name + "' differs"};
    }
    ++fixtures;
  }
  std::mt19937_64 rng(77);
  const std::vector<std::string> labels = {"PER", "LOC", "ORG", "MISC"};
  for (int pair = 0; pair < 1000; ++pair) {
    const std::size_t n = rng() % 40;
    const std::vector<TagSequence> pred = {testing::random_tags(rng, n, labels)};
    const std::vector<TagSequence> gold = {testing::random_tags(rng, n, labels)};
    for (const auto& label : labels) {
      std::uint64_t g = 0, p = 0;
      for (std::size_t i = 0; i < n; ++i) {
        g += tag_type(gold[0][i]) == label;
        p += tag_type(pred[0][i]) == label;
      }
      const auto c = count_label(pred, gold, label);
      if (c.tp + c.fn != g || c.tp + c.fp != p) return {false, "identity violated on pair " + std::to_string(pair)};
    }
  }
  return {fixtures >= 20, std::to_string(fixtures) + " fixtures at 1e-12, identities on 1000 random pairs"};
}

// Estonian sentences carry inflected place names, English sentences the
// word "Of", which the city list also contains.
Outcome tuning_directionality() {
  testing::TempDir tmp;
  Project project = Project::init(tmp / "p");
  RawLexicon cities{"LOC", "et", {{"Tallinn", "Q1770", false}, {"Tartu", "Q13972", false},
                                  {"Of", "Q1002", false}, {"Pärnu", "Q1003", false}}};
  project.save_lexicon("city", cities);
  write_text_file(tmp / "p" / "lemmas.tsv", "Tallinnas\tTallinn\nTartust\tTartu\nPärnusse\tPärnu\nelab\telama\n");
  project.save_corpus_text("mixed",
                           "Ta O\nelab O\nTallinnas B-LOC\n. O\n\n"
                           "Me O\nsõitsime O\nTartust B-LOC\nPärnusse B-LOC\n. O\n\n"
                           "Tartu B-LOC\non O\nilus O\n. O\n\n"
                           "Of O\ncourse O\nTallinn B-LOC\nis O\nold O\n. O\n\n"
                           "Of O\nall O\ncities O\n, O\nPärnu B-LOC\nis O\ncalm O\n. O\n",
                           true);

  auto scores = [&](const AnnotationConfig& c) {
    project.set_config(c);
    const auto matcher = project.compile_matcher();
    const auto annotated = annotate_corpus(matcher, project.load_corpus("mixed"), c);
    return summarize(evaluate(annotated, 5)).at("LOC");
  };
  AnnotationConfig c;
  c.priority_order = {"city"};
  const Scores base = scores(c);
  c.lemmatize = true;
  c.lemma_table = "lemmas.tsv";
  const Scores lemmas = scores(c);
  c.false_positives = {"Of"};
  const Scores filtered = scores(c);

  std::ostringstream d;
  d.precision(3);
  d << "recall " << base.recall << " -> " << lemmas.recall << "; precision " << lemmas.precision << " -> "
    << filtered.precision;
  const bool ok = lemmas.recall > base.recall && filtered.precision > lemmas.precision &&
                  filtered.recall >= lemmas.recall;
  return {ok, d.str()};
}

// Deterministic entity lines with array framing, produced on demand.
class SyntheticDump : public std::streambuf {
 public:
  static constexpr std::uint64_t kClasses = 1000;
  static constexpr std::uint64_t kClassBase = 900000000;

  explicit SyntheticDump(std::uint64_t total_lines) : total_(total_lines) {}

  // Classes of entity number `i` (class items themselves have none).
  static std::vector<std::uint64_t> classes_of(std::uint64_t i) {
    if (i < kClasses) return {};
    std::vector<std::uint64_t> out = {kClassBase + (i * 7919) % kClasses};
    if (i % 5 == 0) out.push_back(kClassBase + (i * 31) % kClasses);
    if (out.size() == 2 && out[0] == out[1]) out.pop_back();
    return out;
  }

  static std::string render(std::uint64_t i) {
    std::string id = i < kClasses ? "Q" + std::to_string(kClassBase + i) : "Q" + std::to_string(i + 1);
    std::string name = i < kClasses ? "class " + std::to_string(i) : "Entity " + std::to_string(i);
    std::string s;
    s.reserve(1100);
    s += R"({"type":"item","id":")" + id + R"(","labels":{)";
    static const char* langs[] = {"en", "de", "fr", "es", "et", "fi", "nl", "sv"};
    for (int k = 0; k < 8; ++k) {
      s += std::string(k ? "," : "") + "\"" + langs[k] + R"(":{"language":")" + langs[k] + R"(","value":")" +
           name + (k ? std::string(" (") + langs[k] + ")" : "") + "\"}";
    }
    s += R"(},"descriptions":{"en":{"language":"en","value":"synthetic entity used to exercise the streaming reader with realistic line lengths"}},)";
    s += R"("aliases":{"en":[{"language":"en","value":"E)" + std::to_string(i) +
         R"("},{"language":"en","value":"Item number )" + std::to_string(i) + R"("}]},"claims":{)";
    const auto classes = classes_of(i);
    if (!classes.empty()) {
      s += R"("P31":[)";
      for (std::size_t k = 0; k < classes.size(); ++k) {
        const std::string c = std::to_string(classes[k]);
        s += std::string(k ? "," : "") + R"({"mainsnak":{"snaktype":"value","property":"P31","datavalue":{"value":{"entity-type":"item","numeric-id":)" +
             c + R"(,"id":"Q)" + c + R"("},"type":"wikibase-entityid"},"datatype":"wikibase-item"},"type":"statement","rank":"normal"})";
      }
      s += "],";
    }
    s += R"("P17":[{"mainsnak":{"snaktype":"value","property":"P17","datavalue":{"value":{"entity-type":"item","numeric-id":191,"id":"Q191"},"type":"wikibase-entityid"},"datatype":"wikibase-item"},"type":"statement","rank":"normal"}]},"sitelinks":{}})";
    return s;
  }

 protected:
  int_type underflow() override {
    if (line_ >= total_) return traits_type::eof();
    const std::uint64_t entities = total_ - 2;
    if (line_ == 0) {
      buffer_ = "[\n";
    } else if (line_ == total_ - 1) {
      buffer_ = "]\n";
    } else {
      const std::uint64_t i = line_ - 1;
      buffer_ = render(i);
      buffer_ += i + 1 < entities ? ",\n" : "\n";
    }
    ++line_;
    bytes_ += buffer_.size();
    setg(buffer_.data(), buffer_.data(), buffer_.data() + buffer_.size());
    return traits_type::to_int_type(buffer_[0]);
  }

 public:
  std::uint64_t bytes() const { return bytes_; }

 private:
  std::uint64_t total_;
  std::uint64_t line_ = 0;
  std::uint64_t bytes_ = 0;
  std::string buffer_;
};

class SyntheticStream : public std::istream {
 public:
  explicit SyntheticStream(std::uint64_t lines) : std::istream(nullptr), buf_(lines) { rdbuf(&buf_); }
  std::uint64_t bytes() const { return buf_.bytes(); }

 private:
  SyntheticDump buf_;
};

Outcome streaming_memory() {
  constexpr std::uint64_t kLines = 1000000;
  constexpr std::uint64_t kEntities = kLines - 2;
  constexpr rlim_t kCeiling = 256ull << 20;

  // Expected results, computed from the generator's membership rule.
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t expected_entries = 0;
  const std::set<std::string> wanted = {"Q900000003", "Q900000500"};
  for (std::uint64_t i = 0; i < kEntities; ++i) {
    bool hit = false;
    for (auto c : SyntheticDump::classes_of(i)) {
      ++counts[c];
      hit = hit || wanted.contains("Q" + std::to_string(c));
    }
    if (hit) expected_entries += 3;  // label and two aliases
  }

  int fds[2];
  if (pipe(fds) != 0) return {false, "pipe failed"};
  const auto start = Clock::now();
  const pid_t child = fork();
  if (child == 0) {
    close(fds[0]);
    rlimit limit{kCeiling, kCeiling};
    setrlimit(RLIMIT_AS, &limit);
    std::string report;
    try {
      std::uint64_t bytes = 0;
      const auto index = index_dump(
          [&]() -> std::unique_ptr<std::istream> { return std::make_unique<SyntheticStream>(kLines); }, "en",
          [&](const DumpStats& s) { bytes = std::max(bytes, s.bytes); });
      SyntheticStream dump(kLines);
      const auto extraction = extract_lexicon(dump, wanted, "en", "X");
      bool counts_ok = index.size() == counts.size();
      for (const auto& e : index) {
        const auto id = std::stoull(e.class_id.substr(1));
        counts_ok = counts_ok && counts.contains(id) && counts.at(id) == e.instance_count &&
                    e.label == "class " + std::to_string(id - SyntheticDump::kClassBase);
      }
      report = std::to_string(counts_ok ? 1 : 0) + " " + std::to_string(extraction.lexicon.entries.size()) + " " +
               std::to_string(dump.bytes());
    } catch (const std::exception& e) {
      report = std::string("error ") + e.what();
    }
    if (write(fds[1], report.data(), report.size()) < 0) _exit(3);
    close(fds[1]);
    _exit(0);
  }
  close(fds[1]);
  std::string report;
  char buf[256];
  for (ssize_t n; (n = read(fds[0], buf, sizeof buf)) > 0;) report.append(buf, n);
  close(fds[0]);
  int status = 0;
  rusage usage{};
  wait4(child, &status, 0, &usage);
  const double elapsed = seconds_since(start);
  const double peak_mb = usage.ru_maxrss / 1024.0;

  std::istringstream in(report);
  int counts_ok = 0;
  std::uint64_t entries = 0, bytes = 0;
  if (!(in >> counts_ok >> entries >> bytes)) return {false, "child failed: " + report};
  std::ostringstream d;
  d.precision(4);
  d << kLines << " lines, " << bytes / 1e9 << " GB, peak RSS " << peak_mb << " MB (address space capped at 256 MB), "
    << elapsed << " s; index " << (counts_ok ? "exact" : "WRONG") << ", " << entries << "/" << expected_entries
    << " entries";
  const bool ok = WIFEXITED(status) && WEXITSTATUS(status) == 0 && counts_ok && entries == expected_entries &&
                  peak_mb < 256 && elapsed < 300 && bytes > 900000000ull;
  return {ok, d.str()};
}

Outcome conll_round_trip() {
  const fs::path dir = GAZETTE_FIXTURES;
  std::vector<std::string> texts;
  for (const char* name : {"conll03_sample.conll", "bio_sample.conll", "tabs_bom.conll"}) {
    texts.push_back(read_text_file(dir / name));
  }
  texts.push_back("EU NNP B-NP I-ORG\nrejects VBZ B-VP O\n\nPeter NNP B-NP I-PER\nBlackburn NNP I-NP I-PER\n");
  texts.push_back("I-ORG-token I-ORG\nx I-ORG\ny I-PER\n");
  std::size_t checked = 0, repaired = 0;
  for (const auto& text : texts) {
    const auto first = parse_conll(text);
    repaired += first.repaired_tags;
    const std::string written = write_conll(first, TagLayer::kGold);
    const auto second = parse_conll(written);
    if (first.sentences.size() != second.sentences.size()) return {false, "sentence count changed"};
    for (std::size_t i = 0; i < first.sentences.size(); ++i) {
      const auto& a = first.sentences[i];
      const auto& b = second.sentences[i];
      if (a.tokens != b.tokens || a.gold != b.gold || a.payload != b.payload) {
        return {false, "sentence " + std::to_string(i) + " changed"};
      }
    }
    if (write_conll(second, TagLayer::kGold) != written) return {false, "second write differs"};
    ++checked;
  }
  return {repaired > 0, std::to_string(checked) + " inputs stable, " + std::to_string(repaired) + " IOB1 tags repaired"};
}

Outcome diacritics() {
  if (unicode::strip_diacritics("Yorùbá") != "Yoruba") return {false, "Yorùbá"};
  if (unicode::strip_diacritics("Tõnis") != "Tonis") return {false, "Tõnis"};
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 10000; ++i) {
    const std::string s = testing::random_unicode(rng, 32);
    const std::string once = unicode::strip_diacritics(s);
    if (unicode::strip_diacritics(once) != once) return {false, "not idempotent on case " + std::to_string(i)};
  }
  return {true, "fixed examples plus 10000 random strings"};
}

// extract -> compile -> annotate -> eval in a fresh project.
std::pair<std::string, std::string> pipeline_once(const fs::path& root) {
  Project project = Project::init(root);
  const fs::path dump = fs::path(GAZETTE_FIXTURES) / "dump_small.json.bz2";
  for (const auto& [name, classes, label] :
       std::vector<std::tuple<std::string, std::set<std::string>, std::string>>{
           {"per", {"Q5"}, "PER"}, {"loc", {"Q515", "Q6256"}, "LOC"}}) {
    auto in = open_dump(dump);
    project.save_lexicon(name, extract_lexicon(*in, classes, "en", label).lexicon);
  }
  AnnotationConfig c;
  c.priority_order = {"loc", "per"};
  c.split_names = {"per"};
  c.fuzzy = {true, 1, 5};
  project.set_config(c);
  project.save_corpus_text("gold",
                           "George B-PER\nWashington I-PER\nleft O\nWashington B-LOC\nfor O\nTalinn B-LOC\n. O\n\n"
                           "Turing B-PER\nvisited O\nthe O\nUnited B-LOC\nArab I-LOC\nEmirates I-LOC\n. O\n",
                           true);
  const auto matcher = project.compile_matcher();
  const auto annotated = annotate_corpus(matcher, project.load_corpus("gold"), c, 2);
  return {matcher.fingerprint(),
          write_conll(annotated, TagLayer::kMerged) + to_json(evaluate(annotated, 10)).dump() +
              read_text_file(project.lexicon_dir() / "per.json")};
}

Outcome determinism() {
  testing::TempDir a, b;
  const auto first = pipeline_once(a.path());
  const auto second = pipeline_once(b.path());
  const bool ok = first.first == second.first && first.second == second.second;
  return {ok, "fingerprint " + first.first.substr(0, 12) + ", " + std::to_string(first.second.size()) +
                  " bytes of exports compared"};
}

}  // namespace
}  // namespace gazette

int main() {
  using gazette::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"matcher equals brute-force oracle", gazette::oracle_equivalence},
      {"longest match: United Arab Emirates", gazette::longest_match},
      {"priority order decides and flips", gazette::priority_flip},
      {"token P/R/F1 fixtures and identities", gazette::metric_correctness},
      {"lemmas raise recall, filter raises precision", gazette::tuning_directionality},
      {"streaming index and extraction in 256 MB", gazette::streaming_memory},
      {"CoNLL round trip", gazette::conll_round_trip},
      {"diacritics removal", gazette::diacritics},
      {"pipeline determinism", gazette::determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %-46s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
