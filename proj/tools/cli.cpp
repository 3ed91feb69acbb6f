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

#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "gazette/corpus_io.hpp"
#include "gazette/error.hpp"
#include "gazette/evaluator.hpp"
#include "gazette/hash.hpp"
#include "gazette/kb_extractor.hpp"
#include "gazette/project.hpp"
#include "gazette/server.hpp"

namespace gazette {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : Error {
  using Error::Error;
};

struct Options {
  std::string project;

  std::string dump;
  std::string lang = "en";
  std::size_t top = 20;
  std::string query;
  bool json_output = false;

  std::vector<std::string> class_ids;
  std::string label;
  std::string out;

  std::string list_file;

  std::string corpus_in;
  std::string format = "conll";
  std::string input_format;
  std::string tokenizer_command;
  unsigned threads = 0;

  std::string pred;
  std::string gold;
  std::size_t top_k = 10;

  std::string bind = "127.0.0.1:8080";
  bool allow_remote = false;
  std::string ui_dir;
  std::size_t max_upload_mb = 100;

  std::string command;
  std::vector<std::string> inputs;
};

Project open_project(const std::string& explicit_root) {
  std::optional<fs::path> given;
  if (!explicit_root.empty()) given = explicit_root;
  auto root = Project::resolve_root(given);
  if (!root) {
    throw UsageError(fmt::format("no project given; pass --project or set {}", Project::kRootVariable));
  }
  return Project::open(*root);
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

std::string dump_checksum(const fs::path& dump) {
  std::ifstream in(dump, std::ios::binary);
  if (!in) throw IoError("cannot open " + dump.string(), 0);
  return sha256_hex(in);
}

LabeledCorpus read_corpus(const std::string& path, std::string input_format,
                          const std::string& tokenizer_command, const std::string& language) {
  const std::string text = read_text_file(path);
  if (input_format.empty()) input_format = fs::path(path).extension() == ".txt" ? "text" : "conll";
  if (input_format == "conll") {
    LabeledCorpus corpus = parse_conll(text);
    corpus.source_name = path;
    return corpus;
  }
  if (input_format != "text") throw UsageError("--input-format must be conll or text");
  if (tokenizer_command.empty()) return corpus_from_text(text, language, path);
  LabeledCorpus corpus;
  corpus.language = language;
  corpus.source_name = path;
  for (auto& tokens : tokenize_external(text, tokenizer_command)) {
    Sentence s;
    s.tokens = std::move(tokens);
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

int cmd_init(const Options& o, std::ostream& out) {
  std::optional<fs::path> given;
  if (!o.project.empty()) given = o.project;
  auto root = Project::resolve_root(given);
  if (!root) throw UsageError("no project directory given");
  Project p = Project::init(*root);
  out << "initialized " << p.root().string() << "\n";
  return kExitOk;
}

int cmd_index(const Options& o, std::ostream& out) {
  const fs::path dump = o.dump;
  std::optional<std::vector<ClassIndexEntry>> index;
  std::optional<fs::path> cache;
  std::string checksum;
  if (!o.project.empty() || std::getenv(Project::kRootVariable)) {
    Project p = open_project(o.project);
    checksum = dump_checksum(dump);
    cache = class_index_cache_path(p.cache_dir(), checksum, o.lang);
    index = load_class_index(*cache, checksum);
  }
  if (!index) {
    index = index_dump([&] { return open_dump(dump); }, o.lang);
    if (cache) save_class_index(*index, checksum, *cache);
  }
  std::vector<ClassIndexEntry> shown = o.query.empty() ? *index : search_classes(*index, o.query);
  if (shown.size() > o.top) shown.resize(o.top);
  if (o.json_output) {
    json j = json::array();
    for (const auto& e : shown) {
      j.push_back({{"class_id", e.class_id}, {"label", e.label}, {"language", e.language},
                   {"instance_count", e.instance_count}});
    }
    out << j.dump(2) << "\n";
  } else {
    for (const auto& e : shown) out << fmt::format("{}\t{}\t{}\n", e.class_id, e.label, e.instance_count);
  }
  return kExitOk;
}

int cmd_extract(const Options& o, std::ostream& out, std::ostream& err) {
  auto in = open_dump(o.dump);
  const std::set<std::string> ids(o.class_ids.begin(), o.class_ids.end());
  Extraction extraction = extract_lexicon(*in, ids, o.lang, o.label);
  if (extraction.no_matches) {
    err << "warning: no item in the dump is an instance of the requested classes\n";
  }
  emit(to_json(extraction.lexicon).dump(2) + "\n", o.out, out);
  return kExitOk;
}

int cmd_list(const Options& o, std::ostream& out) {
  RawLexicon lexicon = load_user_list(read_text_file(o.list_file), o.label, o.lang);
  emit(to_json(lexicon).dump(2) + "\n", o.out, out);
  return kExitOk;
}

int cmd_annotate(const Options& o, std::ostream& out) {
  if (o.format != "conll") throw UsageError("--format must be conll");
  Project p = open_project(o.project);
  const CompiledMatcher matcher = p.compile_matcher();
  LabeledCorpus corpus = read_corpus(o.corpus_in, o.input_format, o.tokenizer_command, o.lang);
  corpus = annotate_corpus(matcher, std::move(corpus), p.config(), o.threads);
  emit(write_conll(corpus, TagLayer::kPredicted), o.out, out);
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  LabeledCorpus pred = parse_conll(read_text_file(o.pred));
  LabeledCorpus gold = parse_conll(read_text_file(o.gold));
  if (pred.sentences.size() != gold.sentences.size()) {
    throw Error(fmt::format("{} has {} sentences but {} has {}", o.pred, pred.sentences.size(),
                            o.gold, gold.sentences.size()));
  }
  std::vector<std::vector<std::string>> tokens;
  std::vector<TagSequence> pred_tags, gold_tags;
  for (std::size_t i = 0; i < pred.sentences.size(); ++i) {
    const Sentence& ps = pred.sentences[i];
    const Sentence& gs = gold.sentences[i];
    if (ps.tokens != gs.tokens) {
      throw Error(fmt::format("sentence {}: tokens differ between {} and {}", i, o.pred, o.gold));
    }
    if (!ps.gold || !gs.gold) throw Error(fmt::format("sentence {}: missing tag column", i));
    tokens.push_back(gs.tokens);
    pred_tags.push_back(*ps.gold);
    gold_tags.push_back(*gs.gold);
  }
  const EvalReport report = evaluate(tokens, pred_tags, gold_tags, o.top_k);
  if (o.json_output) {
    out << to_json(report).dump(2) << "\n";
  } else {
    out << format_report(report);
  }
  return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& out) {
  Project p = open_project(o.project);
  ServerOptions so;
  const auto colon = o.bind.rfind(':');
  std::string port_text = o.bind;
  if (colon != std::string::npos) {
    so.host = o.bind.substr(0, colon);
    if (so.host.size() > 1 && so.host.front() == '[' && so.host.back() == ']') {
      so.host = so.host.substr(1, so.host.size() - 2);
    }
    port_text = o.bind.substr(colon + 1);
  }
  try {
    so.port = std::stoi(port_text);
  } catch (const std::exception&) {
    throw UsageError("--bind expects host:port");
  }
  so.allow_remote = o.allow_remote;
  so.max_upload_bytes = o.max_upload_mb << 20;
  if (!o.dump.empty()) so.dump = o.dump;
  if (!o.ui_dir.empty()) so.ui_dir = o.ui_dir;
  if (!so.allow_remote && !is_loopback_host(so.host)) {
    throw UsageError("refusing to bind to " + so.host + " without --allow-remote");
  }
  Server server(std::move(p), so);
  out << fmt::format("serving {} on http://{}:{}/api/v1\n", o.project, so.host, so.port) << std::flush;
  server.run();
  return kExitOk;
}

int cmd_lemmatize_vocab(const Options& o, std::ostream& out) {
  std::set<std::string> vocabulary;
  for (const auto& path : o.inputs) {
    LabeledCorpus corpus = read_corpus(path, o.input_format, o.tokenizer_command, o.lang);
    for (const auto& s : corpus.sentences) vocabulary.insert(s.tokens.begin(), s.tokens.end());
  }
  if (!o.project.empty() || std::getenv(Project::kRootVariable)) {
    Project p = open_project(o.project);
    for (const auto& named : p.load_lexicons()) {
      for (const auto& e : named.lexicon.entries) {
        for (auto& t : tokenize_words(e.surface)) vocabulary.insert(std::move(t));
      }
    }
  }
  const std::vector<std::string> words(vocabulary.begin(), vocabulary.end());
  emit(LemmaTable::from_command(o.command, words).serialize(), o.out, out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Gazetteer-based named entity annotation"};
  app.name("gazette");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("-p,--project", o.project, "Project directory (default: $GAZETTE_PROJECT)");

  auto* init = app.add_subcommand("init", "Create a project directory");

  auto* index = app.add_subcommand("index", "Build the class index of a dump and list top classes");
  index->add_option("dump", o.dump, "Dump file (.json, .gz, .bz2)")->required()->check(CLI::ExistingFile);
  index->add_option("--lang", o.lang, "Label language");
  index->add_option("--top", o.top, "Number of classes to print");
  index->add_option("--query", o.query, "Only classes matching this text");
  index->add_flag("--json", o.json_output, "JSON output");

  auto* extract = app.add_subcommand("extract", "Extract a lexicon from a dump");
  extract->add_option("dump", o.dump, "Dump file")->required()->check(CLI::ExistingFile);
  extract->add_option("--class-id", o.class_ids, "Class item id (repeatable)")->required();
  extract->add_option("--lang", o.lang, "Label language");
  extract->add_option("--label", o.label, "Entity label")->required();
  extract->add_option("-o,--out", o.out, "Output lexicon JSON (default: stdout)");

  auto* list = app.add_subcommand("list", "Convert a user word list into a lexicon");
  list->add_option("file", o.list_file, "List file")->required()->check(CLI::ExistingFile);
  list->add_option("--label", o.label, "Entity label")->required();
  list->add_option("--lang", o.lang, "Language code");
  list->add_option("-o,--out", o.out, "Output lexicon JSON (default: stdout)");

  auto* annotate = app.add_subcommand("annotate", "Annotate a corpus with the project's lexicons");
  annotate->add_option("corpus", o.corpus_in, "Input corpus")->required()->check(CLI::ExistingFile);
  annotate->add_option("-o,--out", o.out, "Output file (default: stdout)");
  annotate->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"conll"}));
  annotate->add_option("--input-format", o.input_format, "conll or text (default: by extension)")
      ->check(CLI::IsMember({"conll", "text"}));
  annotate->add_option("--tokenizer-cmd", o.tokenizer_command, "External tokenizer for text input");
  annotate->add_option("--lang", o.lang, "Corpus language");
  annotate->add_option("--threads", o.threads, "Worker threads (0: all cores)");

  auto* eval = app.add_subcommand("eval", "Score predicted tags against gold tags");
  eval->add_option("pred", o.pred, "Predicted CoNLL file")->required()->check(CLI::ExistingFile);
  eval->add_option("gold", o.gold, "Gold CoNLL file")->required()->check(CLI::ExistingFile);
  eval->add_option("--top-k", o.top_k, "Length of the error rankings");
  eval->add_flag("--json", o.json_output, "JSON output");

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--bind", o.bind, "host:port");
  serve->add_flag("--allow-remote", o.allow_remote, "Permit a non-loopback bind address");
  serve->add_option("--dump", o.dump, "Dump used for indexing and extraction")->check(CLI::ExistingFile);
  serve->add_option("--ui-dir", o.ui_dir, "Static UI assets")->check(CLI::ExistingDirectory);
  serve->add_option("--max-upload-mb", o.max_upload_mb, "Upload size cap");

  auto* lemmas = app.add_subcommand("lemmatize-vocab",
                                    "Build a lemma table by running an external lemmatizer");
  lemmas->add_option("--command", o.command, "Command reading tokens and writing lemmas, one per line")
      ->required();
  lemmas->add_option("corpora", o.inputs, "Corpora whose tokens form the vocabulary")
      ->check(CLI::ExistingFile);
  lemmas->add_option("--input-format", o.input_format, "conll or text (default: by extension)")
      ->check(CLI::IsMember({"conll", "text"}));
  lemmas->add_option("--lang", o.lang, "Corpus language");
  lemmas->add_option("-o,--out", o.out, "Output TSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (init->parsed()) return cmd_init(o, out);
    if (index->parsed()) return cmd_index(o, out);
    if (extract->parsed()) return cmd_extract(o, out, err);
    if (list->parsed()) return cmd_list(o, out);
    if (annotate->parsed()) return cmd_annotate(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (serve->parsed()) return cmd_serve(o, out);
    if (lemmas->parsed()) return cmd_lemmatize_vocab(o, out);
  } catch (const UsageError& e) {
    err << "gazette: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "gazette: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace gazette
