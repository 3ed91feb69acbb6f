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

#include "gazette/server.hpp"

#include <httplib.h>

#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include "gazette/error.hpp"
#include "gazette/evaluator.hpp"
#include "gazette/hash.hpp"

namespace gazette {
namespace {

using nlohmann::json;

struct HttpError : Error {
  HttpError(int status, const std::string& message) : Error(message), status(status) {}
  int status;
};

struct Job {
  std::string id;
  std::string kind;
  std::string key;
  std::string state = "queued";  // queued -> running -> done | failed
  double progress = 0;
  std::string error;
  json result;
  std::function<json(const std::function<void(double)>&)> work;

  bool active() const { return state == "queued" || state == "running"; }
};

struct Annotation {
  std::string job_id;
  std::shared_ptr<const CompiledMatcher> matcher;
  std::shared_ptr<const LabeledCorpus> corpus;  // predicted layer filled
};

json job_json(const Job& job) {
  return {{"id", job.id},
          {"kind", job.kind},
          {"state", job.state},
          {"progress", job.progress},
          {"error", job.error.empty() ? json(nullptr) : json(job.error)},
          {"result", job.result}};
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw HttpError(400, std::string("invalid JSON body: ") + e.what());
  }
}

std::size_t size_param(const httplib::Request& req, const std::string& name) {
  if (!req.has_param(name)) throw HttpError(400, "missing parameter '" + name + "'");
  const std::string v = req.get_param_value(name);
  try {
    std::size_t used = 0;
    const unsigned long long n = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw HttpError(400, "parameter '" + name + "' must be a non-negative integer");
  }
}

std::string string_param(const httplib::Request& req, const std::string& name) {
  if (!req.has_param(name)) throw HttpError(400, "missing parameter '" + name + "'");
  return req.get_param_value(name);
}

}  // namespace

bool is_loopback_host(const std::string& host) {
  return host == "127.0.0.1" || host == "localhost" || host == "::1" || host.starts_with("127.");
}

struct Server::Impl {
  Impl(Project p, ServerOptions o) : options(std::move(o)), project(std::move(p)) {}

  ServerOptions options;
  httplib::Server http;
  std::thread listener;

  std::mutex mu;
  Project project;
  std::map<std::string, std::string> lexicon_hashes;
  std::map<std::string, LabeledCorpus> corpora;
  std::map<std::string, std::shared_ptr<Job>> jobs;
  std::map<std::string, Annotation> annotations;
  std::map<std::string, std::shared_ptr<const std::vector<ClassIndexEntry>>> class_indexes;
  std::optional<EvalReport> last_report;
  std::uint64_t next_job = 1;

  std::deque<std::shared_ptr<Job>> queue;
  std::condition_variable queue_cv;
  bool stopping = false;
  std::vector<std::thread> workers;

  // ---- state helpers; callers hold `mu` ----

  void refresh_lexicon_hashes() {
    lexicon_hashes.clear();
    for (const auto& name : project.lexicon_names()) {
      lexicon_hashes[name] = sha256_hex(read_text_file(project.lexicon_dir() / (name + ".json")));
    }
  }

  std::string lexicon_version() const {
    Sha256 h;
    for (const auto& [name, hash] : lexicon_hashes) h.update(name).update(" ").update(hash).update("\n");
    return h.hex();
  }

  std::string annotation_key(const std::string& corpus_id) const {
    return corpus_id + "\n" + config_hash(project.config()) + "\n" + lexicon_version();
  }

  LabeledCorpus& corpus(const std::string& id) {
    auto it = corpora.find(id);
    if (it == corpora.end()) throw HttpError(404, "unknown corpus '" + id + "'");
    return it->second;
  }

  // Annotation of `id` under the current config and lexicons.
  const Annotation& current_annotation(const std::string& id) {
    corpus(id);
    auto it = annotations.find(annotation_key(id));
    if (it == annotations.end() || !it->second.corpus) {
      throw HttpError(409, "corpus '" + id + "' is not annotated under the current configuration");
    }
    return it->second;
  }

  // Annotated corpus with the current manual overrides.
  LabeledCorpus annotated_with_overrides(const std::string& id) {
    LabeledCorpus out = *current_annotation(id).corpus;
    const auto& base = corpus(id);
    for (std::size_t s = 0; s < out.sentences.size(); ++s) {
      out.sentences[s].overrides = base.sentences[s].overrides;
    }
    return out;
  }

  json sentence_json(const std::string& id, std::size_t index) {
    const auto& base = corpus(id);
    if (index >= base.sentences.size()) throw HttpError(404, "sentence out of range");
    const Sentence& s = base.sentences[index];
    json j;
    j["index"] = index;
    j["tokens"] = s.tokens;
    j["gold"] = s.gold ? json(*s.gold) : json(nullptr);
    j["predicted"] = nullptr;
    j["merged"] = nullptr;
    auto it = annotations.find(annotation_key(id));
    if (it != annotations.end() && it->second.corpus) {
      Sentence annotated = it->second.corpus->sentences[index];
      annotated.overrides = s.overrides;
      j["predicted"] = *annotated.predicted;
      j["merged"] = annotated.merged();
    }
    j["overrides"] = json::array();
    for (const auto& o : s.overrides) {
      j["overrides"].push_back({{"start", o.start}, {"end", o.end}, {"label", o.label}});
    }
    return j;
  }

  std::shared_ptr<Job> submit(const std::string& kind, const std::string& key,
                              std::function<json(const std::function<void(double)>&)> work) {
    for (const auto& [id, job] : jobs) {
      if (job->kind == kind && job->active() && job->key != key) {
        throw HttpError(409, "a " + kind + " job is already in progress (" + id + ")");
      }
    }
    auto job = std::make_shared<Job>();
    job->id = "job-" + std::to_string(next_job++);
    job->kind = kind;
    job->key = key;
    job->work = std::move(work);
    jobs[job->id] = job;
    queue.push_back(job);
    queue_cv.notify_one();
    return job;
  }

  // ---- worker pool ----

  void worker_loop() {
    for (;;) {
      std::shared_ptr<Job> job;
      {
        std::unique_lock lock(mu);
        queue_cv.wait(lock, [&] { return stopping || !queue.empty(); });
        if (stopping) return;
        job = queue.front();
        queue.pop_front();
        job->state = "running";
      }
      auto progress = [&](double p) {
        std::lock_guard lock(mu);
        job->progress = std::clamp(std::max(job->progress, p), 0.0, 1.0);
      };
      json result;
      std::string error;
      try {
        result = job->work(progress);
      } catch (const std::exception& e) {
        error = e.what();
      }
      std::lock_guard lock(mu);
      if (error.empty()) {
        job->result = std::move(result);
        job->progress = 1.0;
        job->state = "done";
      } else {
        job->error = error;
        job->state = "failed";
      }
      job->work = nullptr;
    }
  }

  // ---- routes ----

  template <typename F>
  httplib::Server::Handler wrap(F f) {
    return [this, f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const HttpError& e) {
        res.status = e.status;
        res.set_content(json{{"error", e.what()}}.dump(), "application/json");
      } catch (const ConfigError& e) {
        res.status = 422;
        res.set_content(
            json{{"errors", json::array({{{"field", e.field()}, {"message", e.what()}}})}}.dump(),
            "application/json");
      } catch (const json::exception& e) {
        res.status = 400;
        res.set_content(json{{"error", e.what()}}.dump(), "application/json");
      } catch (const Error& e) {
        res.status = 400;
        res.set_content(json{{"error", e.what()}}.dump(), "application/json");
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(json{{"error", e.what()}}.dump(), "application/json");
      }
    };
  }

  static void reply(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  void add_to_priority_order(const std::string& name) {
    AnnotationConfig config = project.config();
    if (std::find(config.priority_order.begin(), config.priority_order.end(), name) ==
        config.priority_order.end()) {
      config.priority_order.push_back(name);
    }
    project.set_config(std::move(config));
  }

  void routes() {
    const std::string api = "/api/v1";

    http.Get(api + "/project", wrap([this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(mu);
      json lexicons = json::array();
      for (const auto& [name, hash] : lexicon_hashes) {
        lexicons.push_back({{"name", name}, {"hash", hash}});
      }
      json corpus_ids = json::array();
      for (const auto& [id, c] : corpora) corpus_ids.push_back(id);
      reply(res, {{"root", project.root().string()},
                  {"lexicons", lexicons},
                  {"corpora", corpus_ids},
                  {"config_hash", config_hash(project.config())},
                  {"dump", options.dump ? json(options.dump->string()) : json(nullptr)}});
    }));

    http.Get(api + "/classes", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const std::string q = string_param(req, "q");
      const std::string lang = req.has_param("lang") ? req.get_param_value("lang") : "en";
      std::shared_ptr<const std::vector<ClassIndexEntry>> index;
      {
        std::lock_guard lock(mu);
        auto it = class_indexes.find(lang);
        if (it == class_indexes.end()) {
          throw HttpError(404, "no class index for language '" + lang + "'; POST " +
                                   "/api/v1/index first");
        }
        index = it->second;
      }
      json out = json::array();
      for (const auto& e : search_classes(*index, q)) {
        out.push_back({{"class_id", e.class_id},
                       {"label", e.label},
                       {"language", e.language},
                       {"instance_count", e.instance_count}});
      }
      reply(res, out);
    }));

    http.Post(api + "/index", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      const std::string lang = body.value("lang", "en");
      if (!options.dump) throw HttpError(409, "server was started without a dump");
      std::lock_guard lock(mu);
      const auto dump = *options.dump;
      const auto cache_dir = project.cache_dir();
      auto job = submit("index", lang, [this, dump, cache_dir, lang](const auto& progress) {
        std::string checksum;
        {
          std::ifstream raw(dump, std::ios::binary);
          checksum = sha256_hex(raw);
        }
        const auto cache = class_index_cache_path(cache_dir, checksum, lang);
        auto index = load_class_index(cache, checksum);
        const bool cached = index.has_value();
        if (!cached) {
          const auto size = static_cast<double>(std::filesystem::file_size(dump));
          int sweep = 0;
          index = index_dump(
              [&] {
                ++sweep;
                return open_dump(dump);
              },
              lang, [&](const DumpStats& s) {
                progress(0.5 * (sweep - 1) + 0.5 * std::min(1.0, s.bytes / std::max(size, 1.0)));
              });
          save_class_index(*index, checksum, cache);
        }
        const std::size_t classes = index->size();
        std::lock_guard lock(mu);
        class_indexes[lang] = std::make_shared<const std::vector<ClassIndexEntry>>(std::move(*index));
        return json{{"language", lang}, {"classes", classes}, {"cached", cached}};
      });
      reply(res, {{"job_id", job->id}}, 202);
    }));

    http.Post(api + "/lexicons", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      if (!options.dump) throw HttpError(409, "server was started without a dump");
      const auto ids = body.at("class_ids").get<std::vector<std::string>>();
      if (ids.empty()) throw HttpError(400, "class_ids is empty");
      const std::set<std::string> class_ids(ids.begin(), ids.end());
      const std::string lang = body.at("lang").get<std::string>();
      const std::string label = body.at("label").get<std::string>();
      const std::string name = body.value("name", label);
      if (!valid_resource_name(name)) throw HttpError(400, "invalid lexicon name '" + name + "'");
      if (label.empty()) throw HttpError(400, "label is empty");

      std::lock_guard lock(mu);
      const auto dump = *options.dump;
      auto job = submit("extract", name, [this, dump, class_ids, lang, label, name](const auto& progress) {
        const auto size = static_cast<double>(std::filesystem::file_size(dump));
        auto in = open_dump(dump);
        auto extraction = extract_lexicon(*in, class_ids, lang, label, [&](const DumpStats& s) {
          progress(std::min(0.99, s.bytes / std::max(size, 1.0)));
        });
        std::lock_guard lock(mu);
        project.save_lexicon(name, extraction.lexicon);
        refresh_lexicon_hashes();
        add_to_priority_order(name);
        return json{{"name", name},
                    {"entries", extraction.lexicon.entries.size()},
                    {"warning", extraction.no_matches ? json("no items matched the classes")
                                                      : json(nullptr)}};
      });
      reply(res, {{"job_id", job->id}}, 202);
    }));

    http.Post(api + "/lists", wrap([this](const httplib::Request& req, httplib::Response& res) {
      if (!req.is_multipart_form_data() || !req.has_file("file")) {
        throw HttpError(400, "expected multipart form with a 'file' part");
      }
      auto field = [&](const std::string& key, const std::string& fallback) {
        return req.has_file(key) ? req.get_file_value(key).content : fallback;
      };
      const std::string label = field("label", "");
      if (label.empty()) throw HttpError(400, "missing 'label'");
      const std::string name = field("name", label);
      if (!valid_resource_name(name)) throw HttpError(400, "invalid lexicon name '" + name + "'");
      const RawLexicon lexicon = load_user_list(req.get_file_value("file").content, label,
                                                field("lang", "und"));
      std::lock_guard lock(mu);
      project.save_lexicon(name, lexicon);
      refresh_lexicon_hashes();
      add_to_priority_order(name);
      reply(res, {{"name", name}, {"entries", lexicon.entries.size()}}, 201);
    }));

    http.Post(api + "/corpora", wrap([this](const httplib::Request& req, httplib::Response& res) {
      if (!req.is_multipart_form_data() || !req.has_file("file")) {
        throw HttpError(400, "expected multipart form with a 'file' part");
      }
      const auto file = req.get_file_value("file");
      std::string name = req.has_file("name") ? req.get_file_value("name").content
                                              : std::filesystem::path(file.filename).stem().string();
      std::string format = req.has_file("format") ? req.get_file_value("format").content : "";
      if (format.empty()) {
        format = std::filesystem::path(file.filename).extension() == ".txt" ? "text" : "conll";
      }
      if (format != "text" && format != "conll") throw HttpError(400, "format must be conll or text");
      if (!valid_resource_name(name)) throw HttpError(400, "invalid corpus name '" + name + "'");
      std::lock_guard lock(mu);
      project.save_corpus_text(name, file.content, format == "conll");
      corpora[name] = project.load_corpus(name);
      reply(res, {{"corpus_id", name}, {"sentences", corpora[name].sentences.size()}}, 201);
    }));

    http.Get(api + "/corpora", wrap([this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(mu);
      json out = json::array();
      for (const auto& [id, c] : corpora) {
        out.push_back({{"corpus_id", id}, {"sentences", c.sentences.size()}, {"has_gold", c.has_gold()}});
      }
      reply(res, out);
    }));

    http.Get(api + R"(/corpora/([\w.\-]+))",
             wrap([this](const httplib::Request& req, httplib::Response& res) {
               const std::string id = req.matches[1];
               std::lock_guard lock(mu);
               const std::size_t total = corpus(id).sentences.size();
               const std::size_t offset = req.has_param("offset") ? size_param(req, "offset") : 0;
               const std::size_t limit = req.has_param("limit") ? size_param(req, "limit") : 50;
               json sentences = json::array();
               for (std::size_t i = offset; i < total && i < offset + limit; ++i) {
                 sentences.push_back(sentence_json(id, i));
               }
               reply(res, {{"corpus_id", id}, {"total", total}, {"sentences", sentences}});
             }));

    http.Get(api + R"(/jobs/([\w\-]+))", wrap([this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu);
      auto it = jobs.find(req.matches[1]);
      if (it == jobs.end()) throw HttpError(404, "unknown job");
      reply(res, job_json(*it->second));
    }));

    http.Get(api + "/config", wrap([this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(mu);
      reply(res, to_json(project.config()));
    }));

    http.Put(api + "/config", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json edit = parse_body(req);
      std::lock_guard lock(mu);
      const auto names = project.lexicon_names();
      const std::string before = config_hash(project.config());
      AnnotationConfig next =
          update_config(project.config(), edit, std::span<const std::string>(names));
      project.set_config(std::move(next));
      const std::string after = config_hash(project.config());
      if (after != before) {
        std::erase_if(annotations, [&](const auto& kv) {
          return kv.first.find("\n" + after + "\n") == std::string::npos &&
                 !(jobs.contains(kv.second.job_id) && jobs[kv.second.job_id]->active());
        });
      }
      reply(res, to_json(project.config()));
    }));

    http.Post(api + "/annotate", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      const std::string id = body.at("corpus_id").get<std::string>();
      std::lock_guard lock(mu);
      const LabeledCorpus base = corpus(id);
      const std::string key = annotation_key(id);
      const std::string hash = config_hash(project.config());
      if (auto it = annotations.find(key); it != annotations.end()) {
        reply(res, {{"job_id", it->second.job_id}, {"corpus_id", id}, {"config_hash", hash}}, 202);
        return;
      }
      const Project snapshot = project;
      auto job = submit("annotate", key, [this, snapshot, base, key](const auto& progress) {
        auto matcher = std::make_shared<const CompiledMatcher>(snapshot.compile_matcher());
        progress(0.5);
        auto annotated = std::make_shared<const LabeledCorpus>(
            annotate_corpus(*matcher, base, snapshot.config(), 1));
        std::size_t spans = 0;
        for (const auto& s : annotated->sentences) spans += tags_to_spans(*s.predicted).size();
        std::lock_guard lock(mu);
        auto& entry = annotations[key];
        entry.matcher = matcher;
        entry.corpus = annotated;
        return json{{"fingerprint", matcher->fingerprint()},
                    {"sentences", annotated->sentences.size()},
                    {"spans", spans}};
      });
      annotations[key] = Annotation{job->id, nullptr, nullptr};
      reply(res, {{"job_id", job->id}, {"corpus_id", id}, {"config_hash", hash}}, 202);
    }));

    http.Get(api + "/eval", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = string_param(req, "corpus_id");
      const std::size_t top_k = req.has_param("top_k") ? size_param(req, "top_k") : 10;
      std::lock_guard lock(mu);
      const LabeledCorpus annotated = annotated_with_overrides(id);
      if (!annotated.has_gold()) throw HttpError(409, "corpus '" + id + "' has no gold tags");
      EvalReport report = evaluate(annotated, top_k);
      last_report = report;
      reply(res, to_json(report));
    }));

    http.Get(api + "/inspect", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = string_param(req, "corpus_id");
      const std::size_t sent = size_param(req, "sent");
      const std::size_t tok = size_param(req, "tok");
      std::lock_guard lock(mu);
      const Annotation& a = current_annotation(id);
      const auto& base = corpus(id);
      if (sent >= base.sentences.size()) throw HttpError(404, "sentence out of range");
      const Sentence& s = base.sentences[sent];
      if (tok >= s.tokens.size()) throw HttpError(404, "token out of range");
      TokenInspection inspection = inspect_token(*a.matcher, s.tokens, tok, a.matcher->config(), s.gold);
      for (const auto& o : s.overrides) {
        if (o.start <= tok && tok < o.end) {
          inspection.override_tag = o.label == kOutside ? std::string(kOutside)
                                                        : (tok == o.start ? "B-" : "I-") + o.label;
        }
      }
      reply(res, to_json(inspection));
    }));

    http.Post(api + "/override", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      const std::string id = body.at("corpus_id").get<std::string>();
      const auto sent = body.at("sent").get<std::size_t>();
      LabelOverride change{body.at("start").get<std::size_t>(), body.at("end").get<std::size_t>(),
                           body.at("label").get<std::string>()};
      std::lock_guard lock(mu);
      LabeledCorpus updated;
      try {
        updated = override_label(corpus(id), sent, std::move(change));
      } catch (const HttpError&) {
        throw;
      } catch (const Error& e) {
        throw HttpError(409, e.what());
      }
      project.save_overrides(id, updated);
      corpora[id] = std::move(updated);
      reply(res, sentence_json(id, sent));
    }));

    http.Get(api + "/history", wrap([this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(mu);
      json out = json::array();
      const TuningHistory history = project.load_history();
      for (const auto& step : history.steps()) out.push_back(to_json(step));
      reply(res, out);
    }));

    http.Post(api + "/history", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      const std::string description = body.value("description", "");
      if (description.empty()) throw HttpError(400, "description is empty");
      std::lock_guard lock(mu);
      std::optional<MetricsSummary> metrics;
      if (body.contains("corpus_id")) {
        const LabeledCorpus annotated = annotated_with_overrides(body.at("corpus_id").get<std::string>());
        if (!annotated.has_gold()) throw HttpError(409, "corpus has no gold tags");
        last_report = evaluate(annotated, 10);
      }
      if (last_report) metrics = summarize(*last_report);
      TuningHistory history =
          record_step(project.load_history(), description, project.config(), std::move(metrics));
      project.append_history(history);
      reply(res, to_json(history.steps().back()), 201);
    }));

    http.Get(api + "/export", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = string_param(req, "corpus_id");
      const std::string layer = req.has_param("layer") ? req.get_param_value("layer") : "merged";
      std::lock_guard lock(mu);
      std::string text;
      if (layer == "gold") {
        text = write_conll(corpus(id), TagLayer::kGold);
      } else if (layer == "predicted") {
        text = write_conll(annotated_with_overrides(id), TagLayer::kPredicted);
      } else if (layer == "merged") {
        text = write_conll(annotated_with_overrides(id), TagLayer::kMerged);
      } else {
        throw HttpError(400, "layer must be gold, predicted or merged");
      }
      res.set_header("Content-Disposition",
                     "attachment; filename=\"" + id + "." + layer + ".conll\"");
      res.set_content(text, "text/plain; charset=utf-8");
    }));
  }
};

Server::Server(Project project, ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(project), std::move(options))) {
  auto& o = impl_->options;
  if (!o.allow_remote && !is_loopback_host(o.host)) {
    throw Error("refusing to bind to non-loopback address " + o.host +
                " without explicitly allowing remote access");
  }
  {
    std::lock_guard lock(impl_->mu);
    impl_->refresh_lexicon_hashes();
    for (const auto& id : impl_->project.corpus_ids()) {
      impl_->corpora[id] = impl_->project.load_corpus(id);
    }
  }
  impl_->http.set_payload_max_length(o.max_upload_bytes);
  if (o.ui_dir) impl_->http.set_mount_point("/", o.ui_dir->string());
  impl_->routes();
  for (unsigned i = 0; i < std::max(1u, o.workers); ++i) {
    impl_->workers.emplace_back([this] { impl_->worker_loop(); });
  }
}

Server::~Server() {
  stop();
  {
    std::lock_guard lock(impl_->mu);
    impl_->stopping = true;
  }
  impl_->queue_cv.notify_all();
  for (auto& w : impl_->workers) w.join();
}

int Server::start() {
  auto& o = impl_->options;
  int port = o.port;
  if (port == 0) {
    port = impl_->http.bind_to_any_port(o.host);
    if (port < 0) throw Error("cannot bind to " + o.host);
  } else if (!impl_->http.bind_to_port(o.host, port)) {
    throw Error("cannot bind to " + o.host + ":" + std::to_string(port));
  }
  impl_->listener = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
  return port;
}

void Server::run() {
  auto& o = impl_->options;
  if (!impl_->http.listen(o.host, o.port)) {
    throw Error("cannot listen on " + o.host + ":" + std::to_string(o.port));
  }
}

void Server::stop() {
  impl_->http.stop();
  if (impl_->listener.joinable()) impl_->listener.join();
}

}  // namespace gazette
