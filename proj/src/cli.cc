// Copyright 2026 The clinee Authors.
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

#include "clinee/cli.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clinee/backend.h"
#include "clinee/brat.h"
#include "clinee/common.h"
#include "clinee/dataset.h"
#include "clinee/eval.h"
#include "clinee/pipeline.h"
#include "clinee/prompt.h"
#include "json.hpp"

namespace clinee {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string Checksum(std::string_view content) {
  return "fnv1a64:" + HexDigest(Fnv1a64(content));
}

// Collects what a subcommand read and wrote, then writes the manifest.
class Manifest {
 public:
  Manifest(std::string subcommand, const std::vector<std::string> &argv)
      : start_(std::chrono::steady_clock::now()) {
    doc_["subcommand"] = std::move(subcommand);
    doc_["argv"] = argv;
    doc_["inputs"] = json::object();
    doc_["outputs"] = json::object();
  }

  std::string Read(const std::string &path) {
    std::string content = ReadFile(path);
    doc_["inputs"][path] = Checksum(content);
    return content;
  }

  void Write(const std::string &path, std::string_view content) {
    if (path.empty()) return;
    fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    WriteFileAtomic(path, content);
    doc_["outputs"][path] = Checksum(content);
  }

  json &operator[](const char *key) { return doc_[key]; }

  void Finish(const std::string &path) {
    if (path.empty()) return;
    doc_["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    WriteFileAtomic(path, doc_.dump(2) + "\n");
  }

 private:
  std::chrono::steady_clock::time_point start_;
  json doc_;
};

std::vector<std::string> SplitList(const std::string &s) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) {
    std::string_view t = Trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

TriggerSource TriggerSourceFromName(const std::string &name) {
  if (name == "auto") return TriggerSource::kAuto;
  if (name == "label") return TriggerSource::kLabel;
  if (name == "event_frame" || name == "frames") return TriggerSource::kEventFrame;
  throw Error(ErrorKind::kInvalidArgument, "unknown trigger source '" + name + "'");
}

std::vector<std::string> SplitSubset(const CorpusSplit &split, const std::string &subset) {
  if (subset == "train") return split.train;
  if (subset == "dev") return split.dev;
  if (subset == "test") return split.test;
  throw Error(ErrorKind::kInvalidArgument, "unknown subset '" + subset + "'");
}

std::string Substitute(std::string s, const std::string &key, const std::string &value) {
  for (size_t pos; (pos = s.find(key)) != std::string::npos;) s.replace(pos, key.size(), value);
  return s;
}

// ---------------------------------------------------------------------------
// build-dataset

struct BuildArgs {
  std::string brat_dir, out, ontology_out, descriptions, split_out, stats_out, manifest;
  std::string triggers = "auto";
  std::string event_types;
  uint64_t seed = 0;
  bool frozen = false;
};

int BuildDataset(const BuildArgs &a, const std::vector<std::string> &argv) {
  Manifest manifest("build-dataset", argv);
  std::vector<RawDocument> docs = LoadBratDirectory(a.brat_dir);
  std::vector<std::string> types =
      a.event_types.empty() ? MaccrobatEventTypes() : SplitList(a.event_types);
  std::set<std::string> type_set(types.begin(), types.end());
  DeriveOptions options{TriggerSourceFromName(a.triggers), a.frozen};

  Dataset corpus;
  int dropped = 0, discrepancies = 0;
  for (RawDocument &doc : docs) {
    for (const Discrepancy &d : ValidateOffsets(doc)) {
      ++discrepancies;
      std::cerr << "warning: " << doc.doc_id << " " << d.entity_id << ": annotation says '"
                << d.expected << "', text has '" << d.found << "'\n";
    }
    Segmentation seg = SegmentSentences(DeriveEvents(std::move(doc), type_set, options));
    dropped += seg.dropped_cross_sentence;
    for (SentenceInstance &s : seg.sentences) corpus.push_back(std::move(s));
  }

  std::map<std::string, std::string> descriptions;
  if (!a.descriptions.empty()) descriptions = DescriptionsFromJson(manifest.Read(a.descriptions));
  OntologyBuild build = BuildOntology(corpus, descriptions);
  for (const std::string &name : build.missing_descriptions) {
    std::cerr << "warning: no description for " << name << "\n";
  }
  StatsTable stats = ComputeStats(corpus);

  manifest.Write(a.out, DatasetToJsonl(corpus));
  manifest.Write(a.ontology_out, OntologyToJson(build.ontology));
  if (!a.split_out.empty()) {
    manifest.Write(a.split_out, SplitToJson(SplitCorpus(DocIds(corpus), a.seed)));
  }
  manifest.Write(a.stats_out, StatsToJson(stats));
  std::cerr << FormatStats(stats);
  if (dropped > 0) std::cerr << dropped << " cross-sentence arguments dropped\n";
  if (discrepancies > 0) std::cerr << discrepancies << " offset discrepancies\n";

  manifest["config"] = {{"brat_dir", a.brat_dir},
                        {"triggers", a.triggers},
                        {"frozen", a.frozen},
                        {"event_types", types}};
  manifest["seeds"] = {{"split", a.seed}};
  manifest.Finish(a.manifest);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// compile-prompts

struct CompileArgs {
  std::string dataset, ontology, out, split, subset = "train", manifest;
  std::string mode = "train";
  std::string tasks = "mi,ed,eae";
  std::string markers = "none";
  std::string mention_kind = "trigger";
  std::string eae_mention_kind = "argument";
  std::vector<std::string> disabled_segments;
  int neg_ratio = 10, window_size = 10, window_step = 4;
  bool augment = false;
  uint64_t seed = 0;
};

MarkerMode CompileMarkers(const std::string &name) {
  if (name == "none") return MarkerMode::kNone;
  if (name == "gold") return MarkerMode::kGold;
  throw Error(ErrorKind::kInvalidArgument, "compile-prompts markers must be none or gold");
}

int CompilePrompts(const CompileArgs &a, const std::vector<std::string> &argv) {
  Manifest manifest("compile-prompts", argv);
  Dataset corpus = DatasetFromJsonl(manifest.Read(a.dataset));
  Ontology ontology = OntologyFromJson(manifest.Read(a.ontology));
  if (!a.split.empty()) {
    corpus = FilterDocs(corpus, SplitSubset(SplitFromJson(manifest.Read(a.split)), a.subset));
  }
  auto make = [&](const std::string &kind) {
    CompileConfig c;
    c.window_size = a.window_size;
    c.window_step = a.window_step;
    c.neg_ratio = a.neg_ratio;
    c.mention_kind = MentionKindFromName(kind);
    for (const std::string &seg : a.disabled_segments) c.segments.Disable(seg);
    c.marker_mode = CompileMarkers(a.markers);
    c.augmentation = a.augment;
    c.seed = a.seed;
    if (a.mode == "train") c.mode = CompileMode::kTrain;
    else if (a.mode == "inference") c.mode = CompileMode::kInference;
    else throw Error(ErrorKind::kInvalidArgument, "mode must be train or inference");
    c.Validate();
    return c;
  };
  TrainingExportConfig cfg{make(a.mention_kind), make(a.eae_mention_kind), false, false, false};
  for (const std::string &t : SplitList(a.tasks)) {
    if (t == "mi") cfg.include_mi = true;
    else if (t == "ed") cfg.include_ed = true;
    else if (t == "eae") cfg.include_eae = true;
    else throw Error(ErrorKind::kInvalidArgument, "unknown task '" + t + "'");
  }

  std::string out;
  size_t count = 0;
  for (const SentenceInstance &s : corpus) {
    for (const PromptInstance &p : CompileTrainingSet(s, ontology, cfg)) {
      out += PromptToJson(p, s.text) + "\n";
      ++count;
    }
  }
  manifest.Write(a.out, out);
  std::cerr << count << " instances from " << corpus.size() << " sentences\n";
  manifest["config"] = {{"mode", a.mode},        {"tasks", a.tasks},
                        {"markers", a.markers},  {"augment", a.augment},
                        {"neg_ratio", a.neg_ratio}, {"window_size", a.window_size},
                        {"window_step", a.window_step}, {"disabled_segments", a.disabled_segments}};
  manifest["seeds"] = {{"sampling", a.seed}};
  manifest.Finish(a.manifest);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// run-pipeline

struct RunArgs {
  std::string dataset, ontology, out, manifest, split, subset = "test";
  std::string variant = "full", markers = "standalone_mi";
  std::string ed_marker_kind = "trigger", eae_marker_kind = "argument";
  std::string backend = "oracle", corrupt, cache, url;
  std::vector<std::string> disabled_segments;
  int jobs = 1, batch_size = 16, num_beams = 2, max_new_tokens = 30;
  int window_size = 10, window_step = 4;
};

// One backend per pipeline stage, wrapped in a write-through cache when a
// cache directory is given. Stages get separate cache files because MI
// inputs for trigger and argument candidates are identical passages.
struct StageBackends {
  PipelineBackends backends;
  json identity;
};

StageBackends MakeBackends(const RunArgs &a, const Dataset &gold, const Ontology &ontology,
                           const PipelineConfig &cfg) {
  const std::vector<std::pair<std::string, Task>> stages = {
      {"mi_ed", MiTaskFor(cfg.ed_marker_kind)},
      {"mi_eae", MiTaskFor(cfg.eae_marker_kind)},
      {"ed", Task::kEd},
      {"eae", Task::kEae}};
  CorruptionConfig corruption =
      a.corrupt.empty() ? CorruptionConfig{} : CorruptionConfig::Parse(a.corrupt);
  std::shared_ptr<GenerationBackend> remote;
  if (a.backend == "remote") {
    std::string url = a.url;
    if (url.empty()) {
      const char *env = std::getenv(kBackendUrlEnv);
      if (env) url = env;
    }
    if (url.empty()) {
      throw Error(ErrorKind::kInvalidArgument,
                  std::string("remote backend needs --url or ") + kBackendUrlEnv);
    }
    RemoteOptions options;
    options.batch_size = static_cast<size_t>(std::max(1, a.batch_size));
    options.max_inflight = static_cast<size_t>(std::max(1, a.jobs));
    remote = std::make_shared<RemoteBackend>(url, options);
  } else if (a.backend != "oracle" && a.backend != "replay") {
    throw Error(ErrorKind::kInvalidArgument, "unknown backend '" + a.backend + "'");
  }
  if (a.backend == "replay" && a.cache.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "replay backend needs --cache DIR");
  }

  StageBackends out;
  std::vector<std::shared_ptr<GenerationBackend>> made;
  for (const auto &[name, task] : stages) {
    std::string cache_file = a.cache.empty() ? "" : (fs::path(a.cache) / (name + ".jsonl")).string();
    std::shared_ptr<GenerationBackend> b;
    if (a.backend == "oracle") {
      b = std::make_shared<OracleBackend>(task, gold, ontology, corruption);
    } else if (a.backend == "replay") {
      b = fs::exists(cache_file)
              ? std::make_shared<ReplayBackend>(cache_file)
              : std::make_shared<ReplayBackend>(std::unordered_map<std::string, std::string>{});
    } else {
      b = remote;
    }
    if (a.backend != "replay" && !cache_file.empty()) {
      fs::create_directories(a.cache);
      b = std::make_shared<CachingBackend>(b, cache_file);
    }
    out.identity[name] = b->Identity();
    made.push_back(b);
  }
  out.backends = {made[0], made[1], made[2], made[3]};
  return out;
}

PipelineConfig MakePipelineConfig(const RunArgs &a) {
  PipelineConfig cfg;
  cfg.variant = VariantFromName(a.variant);
  cfg.markers = MarkerSourceFromName(a.markers);
  cfg.ed_marker_kind = MentionKindFromName(a.ed_marker_kind);
  cfg.eae_marker_kind = MentionKindFromName(a.eae_marker_kind);
  cfg.mi.window_size = a.window_size;
  cfg.mi.window_step = a.window_step;
  for (const std::string &seg : a.disabled_segments) {
    cfg.ed.segments.Disable(seg);
    cfg.eae.segments.Disable(seg);
  }
  cfg.num_beams = a.num_beams;
  cfg.max_new_tokens = a.max_new_tokens;
  cfg.jobs = a.jobs;
  cfg.Validate();
  return cfg;
}

json PipelineConfigJson(const RunArgs &a) {
  return {{"variant", a.variant},
          {"markers", a.markers},
          {"ed_marker_kind", a.ed_marker_kind},
          {"eae_marker_kind", a.eae_marker_kind},
          {"backend", a.backend},
          {"corrupt", a.corrupt},
          {"window_size", a.window_size},
          {"window_step", a.window_step},
          {"num_beams", a.num_beams},
          {"max_new_tokens", a.max_new_tokens},
          {"disabled_segments", a.disabled_segments},
          {"split", a.split},
          {"subset", a.subset},
          {"jobs", a.jobs}};
}

struct LoadedCorpus {
  Dataset corpus;
  Ontology ontology;
};

LoadedCorpus LoadForRun(const RunArgs &a, Manifest &manifest) {
  LoadedCorpus l{DatasetFromJsonl(manifest.Read(a.dataset)),
                 OntologyFromJson(manifest.Read(a.ontology))};
  if (!a.split.empty()) {
    l.corpus = FilterDocs(l.corpus, SplitSubset(SplitFromJson(manifest.Read(a.split)), a.subset));
  }
  for (const std::string &problem : CheckAgainstOntology(l.corpus, l.ontology)) {
    throw Error(ErrorKind::kUnknownEventType, problem);
  }
  return l;
}

int RunPipelineCmd(const RunArgs &a, const std::vector<std::string> &argv) {
  Manifest manifest("run-pipeline", argv);
  PipelineConfig cfg = MakePipelineConfig(a);
  LoadedCorpus l = LoadForRun(a, manifest);
  StageBackends sb = MakeBackends(a, l.corpus, l.ontology, cfg);
  PipelineStats stats;
  PredictionSet pred = RunPipeline(l.corpus, l.ontology, sb.backends, cfg, &stats);
  manifest.Write(a.out, PredictionsToJsonl(pred));
  std::cerr << l.corpus.size() << " sentences, " << stats.mi_queries << " MI, "
            << stats.ed_queries << " ED, " << stats.eae_queries << " EAE queries\n";

  manifest["config"] = PipelineConfigJson(a);
  manifest["seeds"] = {
      {"corruption", a.corrupt.empty() ? 0 : CorruptionConfig::Parse(a.corrupt).seed}};
  manifest["backend"] = sb.identity;
  manifest["cache"] = a.cache;
  manifest["queries"] = {{"mi", stats.mi_queries},
                         {"ed", stats.ed_queries},
                         {"eae", stats.eae_queries}};
  manifest.Finish(a.manifest);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvalArgs {
  std::string pred, gold, report, text, manifest;
};

int Evaluate(const EvalArgs &a, const std::vector<std::string> &argv) {
  Manifest manifest("evaluate", argv);
  PredictionSet pred = PredictionsFromJsonl(manifest.Read(a.pred));
  Dataset gold = DatasetFromJsonl(manifest.Read(a.gold));
  // Score only the sentences the run covered, so subset runs are scored
  // against the same subset.
  std::set<std::string> covered;
  for (const SentencePrediction &sp : pred) covered.insert(sp.doc_id);
  gold = FilterDocs(gold, std::vector<std::string>(covered.begin(), covered.end()));

  MetricReport report = Score(pred, gold);
  ErrorAttribution attribution = AttributeErrors(pred, gold);
  json j = json::parse(ReportToJson(report));
  j["error_attribution"] = json::parse(AttributionToJson(attribution));
  manifest.Write(a.report, j.dump(2) + "\n");
  std::string table = FormatReport(report);
  manifest.Write(a.text, table);
  std::cerr << table;
  manifest.Finish(a.manifest);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// downsample-experiment

struct DownsampleArgs {
  RunArgs run;
  std::string workdir, out, text;
  std::vector<double> proportions = {0.10, 0.25, 0.50, 0.75};
  std::vector<uint64_t> seeds = {0, 1, 2};
};

std::string ProportionTag(double p) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", p);
  return buf;
}

int DownsampleExperiment(const DownsampleArgs &a, const std::vector<std::string> &argv) {
  Manifest manifest("downsample-experiment", argv);
  if (a.run.split.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "downsample-experiment needs --split");
  }
  const std::string split_text = manifest.Read(a.run.split);
  const CorpusSplit split = SplitFromJson(split_text);
  RunArgs base = a.run;
  LoadedCorpus l = LoadForRun(base, manifest);
  PipelineConfig cfg = MakePipelineConfig(base);
  CorruptionConfig corruption =
      base.corrupt.empty() ? CorruptionConfig{} : CorruptionConfig::Parse(base.corrupt);

  json rows = json::array();
  std::string table = "proportion  train_docs  runs  trigger_id_f1   trigger_cls_f1  "
                      "arg_id_f1       arg_cls_f1\n";
  for (double p : a.proportions) {
    std::vector<MetricReport> reports;
    size_t train_docs = 0;
    for (uint64_t seed : a.seeds) {
      const std::string tag = ProportionTag(p), seed_tag = std::to_string(seed);
      std::vector<std::string> train = Downsample(split.train, p, seed);
      train_docs = train.size();
      fs::path run_dir = fs::path(a.workdir) / ("p" + tag + "_s" + seed_tag);
      manifest.Write((run_dir / "train_ids.json").string(), json(train).dump() + "\n");

      // The run's backend: a templated cache/URL for externally trained
      // models, or the oracle with the seed folded into its corruption.
      RunArgs r = base;
      r.cache = Substitute(Substitute(base.cache, "{p}", tag), "{seed}", seed_tag);
      r.url = Substitute(Substitute(base.url, "{p}", tag), "{seed}", seed_tag);
      CorruptionConfig c = corruption;
      c.seed = HashCombine(corruption.seed, seed);
      r.corrupt = c.ToString();
      StageBackends sb = MakeBackends(r, l.corpus, l.ontology, cfg);
      PredictionSet pred = RunPipeline(l.corpus, l.ontology, sb.backends, cfg);
      MetricReport report = Score(pred, l.corpus);
      manifest.Write((run_dir / "predictions.jsonl").string(), PredictionsToJsonl(pred));
      manifest.Write((run_dir / "report.json").string(), ReportToJson(report));
      reports.push_back(report);
    }
    MetricReport agg = AggregateRuns(reports);
    json row = json::parse(ReportToJson(agg));
    row["proportion"] = p;
    row["train_docs"] = train_docs;
    rows.push_back(row);
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%10.2f  %10zu  %4d  %6.2f +- %5.2f  %6.2f +- %5.2f  %6.2f +- %5.2f  "
                  "%6.2f +- %5.2f\n",
                  p, train_docs, agg.runs, 100 * agg.trigger_id.f1, 100 * agg.trigger_id.f1_sd,
                  100 * agg.trigger_cls.f1, 100 * agg.trigger_cls.f1_sd, 100 * agg.arg_id.f1,
                  100 * agg.arg_id.f1_sd, 100 * agg.arg_cls.f1, 100 * agg.arg_cls.f1_sd);
    table += buf;
  }
  manifest.Write(a.out, json{{"rows", rows}}.dump(2) + "\n");
  manifest.Write(a.text, table);
  std::cerr << table;
  manifest["config"] = PipelineConfigJson(base);
  manifest["config"]["proportions"] = a.proportions;
  manifest["seeds"] = {{"runs", a.seeds}, {"corruption", corruption.seed}};
  manifest.Finish(a.run.manifest);
  return kExitOk;
}

void AddRunOptions(CLI::App *cmd, RunArgs &r, bool needs_out) {
  cmd->add_option("--dataset", r.dataset, "Dataset JSONL")->required();
  cmd->add_option("--ontology", r.ontology, "Ontology JSON")->required();
  auto *out = cmd->add_option("--out", r.out, "Output file");
  if (needs_out) out->required();
  cmd->add_option("--variant", r.variant, "vanilla or full")->capture_default_str();
  cmd->add_option("--markers", r.markers, "none, standalone_mi or gold")->capture_default_str();
  cmd->add_option("--ed-marker-kind", r.ed_marker_kind, "trigger, argument or entity")
      ->capture_default_str();
  cmd->add_option("--eae-marker-kind", r.eae_marker_kind, "trigger, argument or entity")
      ->capture_default_str();
  cmd->add_option("--backend", r.backend, "oracle, replay or remote")->capture_default_str();
  cmd->add_option("--corrupt", r.corrupt, "Oracle corruption, e.g. drop=0.2,seed=3");
  cmd->add_option("--cache", r.cache, "Directory of per-stage replay caches");
  cmd->add_option("--url", r.url, std::string("Remote backend URL (default $") +
                                      kBackendUrlEnv + ")");
  cmd->add_option("--manifest", r.manifest, "Run manifest JSON");
  cmd->add_option("--jobs", r.jobs, "Concurrent backend calls")->capture_default_str();
  cmd->add_option("--batch-size", r.batch_size, "Remote batch size")->capture_default_str();
  cmd->add_option("--num-beams", r.num_beams)->capture_default_str();
  cmd->add_option("--max-new-tokens", r.max_new_tokens)->capture_default_str();
  cmd->add_option("--window-size", r.window_size)->capture_default_str();
  cmd->add_option("--window-step", r.window_step)->capture_default_str();
  cmd->add_option("--disable-segment", r.disabled_segments, "Prompt segment to omit");
  cmd->add_option("--split", r.split, "Split JSON");
  cmd->add_option("--subset", r.subset, "train, dev or test")->capture_default_str();
}

}  // namespace

int RunCli(const std::vector<std::string> &args) {
  CLI::App app{"Clinical event extraction toolkit", "clinee"};
  app.require_subcommand(1);

  BuildArgs build;
  auto *b = app.add_subcommand("build-dataset", "Build the sentence dataset from BRAT files");
  b->add_option("--brat-dir", build.brat_dir, "Directory of .txt/.ann pairs")->required();
  b->add_option("--out", build.out, "Dataset JSONL")->required();
  b->add_option("--ontology-out", build.ontology_out, "Ontology JSON");
  b->add_option("--descriptions", build.descriptions, "Type and role descriptions JSON");
  b->add_option("--seed", build.seed, "Split seed")->capture_default_str();
  b->add_option("--split-out", build.split_out, "Split JSON");
  b->add_option("--stats-out", build.stats_out, "Statistics JSON");
  b->add_option("--triggers", build.triggers, "auto, label or event_frame")
      ->capture_default_str();
  b->add_option("--event-types", build.event_types, "Comma-separated event types");
  b->add_flag("--frozen", build.frozen, "Reject event frame types outside the type set");
  b->add_option("--manifest", build.manifest, "Run manifest JSON");

  CompileArgs comp;
  auto *c = app.add_subcommand("compile-prompts", "Export prompt instances as JSONL");
  c->add_option("--dataset", comp.dataset)->required();
  c->add_option("--ontology", comp.ontology)->required();
  c->add_option("--out", comp.out)->required();
  c->add_option("--split", comp.split, "Split JSON");
  c->add_option("--subset", comp.subset)->capture_default_str();
  c->add_option("--mode", comp.mode, "train or inference")->capture_default_str();
  c->add_option("--tasks", comp.tasks, "Comma-separated subset of mi,ed,eae")
      ->capture_default_str();
  c->add_option("--markers", comp.markers, "none or gold")->capture_default_str();
  c->add_option("--mention-kind", comp.mention_kind, "Marker and MI kind for ED")
      ->capture_default_str();
  c->add_option("--eae-mention-kind", comp.eae_mention_kind, "Marker and MI kind for EAE")
      ->capture_default_str();
  c->add_option("--disable-segment", comp.disabled_segments, "Prompt segment to omit");
  c->add_option("--neg-ratio", comp.neg_ratio)->capture_default_str();
  c->add_option("--window-size", comp.window_size)->capture_default_str();
  c->add_option("--window-step", comp.window_step)->capture_default_str();
  c->add_flag("--augment", comp.augment, "Add unmarked twins of marked instances");
  c->add_option("--seed", comp.seed)->capture_default_str();
  c->add_option("--manifest", comp.manifest, "Run manifest JSON");

  RunArgs run;
  auto *r = app.add_subcommand("run-pipeline", "Run MI, ED and EAE over a dataset");
  AddRunOptions(r, run, true);

  EvalArgs ev;
  auto *e = app.add_subcommand("evaluate", "Score predictions against gold");
  e->add_option("--pred", ev.pred, "Predictions JSONL")->required();
  e->add_option("--gold", ev.gold, "Gold dataset JSONL")->required();
  e->add_option("--report", ev.report, "Report JSON");
  e->add_option("--text", ev.text, "Plain-text table");
  e->add_option("--manifest", ev.manifest, "Run manifest JSON");

  DownsampleArgs ds;
  ds.run.subset = "test";
  auto *d = app.add_subcommand("downsample-experiment",
                               "Runs over downsampled training proportions and seeds");
  AddRunOptions(d, ds.run, true);
  d->add_option("--workdir", ds.workdir, "Per-run output directory")->required();
  d->add_option("--text", ds.text, "Plain-text aggregate table");
  d->add_option("--proportions", ds.proportions)->capture_default_str();
  d->add_option("--seeds", ds.seeds)->capture_default_str();
  ds.run.out.clear();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &err) {
    std::cerr << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &err) {
    std::cerr << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &err) {
    std::cerr << "error: " << err.what() << "\n";
    for (CLI::App *sub : app.get_subcommands()) std::cerr << sub->help();
    if (app.get_subcommands().empty()) std::cerr << app.help();
    return kExitInvalid;
  }

  try {
    if (b->parsed()) return BuildDataset(build, args);
    if (c->parsed()) return CompilePrompts(comp, args);
    if (r->parsed()) return RunPipelineCmd(run, args);
    if (e->parsed()) return Evaluate(ev, args);
    if (d->parsed()) {
      ds.out = ds.run.out;
      return DownsampleExperiment(ds, args);
    }
  } catch (const Error &err) {
    std::cerr << "error: " << err.what() << "\n";
    return err.IsBackendFailure() ? kExitBackend : kExitInvalid;
  } catch (const std::exception &err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace clinee
