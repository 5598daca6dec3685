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

#include <filesystem>
#include <sstream>

#include "clinee/common.h"
#include "clinee/dataset.h"
#include "clinee/eval.h"
#include "clinee/pipeline.h"
#include "doctest.h"
#include "json.hpp"
#include "test_util.h"

namespace clinee {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::vector<std::string> Lines(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

int Run(std::vector<std::string> args) { return RunCli(args); }

// Builds the fixture dataset into a temp dir shared by the cases below.
struct Built {
  testing::TempDir dir;
  std::string ds = dir.file("ds.jsonl"), ont = dir.file("ont.json"), split = dir.file("split.json");
  int code = Run({"build-dataset", "--brat-dir", testing::FixtureDir(), "--out", ds,
                  "--ontology-out", ont, "--descriptions", testing::DataDir() + "/descriptions.json",
                  "--seed", "7", "--split-out", split, "--stats-out", dir.file("stats.json"),
                  "--manifest", dir.file("build.manifest.json")});
};

TEST_CASE("build-dataset writes dataset, ontology, split and manifest") {
  Built b;
  REQUIRE(b.code == kExitOk);
  const testing::Fixture &f = testing::LoadFixture();
  CHECK(DatasetFromJsonl(ReadFile(b.ds)) == f.corpus);
  CHECK(OntologyFromJson(ReadFile(b.ont)) == f.ontology);
  CorpusSplit split = SplitFromJson(ReadFile(b.split));
  CHECK(split.test.size() == 3);
  json stats = json::parse(ReadFile(b.dir.file("stats.json")));
  CHECK(stats.dump().find("triggers") != std::string::npos);

  json m = json::parse(ReadFile(b.dir.file("build.manifest.json")));
  CHECK(m["subcommand"] == "build-dataset");
  CHECK(m["seeds"]["split"] == 7);
  CHECK(m["outputs"][b.ds].get<std::string>().rfind("fnv1a64:", 0) == 0);
  CHECK(m.contains("wall_clock_seconds"));

  // Same inputs, same bytes.
  testing::TempDir again;
  REQUIRE(Run({"build-dataset", "--brat-dir", testing::FixtureDir(), "--out", again.file("ds.jsonl"),
               "--ontology-out", again.file("ont.json"), "--descriptions",
               testing::DataDir() + "/descriptions.json"}) == kExitOk);
  CHECK(ReadFile(again.file("ds.jsonl")) == ReadFile(b.ds));
  CHECK(ReadFile(again.file("ont.json")) == ReadFile(b.ont));
}

TEST_CASE("compile-prompts exports training and inference instances") {
  Built b;
  REQUIRE(b.code == kExitOk);
  const std::string out = b.dir.file("train.jsonl");
  REQUIRE(Run({"compile-prompts", "--dataset", b.ds, "--ontology", b.ont, "--out", out, "--split",
               b.split, "--mode", "train", "--markers", "gold", "--augment", "--neg-ratio",
               "2"}) == kExitOk);
  std::map<std::string, int> tasks;
  for (const std::string &line : Lines(ReadFile(out))) {
    if (line.empty()) continue;
    json j = json::parse(line);
    ++tasks[j["task"].get<std::string>()];
    CHECK(j.contains("input_seq"));
    CHECK(j.contains("target_seq"));
    CHECK(j.contains("meta"));
    CHECK(j.contains("polarity"));
  }
  CHECK(tasks["MI_TRIGGER"] > 0);
  CHECK(tasks["MI_ARGUMENT"] > 0);
  CHECK(tasks["ED"] > 0);
  CHECK(tasks["EAE"] > 0);
  CHECK(tasks["ED"] % 2 == 0);

  const std::string inf = b.dir.file("inf.jsonl");
  REQUIRE(Run({"compile-prompts", "--dataset", b.ds, "--ontology", b.ont, "--out", inf, "--tasks",
               "ed", "--mode", "inference"}) == kExitOk);
  const testing::Fixture &f = testing::LoadFixture();
  size_t lines = 0;
  for (const std::string &line : Lines(ReadFile(inf))) lines += !line.empty();
  CHECK(lines == f.corpus.size() * f.ontology.num_event_types());

  CHECK(Run({"compile-prompts", "--dataset", b.ds, "--ontology", b.ont, "--out", inf, "--mode",
             "sideways"}) == kExitInvalid);
  CHECK(Run({"compile-prompts", "--dataset", b.ds, "--ontology", b.ont, "--out", inf,
             "--window-size", "2", "--window-step", "4"}) == kExitInvalid);
}

TEST_CASE("run-pipeline then evaluate reaches perfect scores with the oracle") {
  Built b;
  REQUIRE(b.code == kExitOk);
  const std::string pred = b.dir.file("pred.jsonl"), report = b.dir.file("report.json");
  REQUIRE(Run({"run-pipeline", "--dataset", b.ds, "--ontology", b.ont, "--variant", "full",
               "--backend", "oracle", "--out", pred, "--manifest", b.dir.file("run.json"),
               "--jobs", "3"}) == kExitOk);
  REQUIRE(Run({"evaluate", "--pred", pred, "--gold", b.ds, "--report", report, "--text",
               b.dir.file("report.txt")}) == kExitOk);
  json r = json::parse(ReadFile(report));
  for (const char *task : {"trigger_id", "trigger_cls", "arg_id", "arg_cls"}) {
    CHECK(r[task]["f1"] == 1.0);
  }
  CHECK(r["error_attribution"]["correct"] == r["error_attribution"]["total"]);
  CHECK(ReadFile(b.dir.file("report.txt")).find("100.00") != std::string::npos);
  json m = json::parse(ReadFile(b.dir.file("run.json")));
  CHECK(m["backend"]["ed"].get<std::string>().find("oracle") != std::string::npos);
  CHECK(m["queries"]["ed"] > 0);

  // Corrupted runs are deterministic and score lower.
  const std::string c1 = b.dir.file("c1.jsonl"), c2 = b.dir.file("c2.jsonl");
  for (const std::string &out : {c1, c2}) {
    REQUIRE(Run({"run-pipeline", "--dataset", b.ds, "--ontology", b.ont, "--backend", "oracle",
                 "--corrupt", "drop=0.2,seed=3", "--out", out}) == kExitOk);
  }
  CHECK(ReadFile(c1) == ReadFile(c2));
  REQUIRE(Run({"evaluate", "--pred", c1, "--gold", b.ds, "--report", report}) == kExitOk);
  CHECK(json::parse(ReadFile(report))["trigger_id"]["recall"] < 1.0);

  // Only the test documents of a split.
  REQUIRE(Run({"run-pipeline", "--dataset", b.ds, "--ontology", b.ont, "--split", b.split,
               "--out", pred}) == kExitOk);
  std::set<std::string> docs;
  for (const SentencePrediction &sp : PredictionsFromJsonl(ReadFile(pred))) docs.insert(sp.doc_id);
  CHECK(docs.size() == SplitFromJson(ReadFile(b.split)).test.size());
  REQUIRE(Run({"evaluate", "--pred", pred, "--gold", b.ds, "--report", report}) == kExitOk);
  CHECK(json::parse(ReadFile(report))["arg_cls"]["f1"] == 1.0);
}

TEST_CASE("cached runs replay without the oracle") {
  Built b;
  REQUIRE(b.code == kExitOk);
  const std::string cache = b.dir.file("cache");
  const std::string p1 = b.dir.file("p1.jsonl"), p2 = b.dir.file("p2.jsonl");
  REQUIRE(Run({"run-pipeline", "--dataset", b.ds, "--ontology", b.ont, "--backend", "oracle",
               "--corrupt", "jitter=0.3,seed=1", "--cache", cache, "--out", p1}) == kExitOk);
  for (const char *stage : {"mi_ed", "mi_eae", "ed", "eae"}) {
    CHECK(fs::exists(fs::path(cache) / (std::string(stage) + ".jsonl")));
  }
  REQUIRE(Run({"run-pipeline", "--dataset", b.ds, "--ontology", b.ont, "--backend", "replay",
               "--cache", cache, "--out", p2}) == kExitOk);
  CHECK(ReadFile(p1) == ReadFile(p2));

  // A replay cache that lacks the prompts is a backend failure.
  fs::create_directories(b.dir.file("empty"));
  CHECK(Run({"run-pipeline", "--dataset", b.ds, "--ontology", b.ont, "--backend", "replay",
             "--cache", b.dir.file("empty"), "--out", p2}) == kExitBackend);
  CHECK(Run({"run-pipeline", "--dataset", b.ds, "--ontology", b.ont, "--backend", "remote",
             "--url", "http://127.0.0.1:1", "--out", p2}) == kExitBackend);
}

TEST_CASE("validation errors exit with 1") {
  Built b;
  REQUIRE(b.code == kExitOk);
  const std::string out = b.dir.file("x.jsonl");
  CHECK(Run({}) == kExitInvalid);
  CHECK(Run({"frobnicate"}) == kExitInvalid);
  CHECK(Run({"--help"}) == kExitOk);
  CHECK(Run({"run-pipeline", "--dataset", b.ds}) == kExitInvalid);
  CHECK(Run({"run-pipeline", "--dataset", b.ds, "--ontology", b.ont, "--variant", "full",
             "--markers", "none", "--out", out}) == kExitInvalid);
  CHECK(Run({"run-pipeline", "--dataset", b.dir.file("missing.jsonl"), "--ontology", b.ont,
             "--out", out}) == kExitInvalid);
  CHECK(Run({"run-pipeline", "--dataset", b.ds, "--ontology", b.ont, "--corrupt", "drop=2",
             "--out", out}) == kExitInvalid);
  CHECK(Run({"build-dataset", "--brat-dir", b.dir.file("nowhere"), "--out", out}) == kExitInvalid);

  // Predictions for sentences outside the gold file.
  SentencePrediction stray{"stray", 0, "text", {}};
  WriteFileAtomic(out, PredictionsToJsonl({stray}));
  CHECK(Run({"evaluate", "--pred", out, "--gold", b.ds, "--report", b.dir.file("r.json")}) ==
        kExitInvalid);
}

TEST_CASE("downsample-experiment aggregates runs") {
  Built b;
  REQUIRE(b.code == kExitOk);
  const std::string work = b.dir.file("work"), agg = b.dir.file("agg.json");
  REQUIRE(Run({"downsample-experiment", "--dataset", b.ds, "--ontology", b.ont, "--split", b.split,
               "--workdir", work, "--out", agg, "--text", b.dir.file("agg.txt"), "--corrupt",
               "drop=0.3", "--proportions", "0.5", "1.0", "--seeds", "0", "1", "2"}) == kExitOk);
  json rows = json::parse(ReadFile(agg))["rows"];
  REQUIRE(rows.size() == 2);
  CorpusSplit split = SplitFromJson(ReadFile(b.split));
  CHECK(rows[0]["proportion"] == 0.5);
  CHECK(rows[0]["train_docs"] == split.train.size() / 2);
  CHECK(rows[1]["train_docs"] == split.train.size());
  CHECK(rows[0]["runs"] == 3);
  CHECK(rows[0]["trigger_id"].contains("f1_sd"));
  for (const char *run : {"p0.50_s0", "p0.50_s2", "p1.00_s1"}) {
    fs::path dir = fs::path(work) / run;
    CHECK(fs::exists(dir / "train_ids.json"));
    CHECK(fs::exists(dir / "predictions.jsonl"));
    CHECK(fs::exists(dir / "report.json"));
  }
  json ids = json::parse(ReadFile((fs::path(work) / "p0.50_s0" / "train_ids.json").string()));
  CHECK(ids.size() == split.train.size() / 2);
  CHECK(ReadFile(b.dir.file("agg.txt")).find("proportion") != std::string::npos);
  CHECK(Run({"downsample-experiment", "--dataset", b.ds, "--ontology", b.ont, "--workdir", work,
             "--out", agg}) == kExitInvalid);
}

}  // namespace
}  // namespace clinee
