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

#include "clinee/dataset.h"

#include <algorithm>
#include <set>

#include "clinee/brat.h"
#include "clinee/common.h"
#include "doctest.h"
#include "test_util.h"

namespace clinee {
namespace {

const std::set<std::string> kTypes(MaccrobatEventTypes().begin(), MaccrobatEventTypes().end());

Dataset Build(const std::string &text, const std::string &ann,
              TriggerSource source = TriggerSource::kAuto) {
  RawDocument doc = ParseDocument("d", text, ann);
  return SegmentSentences(DeriveEvents(std::move(doc), kTypes, {source, false})).sentences;
}

TEST_CASE("MODIFY from a non-event entity yields an argument") {
  const std::string text = "A 0.8x1.5cm nodule was seen.";
  Dataset ds = Build(text,
                     "T1\tSign_symptom 12 18\tnodule\n"
                     "T2\tArea 2 11\t0.8x1.5cm\n"
                     "R1\tMODIFY Arg1:T2 Arg2:T1\n");
  REQUIRE(ds.size() == 1);
  REQUIRE(ds[0].events.size() == 1);
  const EventRecord &ev = ds[0].events[0];
  CHECK(ev.trigger.surface == "nodule");
  CHECK(ev.event_type == "Sign_symptom");
  REQUIRE(ev.arguments.size() == 1);
  CHECK(ev.arguments[0].mention.surface == "0.8x1.5cm");
  CHECK(ev.arguments[0].role == "Area");
  CHECK(ds[0].entities.size() == 2);
}

TEST_CASE("MODIFY is accepted in either direction") {
  Dataset ds = Build("A 0.8x1.5cm nodule was seen.",
                     "T1\tSign_symptom 12 18\tnodule\nT2\tArea 2 11\t0.8x1.5cm\n"
                     "R1\tMODIFY Arg1:T1 Arg2:T2\n");
  REQUIRE(ds[0].events.size() == 1);
  CHECK(ds[0].events[0].arguments.size() == 1);
}

TEST_CASE("MODIFY between two events creates no argument") {
  Dataset ds = Build("Fever and cough.",
                     "T1\tSign_symptom 0 5\tFever\nT2\tSign_symptom 10 15\tcough\n"
                     "R1\tMODIFY Arg1:T1 Arg2:T2\n");
  REQUIRE(ds[0].events.size() == 2);
  CHECK(ds[0].events[0].arguments.empty());
  CHECK(ds[0].events[1].arguments.empty());
}

TEST_CASE("no MODIFY relations leaves argument lists empty") {
  Dataset ds = Build("Fever and mild cough.",
                     "T1\tSign_symptom 0 5\tFever\nT2\tSeverity 10 14\tmild\n"
                     "R1\tBEFORE Arg1:T1 Arg2:T2\n");
  REQUIRE(ds[0].events.size() == 1);
  CHECK(ds[0].events[0].arguments.empty());
}

TEST_CASE("E frames decide triggers when present") {
  const std::string text = "Creatinine was 2.3 mg/dL.";
  const std::string ann =
      "T1\tDiagnostic_procedure 0 10\tCreatinine\nT2\tLab_value 15 24\t2.3 mg/dL\n"
      "E1\tDiagnostic_procedure:T1\nR1\tMODIFY Arg1:T2 Arg2:E1\n";
  Dataset frames = Build(text, ann);
  REQUIRE(frames[0].events.size() == 1);
  REQUIRE(frames[0].events[0].arguments.size() == 1);
  CHECK(frames[0].events[0].arguments[0].role == "Lab_value");

  // Under the label rule the value is an event of its own.
  Dataset labels = Build(text, ann, TriggerSource::kLabel);
  CHECK(labels[0].events.size() == 2);

  RawDocument doc = ParseDocument("d", text, "T1\tFoo 0 10\tCreatinine\nE1\tFoo:T1\n");
  CHECK_THROWS_AS(DeriveEvents(doc, kTypes, {TriggerSource::kAuto, true}), Error);
  CHECK(DeriveEvents(doc, kTypes, {TriggerSource::kAuto, false}).events.size() == 1);
}

TEST_CASE("one entity with two event frames is two events") {
  Dataset ds = Build("She had fever.",
                     "T1\tSign_symptom 8 13\tfever\nE1\tSign_symptom:T1\n"
                     "E2\tDisease_disorder:T1\n");
  REQUIRE(ds[0].events.size() == 2);
  CHECK(ds[0].events[0].trigger == ds[0].events[1].trigger);
  CHECK(ds[0].events[0].event_type != ds[0].events[1].event_type);
}

TEST_CASE("segmentation examples") {
  CHECK(Build("A 1.5cm nodule was seen. CT was clear.", "").size() == 2);
  CHECK(Build("", "").empty());
  CHECK(Build("   \n ", "").empty());
  // Guarded abbreviation.
  CHECK(Build("She saw Dr. Smith today. It went well.", "").size() == 2);
  // An entity spanning a candidate cut suppresses it.
  Dataset ds = Build("Seen by Dr. Smith. Fine.",
                     "T1\tPersonal_background 8 17\tDr. Smith\n");
  CHECK(ds.size() == 2);
  Dataset crossing = Build("It was a x. Yz thing. Done.",
                           "T1\tDetailed_description 9 14\tx. Yz\n");
  REQUIRE(crossing.size() == 2);
  CHECK(crossing[0].text == "It was a x. Yz thing.");
  // Newlines always separate sentences.
  CHECK(Build("first line\nsecond line", "").size() == 2);
}

TEST_CASE("sentence offsets rebase mentions") {
  const std::string text = "Fever began. Cough \xC2\xB0 followed.";
  Dataset ds = Build(text, "T1\tSign_symptom 13 18\tCough\nT2\tSign_symptom 21 29\tfollowed\n");
  REQUIRE(ds.size() == 2);
  CHECK(ds[1].offset == 13);
  CHECK(ds[1].entities[0].span == SpanSet(0, 5));
  CHECK(ds[1].entities[1].surface == "followed");
  CharIndex chars(text);
  for (const SentenceInstance &s : ds) {
    for (const Mention &m : s.entities) {
      SpanSet doc_span = m.span.Shifted(static_cast<long long>(chars.ToByte(s.offset)));
      CHECK(doc_span.JoinedText(text) == m.surface);
      CHECK(m.span.JoinedText(s.text) == m.surface);
    }
  }
}

TEST_CASE("cross-sentence arguments are dropped and counted") {
  RawDocument doc = ParseDocument("d", "Fever began. It was mild.",
                                  "T1\tSign_symptom 0 5\tFever\nT2\tSeverity 20 24\tmild\n"
                                  "R1\tMODIFY Arg1:T2 Arg2:T1\n");
  Segmentation seg = SegmentSentences(DeriveEvents(doc, kTypes));
  REQUIRE(seg.sentences.size() == 2);
  CHECK(seg.dropped_cross_sentence == 1);
  CHECK(seg.sentences[0].events[0].arguments.empty());
}

TEST_CASE("ontology orders roles by frequency then name") {
  Dataset ds = Build("Mild left chest pain. Severe right arm pain. Dull back pain.",
                     "T1\tSign_symptom 16 20\tpain\nT2\tSeverity 0 4\tMild\n"
                     "T3\tBiological_structure 5 15\tleft chest\n"
                     "R1\tMODIFY Arg1:T2 Arg2:T1\nR2\tMODIFY Arg1:T3 Arg2:T1\n"
                     "T4\tSign_symptom 39 43\tpain\nT5\tSeverity 22 28\tSevere\n"
                     "R3\tMODIFY Arg1:T5 Arg2:T4\n"
                     "T6\tSign_symptom 55 59\tpain\nT7\tDetailed_description 45 49\tDull\n"
                     "R4\tMODIFY Arg1:T7 Arg2:T6\n");
  OntologyBuild b = BuildOntology(ds, {{"Sign_symptom", "Any symptom or clinical finding"}});
  REQUIRE(b.ontology.event_types.size() == 1);
  CHECK(b.ontology.event_types[0].description == "Any symptom or clinical finding");
  const auto &roles = b.ontology.Roles("Sign_symptom");
  REQUIRE(roles.size() == 3);
  CHECK(roles[0].name == "Severity");
  CHECK(roles[1].name == "Biological_structure");
  CHECK(roles[2].name == "Detailed_description");
  CHECK(b.missing_descriptions.size() == 3);
  CHECK(CheckAgainstOntology(ds, b.ontology).empty());
  CHECK_THROWS_AS(b.ontology.Type("Medication"), Error);
  CHECK_THROWS_AS(b.ontology.Role("Sign_symptom", "Dosage"), Error);
}

TEST_CASE("singleton ontology and empty role lists") {
  Dataset ds = Build("Fever on day 2.",
                     "T1\tSign_symptom 0 5\tFever\nT2\tArea 6 8\ton\nT3\tDate 9 14\tday 2\n"
                     "R1\tMODIFY Arg1:T2 Arg2:T1\n");
  Ontology o = BuildOntology(ds, {}).ontology;
  CHECK(o.Roles("Sign_symptom").size() == 1);
  CHECK(o.Roles("Sign_symptom")[0].name == "Area");
  CHECK(o.Roles("Date").empty());
}

TEST_CASE("the ontology induced from the fixture validates it") {
  const testing::Fixture &f = testing::LoadFixture();
  CHECK(CheckAgainstOntology(f.corpus, f.ontology).empty());
  Dataset bad = f.corpus;
  for (SentenceInstance &s : bad) {
    if (!s.events.empty()) {
      s.events[0].event_type = "Nonexistent";
      break;
    }
  }
  CHECK(CheckAgainstOntology(bad, f.ontology).size() == 1);
}

TEST_CASE("arguments are non-event entities of the trigger's sentence") {
  for (const SentenceInstance &s : testing::LoadFixture().corpus) {
    for (const EventRecord &ev : s.events) {
      for (const ArgumentRecord &a : ev.arguments) {
        CHECK(std::find(s.entities.begin(), s.entities.end(), a.mention) != s.entities.end());
        bool is_trigger = std::any_of(s.events.begin(), s.events.end(), [&](const EventRecord &e) {
          return e.trigger.span == a.mention.span;
        });
        CHECK_FALSE(is_trigger);
      }
    }
  }
}

std::vector<std::string> Ids(int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("doc" + std::to_string(1000 + i));
  return ids;
}

TEST_CASE("split sizes and determinism") {
  CorpusSplit s200 = SplitCorpus(Ids(200), 3);
  CHECK(s200.train.size() == 160);
  CHECK(s200.dev.size() == 20);
  CHECK(s200.test.size() == 20);
  CorpusSplit s10 = SplitCorpus(Ids(10), 3);
  CHECK(s10.train.size() == 8);
  CHECK(s10.dev.size() == 1);
  CHECK(s10.test.size() == 1);
  CHECK(SplitCorpus(Ids(200), 3) == s200);
  CHECK_FALSE(SplitCorpus(Ids(200), 4) == s200);
  // Input order does not matter.
  auto shuffled = Ids(200);
  std::reverse(shuffled.begin(), shuffled.end());
  CHECK(SplitCorpus(shuffled, 3) == s200);

  std::set<std::string> all;
  for (auto *part : {&s200.train, &s200.dev, &s200.test}) all.insert(part->begin(), part->end());
  CHECK(all.size() == 200);

  try {
    SplitCorpus(Ids(9), 0);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kTooFewDocuments);
  }
}

TEST_CASE("downsample sizes and subsets") {
  CorpusSplit split = SplitCorpus(Ids(200), 1);
  std::vector<std::string> quarter = Downsample(split.train, 0.25, 7);
  CHECK(quarter.size() == 40);
  CHECK(Downsample(split.train, 1.0, 7) == split.train);
  CHECK(Downsample(split.train, 0.25, 7) == quarter);
  std::set<std::vector<std::string>> distinct;
  for (uint64_t seed : {0, 1, 2}) {
    auto d = Downsample(split.train, 0.25, seed);
    CHECK(d.size() == 40);
    for (const std::string &id : d) {
      CHECK(std::find(split.train.begin(), split.train.end(), id) != split.train.end());
      CHECK(std::find(split.test.begin(), split.test.end(), id) == split.test.end());
      CHECK(std::find(split.dev.begin(), split.dev.end(), id) == split.dev.end());
    }
    distinct.insert(d);
  }
  CHECK(distinct.size() == 3);
  CHECK_THROWS_AS(Downsample(split.train, 0.0, 1), Error);
  CHECK_THROWS_AS(Downsample(split.train, 1.5, 1), Error);
}

TEST_CASE("statistics") {
  StatsTable empty = ComputeStats({});
  for (const StatRow &r : empty) CHECK(r.value == 0.0);
  Dataset ds = Build("A 0.8x1.5cm nodule was seen. CT was clear.",
                     "T1\tSign_symptom 12 18\tnodule\nT2\tArea 2 11\t0.8x1.5cm\n"
                     "R1\tMODIFY Arg1:T2 Arg2:T1\nT3\tDiagnostic_procedure 29 31\tCT\n");
  StatsTable t = ComputeStats(ds);
  CHECK(StatValue(t, "sentences") == 2);
  CHECK(StatValue(t, "triggers") == 2);
  CHECK(StatValue(t, "arguments") == 1);
  CHECK(StatValue(t, "entities") == 3);
  CHECK(StatValue(t, "unique_event_types") == 2);
  CHECK(StatValue(t, "avg_trigger_length") == doctest::Approx(1.0));
  CHECK_THROWS_AS(StatValue(t, "nope"), Error);
}

TEST_CASE("JSONL round trips") {
  const testing::Fixture &f = testing::LoadFixture();
  CHECK(DatasetFromJsonl(DatasetToJsonl(f.corpus)) == f.corpus);
  CHECK(OntologyFromJson(OntologyToJson(f.ontology)) == f.ontology);
  CorpusSplit split = SplitCorpus(DocIds(f.corpus), 9);
  CHECK(SplitFromJson(SplitToJson(split)) == split);
  CHECK_THROWS_AS(DatasetFromJsonl("{not json}\n"), Error);
}

TEST_CASE("fixture coverage") {
  const testing::Fixture &f = testing::LoadFixture();
  CHECK(DocIds(f.corpus).size() >= 30);
  bool discontinuous = false, nested = false, multi_type = false, empty = false;
  for (const SentenceInstance &s : f.corpus) {
    empty = empty || s.entities.empty();
    for (const Mention &m : s.entities) {
      discontinuous = discontinuous || m.span.discontinuous();
      for (const Mention &o : s.entities) {
        nested = nested || (!(o.span == m.span) && o.span.Within(m.span.begin(), m.span.end()));
      }
    }
    for (const EventRecord &a : s.events) {
      for (const EventRecord &b : s.events) {
        multi_type = multi_type || (a.trigger.span == b.trigger.span && a.event_type != b.event_type);
      }
    }
  }
  CHECK(discontinuous);
  CHECK(nested);
  CHECK(multi_type);
  CHECK(empty);
}

}  // namespace
}  // namespace clinee
