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

#include "clinee/eval.h"

#include <random>

#include "clinee/backend.h"
#include "clinee/common.h"
#include "doctest.h"
#include "hand_fixture.h"
#include "json.hpp"
#include "test_util.h"

namespace clinee {
namespace {

using json = nlohmann::json;
using testing::AddEvent;
using testing::At;
using testing::G;

void CheckCounts(const TaskScore &s, testing::Counts c) {
  CHECK(s.tp == c.tp);
  CHECK(s.fp == c.fp);
  CHECK(s.fn == c.fn);
}

TEST_CASE("boundary error gives half precision and recall") {
  SentenceInstance s = testing::Sentence("d", 0, "A nodule on CT scan.");
  AddEvent(s, At(s.text, "nodule", "Sign_symptom"));
  AddEvent(s, At(s.text, "CT scan", "Diagnostic_procedure"));
  PredictionSet pred = {{"d", 0, s.text,
                         {{G(At(s.text, "nodule", "")), "Sign_symptom", {}},
                          {G(At(s.text, "scan", "")), "Diagnostic_procedure", {}}}}};
  MetricReport r = Score(pred, {s});
  for (const TaskScore *t : {&r.trigger_id, &r.trigger_cls}) {
    CHECK(t->tp == 1);
    CHECK(t->fp == 1);
    CHECK(t->fn == 1);
    CHECK(t->precision == 0.5);
    CHECK(t->recall == 0.5);
    CHECK(t->f1 == 0.5);
  }
}

TEST_CASE("hand fixture counts") {
  testing::HandFixture h = testing::MakeHandFixture();
  MetricReport r = Score(h.pred, h.gold);
  CheckCounts(r.trigger_id, h.trigger_id);
  CheckCounts(r.trigger_cls, h.trigger_cls);
  CheckCounts(r.arg_id, h.arg_id);
  CheckCounts(r.arg_cls, h.arg_cls);
  CHECK(r.trigger_id.precision == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
  CHECK(r.trigger_id.recall == doctest::Approx(4.0 / 7.0).epsilon(1e-15));

  ErrorAttribution a = AttributeErrors(h.pred, h.gold);
  CHECK(a.trigger_id_miss == 0);
  CHECK(a.trigger_cls_miss == h.trigger_cls_miss);
  CHECK(a.arg_id_miss == 0);
  CHECK(a.arg_cls_miss == h.arg_cls_miss);
  CHECK(a.correct == h.correct);
  CHECK(a.total() == CountGoldArguments(h.gold));
}

TEST_CASE("empty predictions") {
  testing::HandFixture h = testing::MakeHandFixture();
  for (const PredictionSet &pred : {PredictionSet{}, PredictionSet(h.pred.size())}) {
    PredictionSet p = pred;
    for (size_t i = 0; i < p.size(); ++i) {
      p[i] = {h.gold[i].doc_id, h.gold[i].sent_index, h.gold[i].text, {}};
    }
    MetricReport r = Score(p, h.gold);
    CheckCounts(r.trigger_id, {0, 0, 7});
    CheckCounts(r.arg_id, {0, 0, 5});
    for (size_t i = 0; i < 4; ++i) {
      CHECK(r.Get(i).precision == 0);
      CHECK(r.Get(i).recall == 0);
      CHECK(r.Get(i).f1 == 0);
    }
    ErrorAttribution a = AttributeErrors(p, h.gold);
    CHECK(a.trigger_id_miss == 5);
    CHECK(a.total() == 5);
  }
  MetricReport none = Score({}, {});
  CHECK(none.trigger_id.f1 == 0);
}

TEST_CASE("attribution buckets") {
  SentenceInstance s = testing::Sentence("d", 0, "Severe pain in the knee.");
  AddEvent(s, At(s.text, "pain", "Sign_symptom"),
           {{At(s.text, "Severe", "Severity"), "Severity"},
            {At(s.text, "knee", "Biological_structure"), "Biological_structure"}});
  auto attribute = [&](std::vector<PredictedEvent> events) {
    return AttributeErrors({{"d", 0, s.text, std::move(events)}}, {s});
  };
  CHECK(attribute({}).trigger_id_miss == 2);
  CHECK(attribute({{G(At(s.text, "in", "")), "Sign_symptom", {}}}).trigger_id_miss == 2);
  CHECK(attribute({{G(At(s.text, "pain", "")), "Medication", {}}}).trigger_cls_miss == 2);
  ErrorAttribution a = attribute({{G(At(s.text, "pain", "")),
                                   "Sign_symptom",
                                   {{G(At(s.text, "Severe", "")), "Area"}}}});
  CHECK(a.arg_cls_miss == 1);
  CHECK(a.arg_id_miss == 1);
  a = attribute({{G(At(s.text, "pain", "")),
                  "Sign_symptom",
                  {{G(At(s.text, "Severe", "")), "Severity"},
                   {G(At(s.text, "knee", "")), "Biological_structure"}}}});
  CHECK(a.correct == 2);
  CHECK(a.total() == 2);
}

TEST_CASE("identity and cls never exceed id") {
  const testing::Fixture &f = testing::LoadFixture();
  MetricReport r = Score(GoldAsPrediction(f.corpus), f.corpus);
  for (size_t i = 0; i < 4; ++i) CHECK(r.Get(i).f1 == 1.0);
  CHECK(r.arg_id.tp == CountGoldArguments(f.corpus));

  for (uint64_t seed = 0; seed < 10; ++seed) {
    CorruptionConfig c = CorruptionConfig::Parse("drop=0.3,jitter=0.3,width=2,confuse=0.3");
    c.seed = seed;
    PipelineBackends b;
    b.mi_ed = std::make_shared<OracleBackend>(Task::kMiTrigger, f.corpus, f.ontology, c);
    b.mi_eae = std::make_shared<OracleBackend>(Task::kMiArgument, f.corpus, f.ontology, c);
    b.ed = std::make_shared<OracleBackend>(Task::kEd, f.corpus, f.ontology, c);
    b.eae = std::make_shared<OracleBackend>(Task::kEae, f.corpus, f.ontology, c);
    PredictionSet pred = RunPipeline(f.corpus, f.ontology, b, PipelineConfig{});
    MetricReport m = Score(pred, f.corpus);
    CHECK(m.trigger_cls.tp <= m.trigger_id.tp);
    CHECK(m.arg_cls.tp <= m.arg_id.tp);
    CHECK(m.arg_id.tp + m.arg_id.fn == CountGoldArguments(f.corpus));
    ErrorAttribution a = AttributeErrors(pred, f.corpus);
    CHECK(a.total() == CountGoldArguments(f.corpus));
    CHECK(a.correct <= m.arg_cls.tp);
  }
}

TEST_CASE("duplicate predictions count once") {
  SentenceInstance s = testing::Sentence("d", 0, "fever");
  AddEvent(s, At(s.text, "fever", "Sign_symptom"));
  PredictedEvent ev{G(s.events[0].trigger), "Sign_symptom", {}};
  MetricReport r = Score({{"d", 0, s.text, {ev, ev}}}, {s});
  CheckCounts(r.trigger_id, {1, 1, 0});
  // One span cannot satisfy two gold events of different types.
  s.events.push_back({s.events[0].trigger, "Disease_disorder", {}});
  ev.event_type = "Disease_disorder";
  r = Score({{"d", 0, s.text, {ev}}}, {s});
  CheckCounts(r.trigger_id, {1, 0, 1});
  CheckCounts(r.trigger_cls, {1, 0, 1});
}

TEST_CASE("alignment errors") {
  testing::HandFixture h = testing::MakeHandFixture();
  PredictionSet extra = h.pred;
  extra.push_back({"other", 0, "x", {}});
  try {
    Score(extra, h.gold);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kAlignmentError);
  }
  PredictionSet twice = h.pred;
  twice.push_back(h.pred[0]);
  CHECK_THROWS_AS(Score(twice, h.gold), Error);
  CHECK_THROWS_AS(AttributeErrors(extra, h.gold), Error);
}

MetricReport WithF1(double f1) {
  MetricReport r;
  for (size_t i = 0; i < 4; ++i) {
    r.Get(i).tp = 1;
    r.Get(i).precision = r.Get(i).recall = r.Get(i).f1 = f1;
  }
  return r;
}

TEST_CASE("aggregate runs") {
  MetricReport agg = AggregateRuns({WithF1(0.60), WithF1(0.62), WithF1(0.64)});
  CHECK(agg.runs == 3);
  for (size_t i = 0; i < 4; ++i) {
    CHECK(agg.Get(i).f1 == doctest::Approx(0.62));
    CHECK(agg.Get(i).f1_sd == doctest::Approx(0.02));
    CHECK(agg.Get(i).tp == 3);
  }
  testing::HandFixture h = testing::MakeHandFixture();
  MetricReport one = Score(h.pred, h.gold);
  MetricReport same = AggregateRuns({one});
  CHECK(same.trigger_id.f1 == one.trigger_id.f1);
  CHECK(same.trigger_id.f1_sd == 0);
  MetricReport three = AggregateRuns({one, one, one});
  CHECK(three.arg_cls.f1 == doctest::Approx(one.arg_cls.f1));
  CHECK(three.arg_cls.f1_sd == 0);
  CHECK_THROWS_AS(AggregateRuns({}), Error);
}

TEST_CASE("report serialization") {
  testing::HandFixture h = testing::MakeHandFixture();
  MetricReport r = Score(h.pred, h.gold);
  json j = json::parse(ReportToJson(r));
  CHECK(j["trigger_id"]["tp"] == 4);
  CHECK(j["arg_cls"]["fn"] == 3);
  CHECK(j["trigger_cls"]["f1"].get<double>() == doctest::Approx(r.trigger_cls.f1));
  CHECK_FALSE(j["trigger_id"].contains("f1_sd"));
  json agg = json::parse(ReportToJson(AggregateRuns({r, r})));
  CHECK(agg["trigger_id"].contains("f1_sd"));
  json a = json::parse(AttributionToJson(AttributeErrors(h.pred, h.gold)));
  CHECK(a["correct"] == 2);
  CHECK(a["total"] == 5);

  std::string text = FormatReport(r);
  CHECK(text.find("Trigger") != std::string::npos);
  CHECK(text.find("Argument") != std::string::npos);
  CHECK(text.find("Identification") != std::string::npos);
  CHECK(text.find("Classification") != std::string::npos);
  CHECK(text.find("66.67") != std::string::npos);  // trigger_id precision
  CHECK(FormatReport(AggregateRuns({r, r})).find("sd") != std::string::npos);
}

}  // namespace
}  // namespace clinee
