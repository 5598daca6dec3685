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

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <tuple>

#include "clinee/common.h"
#include "json_util.h"

namespace clinee {

using internal::json;

void TaskScore::Finalize() {
  precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  f1 = precision + recall == 0 ? 0.0 : 2 * precision * recall / (precision + recall);
}

const std::vector<std::string> &MetricReport::TaskNames() {
  static const std::vector<std::string> names = {"trigger_id", "trigger_cls", "arg_id",
                                                 "arg_cls"};
  return names;
}

TaskScore &MetricReport::Get(size_t i) {
  TaskScore *cells[] = {&trigger_id, &trigger_cls, &arg_id, &arg_cls};
  return *cells[i];
}

const TaskScore &MetricReport::Get(size_t i) const {
  return const_cast<MetricReport *>(this)->Get(i);
}

namespace {

struct TriggerItem {
  const GroundedText *trigger;
  const std::string *type;
};

struct ArgItem {
  const GroundedText *trigger;
  const std::string *type;
  const GroundedText *mention;
  const std::string *role;
};

bool SameText(const GroundedText &gold, const GroundedText &pred) {
  if (pred.span) return gold.span && *gold.span == *pred.span;
  return gold.surface == pred.surface;
}

std::vector<TriggerItem> Triggers(const SentencePrediction &sp) {
  std::vector<TriggerItem> out;
  for (const PredictedEvent &e : sp.events) out.push_back({&e.trigger, &e.event_type});
  return out;
}

std::vector<ArgItem> Args(const SentencePrediction &sp) {
  std::vector<ArgItem> out;
  for (const PredictedEvent &e : sp.events) {
    for (const PredictedArgument &a : e.arguments) {
      out.push_back({&e.trigger, &e.event_type, &a.mention, &a.role});
    }
  }
  return out;
}

// Grounded predictions claim gold items first so a text-only duplicate never
// takes the gold item a located prediction would match.
template <typename T>
void Match(const std::vector<T> &gold, const std::vector<T> &pred,
           const std::function<const GroundedText &(const T &)> &text,
           const std::function<bool(const T &, const T &)> &match, TaskScore &score) {
  std::vector<bool> used(gold.size(), false);
  int64_t tp = 0;
  for (int pass = 0; pass < 2; ++pass) {
    for (const T &p : pred) {
      if (text(p).span.has_value() != (pass == 0)) continue;
      for (size_t g = 0; g < gold.size(); ++g) {
        if (!used[g] && match(gold[g], p)) {
          used[g] = true;
          ++tp;
          break;
        }
      }
    }
  }
  score.tp += tp;
  score.fp += static_cast<int64_t>(pred.size()) - tp;
  score.fn += static_cast<int64_t>(gold.size()) - tp;
}

using SentenceKey = std::pair<std::string, int>;

// Gold predictions keyed by sentence, and the prediction for each gold
// sentence (empty when missing).
struct Aligned {
  PredictionSet gold;
  std::vector<const SentencePrediction *> pred;
};

Aligned Align(const PredictionSet &pred, const Dataset &gold_corpus) {
  Aligned a;
  a.gold = GoldAsPrediction(gold_corpus);
  std::map<SentenceKey, size_t> index;
  for (size_t i = 0; i < a.gold.size(); ++i) {
    index[{a.gold[i].doc_id, a.gold[i].sent_index}] = i;
  }
  a.pred.assign(a.gold.size(), nullptr);
  for (const SentencePrediction &sp : pred) {
    auto it = index.find({sp.doc_id, sp.sent_index});
    if (it == index.end()) {
      throw Error(ErrorKind::kAlignmentError, "predicted sentence " + sp.doc_id + "#" +
                                                  std::to_string(sp.sent_index) +
                                                  " is not in the gold corpus");
    }
    if (a.pred[it->second]) {
      throw Error(ErrorKind::kAlignmentError,
                  "sentence " + sp.doc_id + "#" + std::to_string(sp.sent_index) +
                      " predicted twice");
    }
    a.pred[it->second] = &sp;
  }
  return a;
}

}  // namespace

MetricReport Score(const PredictionSet &pred, const Dataset &gold) {
  Aligned aligned = Align(pred, gold);
  MetricReport r;
  const SentencePrediction empty;
  for (size_t i = 0; i < aligned.gold.size(); ++i) {
    const SentencePrediction &sp = aligned.pred[i] ? *aligned.pred[i] : empty;
    auto gt = Triggers(aligned.gold[i]), pt = Triggers(sp);
    auto ttext = [](const TriggerItem &t) -> const GroundedText & { return *t.trigger; };
    Match<TriggerItem>(
        gt, pt, ttext,
        [](const TriggerItem &g, const TriggerItem &p) { return SameText(*g.trigger, *p.trigger); },
        r.trigger_id);
    Match<TriggerItem>(
        gt, pt, ttext,
        [](const TriggerItem &g, const TriggerItem &p) {
          return *g.type == *p.type && SameText(*g.trigger, *p.trigger);
        },
        r.trigger_cls);

    auto ga = Args(aligned.gold[i]), pa = Args(sp);
    auto atext = [](const ArgItem &a) -> const GroundedText & { return *a.mention; };
    Match<ArgItem>(
        ga, pa, atext,
        [](const ArgItem &g, const ArgItem &p) {
          return *g.type == *p.type && SameText(*g.mention, *p.mention);
        },
        r.arg_id);
    Match<ArgItem>(
        ga, pa, atext,
        [](const ArgItem &g, const ArgItem &p) {
          return *g.type == *p.type && *g.role == *p.role && SameText(*g.mention, *p.mention);
        },
        r.arg_cls);
  }
  for (size_t t = 0; t < 4; ++t) r.Get(t).Finalize();
  return r;
}

ErrorAttribution AttributeErrors(const PredictionSet &pred, const Dataset &gold) {
  Aligned aligned = Align(pred, gold);
  ErrorAttribution out;
  const SentencePrediction empty;
  for (size_t i = 0; i < aligned.gold.size(); ++i) {
    const SentencePrediction &sp = aligned.pred[i] ? *aligned.pred[i] : empty;
    for (const PredictedEvent &ge : aligned.gold[i].events) {
      std::vector<const PredictedEvent *> by_span, by_type;
      for (const PredictedEvent &pe : sp.events) {
        if (!SameText(ge.trigger, pe.trigger)) continue;
        by_span.push_back(&pe);
        if (pe.event_type == ge.event_type) by_type.push_back(&pe);
      }
      for (const PredictedArgument &ga : ge.arguments) {
        if (by_span.empty()) {
          ++out.trigger_id_miss;
          continue;
        }
        if (by_type.empty()) {
          ++out.trigger_cls_miss;
          continue;
        }
        bool span_hit = false, role_hit = false;
        for (const PredictedEvent *pe : by_type) {
          for (const PredictedArgument &pa : pe->arguments) {
            if (!SameText(ga.mention, pa.mention)) continue;
            span_hit = true;
            role_hit = role_hit || pa.role == ga.role;
          }
        }
        if (!span_hit) ++out.arg_id_miss;
        else if (!role_hit) ++out.arg_cls_miss;
        else ++out.correct;
      }
    }
  }
  return out;
}

int64_t CountGoldArguments(const Dataset &gold) {
  int64_t n = 0;
  for (const SentencePrediction &sp : GoldAsPrediction(gold)) {
    for (const PredictedEvent &e : sp.events) n += static_cast<int64_t>(e.arguments.size());
  }
  return n;
}

MetricReport AggregateRuns(const std::vector<MetricReport> &reports) {
  if (reports.empty()) throw Error(ErrorKind::kInvalidArgument, "no reports to aggregate");
  MetricReport out;
  out.runs = 0;
  for (const MetricReport &r : reports) out.runs += r.runs;
  const double n = static_cast<double>(reports.size());
  for (size_t t = 0; t < 4; ++t) {
    TaskScore &cell = out.Get(t);
    auto stats = [&](double TaskScore::*field, double TaskScore::*sd) {
      double sum = 0;
      for (const MetricReport &r : reports) sum += r.Get(t).*field;
      double mean = sum / n;
      double ss = 0;
      for (const MetricReport &r : reports) ss += std::pow(r.Get(t).*field - mean, 2);
      cell.*field = mean;
      cell.*sd = reports.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    };
    stats(&TaskScore::precision, &TaskScore::precision_sd);
    stats(&TaskScore::recall, &TaskScore::recall_sd);
    stats(&TaskScore::f1, &TaskScore::f1_sd);
    for (const MetricReport &r : reports) {
      cell.tp += r.Get(t).tp;
      cell.fp += r.Get(t).fp;
      cell.fn += r.Get(t).fn;
    }
  }
  return out;
}

std::string ReportToJson(const MetricReport &report) {
  json j;
  for (size_t t = 0; t < 4; ++t) {
    const TaskScore &s = report.Get(t);
    json cell = {{"tp", s.tp},
                 {"fp", s.fp},
                 {"fn", s.fn},
                 {"precision", s.precision},
                 {"recall", s.recall},
                 {"f1", s.f1}};
    if (report.runs > 1) {
      cell["precision_sd"] = s.precision_sd;
      cell["recall_sd"] = s.recall_sd;
      cell["f1_sd"] = s.f1_sd;
    }
    j[MetricReport::TaskNames()[t]] = std::move(cell);
  }
  j["runs"] = report.runs;
  return j.dump(2) + "\n";
}

std::string AttributionToJson(const ErrorAttribution &a) {
  json j = {{"trigger_id_miss", a.trigger_id_miss},
            {"trigger_cls_miss", a.trigger_cls_miss},
            {"arg_id_miss", a.arg_id_miss},
            {"arg_cls_miss", a.arg_cls_miss},
            {"correct", a.correct},
            {"total", a.total()}};
  return j.dump(2) + "\n";
}

std::string FormatReport(const MetricReport &report) {
  std::string out;
  char buf[128];
  auto row = [&](const char *label, auto value) {
    std::snprintf(buf, sizeof(buf), "%-6s", label);
    out += buf;
    for (size_t t = 0; t < 4; ++t) {
      const TaskScore &s = report.Get(t);
      std::snprintf(buf, sizeof(buf), "  %6.2f %6.2f %6.2f", 100 * value(s, 0),
                    100 * value(s, 1), 100 * value(s, 2));
      out += buf;
    }
    out += "\n";
  };
  std::snprintf(buf, sizeof(buf), "%-6s  %-42s  %s\n", "", "Trigger", "Argument");
  out += buf;
  out += "      ";
  for (const char *group : {"Identification", "Classification", "Identification",
                            "Classification"}) {
    std::snprintf(buf, sizeof(buf), "  %-20s", group);
    out += buf;
  }
  while (out.back() == ' ') out.pop_back();
  out += "\n      ";
  for (int t = 0; t < 4; ++t) {
    std::snprintf(buf, sizeof(buf), "  %6s %6s %6s", "P", "R", "F1");
    out += buf;
  }
  out += "\n";
  row("", [](const TaskScore &s, int k) { return k == 0 ? s.precision : k == 1 ? s.recall : s.f1; });
  if (report.runs > 1) {
    row("sd", [](const TaskScore &s, int k) {
      return k == 0 ? s.precision_sd : k == 1 ? s.recall_sd : s.f1_sd;
    });
  }
  return out;
}

}  // namespace clinee
