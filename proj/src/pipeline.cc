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

#include "clinee/pipeline.h"

#include <algorithm>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

#include "clinee/common.h"
#include "clinee/decode.h"
#include "json_util.h"

namespace clinee {

using internal::json;

namespace {

// Identity of a prediction within one sentence: its span when grounded,
// otherwise its surface.
std::string ItemKey(const GroundedText &g) {
  return g.span ? "@" + g.span->DebugString() : "'" + g.surface;
}

// Grounded items in passage order, then text-only items in arrival order.
void SortItems(std::vector<GroundedText> &items) {
  std::stable_sort(items.begin(), items.end(), [](const GroundedText &a, const GroundedText &b) {
    if (a.span.has_value() != b.span.has_value()) return a.span.has_value();
    if (!a.span) return false;
    return PassageOrderLess(*a.span, *b.span);
  });
}

std::string RequestId(const SentenceInstance &s, std::string_view stage, size_t idx) {
  return s.doc_id + "|" + std::to_string(s.sent_index) + "|" + std::string(stage) + "|" +
         std::to_string(idx);
}

Dataset StripAnnotations(const Dataset &corpus) {
  Dataset out = corpus;
  for (SentenceInstance &s : out) {
    s.entities.clear();
    s.events.clear();
  }
  return out;
}

std::vector<GroundedText> AsCandidates(const std::vector<Mention> &mentions) {
  std::vector<GroundedText> out;
  for (const Mention &m : mentions) out.push_back({m.surface, m.span});
  return out;
}

struct PendingPrompt {
  size_t sentence;
  size_t event;  // EAE only
  PromptInstance prompt;
};

std::vector<GenRequest> ToRequests(const std::vector<PendingPrompt> &pending,
                                   const std::vector<std::string> &ids,
                                   const PipelineConfig &cfg) {
  std::vector<GenRequest> requests;
  requests.reserve(pending.size());
  for (size_t i = 0; i < pending.size(); ++i) {
    requests.push_back({ids[i], pending[i].prompt.input_seq, cfg.num_beams, cfg.max_new_tokens});
  }
  return requests;
}

}  // namespace

const char *VariantName(Variant v) { return v == Variant::kFull ? "full" : "vanilla"; }

Variant VariantFromName(std::string_view name) {
  if (name == "full") return Variant::kFull;
  if (name == "vanilla") return Variant::kVanilla;
  throw Error(ErrorKind::kInvalidArgument, "unknown variant '" + std::string(name) + "'");
}

const char *MarkerSourceName(MarkerSource m) {
  switch (m) {
    case MarkerSource::kNone: return "none";
    case MarkerSource::kStandaloneMi: return "standalone_mi";
    case MarkerSource::kGold: return "gold";
  }
  return "?";
}

MarkerSource MarkerSourceFromName(std::string_view name) {
  if (name == "none") return MarkerSource::kNone;
  if (name == "standalone_mi" || name == "mi") return MarkerSource::kStandaloneMi;
  if (name == "gold") return MarkerSource::kGold;
  throw Error(ErrorKind::kInvalidArgument, "unknown marker source '" + std::string(name) + "'");
}

void PipelineConfig::Validate() const {
  if (variant == Variant::kFull && markers == MarkerSource::kNone) {
    throw Error(ErrorKind::kInvalidArgument, "the full variant requires a marker source");
  }
  if (num_beams < 1 || max_new_tokens < 1) {
    throw Error(ErrorKind::kInvalidArgument, "num_beams and max_new_tokens must be >= 1");
  }
  if (jobs < 1) throw Error(ErrorKind::kInvalidArgument, "jobs must be >= 1");
  mi.Validate();
  ed.Validate();
  eae.Validate();
}

PredictionSet GoldAsPrediction(const Dataset &corpus) {
  PredictionSet out;
  out.reserve(corpus.size());
  for (const SentenceInstance &s : corpus) {
    SentencePrediction sp{s.doc_id, s.sent_index, s.text, {}};
    std::map<std::pair<SpanSet, std::string>, size_t> index;
    for (const EventRecord &ev : s.events) {
      auto [it, fresh] = index.emplace(std::make_pair(ev.trigger.span, ev.event_type),
                                       sp.events.size());
      if (fresh) {
        sp.events.push_back({{ev.trigger.surface, ev.trigger.span}, ev.event_type, {}});
      }
      PredictedEvent &pe = sp.events[it->second];
      for (const ArgumentRecord &a : ev.arguments) {
        PredictedArgument pa{{a.mention.surface, a.mention.span}, a.role};
        if (std::find(pe.arguments.begin(), pe.arguments.end(), pa) == pe.arguments.end()) {
          pe.arguments.push_back(std::move(pa));
        }
      }
    }
    out.push_back(std::move(sp));
  }
  return out;
}

std::vector<std::string> GenerateAll(GenerationBackend &backend,
                                     const std::vector<GenRequest> &requests, int jobs) {
  std::unordered_map<std::string, size_t> position;
  for (size_t i = 0; i < requests.size(); ++i) {
    if (!position.emplace(requests[i].request_id, i).second) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate request id " + requests[i].request_id);
    }
  }
  std::vector<std::string> outputs(requests.size());
  std::vector<bool> seen(requests.size(), false);
  std::mutex mu;
  auto absorb = [&](const std::vector<GenResponse> &responses) {
    std::lock_guard<std::mutex> lock(mu);
    for (const GenResponse &r : responses) {
      auto it = position.find(r.request_id);
      if (it == position.end()) {
        throw Error(ErrorKind::kBackendUnavailable, "unexpected response id " + r.request_id);
      }
      outputs[it->second] = r.output;
      seen[it->second] = true;
    }
  };

  size_t slices = std::clamp<size_t>(static_cast<size_t>(std::max(jobs, 1)), 1,
                                     std::max<size_t>(requests.size(), 1));
  if (slices == 1) {
    if (!requests.empty()) absorb(backend.Generate(requests));
  } else {
    std::vector<std::thread> threads;
    std::exception_ptr failure;
    std::mutex failure_mu;
    size_t per = (requests.size() + slices - 1) / slices;
    for (size_t lo = 0; lo < requests.size(); lo += per) {
      size_t hi = std::min(requests.size(), lo + per);
      threads.emplace_back([&, lo, hi] {
        try {
          std::vector<GenRequest> slice(requests.begin() + static_cast<long>(lo),
                                        requests.begin() + static_cast<long>(hi));
          absorb(backend.Generate(slice));
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (std::thread &t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  for (size_t i = 0; i < requests.size(); ++i) {
    if (!seen[i]) {
      throw Error(ErrorKind::kBackendUnavailable, "no response for " + requests[i].request_id);
    }
  }
  return outputs;
}

std::vector<std::vector<GroundedText>> RunMiStage(const Dataset &sentences,
                                                  GenerationBackend &backend,
                                                  MentionKind kind,
                                                  const PipelineConfig &cfg) {
  CompileConfig mi = cfg.mi;
  mi.mention_kind = kind;
  mi.mode = CompileMode::kInference;
  mi.marker_mode = MarkerMode::kNone;
  const std::string stage = std::string("mi-") + MentionKindName(kind);

  std::vector<PendingPrompt> pending;
  std::vector<std::string> ids;
  for (size_t i = 0; i < sentences.size(); ++i) {
    std::vector<PromptInstance> prompts = CompileMi(sentences[i], mi);
    for (size_t j = 0; j < prompts.size(); ++j) {
      ids.push_back(RequestId(sentences[i], stage, j));
      pending.push_back({i, 0, std::move(prompts[j])});
    }
  }
  std::vector<std::string> outputs = GenerateAll(backend, ToRequests(pending, ids, cfg), cfg.jobs);

  std::vector<std::vector<GroundedText>> out(sentences.size());
  std::vector<std::set<std::string>> keys(sentences.size());
  for (size_t k = 0; k < pending.size(); ++k) {
    const size_t i = pending[k].sentence;
    DecodedOutput d = Decode(pending[k].prompt, outputs[k], sentences[i].text);
    for (GroundedText &g : d.Items()) {
      if (keys[i].insert(ItemKey(g)).second) out[i].push_back(std::move(g));
    }
  }
  for (auto &items : out) SortItems(items);
  return out;
}

PredictionSet RunPipeline(const Dataset &corpus, const Ontology &ontology,
                          const PipelineBackends &backends, const PipelineConfig &cfg,
                          PipelineStats *stats) {
  cfg.Validate();
  if (!backends.ed || !backends.eae) {
    throw Error(ErrorKind::kInvalidArgument, "ED and EAE backends are required");
  }
  const Dataset stripped = StripAnnotations(corpus);
  PipelineStats local;

  // Candidate markers.
  std::vector<std::vector<GroundedText>> ed_candidates(corpus.size());
  std::vector<std::vector<GroundedText>> eae_candidates(corpus.size());
  const bool marked = cfg.variant == Variant::kFull;
  if (marked && cfg.markers == MarkerSource::kGold) {
    for (size_t i = 0; i < corpus.size(); ++i) {
      ed_candidates[i] = AsCandidates(GoldMentions(corpus[i], cfg.ed_marker_kind));
      eae_candidates[i] = AsCandidates(GoldMentions(corpus[i], cfg.eae_marker_kind));
    }
  } else if (marked && cfg.markers == MarkerSource::kStandaloneMi) {
    if (!backends.mi_ed || !backends.mi_eae) {
      throw Error(ErrorKind::kInvalidArgument, "standalone MI markers need MI backends");
    }
    auto count_mi = [&] {
      for (const SentenceInstance &s : stripped) {
        local.mi_queries += SlidingWindows(static_cast<int>(SplitWords(s.text).size()),
                                           cfg.mi.window_size, cfg.mi.window_step)
                                .size() +
                            1;
      }
    };
    ed_candidates = RunMiStage(stripped, *backends.mi_ed, cfg.ed_marker_kind, cfg);
    count_mi();
    if (backends.mi_eae == backends.mi_ed && cfg.eae_marker_kind == cfg.ed_marker_kind) {
      eae_candidates = ed_candidates;
    } else {
      eae_candidates = RunMiStage(stripped, *backends.mi_eae, cfg.eae_marker_kind, cfg);
      count_mi();
    }
  }

  // Event detection: one query per event type.
  CompileConfig ed = cfg.ed;
  ed.mode = CompileMode::kInference;
  ed.marker_mode = marked ? MarkerMode::kPredicted : MarkerMode::kNone;
  std::vector<PendingPrompt> pending;
  std::vector<std::string> ids;
  for (size_t i = 0; i < stripped.size(); ++i) {
    std::vector<PromptInstance> prompts = CompileEd(stripped[i], ontology, ed, ed_candidates[i]);
    for (size_t j = 0; j < prompts.size(); ++j) {
      ids.push_back(RequestId(stripped[i], "ed", j));
      pending.push_back({i, 0, std::move(prompts[j])});
    }
  }
  local.ed_queries = pending.size();
  std::vector<std::string> outputs =
      GenerateAll(*backends.ed, ToRequests(pending, ids, cfg), cfg.jobs);

  std::map<std::string, size_t> type_rank;
  for (size_t t = 0; t < ontology.event_types.size(); ++t) {
    type_rank[ontology.event_types[t].name] = t;
  }
  PredictionSet pred;
  pred.reserve(stripped.size());
  for (const SentenceInstance &s : stripped) pred.push_back({s.doc_id, s.sent_index, s.text, {}});
  std::vector<std::set<std::pair<std::string, std::string>>> seen(stripped.size());
  for (size_t k = 0; k < pending.size(); ++k) {
    const size_t i = pending[k].sentence;
    const std::string &type = *pending[k].prompt.meta.query_event_type;
    DecodedOutput d = Decode(pending[k].prompt, outputs[k], stripped[i].text);
    for (GroundedText &g : d.Items()) {
      if (seen[i].insert({ItemKey(g), type}).second) {
        pred[i].events.push_back({std::move(g), type, {}});
      }
    }
  }
  for (SentencePrediction &sp : pred) {
    std::stable_sort(sp.events.begin(), sp.events.end(),
                     [&](const PredictedEvent &a, const PredictedEvent &b) {
                       const auto &sa = a.trigger.span, &sb = b.trigger.span;
                       if (sa.has_value() != sb.has_value()) return sa.has_value();
                       if (sa && *sa != *sb) return PassageOrderLess(*sa, *sb);
                       return type_rank[a.event_type] < type_rank[b.event_type];
                     });
  }

  // Argument extraction: one query per legal role of each predicted type.
  // Triggers that could not be located in the passage cannot be tagged and
  // get no arguments.
  CompileConfig eae = cfg.eae;
  eae.mode = CompileMode::kInference;
  eae.marker_mode = marked ? MarkerMode::kPredicted : MarkerMode::kNone;
  pending.clear();
  ids.clear();
  for (size_t i = 0; i < stripped.size(); ++i) {
    for (size_t e = 0; e < pred[i].events.size(); ++e) {
      const PredictedEvent &pe = pred[i].events[e];
      if (!pe.trigger.span) continue;
      EventRecord ev{MakeMention(stripped[i].text, *pe.trigger.span, ""), pe.event_type, {}};
      std::vector<PromptInstance> prompts =
          CompileEae(stripped[i], ev, ontology, eae, eae_candidates[i]);
      for (size_t j = 0; j < prompts.size(); ++j) {
        ids.push_back(RequestId(stripped[i], "eae|" + std::to_string(e), j));
        pending.push_back({i, e, std::move(prompts[j])});
      }
    }
  }
  local.eae_queries = pending.size();
  outputs = GenerateAll(*backends.eae, ToRequests(pending, ids, cfg), cfg.jobs);
  std::map<std::pair<size_t, size_t>, std::set<std::pair<std::string, std::string>>> arg_seen;
  for (size_t k = 0; k < pending.size(); ++k) {
    const size_t i = pending[k].sentence, e = pending[k].event;
    const std::string &role = *pending[k].prompt.meta.query_role;
    DecodedOutput d = Decode(pending[k].prompt, outputs[k], stripped[i].text);
    PredictedEvent &pe = pred[i].events[e];
    for (GroundedText &g : d.Items()) {
      if (arg_seen[{i, e}].insert({ItemKey(g), role}).second) {
        pe.arguments.push_back({std::move(g), role});
      }
    }
  }
  if (stats) *stats = local;
  return pred;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json ItemToJson(const GroundedText &g, const CharIndex &chars) {
  return {{"span", g.span ? internal::SpanToJson(*g.span, chars) : json(nullptr)},
          {"text", g.surface}};
}

GroundedText ItemFromJson(const json &j, const CharIndex &chars) {
  GroundedText g;
  g.surface = j.at("text").get<std::string>();
  if (!j.at("span").is_null()) g.span = internal::SpanFromJson(j.at("span"), chars);
  return g;
}

}  // namespace

std::string PredictionsToJsonl(const PredictionSet &pred) {
  std::string out;
  for (const SentencePrediction &sp : pred) {
    CharIndex chars(sp.text);
    json triggers = json::array(), events = json::array();
    for (const PredictedEvent &pe : sp.events) {
      json t = ItemToJson(pe.trigger, chars);
      t["event_type"] = pe.event_type;
      triggers.push_back(t);
      json args = json::array();
      for (const PredictedArgument &a : pe.arguments) {
        json aj = ItemToJson(a.mention, chars);
        aj["role"] = a.role;
        args.push_back(std::move(aj));
      }
      events.push_back({{"trigger", ItemToJson(pe.trigger, chars)},
                        {"event_type", pe.event_type},
                        {"arguments", std::move(args)}});
    }
    json line = {{"doc_id", sp.doc_id},
                 {"sent_index", sp.sent_index},
                 {"text", sp.text},
                 {"predicted_triggers", std::move(triggers)},
                 {"predicted_events", std::move(events)}};
    out += line.dump() + "\n";
  }
  return out;
}

PredictionSet PredictionsFromJsonl(std::string_view jsonl) {
  PredictionSet out;
  internal::ForEachJsonLine(jsonl, "predictions", [&](const json &j) {
    SentencePrediction sp;
    sp.doc_id = j.at("doc_id").get<std::string>();
    sp.sent_index = j.at("sent_index").get<int>();
    sp.text = j.at("text").get<std::string>();
    CharIndex chars(sp.text);
    for (const json &ej : j.at("predicted_events")) {
      PredictedEvent pe;
      pe.trigger = ItemFromJson(ej.at("trigger"), chars);
      pe.event_type = ej.at("event_type").get<std::string>();
      for (const json &aj : ej.at("arguments")) {
        pe.arguments.push_back({ItemFromJson(aj, chars), aj.at("role").get<std::string>()});
      }
      sp.events.push_back(std::move(pe));
    }
    out.push_back(std::move(sp));
  });
  return out;
}

}  // namespace clinee
