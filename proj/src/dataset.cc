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
#include <cctype>
#include <cmath>
#include <cstdio>
#include <random>
#include <unordered_map>

#include "clinee/common.h"
#include "json_util.h"

namespace clinee {

using internal::json;

Mention MakeMention(std::string_view sentence_text, SpanSet span,
                    std::string label) {
  Mention m;
  m.surface = span.JoinedText(sentence_text);
  m.span = std::move(span);
  m.label = std::move(label);
  return m;
}

// ---------------------------------------------------------------------------
// Ontology

bool Ontology::HasType(std::string_view type) const {
  return std::any_of(event_types.begin(), event_types.end(),
                     [&](const OntologyEntry &e) { return e.name == type; });
}

bool Ontology::HasRole(std::string_view type, std::string_view role) const {
  auto it = roles_by_type.find(std::string(type));
  if (it == roles_by_type.end()) return false;
  return std::any_of(it->second.begin(), it->second.end(),
                     [&](const OntologyEntry &e) { return e.name == role; });
}

const OntologyEntry &Ontology::Type(std::string_view type) const {
  for (const OntologyEntry &e : event_types) {
    if (e.name == type) return e;
  }
  throw Error(ErrorKind::kUnknownEventType, std::string(type));
}

const std::vector<OntologyEntry> &Ontology::Roles(std::string_view type) const {
  static const std::vector<OntologyEntry> kNone;
  Type(type);
  auto it = roles_by_type.find(std::string(type));
  return it == roles_by_type.end() ? kNone : it->second;
}

const OntologyEntry &Ontology::Role(std::string_view type,
                                    std::string_view role) const {
  for (const OntologyEntry &e : Roles(type)) {
    if (e.name == role) return e;
  }
  throw Error(ErrorKind::kUnknownRole,
              std::string(role) + " for event type " + std::string(type));
}

std::set<std::string> Ontology::AllRoles() const {
  std::set<std::string> out;
  for (const auto &[type, roles] : roles_by_type) {
    for (const OntologyEntry &r : roles) out.insert(r.name);
  }
  return out;
}

const std::vector<std::string> &MaccrobatEventTypes() {
  static const std::vector<std::string> kTypes = {
      "Sign_symptom", "Diagnostic_procedure", "Therapeutic_procedure",
      "Disease_disorder", "Medication", "Clinical_event", "Lab_value",
      "Activity", "Other_event", "Outcome", "Date", "Time", "Duration"};
  return kTypes;
}

// ---------------------------------------------------------------------------
// Event derivation

namespace {

bool IsModify(std::string_view label) {
  if (label.size() != 6) return false;
  std::string lower(label);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return lower == "modify";
}

}  // namespace

AnnotatedDocument DeriveEvents(RawDocument doc,
                               const std::set<std::string> &event_types,
                               const DeriveOptions &options) {
  AnnotatedDocument out;
  bool use_frames = options.source == TriggerSource::kEventFrame ||
                    (options.source == TriggerSource::kAuto &&
                     !doc.event_frames.empty());

  // Event indices reachable from each E id and each trigger entity.
  std::unordered_map<std::string, size_t> frame_event;
  std::vector<std::vector<size_t>> events_of_entity(doc.entities.size());

  if (use_frames) {
    for (const RawEventFrame &f : doc.event_frames) {
      if (!event_types.count(f.type)) {
        if (options.frozen) {
          throw Error(ErrorKind::kUnknownEventType,
                      doc.doc_id + " " + f.id + ": " + f.type);
        }
      }
      auto idx = doc.ResolveEntity(f.trigger_id);
      if (!idx) {
        throw Error(ErrorKind::kDanglingReference, doc.doc_id + " " + f.id);
      }
      frame_event[f.id] = out.events.size();
      events_of_entity[*idx].push_back(out.events.size());
      out.events.push_back({*idx, f.type, {}});
    }
  } else {
    for (size_t i = 0; i < doc.entities.size(); ++i) {
      if (event_types.count(doc.entities[i].label)) {
        events_of_entity[i].push_back(out.events.size());
        out.events.push_back({i, doc.entities[i].label, {}});
      }
    }
  }

  auto events_for_id = [&](const std::string &id) -> std::vector<size_t> {
    if (auto it = frame_event.find(id); it != frame_event.end()) return {it->second};
    if (auto idx = doc.ResolveEntity(id)) return events_of_entity[*idx];
    return {};
  };

  for (const RawRelation &r : doc.relations) {
    if (!IsModify(r.label)) continue;
    std::vector<size_t> src_events = events_for_id(r.source_id);
    std::vector<size_t> dst_events = events_for_id(r.target_id);
    // Exactly one side must be an event; the other supplies the argument.
    if (src_events.empty() == dst_events.empty()) continue;
    const std::string &arg_id = src_events.empty() ? r.source_id : r.target_id;
    const std::vector<size_t> &targets = src_events.empty() ? dst_events : src_events;
    auto arg = doc.ResolveEntity(arg_id);
    if (!arg) continue;
    const std::string &role = doc.entities[*arg].label;
    for (size_t ev : targets) {
      auto &args = out.events[ev].args;
      std::pair<size_t, std::string> a{*arg, role};
      if (std::find(args.begin(), args.end(), a) == args.end()) args.push_back(a);
    }
  }
  out.doc = std::move(doc);
  return out;
}

// ---------------------------------------------------------------------------
// Sentence segmentation

namespace {

bool IsAbbreviation(std::string_view text, size_t period) {
  static const std::set<std::string> kGuard = {
      "dr.", "mr.", "mrs.", "ms.", "prof.", "vs.", "e.g.", "i.e.", "fig.",
      "figs.", "no.", "approx.", "st.", "jr.", "sr.", "al.", "ca.", "cf.",
      "nos.", "dept.", "mt."};
  size_t start = period;
  while (start > 0 && !IsSpace(text[start - 1])) --start;
  std::string tok(text.substr(start, period + 1 - start));
  while (!tok.empty() && (tok.front() == '(' || tok.front() == '"')) tok.erase(0, 1);
  std::transform(tok.begin(), tok.end(), tok.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (kGuard.count(tok)) return true;
  // Single-letter initials such as "J.".
  return tok.size() == 2 && std::isalpha(static_cast<unsigned char>(tok[0]));
}

std::vector<size_t> CandidateCuts(std::string_view text) {
  std::vector<size_t> cuts;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\n') {
      cuts.push_back(i);
    } else if (c == '.' || c == '?' || c == '!') {
      size_t j = i + 1;
      if (j >= text.size() || !IsSpace(text[j])) continue;
      while (j < text.size() && IsSpace(text[j])) ++j;
      if (j >= text.size() ||
          !std::isupper(static_cast<unsigned char>(text[j]))) {
        continue;
      }
      if (c == '.' && IsAbbreviation(text, i)) continue;
      cuts.push_back(i + 1);
    }
  }
  return cuts;
}

}  // namespace

Segmentation SegmentSentences(const AnnotatedDocument &adoc) {
  const RawDocument &doc = adoc.doc;
  const std::string &text = doc.text;
  Segmentation out;
  if (Trim(text).empty()) {
    out.dropped_cross_sentence = 0;
    for (const DocEvent &ev : adoc.events) {
      out.dropped_cross_sentence += static_cast<int>(ev.args.size());
    }
    return out;
  }

  std::vector<size_t> cuts;
  for (size_t c : CandidateCuts(text)) {
    bool crossed = std::any_of(doc.entities.begin(), doc.entities.end(),
                               [&](const RawEntity &e) {
                                 return e.span.begin() < c && c < e.span.end();
                               });
    if (!crossed) cuts.push_back(c);
  }
  std::vector<std::pair<size_t, size_t>> segments;
  size_t prev = 0;
  for (size_t c : cuts) {
    segments.emplace_back(prev, c);
    prev = c;
  }
  segments.emplace_back(prev, text.size());

  // Sentence index of each entity, -1 if it lands in dropped whitespace.
  std::vector<int> sentence_of(doc.entities.size(), -1);
  struct Bounds {
    size_t lo, hi;
  };
  std::vector<Bounds> bounds;
  for (auto [lo, hi] : segments) {
    size_t b = lo, e = hi;
    while (b < e && IsSpace(text[b])) ++b;
    while (e > b && IsSpace(text[e - 1])) --e;
    bool has_entity = false;
    for (const RawEntity &ent : doc.entities) {
      if (ent.span.begin() >= lo && ent.span.begin() < hi) {
        b = std::min(b, ent.span.begin());
        e = std::max(e, ent.span.end());
        has_entity = true;
      }
    }
    if (b >= e && !has_entity) continue;
    for (size_t i = 0; i < doc.entities.size(); ++i) {
      size_t s = doc.entities[i].span.begin();
      if (s >= lo && s < hi) sentence_of[i] = static_cast<int>(bounds.size());
    }
    bounds.push_back({b, e});
  }

  CharIndex doc_chars(text);
  for (size_t si = 0; si < bounds.size(); ++si) {
    SentenceInstance s;
    s.doc_id = doc.doc_id;
    s.sent_index = static_cast<int>(si);
    s.offset = doc_chars.ToChar(bounds[si].lo);
    s.text = text.substr(bounds[si].lo, bounds[si].hi - bounds[si].lo);
    out.sentences.push_back(std::move(s));
  }

  auto local = [&](size_t entity) {
    const RawEntity &e = doc.entities[entity];
    const SentenceInstance &s = out.sentences[sentence_of[entity]];
    long long lo = static_cast<long long>(bounds[sentence_of[entity]].lo);
    return MakeMention(s.text, e.span.Shifted(-lo), e.label);
  };
  for (size_t i = 0; i < doc.entities.size(); ++i) {
    if (sentence_of[i] >= 0) out.sentences[sentence_of[i]].entities.push_back(local(i));
  }
  for (const DocEvent &ev : adoc.events) {
    int si = sentence_of[ev.trigger];
    if (si < 0) {
      out.dropped_cross_sentence += static_cast<int>(ev.args.size());
      continue;
    }
    EventRecord rec;
    rec.trigger = local(ev.trigger);
    rec.event_type = ev.type;
    for (const auto &[entity, role] : ev.args) {
      if (sentence_of[entity] != si) {
        ++out.dropped_cross_sentence;
        continue;
      }
      rec.arguments.push_back({local(entity), role});
    }
    out.sentences[si].events.push_back(std::move(rec));
  }
  return out;
}

std::vector<SentenceInstance> SegmentSentences(const RawDocument &doc) {
  AnnotatedDocument adoc;
  adoc.doc = doc;
  return SegmentSentences(adoc).sentences;
}

// ---------------------------------------------------------------------------
// Ontology induction

OntologyBuild BuildOntology(const Dataset &corpus,
                            const std::map<std::string, std::string> &descriptions) {
  std::map<std::string, long> type_count;
  std::map<std::string, std::map<std::string, long>> role_count;
  for (const SentenceInstance &s : corpus) {
    for (const EventRecord &ev : s.events) {
      ++type_count[ev.event_type];
      auto &roles = role_count[ev.event_type];
      for (const ArgumentRecord &a : ev.arguments) ++roles[a.role];
    }
  }
  auto by_count = [](const std::map<std::string, long> &counts) {
    std::vector<std::pair<std::string, long>> v(counts.begin(), counts.end());
    std::stable_sort(v.begin(), v.end(), [](const auto &a, const auto &b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    return v;
  };

  OntologyBuild out;
  std::set<std::string> missing;
  auto describe = [&](const std::string &name, const char *kind) {
    auto it = descriptions.find(name);
    if (it != descriptions.end()) return it->second;
    missing.insert(std::string(kind) + " " + name);
    return std::string();
  };
  for (const auto &[type, n] : by_count(type_count)) {
    out.ontology.event_types.push_back({type, describe(type, "event type")});
    auto &roles = out.ontology.roles_by_type[type];
    for (const auto &[role, m] : by_count(role_count[type])) {
      roles.push_back({role, describe(role, "role")});
    }
  }
  out.missing_descriptions.assign(missing.begin(), missing.end());
  return out;
}

std::vector<std::string> CheckAgainstOntology(const Dataset &corpus,
                                              const Ontology &ontology) {
  std::vector<std::string> problems;
  for (const SentenceInstance &s : corpus) {
    for (const EventRecord &ev : s.events) {
      std::string where = s.doc_id + "#" + std::to_string(s.sent_index);
      if (!ontology.HasType(ev.event_type)) {
        problems.push_back(where + ": unknown event type " + ev.event_type);
        continue;
      }
      for (const ArgumentRecord &a : ev.arguments) {
        if (!ontology.HasRole(ev.event_type, a.role)) {
          problems.push_back(where + ": illegal role " + a.role + " for " +
                             ev.event_type);
        }
      }
    }
  }
  return problems;
}

// ---------------------------------------------------------------------------
// Splits

void SeededShuffle(std::vector<std::string> &items, uint64_t seed) {
  std::mt19937_64 gen(seed);
  for (size_t i = items.size(); i > 1; --i) {
    uint64_t range = i;
    uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    uint64_t r;
    do {
      r = gen();
    } while (r >= limit);
    std::swap(items[i - 1], items[r % range]);
  }
}

CorpusSplit SplitCorpus(std::vector<std::string> doc_ids, uint64_t seed) {
  std::sort(doc_ids.begin(), doc_ids.end());
  if (std::adjacent_find(doc_ids.begin(), doc_ids.end()) != doc_ids.end()) {
    throw Error(ErrorKind::kInvalidArgument, "duplicate document ids");
  }
  if (doc_ids.size() < 10) {
    throw Error(ErrorKind::kTooFewDocuments,
                "need at least 10 documents, got " + std::to_string(doc_ids.size()));
  }
  SeededShuffle(doc_ids, seed);
  size_t k = doc_ids.size() / 10;
  CorpusSplit split;
  split.seed = seed;
  split.dev.assign(doc_ids.begin(), doc_ids.begin() + k);
  split.test.assign(doc_ids.begin() + k, doc_ids.begin() + 2 * k);
  split.train.assign(doc_ids.begin() + 2 * k, doc_ids.end());
  for (auto *part : {&split.train, &split.dev, &split.test}) {
    std::sort(part->begin(), part->end());
  }
  return split;
}

std::vector<std::string> Downsample(const std::vector<std::string> &train_ids,
                                    double proportion, uint64_t seed) {
  if (!(proportion > 0.0 && proportion <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "proportion must be in (0, 1]");
  }
  size_t k = static_cast<size_t>(
      std::llround(proportion * static_cast<double>(train_ids.size())));
  if (k >= train_ids.size()) return train_ids;
  std::vector<std::string> shuffled = train_ids;
  SeededShuffle(shuffled, seed);
  std::set<std::string> keep(shuffled.begin(), shuffled.begin() + k);
  std::vector<std::string> out;
  for (const std::string &id : train_ids) {
    if (keep.count(id)) out.push_back(id);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Statistics

StatsTable ComputeStats(const Dataset &corpus) {
  std::set<std::string> docs, types, roles;
  double entities = 0, triggers = 0, arguments = 0;
  double entity_words = 0, trigger_words = 0, argument_words = 0;
  for (const SentenceInstance &s : corpus) {
    docs.insert(s.doc_id);
    for (const Mention &m : s.entities) {
      ++entities;
      entity_words += static_cast<double>(SplitWords(m.surface).size());
    }
    for (const EventRecord &ev : s.events) {
      types.insert(ev.event_type);
      ++triggers;
      trigger_words += static_cast<double>(SplitWords(ev.trigger.surface).size());
      for (const ArgumentRecord &a : ev.arguments) {
        roles.insert(a.role);
        ++arguments;
        argument_words += static_cast<double>(SplitWords(a.mention.surface).size());
      }
    }
  }
  double sentences = static_cast<double>(corpus.size());
  auto ratio = [](double a, double b) { return b > 0 ? a / b : 0.0; };
  return {
      {"unique_event_types", static_cast<double>(types.size()), true},
      {"unique_argument_roles", static_cast<double>(roles.size()), true},
      {"documents", static_cast<double>(docs.size()), true},
      {"sentences", sentences, true},
      {"entities", entities, true},
      {"triggers", triggers, true},
      {"arguments", arguments, true},
      {"avg_entities_per_sentence", ratio(entities, sentences), false},
      {"avg_events_per_sentence", ratio(triggers, sentences), false},
      {"avg_args_per_sentence", ratio(arguments, sentences), false},
      {"avg_args_per_event", ratio(arguments, triggers), false},
      {"avg_entity_length", ratio(entity_words, entities), false},
      {"avg_trigger_length", ratio(trigger_words, triggers), false},
      {"avg_argument_length", ratio(argument_words, arguments), false},
  };
}

double StatValue(const StatsTable &table, std::string_view metric) {
  for (const StatRow &r : table) {
    if (r.metric == metric) return r.value;
  }
  throw Error(ErrorKind::kInvalidArgument, "no statistic " + std::string(metric));
}

std::string FormatStats(const StatsTable &table) {
  std::string out;
  char buf[128];
  for (const StatRow &r : table) {
    if (r.integral) {
      std::snprintf(buf, sizeof(buf), "%-28s %10.0f\n", r.metric.c_str(), r.value);
    } else {
      std::snprintf(buf, sizeof(buf), "%-28s %10.2f\n", r.metric.c_str(), r.value);
    }
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Accessors

namespace {

void AddUnique(std::vector<Mention> &out, const Mention &m) {
  for (const Mention &x : out) {
    if (x.span == m.span) return;
  }
  out.push_back(m);
}

void SortPassageOrder(std::vector<Mention> &v) {
  std::stable_sort(v.begin(), v.end(), [](const Mention &a, const Mention &b) {
    return PassageOrderLess(a.span, b.span);
  });
}

}  // namespace

std::vector<Mention> GoldTriggers(const SentenceInstance &s) {
  std::vector<Mention> out;
  for (const EventRecord &ev : s.events) AddUnique(out, ev.trigger);
  SortPassageOrder(out);
  return out;
}

std::vector<Mention> GoldArguments(const SentenceInstance &s) {
  std::vector<Mention> out;
  for (const EventRecord &ev : s.events) {
    for (const ArgumentRecord &a : ev.arguments) AddUnique(out, a.mention);
  }
  SortPassageOrder(out);
  return out;
}

Dataset FilterDocs(const Dataset &corpus, const std::vector<std::string> &ids) {
  std::set<std::string> keep(ids.begin(), ids.end());
  Dataset out;
  for (const SentenceInstance &s : corpus) {
    if (keep.count(s.doc_id)) out.push_back(s);
  }
  return out;
}

std::vector<std::string> DocIds(const Dataset &corpus) {
  std::vector<std::string> ids;
  for (const SentenceInstance &s : corpus) {
    if (ids.empty() || ids.back() != s.doc_id) ids.push_back(s.doc_id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

// ---------------------------------------------------------------------------
// Serialization

std::string DatasetToJsonl(const Dataset &corpus) {
  std::string out;
  for (const SentenceInstance &s : corpus) {
    CharIndex chars(s.text);
    json j;
    j["doc_id"] = s.doc_id;
    j["sent_index"] = s.sent_index;
    j["offset"] = s.offset;
    j["text"] = s.text;
    j["entities"] = json::array();
    for (const Mention &m : s.entities) {
      j["entities"].push_back(internal::MentionToJson(m, chars));
    }
    j["events"] = json::array();
    for (const EventRecord &ev : s.events) {
      json e;
      e["trigger"] = internal::MentionToJson(ev.trigger, chars);
      e["event_type"] = ev.event_type;
      e["arguments"] = json::array();
      for (const ArgumentRecord &a : ev.arguments) {
        e["arguments"].push_back(
            {{"mention", internal::MentionToJson(a.mention, chars)}, {"role", a.role}});
      }
      j["events"].push_back(std::move(e));
    }
    out += j.dump() + "\n";
  }
  return out;
}

Dataset DatasetFromJsonl(std::string_view jsonl) {
  Dataset out;
  internal::ForEachJsonLine(jsonl, "dataset", [&](const json &j) {
    SentenceInstance s;
    s.doc_id = j.at("doc_id").get<std::string>();
    s.sent_index = j.at("sent_index").get<int>();
    s.offset = j.value("offset", size_t{0});
    s.text = j.at("text").get<std::string>();
    CharIndex chars(s.text);
    for (const json &m : j.at("entities")) {
      s.entities.push_back(internal::MentionFromJson(m, chars));
    }
    for (const json &e : j.at("events")) {
      EventRecord ev;
      ev.trigger = internal::MentionFromJson(e.at("trigger"), chars);
      ev.event_type = e.at("event_type").get<std::string>();
      for (const json &a : e.at("arguments")) {
        ev.arguments.push_back({internal::MentionFromJson(a.at("mention"), chars),
                                a.at("role").get<std::string>()});
      }
      s.events.push_back(std::move(ev));
    }
    out.push_back(std::move(s));
  });
  return out;
}

std::string OntologyToJson(const Ontology &ontology) {
  json j;
  j["event_types"] = json::array();
  j["roles"] = json::object();
  for (const OntologyEntry &t : ontology.event_types) {
    j["event_types"].push_back({{"name", t.name}, {"description", t.description}});
    json roles = json::array();
    auto it = ontology.roles_by_type.find(t.name);
    if (it != ontology.roles_by_type.end()) {
      for (const OntologyEntry &r : it->second) {
        roles.push_back({{"name", r.name}, {"description", r.description}});
      }
    }
    j["roles"][t.name] = std::move(roles);
  }
  return j.dump(2) + "\n";
}

Ontology OntologyFromJson(std::string_view text) {
  json j = internal::ParseJson(text, "ontology");
  Ontology o;
  try {
    for (const json &t : j.at("event_types")) {
      o.event_types.push_back(
          {t.at("name").get<std::string>(), t.value("description", "")});
    }
    for (const OntologyEntry &t : o.event_types) {
      auto &roles = o.roles_by_type[t.name];
      if (!j.at("roles").contains(t.name)) continue;
      for (const json &r : j.at("roles").at(t.name)) {
        roles.push_back({r.at("name").get<std::string>(), r.value("description", "")});
      }
    }
  } catch (const json::exception &e) {
    throw Error(ErrorKind::kInvalidArgument, std::string("ontology: ") + e.what());
  }
  return o;
}

std::map<std::string, std::string> DescriptionsFromJson(std::string_view text) {
  json j = internal::ParseJson(text, "descriptions");
  if (!j.is_object()) {
    throw Error(ErrorKind::kInvalidArgument, "descriptions must be a JSON object");
  }
  std::map<std::string, std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_string()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "description of " + it.key() + " is not a string");
    }
    out[it.key()] = it.value().get<std::string>();
  }
  return out;
}

std::string SplitToJson(const CorpusSplit &split) {
  json j = {{"train", split.train}, {"dev", split.dev}, {"test", split.test},
            {"seed", split.seed}};
  return j.dump(2) + "\n";
}

CorpusSplit SplitFromJson(std::string_view text) {
  json j = internal::ParseJson(text, "split");
  CorpusSplit s;
  try {
    s.train = j.at("train").get<std::vector<std::string>>();
    s.dev = j.at("dev").get<std::vector<std::string>>();
    s.test = j.at("test").get<std::vector<std::string>>();
    s.seed = j.value("seed", uint64_t{0});
  } catch (const json::exception &e) {
    throw Error(ErrorKind::kInvalidArgument, std::string("split: ") + e.what());
  }
  return s;
}

std::string StatsToJson(const StatsTable &table) {
  json j = json::object();
  for (const StatRow &r : table) {
    if (r.integral) {
      j[r.metric] = static_cast<long long>(std::llround(r.value));
    } else {
      j[r.metric] = r.value;
    }
  }
  return j.dump(2) + "\n";
}

}  // namespace clinee
