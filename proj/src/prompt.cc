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

#include "clinee/prompt.h"

#include <algorithm>
#include <tuple>

#include "clinee/common.h"
#include "json_util.h"

namespace clinee {

using internal::json;

const char *TaskName(Task task) {
  switch (task) {
    case Task::kMiTrigger: return "MI_TRIGGER";
    case Task::kMiArgument: return "MI_ARGUMENT";
    case Task::kMiEntity: return "MI_ENTITY";
    case Task::kEd: return "ED";
    case Task::kEae: return "EAE";
    case Task::kEdTyping: return "ED_TYPING";
    case Task::kEaeTyping: return "EAE_TYPING";
  }
  return "?";
}

Task TaskFromName(std::string_view name) {
  for (Task t : {Task::kMiTrigger, Task::kMiArgument, Task::kMiEntity, Task::kEd,
                 Task::kEae, Task::kEdTyping, Task::kEaeTyping}) {
    if (name == TaskName(t)) return t;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown task " + std::string(name));
}

bool IsMentionTask(Task task) {
  return task == Task::kMiTrigger || task == Task::kMiArgument ||
         task == Task::kMiEntity;
}

const char *MentionKindName(MentionKind kind) {
  switch (kind) {
    case MentionKind::kEntity: return "entity";
    case MentionKind::kTrigger: return "trigger";
    case MentionKind::kArgument: return "argument";
  }
  return "?";
}

MentionKind MentionKindFromName(std::string_view name) {
  if (name == "entity") return MentionKind::kEntity;
  if (name == "trigger") return MentionKind::kTrigger;
  if (name == "argument") return MentionKind::kArgument;
  throw Error(ErrorKind::kInvalidArgument, "unknown mention kind " + std::string(name));
}

Task MiTaskFor(MentionKind kind) {
  switch (kind) {
    case MentionKind::kEntity: return Task::kMiEntity;
    case MentionKind::kTrigger: return Task::kMiTrigger;
    case MentionKind::kArgument: return Task::kMiArgument;
  }
  return Task::kMiEntity;
}

void SegmentToggles::Disable(std::string_view segment) {
  if (segment == "type_name") type_name = false;
  else if (segment == "type_description") type_description = false;
  else if (segment == "trigger_marker") trigger_marker = false;
  else if (segment == "trigger_phrase") trigger_phrase = false;
  else if (segment == "role_name") role_name = false;
  else if (segment == "role_description") role_description = false;
  else throw Error(ErrorKind::kInvalidArgument, "unknown segment " + std::string(segment));
}

std::vector<std::string> SegmentToggles::Enabled() const {
  std::vector<std::string> out;
  if (type_name) out.push_back("type_name");
  if (type_description) out.push_back("type_description");
  if (trigger_marker) out.push_back("trigger_marker");
  if (trigger_phrase) out.push_back("trigger_phrase");
  if (role_name) out.push_back("role_name");
  if (role_description) out.push_back("role_description");
  return out;
}

void CompileConfig::Validate() const {
  if (window_size < 1 || window_step < 1) {
    throw Error(ErrorKind::kInvalidArgument, "window size and step must be positive");
  }
  if (window_step > window_size) {
    throw Error(ErrorKind::kInvalidArgument, "window step exceeds window size");
  }
  if (neg_ratio < 0) throw Error(ErrorKind::kInvalidArgument, "negative neg_ratio");
}

// ---------------------------------------------------------------------------
// Markers

std::string WrapSpans(std::string_view text, const std::vector<SpanWrap> &wraps) {
  struct Insert {
    size_t pos;
    int is_open;  // closes sort first
    long long a, b;
    std::string_view tag;
  };
  std::vector<Insert> inserts;
  for (size_t k = 0; k < wraps.size(); ++k) {
    const long long idx = static_cast<long long>(k);
    for (const Fragment &f : wraps[k].span.fragments()) {
      if (f.end > text.size()) {
        throw Error(ErrorKind::kUngroundedMention,
                    "span " + wraps[k].span.DebugString() + " outside passage");
      }
      // Opens: wider first, then earlier wrap. Closes: mirror image.
      inserts.push_back({f.start, 1, -static_cast<long long>(f.end), idx, wraps[k].open});
      inserts.push_back({f.end, 0, -static_cast<long long>(f.start), -idx, wraps[k].close});
    }
  }
  std::sort(inserts.begin(), inserts.end(), [](const Insert &x, const Insert &y) {
    return std::tie(x.pos, x.is_open, x.a, x.b) < std::tie(y.pos, y.is_open, y.a, y.b);
  });
  std::string out;
  out.reserve(text.size() + inserts.size() * 4);
  size_t cursor = 0;
  for (const Insert &ins : inserts) {
    out.append(text.substr(cursor, ins.pos - cursor));
    out.append(ins.tag);
    cursor = ins.pos;
  }
  out.append(text.substr(cursor));
  return out;
}

std::string InjectMarkers(std::string_view text, const std::vector<Mention> &mentions) {
  std::vector<SpanWrap> wraps;
  for (const Mention &m : mentions) {
    if (m.span.empty() || m.span.end() > text.size() ||
        m.span.JoinedText(text) != m.surface) {
      throw Error(ErrorKind::kUngroundedMention, "'" + m.surface + "' at " +
                                                     m.span.DebugString());
    }
    wraps.push_back({m.span, kMarkerOpen, kMarkerClose});
  }
  return WrapSpans(text, wraps);
}

StrippedText StripMarkers(std::string_view text) {
  static const std::string_view kTags[] = {kMarkerOpen, kMarkerClose, kTriggerOpen,
                                           kTriggerClose, kQueryOpen, kQueryClose};
  StrippedText out;
  out.text.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    bool matched = false;
    if (text[i] == '<') {
      for (std::string_view tag : kTags) {
        if (text.substr(i, tag.size()) == tag) {
          out.tags.emplace_back(std::string(tag), out.text.size());
          i += tag.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) out.text.push_back(text[i++]);
  }
  return out;
}

std::string StripCandidateMarkers(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    if (text.substr(i, kMarkerOpen.size()) == kMarkerOpen) {
      i += kMarkerOpen.size();
    } else if (text.substr(i, kMarkerClose.size()) == kMarkerClose) {
      i += kMarkerClose.size();
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Windows

std::vector<std::pair<int, int>> SlidingWindows(int num_words, int size, int step) {
  if (size < 1 || step < 1) {
    throw Error(ErrorKind::kInvalidArgument, "window size and step must be positive");
  }
  if (num_words <= size) return {{0, std::max(num_words, 0)}};
  int count = 1 + (num_words - size + step - 1) / step;
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) {
    int start = std::min(k * step, num_words - size);
    out.emplace_back(start, start + size);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Targets

namespace {

std::string RenderList(std::string_view prefix, const std::vector<std::string> &surfaces,
                       std::string_view placeholder) {
  std::string out(prefix);
  out.push_back(' ');
  if (surfaces.empty()) {
    out.append(placeholder);
    return out;
  }
  for (size_t i = 0; i < surfaces.size(); ++i) {
    if (i > 0) {
      out.push_back(' ');
      out.append(kSep);
      out.push_back(' ');
    }
    out.append(surfaces[i]);
  }
  return out;
}

std::vector<std::string> Surfaces(const std::vector<Mention> &mentions) {
  std::vector<std::string> out;
  out.reserve(mentions.size());
  for (const Mention &m : mentions) out.push_back(m.surface);
  return out;
}

void SortUniqueBySpan(std::vector<Mention> &v) {
  std::stable_sort(v.begin(), v.end(), [](const Mention &a, const Mention &b) {
    return PassageOrderLess(a.span, b.span);
  });
  v.erase(std::unique(v.begin(), v.end(),
                      [](const Mention &a, const Mention &b) { return a.span == b.span; }),
          v.end());
}

uint64_t SentenceKey(const SentenceInstance &s, uint64_t seed) {
  return HashCombine(HashCombine(seed, Fnv1a64(s.doc_id)),
                     static_cast<uint64_t>(s.sent_index));
}

// Positive names in `universe` order plus min(ratio * p, n - p) sampled
// negatives, kept in `universe` order.
std::vector<std::string> SampleQueries(const std::vector<std::string> &universe,
                                       const std::set<std::string> &positive,
                                       int ratio, uint64_t key) {
  std::vector<std::string> negatives;
  for (const std::string &name : universe) {
    if (!positive.count(name)) negatives.push_back(name);
  }
  size_t p = universe.size() - negatives.size();
  size_t want = std::min(static_cast<size_t>(ratio) * p, negatives.size());
  SeededShuffle(negatives, key);
  std::set<std::string> chosen(negatives.begin(), negatives.begin() + want);
  std::vector<std::string> out;
  for (const std::string &name : universe) {
    if (positive.count(name) || chosen.count(name)) out.push_back(name);
  }
  return out;
}

std::vector<Mention> MarkerMentions(const SentenceInstance &s, const CompileConfig &cfg,
                                    const std::vector<GroundedText> &predicted) {
  switch (cfg.marker_mode) {
    case MarkerMode::kNone: return {};
    case MarkerMode::kGold: return GoldMentions(s, cfg.mention_kind);
    case MarkerMode::kPredicted: {
      std::vector<Mention> out;
      for (const GroundedText &g : predicted) {
        if (g.span && g.span->end() <= s.text.size()) {
          out.push_back(MakeMention(s.text, *g.span, ""));
        }
      }
      SortUniqueBySpan(out);
      return out;
    }
  }
  return {};
}

void AppendSegment(std::string &seq, std::string_view segment) {
  if (segment.empty()) return;
  seq.push_back('\n');
  seq.append(segment);
}

std::string Sentence(std::string_view prefix, std::string_view value) {
  std::string out(prefix);
  out.append(value);
  out.push_back('.');
  return out;
}

void CheckGrounded(const SentenceInstance &s, const Mention &m) {
  if (m.span.empty() || m.span.end() > s.text.size() ||
      m.span.JoinedText(s.text) != m.surface) {
    throw Error(ErrorKind::kUngroundedMention,
                "'" + m.surface + "' in " + s.doc_id + "#" + std::to_string(s.sent_index));
  }
}

}  // namespace

std::string RenderMentionTarget(const std::vector<std::string> &surfaces) {
  return RenderList("Mentions are", surfaces, kMentionPlaceholder);
}

std::string RenderTriggerTarget(const std::vector<std::string> &surfaces) {
  return RenderList("Event trigger is", surfaces, kTriggerPlaceholder);
}

std::string RenderArgumentTarget(std::string_view role,
                                 const std::vector<std::string> &surfaces) {
  return RenderList(std::string(role) + " is", surfaces, kArgumentPlaceholder);
}

std::vector<Mention> GoldMentions(const SentenceInstance &s, MentionKind kind) {
  switch (kind) {
    case MentionKind::kTrigger: return GoldTriggers(s);
    case MentionKind::kArgument: return GoldArguments(s);
    case MentionKind::kEntity: {
      std::vector<Mention> out = s.entities;
      SortUniqueBySpan(out);
      return out;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// MI

std::vector<PromptInstance> CompileMi(const SentenceInstance &s, const CompileConfig &cfg) {
  cfg.Validate();
  const std::vector<Mention> gold = GoldMentions(s, cfg.mention_kind);
  const Task task = MiTaskFor(cfg.mention_kind);
  const auto words = WordRanges(s.text);

  auto make = [&](size_t lo, size_t hi, std::optional<std::pair<int, int>> window) {
    PromptInstance p;
    p.task = task;
    p.input_seq = s.text.substr(lo, hi - lo);
    std::vector<std::string> surfaces;
    for (const Mention &m : gold) {
      if (m.span.Within(lo, hi)) surfaces.push_back(m.surface);
    }
    p.target_seq = RenderMentionTarget(surfaces);
    p.polarity = surfaces.empty() ? Polarity::kNegative : Polarity::kPositive;
    p.meta.doc_id = s.doc_id;
    p.meta.sent_index = s.sent_index;
    p.meta.window = window;
    p.meta.window_offset = lo;
    return p;
  };

  std::vector<PromptInstance> out;
  out.push_back(make(0, s.text.size(), std::nullopt));
  for (auto [first, last] : SlidingWindows(static_cast<int>(words.size()),
                                           cfg.window_size, cfg.window_step)) {
    size_t lo = first < last ? words[first].first : 0;
    size_t hi = first < last ? words[last - 1].second : 0;
    out.push_back(make(lo, hi, std::make_pair(first, last)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// ED

std::vector<PromptInstance> CompileEd(const SentenceInstance &s, const Ontology &ontology,
                                      const CompileConfig &cfg,
                                      const std::vector<GroundedText> &predicted) {
  cfg.Validate();
  for (const EventRecord &ev : s.events) ontology.Type(ev.event_type);

  const std::string passage = InjectMarkers(s.text, MarkerMentions(s, cfg, predicted));
  std::vector<std::string> universe;
  for (const OntologyEntry &t : ontology.event_types) universe.push_back(t.name);

  std::vector<std::string> queries = universe;
  if (cfg.mode == CompileMode::kTrain) {
    std::set<std::string> positive;
    for (const EventRecord &ev : s.events) positive.insert(ev.event_type);
    queries = SampleQueries(universe, positive, cfg.neg_ratio, SentenceKey(s, cfg.seed));
  }

  std::vector<PromptInstance> out;
  for (const std::string &type : queries) {
    const OntologyEntry &entry = ontology.Type(type);
    PromptInstance p;
    p.task = Task::kEd;
    p.input_seq = passage;
    if (cfg.segments.type_name) AppendSegment(p.input_seq, Sentence("Event type is ", type));
    if (cfg.segments.type_description) AppendSegment(p.input_seq, entry.description);
    std::vector<Mention> triggers;
    for (const EventRecord &ev : s.events) {
      if (ev.event_type == type) triggers.push_back(ev.trigger);
    }
    SortUniqueBySpan(triggers);
    p.target_seq = RenderTriggerTarget(Surfaces(triggers));
    p.polarity = triggers.empty() ? Polarity::kNegative : Polarity::kPositive;
    p.meta.doc_id = s.doc_id;
    p.meta.sent_index = s.sent_index;
    p.meta.query_event_type = type;
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// EAE

std::vector<PromptInstance> CompileEae(const SentenceInstance &s, const EventRecord &event,
                                       const Ontology &ontology, const CompileConfig &cfg,
                                       const std::vector<GroundedText> &predicted) {
  cfg.Validate();
  const OntologyEntry &type = ontology.Type(event.event_type);
  const std::vector<OntologyEntry> &roles = ontology.Roles(event.event_type);
  for (const ArgumentRecord &a : event.arguments) ontology.Role(event.event_type, a.role);

  std::vector<SpanWrap> wraps;
  if (cfg.segments.trigger_marker) {
    CheckGrounded(s, event.trigger);
    wraps.push_back({event.trigger.span, kTriggerOpen, kTriggerClose});
  }
  for (const Mention &m : MarkerMentions(s, cfg, predicted)) {
    CheckGrounded(s, m);
    wraps.push_back({m.span, kMarkerOpen, kMarkerClose});
  }
  const std::string passage = WrapSpans(s.text, wraps);

  std::vector<std::string> universe;
  for (const OntologyEntry &r : roles) universe.push_back(r.name);
  std::vector<std::string> queries = universe;
  if (cfg.mode == CompileMode::kTrain) {
    std::set<std::string> positive;
    for (const ArgumentRecord &a : event.arguments) positive.insert(a.role);
    uint64_t key = HashCombine(SentenceKey(s, cfg.seed),
                               Fnv1a64(event.trigger.span.DebugString() + event.event_type));
    queries = SampleQueries(universe, positive, cfg.neg_ratio, key);
  }

  std::vector<PromptInstance> out;
  for (const std::string &role : queries) {
    const OntologyEntry &role_entry = ontology.Role(event.event_type, role);
    PromptInstance p;
    p.task = Task::kEae;
    p.input_seq = passage;
    if (cfg.segments.type_name) {
      AppendSegment(p.input_seq, Sentence("Event type is ", event.event_type));
    }
    if (cfg.segments.type_description) AppendSegment(p.input_seq, type.description);
    if (cfg.segments.trigger_phrase) {
      AppendSegment(p.input_seq, Sentence("Event trigger is ", event.trigger.surface));
    }
    if (cfg.segments.role_name) AppendSegment(p.input_seq, Sentence("Argument role is ", role));
    if (cfg.segments.role_description) AppendSegment(p.input_seq, role_entry.description);

    std::vector<Mention> args;
    for (const ArgumentRecord &a : event.arguments) {
      if (a.role == role) args.push_back(a.mention);
    }
    SortUniqueBySpan(args);
    p.target_seq = RenderArgumentTarget(role, Surfaces(args));
    p.polarity = args.empty() ? Polarity::kNegative : Polarity::kPositive;
    p.meta.doc_id = s.doc_id;
    p.meta.sent_index = s.sent_index;
    p.meta.query_event_type = event.event_type;
    p.meta.query_role = role;
    p.meta.trigger = event.trigger;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<PromptInstance> AugmentTraining(const std::vector<PromptInstance> &instances,
                                            const CompileConfig &cfg) {
  if (!cfg.augmentation) return instances;
  if (cfg.marker_mode != MarkerMode::kGold) {
    throw Error(ErrorKind::kInvalidArgument, "augmentation requires gold markers");
  }
  std::vector<PromptInstance> out;
  out.reserve(instances.size() * 2);
  for (const PromptInstance &p : instances) {
    out.push_back(p);
    if (p.task == Task::kEd || p.task == Task::kEae) {
      PromptInstance twin = p;
      twin.input_seq = StripCandidateMarkers(p.input_seq);
      out.push_back(std::move(twin));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Typing

PromptInstance CompileTyping(const SentenceInstance &s, const Mention &candidate,
                             const std::optional<EventRecord> &context,
                             const Ontology &ontology, const SegmentToggles &segments) {
  CheckGrounded(s, candidate);
  PromptInstance p;
  p.meta.doc_id = s.doc_id;
  p.meta.sent_index = s.sent_index;
  p.meta.candidate = candidate;
  std::vector<SpanWrap> wraps = {{candidate.span, kQueryOpen, kQueryClose}};

  if (!context) {
    p.task = Task::kEdTyping;
    p.input_seq = WrapSpans(s.text, wraps);
    std::string type(kTypePlaceholder);
    for (const EventRecord &ev : s.events) {
      if (ev.trigger.span == candidate.span) {
        type = ev.event_type;
        break;
      }
    }
    p.target_seq = "Event type is " + type + ".";
    p.polarity = type == kTypePlaceholder ? Polarity::kNegative : Polarity::kPositive;
    return p;
  }

  const EventRecord &ev = *context;
  const OntologyEntry &type = ontology.Type(ev.event_type);
  CheckGrounded(s, ev.trigger);
  p.task = Task::kEaeTyping;
  if (segments.trigger_marker) wraps.push_back({ev.trigger.span, kTriggerOpen, kTriggerClose});
  p.input_seq = WrapSpans(s.text, wraps);
  if (segments.type_name) AppendSegment(p.input_seq, Sentence("Event type is ", ev.event_type));
  if (segments.type_description) AppendSegment(p.input_seq, type.description);
  if (segments.trigger_phrase) {
    AppendSegment(p.input_seq, Sentence("Event trigger is ", ev.trigger.surface));
  }
  std::string role(kRolePlaceholder);
  for (const ArgumentRecord &a : ev.arguments) {
    if (a.mention.span == candidate.span) {
      role = a.role;
      break;
    }
  }
  p.target_seq = "Argument role is " + role + ".";
  p.polarity = role == kRolePlaceholder ? Polarity::kNegative : Polarity::kPositive;
  p.meta.query_event_type = ev.event_type;
  p.meta.trigger = ev.trigger;
  return p;
}

// ---------------------------------------------------------------------------
// Training export

std::vector<PromptInstance> CompileTrainingSet(const SentenceInstance &s,
                                               const Ontology &ontology,
                                               const TrainingExportConfig &cfg) {
  std::vector<PromptInstance> out;
  auto append = [&](std::vector<PromptInstance> v) {
    out.insert(out.end(), std::make_move_iterator(v.begin()),
               std::make_move_iterator(v.end()));
  };
  if (cfg.include_ed) {
    if (cfg.include_mi) append(CompileMi(s, cfg.ed));
    append(AugmentTraining(CompileEd(s, ontology, cfg.ed), cfg.ed));
  }
  if (cfg.include_eae) {
    if (cfg.include_mi &&
        (!cfg.include_ed || cfg.eae.mention_kind != cfg.ed.mention_kind)) {
      append(CompileMi(s, cfg.eae));
    }
    for (const EventRecord &ev : s.events) {
      append(AugmentTraining(CompileEae(s, ev, ontology, cfg.eae), cfg.eae));
    }
  }
  return out;
}

std::string PromptToJson(const PromptInstance &p, std::string_view sentence_text) {
  CharIndex chars(sentence_text);
  json meta;
  meta["doc_id"] = p.meta.doc_id;
  meta["sent_index"] = p.meta.sent_index;
  meta["window"] = p.meta.window ? json::array({p.meta.window->first, p.meta.window->second})
                                 : json(nullptr);
  meta["query_event_type"] =
      p.meta.query_event_type ? json(*p.meta.query_event_type) : json(nullptr);
  meta["query_role"] = p.meta.query_role ? json(*p.meta.query_role) : json(nullptr);
  meta["trigger"] =
      p.meta.trigger ? internal::MentionToJson(*p.meta.trigger, chars) : json(nullptr);
  meta["candidate"] =
      p.meta.candidate ? internal::MentionToJson(*p.meta.candidate, chars) : json(nullptr);
  json j = {{"task", TaskName(p.task)},
            {"input_seq", p.input_seq},
            {"target_seq", p.target_seq},
            {"meta", std::move(meta)},
            {"polarity", p.polarity == Polarity::kPositive ? "positive" : "negative"}};
  return j.dump();
}

}  // namespace clinee
