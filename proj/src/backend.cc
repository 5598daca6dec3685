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

#include "clinee/backend.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "clinee/common.h"
#include "clinee/decode.h"
#include "httplib.h"
#include "json_util.h"

namespace clinee {

using internal::json;

void GenRequest::Validate() const {
  if (num_beams < 1) throw Error(ErrorKind::kInvalidArgument, "num_beams must be >= 1");
  if (max_new_tokens < 1) {
    throw Error(ErrorKind::kInvalidArgument, "max_new_tokens must be >= 1");
  }
}

// ---------------------------------------------------------------------------
// Corruption

void CorruptionConfig::Validate() const {
  auto prob = [](double p, const char *name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorKind::kInvalidArgument, std::string(name) + " must be in [0, 1]");
    }
  };
  prob(drop_prob, "drop_prob");
  prob(jitter_prob, "jitter_prob");
  prob(confuse_type_prob, "confuse_type_prob");
  if (jitter_width < 1) throw Error(ErrorKind::kInvalidArgument, "jitter_width must be >= 1");
}

std::string CorruptionConfig::ToString() const {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "drop=%g,jitter=%g,width=%d,confuse=%g,seed=%llu",
                drop_prob, jitter_prob, jitter_width, confuse_type_prob,
                static_cast<unsigned long long>(seed));
  return buf;
}

CorruptionConfig CorruptionConfig::Parse(std::string_view text) {
  CorruptionConfig cfg;
  std::string s(text);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string_view kv = Trim(item);
    if (kv.empty()) continue;
    size_t eq = kv.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kInvalidArgument, "corruption item '" + std::string(kv) + "'");
    }
    std::string key(kv.substr(0, eq));
    std::string value(kv.substr(eq + 1));
    try {
      if (key == "drop") cfg.drop_prob = std::stod(value);
      else if (key == "jitter") cfg.jitter_prob = std::stod(value);
      else if (key == "width") cfg.jitter_width = std::stoi(value);
      else if (key == "confuse") cfg.confuse_type_prob = std::stod(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else throw Error(ErrorKind::kInvalidArgument, "unknown corruption knob " + key);
    } catch (const std::logic_error &) {
      throw Error(ErrorKind::kInvalidArgument, "bad value for " + key + ": " + value);
    }
  }
  cfg.Validate();
  return cfg;
}

namespace {

enum Draw : uint64_t { kDrawDrop = 1, kDrawJitter, kDrawJitterSide, kDrawJitterDelta,
                       kDrawConfuse, kDrawConfusePick };

uint64_t ItemKey(uint64_t key, size_t item, Draw draw) {
  return HashCombine(HashCombine(key, item), draw);
}

// Moves one boundary of `surface` by up to `width` words inside `passage`.
std::string JitterSurface(const std::string &surface, std::string_view passage,
                          int width, uint64_t key) {
  auto grounded = GroundSurfaces({surface}, passage);
  if (!grounded[0] || grounded[0]->discontinuous()) return surface;
  const SpanSet &span = *grounded[0];
  auto words = WordRanges(passage);
  int n = static_cast<int>(words.size());
  int first = -1, last = -1;
  for (int w = 0; w < n; ++w) {
    if (first < 0 && words[w].second > span.begin()) first = w;
    if (words[w].first < span.end()) last = w;
  }
  if (first < 0 || last < first) return surface;

  bool left = (Mix64(ItemKey(key, 0, kDrawJitterSide)) & 1) != 0;
  int magnitude = 1 + static_cast<int>(Mix64(ItemKey(key, 0, kDrawJitterDelta)) %
                                       static_cast<uint64_t>(width));
  bool extend = (Mix64(ItemKey(key, 1, kDrawJitterDelta)) & 1) != 0;
  int delta = extend ? magnitude : -magnitude;
  size_t lo = span.begin(), hi = span.end();
  if (left) {
    int w = std::clamp(first - delta, 0, last);
    lo = (w == first) ? lo : words[w].first;
  } else {
    int w = std::clamp(last + delta, first, n - 1);
    hi = (w == last) ? hi : words[w].second;
  }
  if (lo >= hi) return surface;
  return std::string(passage.substr(lo, hi - lo));
}

std::string RenderFor(Task task, std::string_view role, const std::vector<std::string> &items) {
  switch (task) {
    case Task::kMiTrigger:
    case Task::kMiArgument:
    case Task::kMiEntity: return RenderMentionTarget(items);
    case Task::kEd: return RenderTriggerTarget(items);
    case Task::kEae: return RenderArgumentTarget(role, items);
    case Task::kEdTyping:
      return "Event type is " + (items.empty() ? std::string(kTypePlaceholder) : items[0]) + ".";
    case Task::kEaeTyping:
      return "Argument role is " + (items.empty() ? std::string(kRolePlaceholder) : items[0]) +
             ".";
  }
  return {};
}

}  // namespace

std::string Corrupt(std::string_view gold_target, const CorruptionContext &ctx,
                    const CorruptionConfig &cfg) {
  if (cfg.IsIdentity()) return std::string(gold_target);
  ParsedOutput parsed = ParseOutput(ctx.task, gold_target, ctx.query_role);
  if (parsed.malformed) return std::string(gold_target);

  std::vector<std::string> items;
  const bool typing = ctx.task == Task::kEdTyping || ctx.task == Task::kEaeTyping;
  for (size_t i = 0; i < parsed.surfaces.size(); ++i) {
    std::string item = parsed.surfaces[i];
    if (UnitFromKey(ItemKey(ctx.key, i, kDrawDrop)) < cfg.drop_prob) continue;
    if (typing) {
      std::vector<std::string> others;
      for (const std::string &l : ctx.label_pool) {
        if (l != item) others.push_back(l);
      }
      if (!others.empty() &&
          UnitFromKey(ItemKey(ctx.key, i, kDrawConfuse)) < cfg.confuse_type_prob) {
        item = others[Mix64(ItemKey(ctx.key, i, kDrawConfusePick)) % others.size()];
      }
    } else if (UnitFromKey(ItemKey(ctx.key, i, kDrawJitter)) < cfg.jitter_prob) {
      item = JitterSurface(item, ctx.passage, cfg.jitter_width,
                           ItemKey(ctx.key, i, kDrawJitterSide));
    }
    items.push_back(std::move(item));
  }
  return RenderFor(ctx.task, ctx.query_role, items);
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

MentionKind KindOf(Task task) {
  switch (task) {
    case Task::kMiTrigger: return MentionKind::kTrigger;
    case Task::kMiArgument: return MentionKind::kArgument;
    default: return MentionKind::kEntity;
  }
}

std::optional<std::string> SegmentValue(const std::vector<std::string> &lines,
                                        std::string_view prefix) {
  for (const std::string &line : lines) {
    std::string_view l = line;
    if (l.substr(0, prefix.size()) == prefix && l.size() > prefix.size() + 1 &&
        l.back() == '.') {
      return std::string(l.substr(prefix.size(), l.size() - prefix.size() - 1));
    }
  }
  return std::nullopt;
}

std::vector<Fragment> PairTags(const StrippedText &st, std::string_view open,
                               std::string_view close, size_t limit) {
  std::vector<Fragment> out;
  size_t start = 0;
  bool is_open = false;
  for (const auto &[tag, pos] : st.tags) {
    if (pos > limit) break;
    if (tag == open) {
      start = pos;
      is_open = true;
    } else if (tag == close && is_open && pos > start) {
      out.push_back({start, pos});
      is_open = false;
    }
  }
  return out;
}

std::optional<SpanSet> ToSpan(std::vector<Fragment> frags) {
  if (frags.empty()) return std::nullopt;
  try {
    return SpanSet::FromFragments(std::move(frags));
  } catch (const Error &) {
    return std::nullopt;
  }
}

}  // namespace

OracleBackend::OracleBackend(Task task, Dataset gold, Ontology ontology,
                             CorruptionConfig corruption)
    : task_(task), gold_(std::move(gold)), ontology_(std::move(ontology)),
      corruption_(corruption) {
  corruption_.Validate();
  for (size_t i = 0; i < gold_.size(); ++i) by_text_.emplace(gold_[i].text, i);
}

std::string OracleBackend::Identity() const {
  return std::string("oracle:") + TaskName(task_) + ":" + corruption_.ToString();
}

OracleBackend::Located OracleBackend::Locate(std::string_view input_seq) const {
  Located loc;
  StrippedText st = StripMarkers(input_seq);
  loc.plain = st.text;
  std::vector<size_t> ends;
  for (size_t i = 0; i < loc.plain.size(); ++i) {
    if (loc.plain[i] == '\n') ends.push_back(i);
  }
  ends.push_back(loc.plain.size());
  for (auto it = ends.rbegin(); it != ends.rend(); ++it) {
    auto found = by_text_.find(loc.plain.substr(0, *it));
    if (found == by_text_.end()) continue;
    loc.sentence = &gold_[found->second];
    size_t end = *it;
    if (end < loc.plain.size()) {
      std::stringstream rest(loc.plain.substr(end + 1));
      std::string line;
      while (std::getline(rest, line, '\n')) loc.lines.push_back(line);
    }
    loc.trigger = PairTags(st, kTriggerOpen, kTriggerClose, end);
    loc.query = PairTags(st, kQueryOpen, kQueryClose, end);
    break;
  }
  if (!loc.sentence) {
    // Unknown passage: keep the segments so the query still gets its
    // placeholder answer.
    std::stringstream rest(loc.plain.substr(std::min(ends.front() + 1, loc.plain.size())));
    std::string line;
    while (std::getline(rest, line, '\n')) loc.lines.push_back(line);
  }
  return loc;
}

std::string OracleBackend::EffectiveType(const SentenceInstance &s,
                                         const EventRecord &ev) const {
  if (corruption_.confuse_type_prob <= 0 || ontology_.event_types.size() < 2) {
    return ev.event_type;
  }
  uint64_t key = HashCombine(corruption_.seed,
                             Fnv1a64(s.doc_id + "#" + std::to_string(s.sent_index) + "#" +
                                     ev.trigger.span.DebugString() + "#" + ev.event_type));
  if (UnitFromKey(ItemKey(key, 0, kDrawConfuse)) >= corruption_.confuse_type_prob) {
    return ev.event_type;
  }
  std::vector<std::string> others;
  for (const OntologyEntry &t : ontology_.event_types) {
    if (t.name != ev.event_type) others.push_back(t.name);
  }
  return others[Mix64(ItemKey(key, 0, kDrawConfusePick)) % others.size()];
}

std::string OracleBackend::EffectiveRole(const SentenceInstance &s, const EventRecord &ev,
                                         const ArgumentRecord &a) const {
  if (corruption_.confuse_type_prob <= 0 || !ontology_.HasType(ev.event_type)) return a.role;
  uint64_t key = HashCombine(
      corruption_.seed,
      Fnv1a64(s.doc_id + "#" + std::to_string(s.sent_index) + "#" +
              ev.trigger.span.DebugString() + "#" + a.mention.span.DebugString() + "#" + a.role));
  if (UnitFromKey(ItemKey(key, 0, kDrawConfuse)) >= corruption_.confuse_type_prob) return a.role;
  std::vector<std::string> others;
  for (const OntologyEntry &r : ontology_.Roles(ev.event_type)) {
    if (r.name != a.role) others.push_back(r.name);
  }
  if (others.empty()) return a.role;
  return others[Mix64(ItemKey(key, 0, kDrawConfusePick)) % others.size()];
}

std::string OracleBackend::AnswerMi(std::string_view input, uint64_t key, bool corrupt) const {
  const SentenceInstance *sentence = nullptr;
  size_t offset = 0;
  if (auto it = by_text_.find(std::string(input)); it != by_text_.end()) {
    sentence = &gold_[it->second];
  } else if (!input.empty()) {
    for (const SentenceInstance &s : gold_) {
      size_t pos = s.text.find(input);
      if (pos != std::string::npos) {
        sentence = &s;
        offset = pos;
        break;
      }
    }
  }
  std::vector<std::string> surfaces;
  if (sentence) {
    for (const Mention &m : GoldMentions(*sentence, KindOf(task_))) {
      if (m.span.Within(offset, offset + input.size())) surfaces.push_back(m.surface);
    }
  }
  std::string target = RenderMentionTarget(surfaces);
  if (!corrupt) return target;
  CorruptionContext ctx;
  ctx.task = task_;
  ctx.passage = input;
  ctx.key = key;
  return Corrupt(target, ctx, corruption_);
}

std::string OracleBackend::Answer(std::string_view input_seq, bool corrupt) const {
  const uint64_t key =
      HashCombine(corruption_.seed, Fnv1a64(StripCandidateMarkers(input_seq)));
  if (IsMentionTask(task_)) return AnswerMi(input_seq, key, corrupt);

  Located loc = Locate(input_seq);
  CorruptionContext ctx;
  ctx.task = task_;
  ctx.key = key;
  if (loc.sentence) ctx.passage = loc.sentence->text;
  const std::optional<std::string> type = SegmentValue(loc.lines, "Event type is ");
  const std::optional<std::string> role = SegmentValue(loc.lines, "Argument role is ");
  const std::optional<std::string> trigger_phrase = SegmentValue(loc.lines, "Event trigger is ");
  const std::optional<SpanSet> trigger_span = ToSpan(loc.trigger);
  const std::optional<SpanSet> query_span = ToSpan(loc.query);

  // Gold events the query refers to.
  auto matches_trigger = [&](const EventRecord &ev) {
    if (trigger_span) return ev.trigger.span == *trigger_span;
    return trigger_phrase && ev.trigger.surface == *trigger_phrase;
  };

  std::string target;
  switch (task_) {
    case Task::kEd: {
      if (!type) return "";
      std::vector<Mention> triggers;
      if (loc.sentence) {
        for (const EventRecord &ev : loc.sentence->events) {
          if (EffectiveType(*loc.sentence, ev) != *type) continue;
          if (std::none_of(triggers.begin(), triggers.end(),
                           [&](const Mention &m) { return m.span == ev.trigger.span; })) {
            triggers.push_back(ev.trigger);
          }
        }
      }
      std::stable_sort(triggers.begin(), triggers.end(), [](const Mention &a, const Mention &b) {
        return PassageOrderLess(a.span, b.span);
      });
      std::vector<std::string> surfaces;
      for (const Mention &m : triggers) surfaces.push_back(m.surface);
      target = RenderTriggerTarget(surfaces);
      break;
    }
    case Task::kEae: {
      if (!role) return "";
      ctx.query_role = *role;
      std::vector<Mention> args;
      if (loc.sentence) {
        for (const EventRecord &ev : loc.sentence->events) {
          if (!matches_trigger(ev) || (type && ev.event_type != *type)) continue;
          for (const ArgumentRecord &a : ev.arguments) {
            if (EffectiveRole(*loc.sentence, ev, a) != *role) continue;
            if (std::none_of(args.begin(), args.end(),
                             [&](const Mention &m) { return m.span == a.mention.span; })) {
              args.push_back(a.mention);
            }
          }
        }
      }
      std::stable_sort(args.begin(), args.end(), [](const Mention &a, const Mention &b) {
        return PassageOrderLess(a.span, b.span);
      });
      std::vector<std::string> surfaces;
      for (const Mention &m : args) surfaces.push_back(m.surface);
      target = RenderArgumentTarget(*role, surfaces);
      break;
    }
    case Task::kEdTyping: {
      std::vector<std::string> label;
      if (loc.sentence && query_span) {
        for (const EventRecord &ev : loc.sentence->events) {
          if (ev.trigger.span == *query_span) {
            label.push_back(ev.event_type);
            break;
          }
        }
      }
      for (const OntologyEntry &t : ontology_.event_types) ctx.label_pool.push_back(t.name);
      target = RenderFor(task_, "", label);
      break;
    }
    case Task::kEaeTyping: {
      std::vector<std::string> label;
      if (loc.sentence && query_span) {
        for (const EventRecord &ev : loc.sentence->events) {
          if (!matches_trigger(ev) || (type && ev.event_type != *type)) continue;
          for (const ArgumentRecord &a : ev.arguments) {
            if (a.mention.span == *query_span) {
              label.push_back(a.role);
              break;
            }
          }
          if (!label.empty()) break;
        }
      }
      if (type && ontology_.HasType(*type)) {
        for (const OntologyEntry &r : ontology_.Roles(*type)) ctx.label_pool.push_back(r.name);
      }
      target = RenderFor(task_, "", label);
      break;
    }
    default:
      break;
  }
  if (!corrupt) return target;
  return Corrupt(target, ctx, corruption_);
}

std::vector<GenResponse> OracleBackend::Generate(const std::vector<GenRequest> &batch) {
  std::vector<GenResponse> out;
  out.reserve(batch.size());
  for (const GenRequest &r : batch) {
    r.Validate();
    out.push_back({r.request_id, Answer(r.input_seq)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Replay and caching

namespace {

std::unordered_map<std::string, std::string> LoadCache(const std::string &path) {
  std::unordered_map<std::string, std::string> entries;
  internal::ForEachJsonLine(ReadFile(path), path, [&](const json &j) {
    entries[j.at("input").get<std::string>()] = j.at("output").get<std::string>();
  });
  return entries;
}

}  // namespace

std::string ReplayEntriesToJsonl(const std::vector<std::pair<std::string, std::string>> &rows) {
  std::string out;
  for (const auto &[input, output] : rows) {
    out += json{{"input", input}, {"output", output}}.dump() + "\n";
  }
  return out;
}

ReplayBackend::ReplayBackend(const std::string &path) : source_(path), entries_(LoadCache(path)) {}

ReplayBackend::ReplayBackend(std::unordered_map<std::string, std::string> entries)
    : source_("<memory>"), entries_(std::move(entries)) {}

std::vector<GenResponse> ReplayBackend::Generate(const std::vector<GenRequest> &batch) {
  std::vector<GenResponse> out;
  out.reserve(batch.size());
  for (const GenRequest &r : batch) {
    r.Validate();
    auto it = entries_.find(r.input_seq);
    if (it == entries_.end()) {
      throw Error(ErrorKind::kCacheMiss, "no cached output for request " + r.request_id);
    }
    out.push_back({r.request_id, it->second});
  }
  return out;
}

std::string ReplayBackend::Identity() const { return "replay:" + source_; }

CachingBackend::CachingBackend(std::shared_ptr<GenerationBackend> inner, std::string cache_path)
    : inner_(std::move(inner)), path_(std::move(cache_path)) {
  if (std::filesystem::exists(path_)) entries_ = LoadCache(path_);
}

std::vector<GenResponse> CachingBackend::Generate(const std::vector<GenRequest> &batch) {
  std::vector<GenRequest> misses;
  {
    std::lock_guard<std::mutex> lock(mu_);
    std::set<std::string> pending;
    for (const GenRequest &r : batch) {
      r.Validate();
      if (entries_.count(r.input_seq)) {
        ++hits_;
      } else if (pending.insert(r.input_seq).second) {
        misses.push_back(r);
      }
    }
  }
  if (!misses.empty()) {
    std::vector<GenResponse> fresh = inner_->Generate(misses);
    std::unordered_map<std::string, std::string> by_id;
    for (GenResponse &g : fresh) by_id[g.request_id] = std::move(g.output);
    std::vector<std::pair<std::string, std::string>> rows;
    for (const GenRequest &r : misses) {
      auto it = by_id.find(r.request_id);
      if (it == by_id.end()) {
        throw Error(ErrorKind::kBackendUnavailable, "no response for " + r.request_id);
      }
      rows.emplace_back(r.input_seq, it->second);
    }
    std::lock_guard<std::mutex> lock(mu_);
    std::filesystem::path parent = std::filesystem::path(path_).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (!out) throw Error(ErrorKind::kIo, "cannot append to " + path_);
    out << ReplayEntriesToJsonl(rows);
    out.flush();
    for (auto &[input, output] : rows) entries_[input] = output;
    misses_ += rows.size();
  }
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<GenResponse> out;
  out.reserve(batch.size());
  for (const GenRequest &r : batch) out.push_back({r.request_id, entries_.at(r.input_seq)});
  return out;
}

std::string CachingBackend::Identity() const {
  return "cached(" + inner_->Identity() + "," + path_ + ")";
}

// ---------------------------------------------------------------------------
// Remote

RemoteBackend::RemoteBackend(std::string base_url, RemoteOptions options)
    : base_url_(std::move(base_url)), options_(options) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  if (base_url_.empty()) throw Error(ErrorKind::kInvalidArgument, "empty backend URL");
  if (options_.batch_size < 1) options_.batch_size = 1;
  if (options_.max_inflight < 1) options_.max_inflight = 1;
}

std::string RemoteBackend::Identity() const { return "remote:" + base_url_; }

std::vector<std::string> RemoteBackend::PostBatch(
    const std::vector<const GenRequest *> &batch) const {
  json body;
  body["inputs"] = json::array();
  for (const GenRequest *r : batch) body["inputs"].push_back(r->input_seq);
  body["num_beams"] = batch.front()->num_beams;
  body["max_new_tokens"] = batch.front()->max_new_tokens;
  const std::string payload = body.dump();

  httplib::Client client(base_url_);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);
  client.set_write_timeout(options_.timeout);

  auto backoff = options_.initial_backoff;
  std::string last_error;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    auto res = client.Post("/v1/generate", payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) {
      json reply;
      try {
        reply = json::parse(res->body);
        auto outputs = reply.at("outputs").get<std::vector<std::string>>();
        if (outputs.size() != batch.size()) {
          throw Error(ErrorKind::kBackendUnavailable,
                      "expected " + std::to_string(batch.size()) + " outputs, got " +
                          std::to_string(outputs.size()));
        }
        return outputs;
      } catch (const json::exception &e) {
        throw Error(ErrorKind::kBackendUnavailable, std::string("bad response: ") + e.what());
      }
    }
    last_error = "HTTP " + std::to_string(res->status);
    bool transient = res->status >= 500 || res->status == 429;
    if (!transient) break;
  }
  throw Error(ErrorKind::kBackendUnavailable, base_url_ + ": " + last_error);
}

std::vector<GenResponse> RemoteBackend::Generate(const std::vector<GenRequest> &batch) {
  // Requests in one HTTP call share decoding parameters.
  std::map<std::pair<int, int>, std::vector<size_t>> groups;
  for (size_t i = 0; i < batch.size(); ++i) {
    batch[i].Validate();
    groups[{batch[i].num_beams, batch[i].max_new_tokens}].push_back(i);
  }
  std::vector<std::vector<size_t>> chunks;
  for (const auto &[params, idx] : groups) {
    for (size_t i = 0; i < idx.size(); i += options_.batch_size) {
      chunks.emplace_back(idx.begin() + static_cast<long>(i),
                          idx.begin() + static_cast<long>(std::min(idx.size(), i + options_.batch_size)));
    }
  }

  std::vector<std::string> outputs(batch.size());
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    while (true) {
      size_t c = next.fetch_add(1);
      if (c >= chunks.size()) return;
      {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (failure) return;
      }
      try {
        std::vector<const GenRequest *> reqs;
        for (size_t i : chunks[c]) reqs.push_back(&batch[i]);
        std::vector<std::string> got = PostBatch(reqs);
        for (size_t k = 0; k < chunks[c].size(); ++k) outputs[chunks[c][k]] = std::move(got[k]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  size_t nthreads = std::min(options_.max_inflight, chunks.size());
  std::vector<std::thread> threads;
  for (size_t t = 0; t < nthreads; ++t) threads.emplace_back(worker);
  for (std::thread &t : threads) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<GenResponse> out;
  out.reserve(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) out.push_back({batch[i].request_id, outputs[i]});
  return out;
}

}  // namespace clinee
