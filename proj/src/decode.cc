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

#include "clinee/decode.h"

#include <algorithm>
#include <cctype>

#include "clinee/common.h"

namespace clinee {
namespace {

// Strips `prefix` followed by whitespace or end of text.
bool ConsumePrefix(std::string_view &text, std::string_view prefix) {
  if (text.substr(0, prefix.size()) != prefix) return false;
  if (text.size() > prefix.size() && !IsSpace(text[prefix.size()])) return false;
  text.remove_prefix(prefix.size());
  return true;
}

std::vector<std::string> SplitItems(std::string_view rest, std::string_view placeholder) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= rest.size()) {
    size_t pos = rest.find(kSep, start);
    size_t stop = pos == std::string_view::npos ? rest.size() : pos;
    std::string_view item = Trim(rest.substr(start, stop - start));
    if (!item.empty() && item != placeholder) out.emplace_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + kSep.size();
  }
  return out;
}

ParsedOutput Malformed(std::string why) {
  ParsedOutput out;
  out.malformed = std::move(why);
  return out;
}

ParsedOutput ParseLabel(std::string_view text, std::string_view prefix,
                        std::string_view placeholder) {
  if (!ConsumePrefix(text, prefix)) return Malformed("missing prefix '" + std::string(prefix) + "'");
  std::string_view label = Trim(text);
  if (!label.empty() && label.back() == '.') label = Trim(label.substr(0, label.size() - 1));
  ParsedOutput out;
  if (!label.empty() && label != placeholder) out.surfaces.emplace_back(label);
  return out;
}

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || (static_cast<unsigned char>(c) >= 0x80);
}

bool AtBoundary(std::string_view text, size_t pos, size_t len) {
  bool left = pos == 0 || !IsWordChar(text[pos - 1]) || !IsWordChar(text[pos]);
  size_t end = pos + len;
  bool right = end >= text.size() || !IsWordChar(text[end]) || !IsWordChar(text[end - 1]);
  return left && right;
}

size_t FindWord(std::string_view text, std::string_view word, size_t from) {
  while (from <= text.size()) {
    size_t pos = text.find(word, from);
    if (pos == std::string_view::npos) return pos;
    if (AtBoundary(text, pos, word.size())) return pos;
    from = pos + 1;
  }
  return std::string_view::npos;
}

// Greedy in-order match of the surface's words. Consecutive words separated
// by whitespace in `text` extend the current fragment; otherwise the next
// word opens a new fragment further right.
std::optional<SpanSet> MatchFragments(std::string_view surface, std::string_view text) {
  std::vector<std::string> words = SplitWords(surface);
  if (words.size() < 2) return std::nullopt;
  size_t from = 0;
  while (true) {
    size_t first = FindWord(text, words[0], from);
    if (first == std::string_view::npos) return std::nullopt;
    std::vector<Fragment> frags = {{first, first + words[0].size()}};
    bool ok = true;
    for (size_t w = 1; w < words.size(); ++w) {
      size_t cursor = frags.back().end;
      size_t p = cursor;
      while (p < text.size() && IsSpace(text[p])) ++p;
      if (p > cursor && text.substr(p, words[w].size()) == words[w] &&
          AtBoundary(text, p, words[w].size())) {
        frags.back().end = p + words[w].size();
        continue;
      }
      size_t next = FindWord(text, words[w], cursor + 1);
      if (next == std::string_view::npos) {
        ok = false;
        break;
      }
      frags.push_back({next, next + words[w].size()});
    }
    if (ok && frags.size() > 1) return SpanSet::FromFragments(std::move(frags));
    from = first + 1;
  }
}

}  // namespace

ParsedOutput ParseOutput(Task task, std::string_view text, std::string_view query_role) {
  text = Trim(text);
  switch (task) {
    case Task::kMiTrigger:
    case Task::kMiArgument:
    case Task::kMiEntity:
      if (!ConsumePrefix(text, "Mentions are")) return Malformed("missing prefix 'Mentions are'");
      return {SplitItems(text, kMentionPlaceholder), std::nullopt};
    case Task::kEd:
      if (!ConsumePrefix(text, "Event trigger is")) {
        return Malformed("missing prefix 'Event trigger is'");
      }
      return {SplitItems(text, kTriggerPlaceholder), std::nullopt};
    case Task::kEae: {
      if (query_role.empty()) return Malformed("no query role");
      std::string prefix = std::string(query_role) + " is";
      if (!ConsumePrefix(text, prefix)) {
        return Malformed("expected role reiteration '" + prefix + "'");
      }
      return {SplitItems(text, kArgumentPlaceholder), std::nullopt};
    }
    case Task::kEdTyping:
      return ParseLabel(text, "Event type is", kTypePlaceholder);
    case Task::kEaeTyping:
      return ParseLabel(text, "Argument role is", kRolePlaceholder);
  }
  return Malformed("unknown task");
}

std::vector<std::optional<SpanSet>> GroundSurfaces(const std::vector<std::string> &surfaces,
                                                   std::string_view text) {
  std::vector<std::optional<SpanSet>> out;
  std::vector<SpanSet> taken;
  auto is_taken = [&](const SpanSet &s) {
    return std::find(taken.begin(), taken.end(), s) != taken.end();
  };
  auto overlaps_taken = [&](const SpanSet &s) {
    return std::any_of(taken.begin(), taken.end(),
                       [&](const SpanSet &t) { return t.Overlaps(s); });
  };
  for (const std::string &surface : surfaces) {
    // Candidates by preference: whole-word and disjoint from earlier
    // groundings, whole-word, then inside a longer word.
    std::optional<SpanSet> best, nested, partial;
    if (!surface.empty()) {
      for (size_t pos = text.find(surface); pos != std::string_view::npos;
           pos = text.find(surface, pos + 1)) {
        SpanSet s(pos, pos + surface.size());
        if (is_taken(s)) continue;
        if (!AtBoundary(text, pos, surface.size())) {
          if (!partial) partial = s;
        } else if (!overlaps_taken(s)) {
          best = s;
          break;
        } else if (!nested) {
          nested = s;
        }
      }
    }
    if (!best) best = nested;
    if (!best && !surface.empty()) {
      std::optional<SpanSet> multi = MatchFragments(surface, text);
      if (multi && !is_taken(*multi)) best = multi;
    }
    if (!best) best = partial;
    if (best) taken.push_back(*best);
    out.push_back(best);
  }
  return out;
}

std::vector<GroundedText> DecodedOutput::Items() const {
  std::vector<GroundedText> out;
  for (size_t i = 0; i < surfaces.size(); ++i) out.push_back({surfaces[i], grounded[i]});
  return out;
}

DecodedOutput Decode(const PromptInstance &prompt, std::string_view output,
                     std::string_view sentence_text) {
  DecodedOutput d;
  d.task = prompt.task;
  d.meta = prompt.meta;
  ParsedOutput parsed = ParseOutput(prompt.task, output, prompt.meta.query_role.value_or(""));
  d.malformed = parsed.malformed;
  d.surfaces = std::move(parsed.surfaces);
  if (prompt.task == Task::kEdTyping || prompt.task == Task::kEaeTyping) {
    d.grounded.assign(d.surfaces.size(), std::nullopt);
    return d;
  }
  std::string_view passage = sentence_text;
  if (prompt.meta.window) {
    passage = sentence_text.substr(std::min(prompt.meta.window_offset, sentence_text.size()),
                                   prompt.input_seq.size());
  }
  d.grounded = GroundSurfaces(d.surfaces, passage);
  if (prompt.meta.window && prompt.meta.window_offset > 0) {
    for (auto &g : d.grounded) {
      if (g) g = g->Shifted(static_cast<long long>(prompt.meta.window_offset));
    }
  }
  return d;
}

}  // namespace clinee
