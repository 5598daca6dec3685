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

// Input/target sequence compilation for the generative extraction tasks.
//
// Sequence formats (segments are joined with "\n"):
//
//   MI   input  <passage or window>
//        target "Mentions are m1 [sep] m2"      | "Mentions are <mention>"
//   ED   input  <passage> / Event type is T. / <type description>
//        target "Event trigger is t1 [sep] t2"  | "Event trigger is <trigger>"
//   EAE  input  <passage with <trigger>..</trigger>> / Event type is T. /
//               <type description> / Event trigger is t. /
//               Argument role is R. / <role description>
//        target "R is a1 [sep] a2"              | "R is <argument>"
//
// Candidate mentions are wrapped in "<m>".."</m>" when markers are enabled.

#ifndef CLINEE_PROMPT_H_
#define CLINEE_PROMPT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clinee/dataset.h"
#include "clinee/span.h"

namespace clinee {

inline constexpr std::string_view kSep = "[sep]";
inline constexpr std::string_view kMarkerOpen = "<m>";
inline constexpr std::string_view kMarkerClose = "</m>";
inline constexpr std::string_view kTriggerOpen = "<trigger>";
inline constexpr std::string_view kTriggerClose = "</trigger>";
inline constexpr std::string_view kQueryOpen = "<query>";
inline constexpr std::string_view kQueryClose = "</query>";
inline constexpr std::string_view kMentionPlaceholder = "<mention>";
inline constexpr std::string_view kTriggerPlaceholder = "<trigger>";
inline constexpr std::string_view kArgumentPlaceholder = "<argument>";
inline constexpr std::string_view kTypePlaceholder = "<Type>";
inline constexpr std::string_view kRolePlaceholder = "<Role>";

enum class Task {
  kMiTrigger,
  kMiArgument,
  kMiEntity,
  kEd,
  kEae,
  kEdTyping,
  kEaeTyping,
};

const char *TaskName(Task task);
Task TaskFromName(std::string_view name);
bool IsMentionTask(Task task);

enum class MentionKind { kEntity, kTrigger, kArgument };

const char *MentionKindName(MentionKind kind);
MentionKind MentionKindFromName(std::string_view name);
Task MiTaskFor(MentionKind kind);

enum class MarkerMode { kNone, kGold, kPredicted };
enum class CompileMode { kTrain, kInference };
enum class Polarity { kPositive, kNegative };

// Optional prompt segments; all enabled by default.
struct SegmentToggles {
  bool type_name = true;
  bool type_description = true;
  bool trigger_marker = true;
  bool trigger_phrase = true;
  bool role_name = true;
  bool role_description = true;

  // Accepts type_name, type_description, trigger_marker, trigger_phrase,
  // role_name, role_description.
  void Disable(std::string_view segment);
  std::vector<std::string> Enabled() const;
};

struct CompileConfig {
  int window_size = 10;  // words
  int window_step = 4;   // words
  int neg_ratio = 10;
  MentionKind mention_kind = MentionKind::kTrigger;
  SegmentToggles segments;
  MarkerMode marker_mode = MarkerMode::kNone;
  bool augmentation = false;
  CompileMode mode = CompileMode::kInference;
  uint64_t seed = 0;

  // Throws kInvalidArgument on window_step > window_size, non-positive
  // window sizes or negative neg_ratio.
  void Validate() const;
};

struct PromptMeta {
  std::string doc_id;
  int sent_index = 0;
  std::optional<std::pair<int, int>> window;  // [start_word, end_word)
  size_t window_offset = 0;  // byte offset of the window in the sentence
  std::optional<std::string> query_event_type;
  std::optional<std::string> query_role;
  std::optional<Mention> trigger;
  std::optional<Mention> candidate;

  bool operator==(const PromptMeta &) const = default;
};

struct PromptInstance {
  Task task = Task::kEd;
  std::string input_seq;
  std::string target_seq;
  PromptMeta meta;
  Polarity polarity = Polarity::kNegative;

  bool operator==(const PromptInstance &) const = default;
};

// ---------------------------------------------------------------------------
// Markers

struct SpanWrap {
  SpanSet span;
  std::string_view open;
  std::string_view close;
};

// Wraps every fragment of every span. Spans that share a position nest with
// the wider one outside; earlier entries in `wraps` win exact ties.
std::string WrapSpans(std::string_view text, const std::vector<SpanWrap> &wraps);

// Wraps each mention's fragments in "<m>".."</m>". Throws
// kUngroundedMention if a mention's span does not lie in `text` or its
// surface disagrees with the text there.
std::string InjectMarkers(std::string_view text, const std::vector<Mention> &mentions);

struct StrippedText {
  std::string text;
  // Removed tag and its offset in `text`.
  std::vector<std::pair<std::string, size_t>> tags;
};

// Deletes every marker, trigger and query tag.
StrippedText StripMarkers(std::string_view text);
// Deletes only "<m>"/"</m>".
std::string StripCandidateMarkers(std::string_view text);

// ---------------------------------------------------------------------------
// Windows

// Word windows [start, end) over a passage of `num_words` words. The final
// window is clamped to end at the last word; a passage shorter than the
// window yields one window.
std::vector<std::pair<int, int>> SlidingWindows(int num_words, int size, int step);

// ---------------------------------------------------------------------------
// Compilation

// Gold mentions of `kind`, deduplicated by span, in passage order.
std::vector<Mention> GoldMentions(const SentenceInstance &s, MentionKind kind);

std::string RenderMentionTarget(const std::vector<std::string> &surfaces);
std::string RenderTriggerTarget(const std::vector<std::string> &surfaces);
std::string RenderArgumentTarget(std::string_view role,
                                 const std::vector<std::string> &surfaces);

// Full passage first, then one instance per window.
std::vector<PromptInstance> CompileMi(const SentenceInstance &s,
                                      const CompileConfig &cfg);

// `predicted` supplies candidate markers when cfg.marker_mode is kPredicted;
// only grounded candidates are marked.
std::vector<PromptInstance> CompileEd(const SentenceInstance &s,
                                      const Ontology &ontology,
                                      const CompileConfig &cfg,
                                      const std::vector<GroundedText> &predicted = {});

// `event` may be a predicted event; its type selects the queried roles.
std::vector<PromptInstance> CompileEae(const SentenceInstance &s,
                                       const EventRecord &event,
                                       const Ontology &ontology,
                                       const CompileConfig &cfg,
                                       const std::vector<GroundedText> &predicted = {});

// Duplicates every ED/EAE instance into a marked and an unmarked twin with
// the same target. Identity unless cfg.augmentation is on.
std::vector<PromptInstance> AugmentTraining(const std::vector<PromptInstance> &instances,
                                            const CompileConfig &cfg);

// ED_TYPING without `context`, EAE_TYPING with it.
PromptInstance CompileTyping(const SentenceInstance &s, const Mention &candidate,
                             const std::optional<EventRecord> &context,
                             const Ontology &ontology,
                             const SegmentToggles &segments = {});

struct TrainingExportConfig {
  CompileConfig ed;   // mention_kind doubles as the auxiliary MI kind
  CompileConfig eae;
  bool include_mi = true;
  bool include_ed = true;
  bool include_eae = true;
};

// Training instances for one sentence: auxiliary MI instances interleaved
// with ED and EAE instances over the gold events, augmented per config.
std::vector<PromptInstance> CompileTrainingSet(const SentenceInstance &s,
                                               const Ontology &ontology,
                                               const TrainingExportConfig &cfg);

// One JSON object; mention offsets are characters of `sentence_text`.
std::string PromptToJson(const PromptInstance &p, std::string_view sentence_text);

}  // namespace clinee

#endif  // CLINEE_PROMPT_H_
