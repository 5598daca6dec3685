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

// Pipelined inference: standalone mention identification for candidate
// markers, event detection over every event type, then argument extraction
// over the roles of each predicted type.

#ifndef CLINEE_PIPELINE_H_
#define CLINEE_PIPELINE_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clinee/backend.h"
#include "clinee/dataset.h"
#include "clinee/prompt.h"
#include "clinee/span.h"

namespace clinee {

struct PredictedArgument {
  GroundedText mention;
  std::string role;

  bool operator==(const PredictedArgument &) const = default;
};

struct PredictedEvent {
  GroundedText trigger;
  std::string event_type;
  std::vector<PredictedArgument> arguments;

  bool operator==(const PredictedEvent &) const = default;
};

// Predictions for one sentence, one event per predicted (trigger, type)
// pair. The serialized form also lists the pairs as "predicted_triggers".
struct SentencePrediction {
  std::string doc_id;
  int sent_index = 0;
  std::string text;
  std::vector<PredictedEvent> events;

  bool operator==(const SentencePrediction &) const = default;
};

using PredictionSet = std::vector<SentencePrediction>;

// The gold annotation viewed as a prediction. Scoring it against the corpus
// is the identity.
PredictionSet GoldAsPrediction(const Dataset &corpus);

enum class Variant { kVanilla, kFull };
enum class MarkerSource { kNone, kStandaloneMi, kGold };

const char *VariantName(Variant v);
Variant VariantFromName(std::string_view name);
const char *MarkerSourceName(MarkerSource m);
MarkerSource MarkerSourceFromName(std::string_view name);

struct PipelineBackends {
  // Standalone MI for ED and EAE candidates; read only when markers come
  // from MI. One backend may serve both when the marker kinds agree.
  std::shared_ptr<GenerationBackend> mi_ed;
  std::shared_ptr<GenerationBackend> mi_eae;
  std::shared_ptr<GenerationBackend> ed;
  std::shared_ptr<GenerationBackend> eae;
};

struct PipelineConfig {
  Variant variant = Variant::kFull;
  MarkerSource markers = MarkerSource::kStandaloneMi;
  // Candidate kinds for ED and EAE markers when markers come from MI or gold.
  MentionKind ed_marker_kind = MentionKind::kTrigger;
  MentionKind eae_marker_kind = MentionKind::kArgument;
  CompileConfig mi;
  CompileConfig ed;
  CompileConfig eae;
  int num_beams = 2;
  int max_new_tokens = 30;
  int jobs = 1;  // backend calls in flight

  // Throws kInvalidArgument for the full variant without a marker source.
  void Validate() const;
};

// Sends `requests` to `backend` in up to `jobs` concurrent slices and returns
// outputs in request order, whatever order responses arrive in.
std::vector<std::string> GenerateAll(GenerationBackend &backend,
                                     const std::vector<GenRequest> &requests, int jobs);

// Candidate mentions per sentence: the union over the full passage and every
// window, one entry per grounded span (per surface for text-only outputs), in
// passage order.
std::vector<std::vector<GroundedText>> RunMiStage(const Dataset &sentences,
                                                  GenerationBackend &backend,
                                                  MentionKind kind,
                                                  const PipelineConfig &cfg);

struct PipelineStats {
  size_t mi_queries = 0;
  size_t ed_queries = 0;
  size_t eae_queries = 0;
};

// Only gold text, ids and (for gold markers) mentions are read from `corpus`;
// predictions never see gold events.
PredictionSet RunPipeline(const Dataset &corpus, const Ontology &ontology,
                          const PipelineBackends &backends, const PipelineConfig &cfg,
                          PipelineStats *stats = nullptr);

// One JSON object per sentence with "predicted_triggers" and
// "predicted_events"; spans in character offsets of the sentence text,
// null for text-only predictions.
std::string PredictionsToJsonl(const PredictionSet &pred);
PredictionSet PredictionsFromJsonl(std::string_view jsonl);

}  // namespace clinee

#endif  // CLINEE_PIPELINE_H_
