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

// Sentence-level event extraction corpus built from BRAT documents: typed
// triggers, MODIFY-derived arguments, the induced ontology, splits and
// corpus statistics.

#ifndef CLINEE_DATASET_H_
#define CLINEE_DATASET_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "clinee/brat.h"
#include "clinee/span.h"

namespace clinee {

// Span is local to the owning sentence.
struct Mention {
  SpanSet span;
  std::string surface;
  std::string label;

  bool operator==(const Mention &) const = default;
};

Mention MakeMention(std::string_view sentence_text, SpanSet span,
                    std::string label);

struct ArgumentRecord {
  Mention mention;
  std::string role;

  bool operator==(const ArgumentRecord &) const = default;
};

struct EventRecord {
  Mention trigger;
  std::string event_type;
  std::vector<ArgumentRecord> arguments;

  bool operator==(const EventRecord &) const = default;
};

struct SentenceInstance {
  std::string doc_id;
  int sent_index = 0;
  std::string text;
  size_t offset = 0;  // character offset of the sentence in its document
  std::vector<Mention> entities;
  std::vector<EventRecord> events;

  bool operator==(const SentenceInstance &) const = default;
};

using Dataset = std::vector<SentenceInstance>;

struct OntologyEntry {
  std::string name;
  std::string description;

  bool operator==(const OntologyEntry &) const = default;
};

class Ontology {
 public:
  std::vector<OntologyEntry> event_types;
  std::map<std::string, std::vector<OntologyEntry>> roles_by_type;

  bool HasType(std::string_view type) const;
  bool HasRole(std::string_view type, std::string_view role) const;
  // Throw kUnknownEventType / kUnknownRole.
  const OntologyEntry &Type(std::string_view type) const;
  const std::vector<OntologyEntry> &Roles(std::string_view type) const;
  const OntologyEntry &Role(std::string_view type, std::string_view role) const;
  std::set<std::string> AllRoles() const;
  size_t num_event_types() const { return event_types.size(); }

  bool operator==(const Ontology &) const = default;
};

// The thirteen MACCROBAT event types.
const std::vector<std::string> &MaccrobatEventTypes();

enum class TriggerSource {
  kAuto,        // E frames when the document has any, labels otherwise
  kLabel,       // every T entity whose label is an event type is a trigger
  kEventFrame,  // the T entity cited by each E frame is a trigger
};

struct DeriveOptions {
  TriggerSource source = TriggerSource::kAuto;
  // When true, E frames with types outside the event type set raise
  // kUnknownEventType; otherwise their types are accepted.
  bool frozen = false;
};

// Document-level events, pointing into RawDocument::entities.
struct DocEvent {
  size_t trigger = 0;
  std::string type;
  std::vector<std::pair<size_t, std::string>> args;  // (entity index, role)

  bool operator==(const DocEvent &) const = default;
};

struct AnnotatedDocument {
  RawDocument doc;
  std::vector<DocEvent> events;
};

AnnotatedDocument DeriveEvents(RawDocument doc,
                               const std::set<std::string> &event_types,
                               const DeriveOptions &options = {});

struct Segmentation {
  std::vector<SentenceInstance> sentences;
  // MODIFY-derived arguments whose trigger lies in another sentence.
  int dropped_cross_sentence = 0;
};

// Splits on `.?!` + whitespace + capital, and at newlines, unless an
// abbreviation guard applies or an annotated span crosses the cut.
Segmentation SegmentSentences(const AnnotatedDocument &doc);
std::vector<SentenceInstance> SegmentSentences(const RawDocument &doc);

struct OntologyBuild {
  Ontology ontology;
  std::vector<std::string> missing_descriptions;
};

OntologyBuild BuildOntology(const Dataset &corpus,
                            const std::map<std::string, std::string> &descriptions);

// Returns the problems found; empty when every event type and role is legal.
std::vector<std::string> CheckAgainstOntology(const Dataset &corpus,
                                              const Ontology &ontology);

struct CorpusSplit {
  std::vector<std::string> train, dev, test;
  uint64_t seed = 0;

  bool operator==(const CorpusSplit &) const = default;
};

// 80/10/10 by document: dev and test get floor(n/10) each, train the rest.
CorpusSplit SplitCorpus(std::vector<std::string> doc_ids, uint64_t seed);

// round(proportion * |train|) ids, kept in their input order.
std::vector<std::string> Downsample(const std::vector<std::string> &train_ids,
                                    double proportion, uint64_t seed);

// Seeded Fisher-Yates over mt19937_64 with rejection sampling, so results do
// not depend on the standard library's distributions.
void SeededShuffle(std::vector<std::string> &items, uint64_t seed);

struct StatRow {
  std::string metric;
  double value = 0;
  bool integral = false;
};

using StatsTable = std::vector<StatRow>;

StatsTable ComputeStats(const Dataset &corpus);
double StatValue(const StatsTable &table, std::string_view metric);
std::string FormatStats(const StatsTable &table);

std::vector<Mention> GoldTriggers(const SentenceInstance &s);
std::vector<Mention> GoldArguments(const SentenceInstance &s);

// Sentences whose doc id is in `ids`.
Dataset FilterDocs(const Dataset &corpus, const std::vector<std::string> &ids);
std::vector<std::string> DocIds(const Dataset &corpus);

// Serialization. Spans are written as character offsets local to the
// sentence text.
std::string DatasetToJsonl(const Dataset &corpus);
Dataset DatasetFromJsonl(std::string_view jsonl);
std::string OntologyToJson(const Ontology &ontology);
Ontology OntologyFromJson(std::string_view json);
std::map<std::string, std::string> DescriptionsFromJson(std::string_view json);
std::string SplitToJson(const CorpusSplit &split);
CorpusSplit SplitFromJson(std::string_view json);
std::string StatsToJson(const StatsTable &table);

}  // namespace clinee

#endif  // CLINEE_DATASET_H_
