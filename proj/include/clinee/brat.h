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

// Reader for BRAT standoff annotations (.txt + .ann).
//
// Accepted line kinds:
//   T<id>\t<TYPE> <start> <end>(;<start> <end>)*\t<text>
//   R<id>\t<TYPE> Arg1:<id> Arg2:<id>
//   E<id>\t<TYPE>:<trigger id>( <ROLE>:<id>)*
//   A/M/N/# lines are kept verbatim and otherwise ignored.
//
// Offsets in the .ann file count characters of the decoded text. In memory
// every SpanSet holds UTF-8 byte offsets into RawDocument::text.

#ifndef CLINEE_BRAT_H_
#define CLINEE_BRAT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clinee/span.h"

namespace clinee {

struct RawEntity {
  std::string id;
  std::string label;
  SpanSet span;
  std::string surface;

  bool operator==(const RawEntity &) const = default;
};

struct RawRelation {
  std::string id;
  std::string label;
  std::string source_id;
  std::string target_id;

  bool operator==(const RawRelation &) const = default;
};

// E line. Parsed so that MODIFY relations pointing at E ids can be resolved.
struct RawEventFrame {
  std::string id;
  std::string type;
  std::string trigger_id;
  std::vector<std::pair<std::string, std::string>> args;  // (role, id)

  bool operator==(const RawEventFrame &) const = default;
};

struct RawDocument {
  std::string doc_id;
  std::string text;
  std::vector<RawEntity> entities;
  std::vector<RawRelation> relations;
  std::vector<RawEventFrame> event_frames;
  // E, A, M, N and # lines in file order.
  std::vector<std::string> passthrough;

  bool operator==(const RawDocument &) const = default;

  // Index of the entity with T id `id`, or of the trigger of E frame `id`.
  std::optional<size_t> ResolveEntity(std::string_view id) const;
  const RawEventFrame *FindFrame(std::string_view id) const;
};

// Throws Error(kMalformedLine) with the 1-based line number, or
// Error(kDanglingReference) when an R line cites an unknown id.
RawDocument ParseDocument(std::string doc_id, std::string text,
                          std::string_view ann);

struct Discrepancy {
  std::string entity_id;
  std::string expected;  // surface as written in the .ann file
  std::string found;     // document text at the span

  bool operator==(const Discrepancy &) const = default;
};

// One entry per entity whose surface disagrees with the text at its span
// after whitespace normalization.
std::vector<Discrepancy> ValidateOffsets(const RawDocument &doc);

// Renders T, R and E lines followed by the pass-through lines. Reparsing the
// output yields an equal document.
std::string SerializeAnnotations(const RawDocument &doc);

// Reads every <name>.txt with a sibling <name>.ann, sorted by name.
std::vector<RawDocument> LoadBratDirectory(const std::string &dir);

}  // namespace clinee

#endif  // CLINEE_BRAT_H_
