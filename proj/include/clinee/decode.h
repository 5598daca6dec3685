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

#ifndef CLINEE_DECODE_H_
#define CLINEE_DECODE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clinee/prompt.h"
#include "clinee/span.h"

namespace clinee {

struct ParsedOutput {
  std::vector<std::string> surfaces;
  // Set when the output lacks the expected prefix or reiterates the wrong
  // role; surfaces is then empty.
  std::optional<std::string> malformed;
};

// Never throws. `query_role` is required for EAE and ignored otherwise.
// Typing tasks yield at most one label.
ParsedOutput ParseOutput(Task task, std::string_view text,
                         std::string_view query_role = {});

// Locates each surface in `text`: the leftmost contiguous occurrence whose
// span is not already taken, preferring whole-word occurrences that do not
// overlap earlier groundings, then whole-word nested ones; failing that, a
// greedy in-order multi-fragment match on word boundaries, and last an
// occurrence inside a longer word. Unlocatable surfaces map to nullopt.
std::vector<std::optional<SpanSet>> GroundSurfaces(const std::vector<std::string> &surfaces,
                                                   std::string_view text);

struct DecodedOutput {
  Task task = Task::kEd;
  std::vector<std::string> surfaces;
  std::vector<std::optional<SpanSet>> grounded;  // same length as surfaces
  std::optional<std::string> malformed;
  PromptMeta meta;

  std::vector<GroundedText> Items() const;
};

// Parses and grounds against the sentence text. Windowed MI prompts are
// grounded inside their window and shifted back to sentence coordinates.
DecodedOutput Decode(const PromptInstance &prompt, std::string_view output,
                     std::string_view sentence_text);

}  // namespace clinee

#endif  // CLINEE_DECODE_H_
