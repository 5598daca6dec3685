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

// Shared JSON helpers. Private to the library.

#ifndef CLINEE_SRC_JSON_UTIL_H_
#define CLINEE_SRC_JSON_UTIL_H_

#include <functional>
#include <string>
#include <string_view>

#include "clinee/common.h"
#include "clinee/dataset.h"
#include "json.hpp"

namespace clinee::internal {

using nlohmann::json;

// [[s,e],...] in character offsets of `chars`' text.
json SpanToJson(const SpanSet &span, const CharIndex &chars);
SpanSet SpanFromJson(const json &j, const CharIndex &chars);

json MentionToJson(const Mention &m, const CharIndex &chars);
Mention MentionFromJson(const json &j, const CharIndex &chars);

json ParseJson(std::string_view text, const std::string &what);

// Calls `fn` for every non-blank line. Parse errors carry the line number.
void ForEachJsonLine(std::string_view jsonl, const std::string &what,
                     const std::function<void(const json &)> &fn);

}  // namespace clinee::internal

#endif  // CLINEE_SRC_JSON_UTIL_H_
