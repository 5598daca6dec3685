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

#include "json_util.h"

namespace clinee::internal {

json SpanToJson(const SpanSet &span, const CharIndex &chars) {
  json out = json::array();
  for (const Fragment &f : span.fragments()) {
    out.push_back({chars.ToChar(f.start), chars.ToChar(f.end)});
  }
  return out;
}

SpanSet SpanFromJson(const json &j, const CharIndex &chars) {
  std::vector<Fragment> frags;
  for (const json &pair : j) {
    size_t s = pair.at(0).get<size_t>(), e = pair.at(1).get<size_t>();
    if (e > chars.num_chars() || s > e) {
      throw Error(ErrorKind::kInvalidArgument, "span outside sentence text");
    }
    frags.push_back({chars.ToByte(s), chars.ToByte(e)});
  }
  return SpanSet::FromFragments(std::move(frags));
}

json MentionToJson(const Mention &m, const CharIndex &chars) {
  return {{"span", SpanToJson(m.span, chars)},
          {"surface", m.surface},
          {"label", m.label}};
}

Mention MentionFromJson(const json &j, const CharIndex &chars) {
  Mention m;
  m.span = SpanFromJson(j.at("span"), chars);
  m.surface = j.at("surface").get<std::string>();
  m.label = j.value("label", "");
  return m;
}

json ParseJson(std::string_view text, const std::string &what) {
  try {
    return json::parse(text);
  } catch (const json::exception &e) {
    throw Error(ErrorKind::kInvalidArgument, what + ": " + e.what());
  }
}

void ForEachJsonLine(std::string_view jsonl, const std::string &what,
                     const std::function<void(const json &)> &fn) {
  size_t start = 0;
  int ln = 0;
  while (start <= jsonl.size()) {
    size_t nl = jsonl.find('\n', start);
    if (nl == std::string_view::npos) nl = jsonl.size();
    ++ln;
    std::string_view line = Trim(jsonl.substr(start, nl - start));
    start = nl + 1;
    if (line.empty()) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception &e) {
      throw Error(ErrorKind::kInvalidArgument,
                  what + " line " + std::to_string(ln) + ": " + e.what());
    }
  }
}

}  // namespace clinee::internal
