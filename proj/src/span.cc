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

#include "clinee/span.h"

#include <algorithm>

#include "clinee/common.h"

namespace clinee {

SpanSet::SpanSet(size_t start, size_t end)
    : SpanSet(FromFragments({Fragment{start, end}})) {}

SpanSet SpanSet::FromFragments(std::vector<Fragment> fragments) {
  if (fragments.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "span set without fragments");
  }
  std::sort(fragments.begin(), fragments.end());
  for (size_t i = 0; i < fragments.size(); ++i) {
    if (fragments[i].start >= fragments[i].end) {
      throw Error(ErrorKind::kInvalidArgument,
                  "empty fragment at " + std::to_string(fragments[i].start));
    }
    if (i > 0 && fragments[i].start < fragments[i - 1].end) {
      throw Error(ErrorKind::kInvalidArgument, "overlapping fragments");
    }
  }
  SpanSet s;
  s.fragments_ = std::move(fragments);
  return s;
}

SpanSet SpanSet::Shifted(long long delta) const {
  SpanSet s = *this;
  for (Fragment &f : s.fragments_) {
    f.start = static_cast<size_t>(static_cast<long long>(f.start) + delta);
    f.end = static_cast<size_t>(static_cast<long long>(f.end) + delta);
  }
  return s;
}

bool SpanSet::Overlaps(const SpanSet &other) const {
  for (const Fragment &a : fragments_) {
    for (const Fragment &b : other.fragments_) {
      if (a.start < b.end && b.start < a.end) return true;
    }
  }
  return false;
}

std::string SpanSet::JoinedText(std::string_view text) const {
  std::string out;
  for (size_t i = 0; i < fragments_.size(); ++i) {
    if (i > 0) out.push_back(' ');
    const Fragment &f = fragments_[i];
    out.append(text.substr(f.start, f.end - f.start));
  }
  return out;
}

std::string SpanSet::DebugString() const {
  std::string out = "{";
  for (size_t i = 0; i < fragments_.size(); ++i) {
    if (i > 0) out += ",";
    out += "(" + std::to_string(fragments_[i].start) + "," +
           std::to_string(fragments_[i].end) + ")";
  }
  return out + "}";
}

bool PassageOrderLess(const SpanSet &a, const SpanSet &b) {
  if (a.begin() != b.begin()) return a.begin() < b.begin();
  if (a.end() != b.end()) return a.end() > b.end();
  return a < b;
}

}  // namespace clinee
