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

#ifndef CLINEE_SPAN_H_
#define CLINEE_SPAN_H_

#include <compare>
#include <optional>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace clinee {

// Half-open byte range [start, end).
struct Fragment {
  size_t start = 0;
  size_t end = 0;

  size_t size() const { return end - start; }
  auto operator<=>(const Fragment &) const = default;
};

// Ordered, possibly discontinuous location of a mention. Fragments are
// non-empty, sorted by start and pairwise non-overlapping; there is always at
// least one fragment.
class SpanSet {
 public:
  SpanSet() = default;
  SpanSet(size_t start, size_t end);

  // Sorts the fragments and validates them. Throws kInvalidArgument when any
  // fragment is empty, fragments overlap, or the list is empty.
  static SpanSet FromFragments(std::vector<Fragment> fragments);

  const std::vector<Fragment> &fragments() const { return fragments_; }
  bool empty() const { return fragments_.empty(); }
  bool discontinuous() const { return fragments_.size() > 1; }

  // Extent of the whole set.
  size_t begin() const { return fragments_.front().start; }
  size_t end() const { return fragments_.back().end; }

  // Returns a copy with every offset shifted by `delta` (may be negative).
  SpanSet Shifted(long long delta) const;

  bool Overlaps(const SpanSet &other) const;
  // True if every fragment lies within [lo, hi).
  bool Within(size_t lo, size_t hi) const { return begin() >= lo && end() <= hi; }

  // Fragments of `text` joined by single spaces.
  std::string JoinedText(std::string_view text) const;

  std::string DebugString() const;

  auto operator<=>(const SpanSet &) const = default;
  bool operator==(const SpanSet &) const = default;

 private:
  std::vector<Fragment> fragments_;
};

// Passage order: by start, wider span first on ties.
bool PassageOrderLess(const SpanSet &a, const SpanSet &b);

// Generated text, optionally located in the passage it came from. Text-only
// predictions (no span) still take part in surface-level matching.
struct GroundedText {
  std::string surface;
  std::optional<SpanSet> span;

  bool operator==(const GroundedText &) const = default;
};

}  // namespace clinee

#endif  // CLINEE_SPAN_H_
