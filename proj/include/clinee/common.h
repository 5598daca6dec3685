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

#ifndef CLINEE_COMMON_H_
#define CLINEE_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace clinee {

enum class ErrorKind {
  kMalformedLine,
  kDanglingReference,
  kUnknownEventType,
  kUnknownRole,
  kTooFewDocuments,
  kUngroundedMention,
  kMalformedOutput,
  kBackendUnavailable,
  kCacheMiss,
  kAlignmentError,
  kInvalidArgument,
  kIo,
};

const char *ErrorKindName(ErrorKind kind);

// All recoverable failures in the library are reported as Error. Backend
// failures (kBackendUnavailable, kCacheMiss) are distinguished by the CLI.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  bool IsBackendFailure() const {
    return kind_ == ErrorKind::kBackendUnavailable ||
           kind_ == ErrorKind::kCacheMiss;
  }

 private:
  ErrorKind kind_;
};

// Stable 64-bit FNV-1a. Used for seeds and checksums, so it must never
// depend on std::hash.
uint64_t Fnv1a64(std::string_view data, uint64_t basis = 0xcbf29ce484222325ULL);

// SplitMix64 finalizer; mixes a counter into a well-distributed word.
uint64_t Mix64(uint64_t x);

// Combines values into one key, order-sensitive.
inline uint64_t HashCombine(uint64_t seed, uint64_t value) {
  return Mix64(seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

// Uniform double in [0, 1) drawn from a 64-bit key.
inline double UnitFromKey(uint64_t key) {
  return static_cast<double>(Mix64(key) >> 11) * 0x1.0p-53;
}

inline bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string_view Trim(std::string_view s);

// Collapses whitespace runs into one space and trims both ends.
std::string NormalizeWhitespace(std::string_view s);

// Byte ranges of whitespace-separated words.
std::vector<std::pair<size_t, size_t>> WordRanges(std::string_view text);

std::vector<std::string> SplitWords(std::string_view text);

// Maps code point indices to byte offsets of a UTF-8 string. Invalid bytes
// count as one character each.
class CharIndex {
 public:
  explicit CharIndex(std::string_view text);

  size_t num_chars() const { return byte_of_.size() - 1; }
  // `ch` in [0, num_chars()].
  size_t ToByte(size_t ch) const { return byte_of_.at(ch); }
  // Byte offset must fall on a character boundary.
  size_t ToChar(size_t byte) const;

 private:
  std::vector<size_t> byte_of_;
};

std::string ReadFile(const std::string &path);

// Writes to a sibling temporary and renames, so readers never observe a
// partially written file.
void WriteFileAtomic(const std::string &path, std::string_view content);

std::string HexDigest(uint64_t value);

}  // namespace clinee

#endif  // CLINEE_COMMON_H_
