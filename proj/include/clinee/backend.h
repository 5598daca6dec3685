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

// Text generation backends: a gold oracle with corruption knobs, a replay
// cache, a write-through cache decorator and an HTTP client.
//
// Wire protocol of the HTTP client:
//   POST /v1/generate
//   {"inputs": [string...], "num_beams": 2, "max_new_tokens": 30}
//   -> 200 {"outputs": [string...]}   (positional correspondence)
// Any non-200 answer surfaces as Error(kBackendUnavailable).

#ifndef CLINEE_BACKEND_H_
#define CLINEE_BACKEND_H_

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clinee/dataset.h"
#include "clinee/prompt.h"

namespace clinee {

struct GenRequest {
  std::string request_id;
  std::string input_seq;
  int num_beams = 2;
  int max_new_tokens = 30;

  void Validate() const;
};

struct GenResponse {
  std::string request_id;
  std::string output;

  bool operator==(const GenResponse &) const = default;
};

// Implementations are safe to share across threads. Responses carry the
// request id; callers must not rely on their order.
class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;
  virtual std::vector<GenResponse> Generate(const std::vector<GenRequest> &batch) = 0;
  virtual std::string Identity() const = 0;
};

struct CorruptionConfig {
  double drop_prob = 0;
  double jitter_prob = 0;
  int jitter_width = 1;  // words
  double confuse_type_prob = 0;
  uint64_t seed = 0;

  void Validate() const;
  bool IsIdentity() const {
    return drop_prob == 0 && jitter_prob == 0 && confuse_type_prob == 0;
  }
  std::string ToString() const;
  // "drop=0.2,jitter=0.1,width=2,confuse=0.05,seed=3"; any subset.
  static CorruptionConfig Parse(std::string_view text);
};

struct CorruptionContext {
  Task task = Task::kEd;
  std::string_view passage;     // text the mentions were taken from
  std::string_view query_role;  // EAE
  // Alternative labels for typing tasks.
  std::vector<std::string> label_pool;
  uint64_t key = 0;  // per-request key; draws are a function of (key, item)
};

// Drops, jitters or relabels items of a well-formed target. The result
// always parses under the same task.
std::string Corrupt(std::string_view gold_target, const CorruptionContext &ctx,
                    const CorruptionConfig &cfg);

// Answers every prompt of one task by rendering the gold annotation it
// refers to, recovered from the input text alone: the passage is matched
// against gold sentences after removing tags, the trigger is located by its
// "<trigger>" tags, and type and role come from their prompt segments.
// Inputs that refer to nothing in the gold corpus get the placeholder.
class OracleBackend : public GenerationBackend {
 public:
  OracleBackend(Task task, Dataset gold, Ontology ontology,
                CorruptionConfig corruption = {});

  std::vector<GenResponse> Generate(const std::vector<GenRequest> &batch) override;
  std::string Identity() const override;

  // Uncorrupted answer, or the corrupted one when `corrupt` is set.
  std::string Answer(std::string_view input_seq, bool corrupt = true) const;

 private:
  struct Located {
    const SentenceInstance *sentence = nullptr;
    std::string plain;               // input without tags
    std::vector<std::string> lines;  // prompt segments after the passage
    std::vector<Fragment> trigger;   // from <trigger> tags
    std::vector<Fragment> query;     // from <query> tags
  };

  Located Locate(std::string_view input_seq) const;
  std::string EffectiveType(const SentenceInstance &s, const EventRecord &ev) const;
  std::string EffectiveRole(const SentenceInstance &s, const EventRecord &ev,
                            const ArgumentRecord &a) const;
  std::string AnswerMi(std::string_view input, uint64_t key, bool corrupt) const;

  Task task_;
  Dataset gold_;
  Ontology ontology_;
  CorruptionConfig corruption_;
  std::unordered_map<std::string, size_t> by_text_;
};

// Serves outputs recorded in a JSONL file of {"input":..., "output":...}.
class ReplayBackend : public GenerationBackend {
 public:
  explicit ReplayBackend(const std::string &path);
  explicit ReplayBackend(std::unordered_map<std::string, std::string> entries);

  // Throws Error(kCacheMiss) for unseen inputs.
  std::vector<GenResponse> Generate(const std::vector<GenRequest> &batch) override;
  std::string Identity() const override;
  size_t size() const { return entries_.size(); }

 private:
  std::string source_;
  std::unordered_map<std::string, std::string> entries_;
};

// Serves hits from the cache file and appends every new response to it, so
// an interrupted run resumes without recomputation.
class CachingBackend : public GenerationBackend {
 public:
  CachingBackend(std::shared_ptr<GenerationBackend> inner, std::string cache_path);

  std::vector<GenResponse> Generate(const std::vector<GenRequest> &batch) override;
  std::string Identity() const override;
  size_t hits() const { return hits_; }
  size_t misses() const { return misses_; }

 private:
  std::shared_ptr<GenerationBackend> inner_;
  std::string path_;
  std::mutex mu_;
  std::unordered_map<std::string, std::string> entries_;
  size_t hits_ = 0;
  size_t misses_ = 0;
};

struct RemoteOptions {
  size_t batch_size = 16;
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{100};
  size_t max_inflight = 4;
  std::chrono::seconds timeout{120};
};

class RemoteBackend : public GenerationBackend {
 public:
  // `base_url` like "http://localhost:8000".
  explicit RemoteBackend(std::string base_url, RemoteOptions options = {});

  std::vector<GenResponse> Generate(const std::vector<GenRequest> &batch) override;
  std::string Identity() const override;

 private:
  std::vector<std::string> PostBatch(const std::vector<const GenRequest *> &batch) const;

  std::string base_url_;
  RemoteOptions options_;
};

// Name of the environment variable holding the remote backend URL.
inline constexpr const char *kBackendUrlEnv = "CLINEE_BACKEND_URL";

// Appends {"input","output"} lines.
std::string ReplayEntriesToJsonl(const std::vector<std::pair<std::string, std::string>> &rows);

}  // namespace clinee

#endif  // CLINEE_BACKEND_H_
