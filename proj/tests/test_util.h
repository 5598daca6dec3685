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

// Shared helpers for the test binaries.

#ifndef CLINEE_TESTS_TEST_UTIL_H_
#define CLINEE_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "clinee/brat.h"
#include "clinee/common.h"
#include "clinee/dataset.h"

namespace clinee::testing {

inline std::string DataDir() { return CLINEE_TEST_DATA_DIR; }
inline std::string FixtureDir() { return DataDir() + "/fixture"; }

struct Fixture {
  Dataset corpus;
  Ontology ontology;
};

// The bundled synthetic corpus, built once per process.
inline const Fixture &LoadFixture() {
  static const Fixture fixture = [] {
    Fixture f;
    std::set<std::string> types(MaccrobatEventTypes().begin(), MaccrobatEventTypes().end());
    for (RawDocument &doc : LoadBratDirectory(FixtureDir())) {
      for (SentenceInstance &s : SegmentSentences(DeriveEvents(std::move(doc), types)).sentences) {
        f.corpus.push_back(std::move(s));
      }
    }
    f.ontology = BuildOntology(f.corpus, DescriptionsFromJson(ReadFile(DataDir() +
                                                                      "/descriptions.json")))
                     .ontology;
    return f;
  }();
  return fixture;
}

// Mention of the `nth` occurrence of `surface` in `text`; fragments are
// given as separate surfaces when `rest` is non-empty.
inline Mention At(const std::string &text, const std::string &surface, const std::string &label,
                  int nth = 0, const std::vector<std::string> &rest = {}) {
  size_t pos = text.find(surface);
  for (int i = 0; i < nth && pos != std::string::npos; ++i) pos = text.find(surface, pos + 1);
  if (pos == std::string::npos) throw Error(ErrorKind::kInvalidArgument, "no " + surface);
  std::vector<Fragment> frags = {{pos, pos + surface.size()}};
  size_t from = pos + surface.size();
  for (const std::string &r : rest) {
    size_t q = text.find(r, from);
    if (q == std::string::npos) throw Error(ErrorKind::kInvalidArgument, "no " + r);
    frags.push_back({q, q + r.size()});
    from = q + r.size();
  }
  return MakeMention(text, SpanSet::FromFragments(frags), label);
}

inline SentenceInstance Sentence(const std::string &doc, int index, const std::string &text) {
  SentenceInstance s;
  s.doc_id = doc;
  s.sent_index = index;
  s.text = text;
  return s;
}

// Adds an event and registers its trigger and arguments as entities.
inline EventRecord &AddEvent(SentenceInstance &s, const Mention &trigger,
                             std::vector<ArgumentRecord> args = {}) {
  auto add_entity = [&](const Mention &m) {
    if (std::find(s.entities.begin(), s.entities.end(), m) == s.entities.end()) {
      s.entities.push_back(m);
    }
  };
  add_entity(trigger);
  for (const ArgumentRecord &a : args) add_entity(a.mention);
  s.events.push_back({trigger, trigger.label, std::move(args)});
  return s.events.back();
}

// Small ontology shared by hand-built tests.
inline Ontology HandOntology() {
  Ontology o;
  o.event_types = {{"Sign_symptom", "Any symptom or clinical finding"},
                   {"Diagnostic_procedure", "Any procedure done for diagnosis"},
                   {"Medication", "Any drug given"}};
  o.roles_by_type["Sign_symptom"] = {{"Biological_structure", "Anatomical location"},
                                     {"Detailed_description", "Descriptive detail"},
                                     {"Severity", "How severe it is"},
                                     {"Area", "Size or extent"}};
  o.roles_by_type["Diagnostic_procedure"] = {{"Lab_value", "Measured value"}};
  o.roles_by_type["Medication"] = {{"Dosage", "Amount given"}};
  return o;
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("clinee_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  std::string path() const { return path_.string(); }
  std::string file(const std::string &name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace clinee::testing

#endif  // CLINEE_TESTS_TEST_UTIL_H_
