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

#include "clinee/brat.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <unordered_map>
#include <unordered_set>

#include "clinee/common.h"

namespace clinee {
namespace {

[[noreturn]] void Malformed(int line_number, const std::string &why) {
  throw Error(ErrorKind::kMalformedLine,
              "line " + std::to_string(line_number) + ": " + why);
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

bool ParseOffset(std::string_view s, size_t *out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// A valid id is a kind letter followed by at least one character that is not
// whitespace.
bool ValidId(std::string_view id, char kind) {
  if (id.size() < 2 || id[0] != kind) return false;
  return std::none_of(id.begin(), id.end(), IsSpace);
}

RawEntity ParseEntityLine(std::string_view line, int ln, const CharIndex &chars) {
  auto fields = Split(line, '\t');
  if (fields.size() < 3) Malformed(ln, "T line needs three tab-separated fields");
  RawEntity e;
  e.id = std::string(fields[0]);
  if (!ValidId(e.id, 'T')) Malformed(ln, "bad entity id '" + e.id + "'");

  std::string_view ann = fields[1];
  size_t sp = ann.find(' ');
  if (sp == std::string_view::npos || sp == 0) Malformed(ln, "missing entity type");
  e.label = std::string(ann.substr(0, sp));

  std::vector<Fragment> frags;
  for (std::string_view piece : Split(ann.substr(sp + 1), ';')) {
    auto nums = Split(piece, ' ');
    size_t s = 0, t = 0;
    if (nums.size() != 2 || !ParseOffset(nums[0], &s) || !ParseOffset(nums[1], &t)) {
      Malformed(ln, "bad offset pair '" + std::string(piece) + "'");
    }
    if (s >= t) Malformed(ln, "empty or inverted fragment");
    if (t > chars.num_chars()) Malformed(ln, "offset beyond end of text");
    frags.push_back({chars.ToByte(s), chars.ToByte(t)});
  }
  try {
    e.span = SpanSet::FromFragments(std::move(frags));
  } catch (const Error &err) {
    Malformed(ln, err.what());
  }
  // The text field may itself contain tabs.
  size_t text_start = fields[0].size() + 1 + fields[1].size() + 1;
  e.surface = std::string(line.substr(text_start));
  return e;
}

RawRelation ParseRelationLine(std::string_view line, int ln) {
  auto fields = Split(line, '\t');
  if (fields.size() < 2) Malformed(ln, "R line needs a type field");
  RawRelation r;
  r.id = std::string(fields[0]);
  if (!ValidId(r.id, 'R')) Malformed(ln, "bad relation id '" + r.id + "'");
  auto toks = Split(Trim(fields[1]), ' ');
  toks.erase(std::remove(toks.begin(), toks.end(), std::string_view()), toks.end());
  if (toks.size() != 3) Malformed(ln, "R line needs TYPE Arg1:<id> Arg2:<id>");
  r.label = std::string(toks[0]);
  std::string *dst[2] = {&r.source_id, &r.target_id};
  for (int i = 0; i < 2; ++i) {
    size_t colon = toks[i + 1].find(':');
    if (colon == std::string_view::npos || colon == 0 ||
        colon + 1 >= toks[i + 1].size()) {
      Malformed(ln, "bad relation argument '" + std::string(toks[i + 1]) + "'");
    }
    *dst[i] = std::string(toks[i + 1].substr(colon + 1));
  }
  return r;
}

RawEventFrame ParseEventLine(std::string_view line, int ln) {
  auto fields = Split(line, '\t');
  if (fields.size() < 2) Malformed(ln, "E line needs a trigger field");
  RawEventFrame ev;
  ev.id = std::string(fields[0]);
  if (!ValidId(ev.id, 'E')) Malformed(ln, "bad event id '" + ev.id + "'");
  bool first = true;
  for (std::string_view tok : Split(Trim(fields[1]), ' ')) {
    if (tok.empty()) continue;
    size_t colon = tok.rfind(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 >= tok.size()) {
      Malformed(ln, "bad event argument '" + std::string(tok) + "'");
    }
    std::string key(tok.substr(0, colon));
    std::string id(tok.substr(colon + 1));
    if (first) {
      ev.type = std::move(key);
      ev.trigger_id = std::move(id);
      first = false;
    } else {
      ev.args.emplace_back(std::move(key), std::move(id));
    }
  }
  if (first) Malformed(ln, "E line without trigger");
  return ev;
}

}  // namespace

std::optional<size_t> RawDocument::ResolveEntity(std::string_view id) const {
  for (size_t i = 0; i < entities.size(); ++i) {
    if (entities[i].id == id) return i;
  }
  if (const RawEventFrame *f = FindFrame(id)) {
    for (size_t i = 0; i < entities.size(); ++i) {
      if (entities[i].id == f->trigger_id) return i;
    }
  }
  return std::nullopt;
}

const RawEventFrame *RawDocument::FindFrame(std::string_view id) const {
  for (const RawEventFrame &f : event_frames) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

RawDocument ParseDocument(std::string doc_id, std::string text,
                          std::string_view ann) {
  RawDocument doc;
  doc.doc_id = std::move(doc_id);
  doc.text = std::move(text);
  CharIndex chars(doc.text);

  std::unordered_set<std::string> seen_ids;
  std::vector<int> relation_lines, frame_lines;
  int ln = 0;
  for (std::string_view line : Split(ann, '\n')) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty()) continue;
    std::string id(line.substr(0, line.find('\t')));
    switch (line[0]) {
      case 'T': doc.entities.push_back(ParseEntityLine(line, ln, chars)); break;
      case 'R':
        doc.relations.push_back(ParseRelationLine(line, ln));
        relation_lines.push_back(ln);
        break;
      case 'E':
        doc.event_frames.push_back(ParseEventLine(line, ln));
        frame_lines.push_back(ln);
        doc.passthrough.emplace_back(line);
        break;
      case 'A': case 'M': case 'N': case '#':
        doc.passthrough.emplace_back(line);
        continue;
      default:
        Malformed(ln, "unknown line kind '" + std::string(1, line[0]) + "'");
    }
    if (!seen_ids.insert(id).second) Malformed(ln, "duplicate id " + id);
  }

  auto known = [&](const std::string &id) {
    return doc.ResolveEntity(id).has_value();
  };
  for (size_t i = 0; i < doc.event_frames.size(); ++i) {
    const RawEventFrame &f = doc.event_frames[i];
    bool trigger_ok = std::any_of(doc.entities.begin(), doc.entities.end(),
                                  [&](const RawEntity &e) { return e.id == f.trigger_id; });
    if (!trigger_ok) {
      throw Error(ErrorKind::kDanglingReference,
                  "line " + std::to_string(frame_lines[i]) + ": " + f.id +
                      " trigger " + f.trigger_id + " is not a T id");
    }
  }
  for (size_t i = 0; i < doc.relations.size(); ++i) {
    const RawRelation &r = doc.relations[i];
    for (const std::string *id : {&r.source_id, &r.target_id}) {
      if (!known(*id)) {
        throw Error(ErrorKind::kDanglingReference,
                    "line " + std::to_string(relation_lines[i]) + ": " + r.id +
                        " cites unknown id " + *id);
      }
    }
  }
  return doc;
}

std::vector<Discrepancy> ValidateOffsets(const RawDocument &doc) {
  std::vector<Discrepancy> out;
  for (const RawEntity &e : doc.entities) {
    std::string found = e.span.JoinedText(doc.text);
    if (NormalizeWhitespace(found) != NormalizeWhitespace(e.surface)) {
      out.push_back({e.id, e.surface, found});
    }
  }
  return out;
}

std::string SerializeAnnotations(const RawDocument &doc) {
  CharIndex chars(doc.text);
  std::string out;
  for (const RawEntity &e : doc.entities) {
    out += e.id + "\t" + e.label + " ";
    const auto &frags = e.span.fragments();
    for (size_t i = 0; i < frags.size(); ++i) {
      if (i > 0) out += ";";
      out += std::to_string(chars.ToChar(frags[i].start)) + " " +
             std::to_string(chars.ToChar(frags[i].end));
    }
    out += "\t" + e.surface + "\n";
  }
  for (const RawRelation &r : doc.relations) {
    out += r.id + "\t" + r.label + " Arg1:" + r.source_id + " Arg2:" +
           r.target_id + "\n";
  }
  for (const std::string &p : doc.passthrough) out += p + "\n";
  return out;
}

std::vector<RawDocument> LoadBratDirectory(const std::string &dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorKind::kIo, dir + " is not a directory");
  std::vector<fs::path> txts;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".txt") {
      fs::path ann = entry.path();
      ann.replace_extension(".ann");
      if (fs::exists(ann)) txts.push_back(entry.path());
    }
  }
  std::sort(txts.begin(), txts.end());
  std::vector<RawDocument> docs;
  docs.reserve(txts.size());
  for (const fs::path &txt : txts) {
    fs::path ann = txt;
    ann.replace_extension(".ann");
    try {
      docs.push_back(ParseDocument(txt.stem().string(), ReadFile(txt.string()),
                                   ReadFile(ann.string())));
    } catch (const Error &err) {
      throw Error(err.kind(), ann.string() + ": " + err.what());
    }
  }
  return docs;
}

}  // namespace clinee
