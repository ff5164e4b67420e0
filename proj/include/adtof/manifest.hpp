#pragma once

// Dataset manifest: one JSON document listing every discovered track with
// its status, discard bookkeeping, alignment report and label discrepancies.

#include <json.hpp>

#include <algorithm>
#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adtof/alignment.hpp"
#include "adtof/error.hpp"
#include "adtof/labels.hpp"
#include "adtof/text.hpp"
#include "adtof/vocabulary.hpp"

namespace adtof {

inline constexpr int kManifestSchemaVersion = 1;

enum class TrackStatus { Kept, Discarded };

enum class DiscardReason { None, AlignmentSanity, LabelScreen, ParseError, Empty };

inline std::string_view discard_reason_name(DiscardReason r) {
  switch (r) {
    case DiscardReason::None: return "";
    case DiscardReason::AlignmentSanity: return "alignment-sanity";
    case DiscardReason::LabelScreen: return "label-screen";
    case DiscardReason::ParseError: return "parse-error";
    case DiscardReason::Empty: return "empty";
  }
  return "";
}

inline DiscardReason parse_discard_reason(std::string_view s) {
  for (auto r : {DiscardReason::AlignmentSanity, DiscardReason::LabelScreen, DiscardReason::ParseError, DiscardReason::Empty}) {
    if (discard_reason_name(r) == s) return r;
  }
  return DiscardReason::None;
}

struct TrackRecord {
  std::string id;
  std::string artist;
  std::string title;
  std::string genre;
  double duration = 0.0;
  ClassMultiset n_onsets_per_class{};
  TrackStatus status = TrackStatus::Kept;
  DiscardReason discard_reason = DiscardReason::None;
  std::string discard_detail;
  bool flagged = false;
  std::optional<double> score;
  std::optional<AlignmentReport> alignment;
  std::vector<Discrepancy> discrepancies;
  std::size_t unmapped_notes = 0;

  bool kept() const { return status == TrackStatus::Kept; }

  void discard(DiscardReason reason, std::string detail) {
    status = TrackStatus::Discarded;
    discard_reason = reason;
    discard_detail = std::move(detail);
  }
};

struct Manifest {
  std::vector<TrackRecord> tracks;  // sorted by id
};

inline nlohmann::json to_json(const TrackRecord& r) {
  using nlohmann::json;
  json j;
  j["id"] = r.id;
  j["artist"] = r.artist;
  j["title"] = r.title;
  j["genre"] = r.genre;
  j["duration"] = r.duration;
  json counts = json::object();
  for (auto c : kAllClasses) counts[std::string(class_name(c))] = r.n_onsets_per_class[class_index(c)];
  j["n_onsets_per_class"] = counts;
  j["status"] = r.kept() ? "kept" : "discarded";
  j["discard_reason"] = discard_reason_name(r.discard_reason);
  j["discard_detail"] = r.discard_detail;
  j["flagged"] = r.flagged;
  j["score"] = r.score ? json(*r.score) : json(nullptr);
  j["unmapped_notes"] = r.unmapped_notes;
  if (r.alignment) {
    j["alignment"] = {{"matched_fraction", r.alignment->matched_fraction},
                      {"max_abs_deviation", r.alignment->max_abs_deviation},
                      {"verdict", r.alignment->verdict == Verdict::Keep ? "keep" : "discard"},
                      {"reason", r.alignment->reason}};
  } else {
    j["alignment"] = nullptr;
  }
  json rows = json::array();
  for (const auto& d : r.discrepancies) {
    json g = json::array(), a = json::array();
    for (auto c : d.gameplay) g.push_back(class_name(c));
    for (auto c : d.animation) a.push_back(class_name(c));
    rows.push_back({{"time", d.time}, {"gameplay", g}, {"animation", a}, {"action", d.action}});
  }
  j["discrepancies"] = rows;
  return j;
}

inline std::vector<AdtofClass> classes_from_json(const nlohmann::json& arr) {
  std::vector<AdtofClass> out;
  for (const auto& v : arr) {
    if (auto c = parse_class(v.get<std::string>())) out.push_back(*c);
  }
  return out;
}

inline TrackRecord record_from_json(const nlohmann::json& j) {
  TrackRecord r;
  r.id = j.at("id").get<std::string>();
  r.artist = j.value("artist", "");
  r.title = j.value("title", "");
  r.genre = j.value("genre", "");
  r.duration = j.value("duration", 0.0);
  if (j.contains("n_onsets_per_class")) {
    for (auto c : kAllClasses) r.n_onsets_per_class[class_index(c)] = j["n_onsets_per_class"].value(std::string(class_name(c)), std::size_t{0});
  }
  r.status = j.value("status", "kept") == "kept" ? TrackStatus::Kept : TrackStatus::Discarded;
  r.discard_reason = parse_discard_reason(j.value("discard_reason", ""));
  r.discard_detail = j.value("discard_detail", "");
  r.flagged = j.value("flagged", false);
  if (j.contains("score") && j["score"].is_number()) r.score = j["score"].get<double>();
  r.unmapped_notes = j.value("unmapped_notes", std::size_t{0});
  if (j.contains("alignment") && j["alignment"].is_object()) {
    const auto& a = j["alignment"];
    AlignmentReport rep;
    rep.matched_fraction = a.value("matched_fraction", 0.0);
    rep.max_abs_deviation = a.value("max_abs_deviation", 0.0);
    rep.verdict = a.value("verdict", "keep") == "keep" ? Verdict::Keep : Verdict::Discard;
    rep.reason = a.value("reason", "");
    r.alignment = rep;
  }
  if (j.contains("discrepancies")) {
    for (const auto& d : j["discrepancies"]) {
      r.discrepancies.push_back({d.value("time", 0.0), classes_from_json(d.value("gameplay", nlohmann::json::array())),
                                 classes_from_json(d.value("animation", nlohmann::json::array())), d.value("action", "")});
    }
  }
  return r;
}

inline std::string format_manifest(const Manifest& m) {
  nlohmann::json doc;
  doc["schema_version"] = kManifestSchemaVersion;
  doc["tracks"] = nlohmann::json::array();
  for (const auto& r : m.tracks) doc["tracks"].push_back(to_json(r));
  return doc.dump(2) + "\n";
}

inline Manifest parse_manifest(std::string_view content) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("manifest is not valid JSON: ") + e.what());
  }
  int version = doc.value("schema_version", 0);
  if (version != kManifestSchemaVersion) {
    throw Error(ErrorCode::Io, "unsupported manifest schema version " + std::to_string(version));
  }
  Manifest m;
  try {
    for (const auto& t : doc.at("tracks")) m.tracks.push_back(record_from_json(t));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("malformed manifest: ") + e.what());
  }
  std::sort(m.tracks.begin(), m.tracks.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return m;
}

inline Manifest load_manifest(const std::filesystem::path& path) { return parse_manifest(text::read_file(path)); }

inline void save_manifest(const std::filesystem::path& path, const Manifest& m) {
  text::write_file_atomic(path, format_manifest(m));
}

}  // namespace adtof
