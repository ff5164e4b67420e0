#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adtof/error.hpp"
#include "adtof/text.hpp"

namespace adtof {

struct ChartMetadata {
  std::string title;
  std::string artist;
  std::string genre;
  // Remaining entries in file order, keys lower-cased.
  std::vector<std::pair<std::string, std::string>> extra;
};

/// Reads a `song.ini`-style file: one section header followed by key=value
/// lines. Keys are matched case-insensitively and values are trimmed.
inline ChartMetadata parse_metadata(std::string_view raw) {
  std::string content = text::sanitize_utf8(raw);
  std::string_view view = content;
  if (view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);

  ChartMetadata meta;
  bool have_artist = false;
  for (auto line : text::split_lines(view)) {
    line = text::trim(line);
    if (line.empty() || line.front() == ';' || line.front() == '#' || line.front() == '[') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) continue;
    std::string key = text::lower(text::trim(line.substr(0, eq)));
    std::string value(text::trim(line.substr(eq + 1)));
    if (key == "name") {
      meta.title = value;
    } else if (key == "artist") {
      meta.artist = value;
      have_artist = true;
    } else if (key == "genre") {
      meta.genre = value;
    } else {
      meta.extra.emplace_back(std::move(key), std::move(value));
    }
  }
  if (!have_artist || meta.artist.empty()) throw Error(ErrorCode::MissingArtist, "metadata has no artist");
  return meta;
}

}  // namespace adtof
