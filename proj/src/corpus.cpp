#include "punct/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace punct {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool starts_with(std::string_view line, std::string_view prefix) {
  return line.substr(0, prefix.size()) == prefix;
}

bool is_start_sentinel(std::string_view line) {
  if (starts_with(line, "*** START OF") || starts_with(line, "***START OF")) return true;
  // Legacy small-print boilerplate ends with a *END* line.
  return starts_with(line, "*END") && line.find("SMALL PRINT") != std::string_view::npos;
}

bool is_end_sentinel(std::string_view line) {
  return starts_with(line, "*** END OF") || starts_with(line, "***END OF") ||
         starts_with(line, "End of the Project Gutenberg") ||
         starts_with(line, "End of The Project Gutenberg") ||
         starts_with(line, "End of Project Gutenberg");
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

// "Lowest" doc_id: numeric order when both ids are numeric, else bytewise.
bool id_less(const std::string& a, const std::string& b) {
  if (all_digits(a) && all_digits(b)) {
    if (a.size() != b.size()) return a.size() < b.size();
  }
  return a < b;
}

bool title_has_complete_word(const std::string& title) {
  const std::string t = lower(title);
  static constexpr std::string_view kWord = "complete";
  std::size_t pos = 0;
  const auto alnum = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
  };
  while ((pos = t.find(kWord, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !alnum(t[pos - 1]);
    const std::size_t after = pos + kWord.size();
    const bool right_ok = after == t.size() || !alnum(t[after]);
    if (left_ok && right_ok) return true;
    pos += 1;
  }
  return false;
}

}  // namespace

int retained_count(const CorpusManifest& manifest) {
  int n = 0;
  for (const ManifestEntry& e : manifest.documents) {
    if (e.retained) ++n;
  }
  return n;
}

StrippedText strip_header(std::string_view text) {
  std::size_t body_begin = 0;
  std::size_t body_end = text.size();
  bool start_found = false;
  bool end_found = false;

  std::size_t line_begin = 0;
  while (line_begin <= text.size()) {
    std::size_t nl = text.find('\n', line_begin);
    const std::size_t line_stop = (nl == std::string_view::npos) ? text.size() : nl;
    std::string_view line = text.substr(line_begin, line_stop - line_begin);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!start_found && !end_found && is_start_sentinel(line)) {
      start_found = true;
      body_begin = (nl == std::string_view::npos) ? text.size() : nl + 1;
    } else if (!end_found && is_end_sentinel(line) &&
               (!start_found || line_begin >= body_begin)) {
      end_found = true;
      body_end = line_begin;
      break;
    }
    if (nl == std::string_view::npos) break;
    line_begin = nl + 1;
  }

  if (!start_found && !end_found) {
    return {std::string(text), false};
  }
  if (body_end < body_begin) body_end = body_begin;
  return {std::string(text.substr(body_begin, body_end - body_begin)), true};
}

CorpusManifest clean(const std::vector<DocumentMeta>& metadata,
                     const BodyAccessor& body_of, int author_min_docs) {
  CorpusManifest manifest;
  manifest.documents.reserve(metadata.size());
  for (const DocumentMeta& meta : metadata) {
    manifest.documents.push_back({meta, true, ""});
  }

  std::map<std::string, int> counts;
  const auto remove_doc = [&](ManifestEntry& e, const char* rule) {
    e.retained = false;
    e.removal_rule = rule;
    ++counts[rule];
  };

  // (1) language, (2) author labels
  for (ManifestEntry& e : manifest.documents) {
    const std::string lang = lower(std::string(trim(e.meta.language)));
    if (lang != "en" && lang != "english") {
      remove_doc(e, rules::kLanguage);
      continue;
    }
    const std::string author = lower(std::string(trim(e.meta.author)));
    if (author == "various" || author == "anonymous" || author == "unknown") {
      remove_doc(e, rules::kAuthorLabel);
    }
  }

  // (3) duplicate titles, case-insensitive, keep the lowest doc_id
  {
    std::map<std::string, std::size_t> keeper;  // normalized title -> index
    for (std::size_t i = 0; i < manifest.documents.size(); ++i) {
      ManifestEntry& e = manifest.documents[i];
      if (!e.retained) continue;
      const std::string key = lower(trim(e.meta.title));
      auto [it, inserted] = keeper.emplace(key, i);
      if (inserted) continue;
      ManifestEntry& held = manifest.documents[it->second];
      if (id_less(e.meta.doc_id, held.meta.doc_id)) {
        remove_doc(held, rules::kDuplicateTitle);
        it->second = i;
      } else {
        remove_doc(e, rules::kDuplicateTitle);
      }
    }
  }

  // (4) "complete" titles
  for (ManifestEntry& e : manifest.documents) {
    if (e.retained && title_has_complete_word(e.meta.title)) {
      remove_doc(e, rules::kCompleteTitle);
    }
  }

  // (5) body checks, only for survivors
  for (ManifestEntry& e : manifest.documents) {
    if (!e.retained) continue;
    const std::optional<std::string> body = body_of(e.meta.doc_id);
    if (!body) {
      remove_doc(e, rules::kUnreadable);
    } else if (body->find('"') == std::string::npos) {
      remove_doc(e, rules::kNoQuotes);
    }
  }

  // (6) author minimum
  {
    std::map<std::string, int> author_docs;
    for (const ManifestEntry& e : manifest.documents) {
      if (e.retained) ++author_docs[e.meta.author];
    }
    for (ManifestEntry& e : manifest.documents) {
      if (e.retained && author_docs[e.meta.author] < author_min_docs) {
        remove_doc(e, rules::kAuthorMinDocs);
      }
    }
  }

  manifest.cleaning_report = {
      {rules::kLanguage, counts[rules::kLanguage]},
      {rules::kAuthorLabel, counts[rules::kAuthorLabel]},
      {rules::kDuplicateTitle, counts[rules::kDuplicateTitle]},
      {rules::kCompleteTitle, counts[rules::kCompleteTitle]},
      {rules::kNoQuotes, counts[rules::kNoQuotes]},
      {rules::kUnreadable, counts[rules::kUnreadable]},
      {rules::kAuthorMinDocs, counts[rules::kAuthorMinDocs]},
  };
  return manifest;
}

std::pair<CorpusManifest, std::vector<std::string>> genre_subset(
    const CorpusManifest& manifest, const std::vector<std::string>& genre_list,
    int min_docs) {
  CorpusManifest out = manifest;
  std::vector<std::string> warnings;

  std::map<std::string, int> genre_counts;
  for (const ManifestEntry& e : out.documents) {
    if (e.retained && !e.meta.bookshelf.empty()) ++genre_counts[e.meta.bookshelf];
  }

  std::map<std::string, bool> listed;  // genre -> matched any document
  for (const std::string& g : genre_list) listed.emplace(g, false);

  int removed = 0;
  for (ManifestEntry& e : out.documents) {
    if (!e.retained) continue;
    auto it = listed.find(e.meta.bookshelf);
    const bool keep = !e.meta.bookshelf.empty() && it != listed.end() &&
                      genre_counts[e.meta.bookshelf] >= min_docs;
    if (it != listed.end() && !e.meta.bookshelf.empty()) it->second = true;
    if (!keep) {
      e.retained = false;
      e.removal_rule = rules::kGenreFilter;
      ++removed;
    }
  }
  out.cleaning_report.emplace_back(rules::kGenreFilter, removed);

  for (const auto& [genre, matched] : listed) {
    if (!matched) warnings.push_back("genre matches no document: " + genre);
  }
  return {std::move(out), warnings};
}

}  // namespace punct
