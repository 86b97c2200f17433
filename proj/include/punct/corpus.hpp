#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace punct {

struct DocumentMeta {
  std::string doc_id;
  std::string title;
  std::string author;
  std::string language;  // lowercase code, e.g. "en"
  std::optional<int> birth_year;
  std::optional<int> death_year;
  std::string bookshelf;  // genre label; empty = unassigned
  std::optional<int> pub_date;
};

/// Cleaning rule names, in application order.
namespace rules {
inline constexpr const char* kLanguage = "language";
inline constexpr const char* kAuthorLabel = "author_label";
inline constexpr const char* kDuplicateTitle = "duplicate_title";
inline constexpr const char* kCompleteTitle = "complete_title";
inline constexpr const char* kNoQuotes = "no_quotes";
inline constexpr const char* kUnreadable = "unreadable";
inline constexpr const char* kAuthorMinDocs = "author_min_docs";
inline constexpr const char* kGenreFilter = "genre_filter";
}  // namespace rules

struct ManifestEntry {
  DocumentMeta meta;
  bool retained = true;
  std::string removal_rule;  // empty when retained
};

/// The cleaned corpus index. documents preserves input order; the
/// cleaning report lists every rule with its removal count, and
/// Sum(removals) + retained = documents.size() always holds.
struct CorpusManifest {
  std::vector<ManifestEntry> documents;
  std::vector<std::pair<std::string, int>> cleaning_report;
  int flagged_no_sentinels = 0;  // informational; not a removal count
};

int retained_count(const CorpusManifest& manifest);

struct StrippedText {
  std::string body;
  bool found_sentinel = false;
};

/// Cuts project boilerplate delimited by start/end sentinel lines
/// ("*** START OF" / "*** END OF" plus the legacy small-print and
/// "End of (the) Project Gutenberg" forms, anchored to line starts).
/// Returns the input unchanged with found_sentinel = false when no
/// sentinel matches; a one-sided match strips that side only.
StrippedText strip_header(std::string_view text);

/// Returns a document body (already header-stripped) or nullopt when the
/// document cannot be read.
using BodyAccessor =
    std::function<std::optional<std::string>(const std::string& doc_id)>;

/// Applies the cleaning rules in order: (1) keep language "en";
/// (2) drop author labels Various/Anonymous/Unknown; (3) drop duplicate
/// titles case-insensitively, keeping the lowest doc_id (numeric when
/// both ids are numeric); (4) drop titles containing the whole word
/// "complete" (case-insensitive); (5) drop documents whose body has no
/// double-quote character; (6) keep only authors with at least
/// author_min_docs surviving documents. Bodies are fetched only for
/// documents surviving rules 1-4; accessor failure removes the document
/// under the "unreadable" rule.
CorpusManifest clean(const std::vector<DocumentMeta>& metadata,
                     const BodyAccessor& body_of, int author_min_docs = 10);

/// Restricts a cleaned manifest to documents whose bookshelf is in
/// genre_list and whose genre keeps at least min_docs documents; the
/// dropped documents are recorded under the "genre_filter" rule. Genres
/// in the list matching no document produce warnings (second member of
/// the result), not failures.
std::pair<CorpusManifest, std::vector<std::string>> genre_subset(
    const CorpusManifest& manifest, const std::vector<std::string>& genre_list,
    int min_docs = 10);

}  // namespace punct
