#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace punct {

/// The ten-mark punctuation alphabet. The enumerator order fixes the
/// index 0..9 used by every feature vector and matrix.
enum class Mark : std::uint8_t {
  Period = 0,
  Comma = 1,
  Colon = 2,
  Semicolon = 3,
  LParen = 4,
  RParen = 5,
  Question = 6,
  Exclam = 7,
  Quote = 8,
  Ellipsis = 9,
};

inline constexpr int kMarkCount = 10;

inline int mark_index(Mark m) { return static_cast<int>(m); }

/// Stable lowercase name, e.g. "period".
const char* mark_name(Mark m);

/// Display glyph, e.g. "." or "...".
const char* mark_glyph(Mark m);

/// Single digit '0'..'9' used by the token record format.
char mark_code(Mark m);

/// Inverse of mark_code; nullopt outside '0'..'9'.
std::optional<Mark> mark_from_code(char c);

using MarkSequence = std::vector<Mark>;
using GapSequence = std::vector<int>;

/// A document reduced to its punctuation: seq holds the marks in order of
/// appearance and gaps[i] the number of words immediately before seq[i]
/// (gaps[0] counts words from the start of the text).
/// Invariant: seq.size() == gaps.size().
struct TokenizedDoc {
  std::string doc_id;
  MarkSequence seq;
  GapSequence gaps;
};

}  // namespace punct
