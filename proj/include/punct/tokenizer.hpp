#pragma once

#include <string>
#include <string_view>

#include "punct/marks.hpp"

namespace punct {

/// Folds typographic single and double quotes to their straight ASCII
/// equivalents, folds the one-character ellipsis to "...", and inserts a
/// space where a double quote is glued directly between two letters
/// (missing-spacing repair). All other bytes pass through unchanged.
/// Total on any byte string and idempotent.
std::string normalize_text(std::string_view raw);

/// Extracts the ordered punctuation sequence and word gaps from
/// normalized text. Rules:
///   - "..." emits one Ellipsis (greedy longest match, so "...." is
///     Ellipsis then Period); a lone '.' emits Period
///   - , : ; ( ) ? ! emit their marks
///   - '"' emits Quote; a straight single quote emits Quote unless both
///     neighbors are letters, in which case it is an apostrophe and emits
///     nothing
///   - hyphens, dashes, slashes and every other character emit nothing
/// Words are maximal letter/digit runs, so internal apostrophes and
/// hyphens split words ("don't" and "half-assed" each count 2).
/// gaps[i] = number of words between seq[i-1] (or the start) and seq[i].
TokenizedDoc tokenize(std::string_view text, std::string doc_id = "");

}  // namespace punct
