#include "punct/tokenizer.hpp"

#include <cstddef>
#include <utility>

namespace punct {

namespace {

struct Decoded {
  char32_t cp;
  std::size_t len;
};

// Lenient UTF-8 decode: an invalid or truncated sequence yields its lead
// byte as a single codepoint, so every byte string decodes somehow and
// tokenization stays total.
Decoded decode(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t need = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    need = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    need = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    need = 3;
    cp = b0 & 0x07;
  } else {
    return {b0, 1};
  }
  if (i + need >= s.size()) return {b0, 1};
  for (std::size_t k = 1; k <= need; ++k) {
    const auto bk = static_cast<unsigned char>(s[i + k]);
    if ((bk & 0xC0) != 0x80) return {b0, 1};
    cp = (cp << 6) | (bk & 0x3F);
  }
  return {cp, need + 1};
}

// Quote/ellipsis folding applied by normalize_text; tokenize() consults
// the same mapping so both agree on what a quote is.
// Returns the replacement codepoint, or 0 if the codepoint passes through.
char32_t fold_cp(char32_t cp) {
  switch (cp) {
    case 0x2018:  // left single
    case 0x2019:  // right single
    case 0x201A:  // low-9 single
    case 0x201B:  // high-reversed-9 single
    case 0x2039:  // single left guillemet
    case 0x203A:  // single right guillemet
      return '\'';
    case 0x201C:  // left double
    case 0x201D:  // right double
    case 0x201E:  // low-9 double
    case 0x201F:  // high-reversed-9 double
    case 0x00AB:  // left guillemet
    case 0x00BB:  // right guillemet
      return '"';
    case 0x2026:  // horizontal ellipsis
      return 0x2026;
    default:
      return 0;
  }
}

// Word characters are ASCII alphanumerics plus general non-ASCII letters;
// punctuation, symbol and separator ranges are excluded.
bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'A' && cp <= 'Z') ||
           (cp >= 'a' && cp <= 'z');
  }
  if (cp < 0xC0) return false;                  // Latin-1 punctuation, stray bytes
  if (cp == 0x00D7 || cp == 0x00F7) return false;  // multiplication, division
  if (cp >= 0x2000 && cp <= 0x206F) return false;  // general punctuation
  return true;
}

// Letters for flank tests: word characters minus ASCII digits.
bool is_letter(char32_t cp) {
  if (cp >= '0' && cp <= '9') return false;
  return is_word_char(cp);
}

// The codepoint at byte offset i with folding applied; 0 past the end.
char32_t folded_at(std::string_view s, std::size_t i) {
  if (i >= s.size()) return 0;
  const Decoded d = decode(s, i);
  const char32_t f = fold_cp(d.cp);
  return f ? f : d.cp;
}

}  // namespace

std::string normalize_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  char32_t prev = 0;  // last codepoint appended (post-fold)
  std::size_t i = 0;
  while (i < raw.size()) {
    const Decoded d = decode(raw, i);
    const char32_t folded = fold_cp(d.cp);
    char32_t emitted;
    if (folded == 0x2026) {
      out += "...";
      emitted = '.';
    } else if (folded != 0) {
      // Missing-spacing repair: a double quote glued between two letters
      // gets a space in front. Single quotes are left alone (apostrophes).
      if (folded == '"' && is_letter(prev) && is_letter(folded_at(raw, i + d.len))) {
        out += ' ';
      }
      out += static_cast<char>(folded);
      emitted = folded;
    } else {
      if (d.cp == '"' && is_letter(prev) && is_letter(folded_at(raw, i + d.len))) {
        out += ' ';
      }
      out.append(raw.substr(i, d.len));
      emitted = d.cp;
    }
    prev = emitted;
    i += d.len;
  }
  return out;
}

TokenizedDoc tokenize(std::string_view text, std::string doc_id) {
  TokenizedDoc doc;
  doc.doc_id = std::move(doc_id);
  int words = 0;      // completed words since the previous mark
  bool in_word = false;

  const auto end_word = [&] {
    if (in_word) {
      ++words;
      in_word = false;
    }
  };
  const auto emit = [&](Mark m) {
    end_word();
    doc.seq.push_back(m);
    doc.gaps.push_back(words);
    words = 0;
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const Decoded d = decode(text, i);
    const char32_t folded = fold_cp(d.cp);
    const char32_t cp = folded ? folded : d.cp;
    std::size_t advance = d.len;
    switch (cp) {
      case '.':
        if (i + 2 < text.size() && text[i + 1] == '.' && text[i + 2] == '.') {
          emit(Mark::Ellipsis);
          advance = 3;
        } else {
          emit(Mark::Period);
        }
        break;
      case 0x2026:
        emit(Mark::Ellipsis);
        break;
      case ',': emit(Mark::Comma); break;
      case ':': emit(Mark::Colon); break;
      case ';': emit(Mark::Semicolon); break;
      case '(': emit(Mark::LParen); break;
      case ')': emit(Mark::RParen); break;
      case '?': emit(Mark::Question); break;
      case '!': emit(Mark::Exclam); break;
      case '"': emit(Mark::Quote); break;
      case '\'': {
        const bool letter_before = i > 0 && [&] {
          // Scan back one codepoint: skip continuation bytes, then the
          // lead byte must span exactly up to position i.
          for (std::size_t back = 1; back <= 4 && back <= i; ++back) {
            const auto b = static_cast<unsigned char>(text[i - back]);
            if ((b & 0xC0) == 0x80) continue;
            const Decoded p = decode(text, i - back);
            return p.len == back && is_letter(fold_cp(p.cp) ? fold_cp(p.cp) : p.cp);
          }
          return false;
        }();
        const bool letter_after = is_letter(folded_at(text, i + d.len));
        if (letter_before && letter_after) {
          end_word();  // apostrophe: no mark, but it splits the word
        } else {
          emit(Mark::Quote);
        }
        break;
      }
      default:
        if (is_word_char(cp)) {
          in_word = true;
        } else {
          end_word();
        }
        break;
    }
    i += advance;
  }
  return doc;
}

}  // namespace punct
