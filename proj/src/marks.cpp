#include "punct/marks.hpp"

namespace punct {

const char* mark_name(Mark m) {
  switch (m) {
    case Mark::Period: return "period";
    case Mark::Comma: return "comma";
    case Mark::Colon: return "colon";
    case Mark::Semicolon: return "semicolon";
    case Mark::LParen: return "lparen";
    case Mark::RParen: return "rparen";
    case Mark::Question: return "question";
    case Mark::Exclam: return "exclam";
    case Mark::Quote: return "quote";
    case Mark::Ellipsis: return "ellipsis";
  }
  return "";
}

const char* mark_glyph(Mark m) {
  switch (m) {
    case Mark::Period: return ".";
    case Mark::Comma: return ",";
    case Mark::Colon: return ":";
    case Mark::Semicolon: return ";";
    case Mark::LParen: return "(";
    case Mark::RParen: return ")";
    case Mark::Question: return "?";
    case Mark::Exclam: return "!";
    case Mark::Quote: return "\"";
    case Mark::Ellipsis: return "...";
  }
  return "";
}

char mark_code(Mark m) { return static_cast<char>('0' + mark_index(m)); }

std::optional<Mark> mark_from_code(char c) {
  if (c < '0' || c > '9') return std::nullopt;
  return static_cast<Mark>(c - '0');
}

}  // namespace punct
