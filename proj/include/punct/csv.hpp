#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace punct::csv {

using Row = std::vector<std::string>;

/// RFC 4180 encoding: fields containing comma, double quote, CR or LF
/// are wrapped in double quotes with embedded quotes doubled.
std::string encode_row(const Row& fields);

/// encode_row plus a trailing '\n'.
void write_row(std::ostream& os, const Row& fields);

/// Parses a whole CSV stream, honoring quoted fields (including embedded
/// newlines and doubled quotes). A trailing newline does not produce an
/// empty record. Throws std::runtime_error on an unterminated quote.
std::vector<Row> parse(std::istream& is);

/// Convenience wrapper over parse() for a single in-memory record.
Row parse_row(std::string_view line);

}  // namespace punct::csv
