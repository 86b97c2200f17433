#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "punct/marks.hpp"

namespace punct {

/// Fill colors per mark index, "#rrggbb".
struct Palette {
  std::array<std::string, 10> colors;
};

Palette default_palette();

/// Renders seq[start, start+count) as a row-major grid of colored cells
/// with a legend mapping glyphs to colors. count is truncated at the end
/// of the sequence. Integer geometry only, so output is byte-identical
/// for identical inputs.
std::string render_strip(const MarkSequence& seq, std::size_t start,
                         std::size_t count, const Palette& palette,
                         int cells_per_row = 60);

}  // namespace punct
