#include "punct/svg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace punct {

Palette default_palette() {
  return Palette{{
      "#1f77b4",  // period
      "#ff7f0e",  // comma
      "#2ca02c",  // colon
      "#d62728",  // semicolon
      "#9467bd",  // lparen
      "#8c564b",  // rparen
      "#e377c2",  // question
      "#7f7f7f",  // exclam
      "#bcbd22",  // quote
      "#17becf",  // ellipsis
  }};
}

std::string render_strip(const MarkSequence& seq, std::size_t start,
                         std::size_t count, const Palette& palette,
                         int cells_per_row) {
  if (cells_per_row < 1) throw std::invalid_argument("render_strip: cells_per_row must be >= 1");
  const std::size_t begin = std::min(start, seq.size());
  const std::size_t n = std::min(count, seq.size() - begin);

  constexpr int kCell = 12;
  constexpr int kPitch = 14;
  constexpr int kMargin = 10;
  constexpr int kLegendRow = 22;

  const auto cols = static_cast<std::size_t>(cells_per_row);
  const std::size_t grid_rows = n == 0 ? 0 : (n + cols - 1) / cols;
  const int grid_w = cells_per_row * kPitch;
  const int grid_h = static_cast<int>(grid_rows) * kPitch;
  // Legend: 10 swatches, 70px apart, wrapped to the grid width.
  const int legend_per_row = std::max(1, grid_w / 70);
  const int legend_rows = (kMarkCount + legend_per_row - 1) / legend_per_row;
  const int width = grid_w + 2 * kMargin;
  const int height = grid_h + legend_rows * kLegendRow + 3 * kMargin;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
     << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height
     << "\" fill=\"#ffffff\"/>\n";

  for (std::size_t k = 0; k < n; ++k) {
    const int x = kMargin + static_cast<int>(k % cols) * kPitch;
    const int y = kMargin + static_cast<int>(k / cols) * kPitch;
    os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell
       << "\" height=\"" << kCell << "\" fill=\""
       << palette.colors[mark_index(seq[begin + k])] << "\"/>\n";
  }

  const int legend_top = kMargin + grid_h + kMargin;
  for (int i = 0; i < kMarkCount; ++i) {
    const int x = kMargin + (i % legend_per_row) * 70;
    const int y = legend_top + (i / legend_per_row) * kLegendRow;
    const auto m = static_cast<Mark>(i);
    os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell
       << "\" height=\"" << kCell << "\" fill=\"" << palette.colors[i] << "\"/>\n";
    os << "<text x=\"" << x + kCell + 6 << "\" y=\"" << y + kCell - 1
       << "\" font-family=\"monospace\" font-size=\"12\">" << mark_glyph(m)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace punct
