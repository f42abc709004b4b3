#include "rotormesh/csv.hpp"

#include <fmt/format.h>

#include "rotormesh/error.hpp"

namespace rotormesh {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  return fmt::format("{:.12g}", value);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  add_row(header);
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw Error(fmt::format("CSV row has {} cells, header has {}", cells.size(), columns_));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

}  // namespace rotormesh
