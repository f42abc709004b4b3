#pragma once

#include <concepts>
#include <string>
#include <string_view>
#include <vector>

namespace rotormesh {

/// Fixed 12-significant-digit rendering used by every CSV and report.
std::string format_number(double value);

/// Accumulates a header row and data rows; each row is newline-terminated.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  template <typename... Ts>
  void row(const Ts&... cells) {
    std::vector<std::string> out;
    out.reserve(sizeof...(Ts));
    (out.push_back(cell(cells)), ...);
    add_row(out);
  }

  void add_row(const std::vector<std::string>& cells);
  const std::string& str() const { return text_; }

 private:
  static std::string cell(std::string_view s) { return std::string(s); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  template <std::integral I>
  static std::string cell(I v) { return std::to_string(v); }
  static std::string cell(double v) { return format_number(v); }

  std::size_t columns_;
  std::string text_;
};

}  // namespace rotormesh
