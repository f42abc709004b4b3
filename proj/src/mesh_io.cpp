#include "rotormesh/mesh_io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "rotormesh/error.hpp"

namespace rotormesh {
namespace {

/// Line cursor over the file text that skips blank lines and `%` comments.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  /// Next meaningful line with comments stripped, or nullopt at end of input.
  std::optional<std::string_view> next() {
    while (pos_ < text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_no_;
      if (auto c = line.find('%'); c != std::string_view::npos) line = line.substr(0, c);
      line = trim(line);
      if (!line.empty()) return line;
    }
    return std::nullopt;
  }

  std::size_t line() const { return line_no_; }

  static std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T to_number(std::string_view tok, std::size_t line, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, fmt::format("invalid {} '{}'", what, tok));
  }
  return value;
}

struct KeyValue {
  std::string_view key;
  std::string_view value;
};

std::optional<KeyValue> split_key(std::string_view line) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) return std::nullopt;
  return KeyValue{LineReader::trim(line.substr(0, eq)), LineReader::trim(line.substr(eq + 1))};
}

Index header_count(const KeyValue& kv, std::size_t line) {
  auto toks = split_ws(kv.value);
  if (toks.empty()) throw ParseError(line, fmt::format("malformed header: {} has no value", kv.key));
  const auto n = to_number<Index>(toks.front(), line, fmt::format("{} count", kv.key));
  if (n < 0) throw ParseError(line, fmt::format("malformed header: negative {}", kv.key));
  return n;
}

struct PendingElement {
  Element element;
  std::size_t line;
};

PendingElement parse_element_line(std::string_view line, std::size_t line_no, bool allow_index) {
  auto toks = split_ws(line);
  const int code = to_number<int>(toks.front(), line_no, "element type code");
  auto kind = kind_from_code(code);
  if (!kind) throw ParseError(line_no, fmt::format("unknown element type {}", code));
  const auto nv = static_cast<std::size_t>(vertex_count(*kind));
  if (toks.size() != nv + 1 && !(allow_index && toks.size() == nv + 2)) {
    throw ParseError(line_no, fmt::format("{} expects {} vertex indices, got {}", kind_name(*kind),
                                          nv, toks.size() - 1));
  }
  Element e{*kind, {}};
  e.vertices.reserve(nv);
  for (std::size_t k = 0; k < nv; ++k) {
    e.vertices.push_back(to_number<Index>(toks[k + 1], line_no, "vertex index"));
  }
  return {std::move(e), line_no};
}

std::string_view next_or_truncated(LineReader& reader, std::string_view section, Index expected,
                                   Index got) {
  auto line = reader.next();
  if (!line) {
    throw ParseError(reader.line(), fmt::format("truncated {} section: expected {} entries, found {}",
                                                section, expected, got));
  }
  return *line;
}

void check_range(const PendingElement& pe, Index npoints) {
  for (Index v : pe.element.vertices) {
    if (v < 0 || v >= npoints) {
      throw ParseError(pe.line, fmt::format("vertex index {} out of range [0, {})", v, npoints));
    }
  }
}

std::string fmt_coord(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

Mesh parse_mesh(std::string_view text) {
  LineReader reader(text);
  int dim = 0;
  std::optional<Index> npoin;
  std::vector<PendingElement> elements;
  std::vector<Vec3> points;
  struct PendingMarker {
    std::string name;
    std::vector<PendingElement> faces;
  };
  std::vector<PendingMarker> markers;
  bool seen_nelem = false;

  while (auto line = reader.next()) {
    const std::size_t line_no = reader.line();
    auto kv = split_key(*line);
    if (!kv) throw ParseError(line_no, fmt::format("malformed header: unexpected line '{}'", *line));

    if (kv->key == "NDIME") {
      const auto d = header_count(*kv, line_no);
      if (d != 2 && d != 3) throw ParseError(line_no, fmt::format("malformed header: NDIME= {}", d));
      dim = static_cast<int>(d);
    } else if (kv->key == "NELEM") {
      if (dim == 0) throw ParseError(line_no, "malformed header: NELEM before NDIME");
      const Index n = header_count(*kv, line_no);
      seen_nelem = true;
      elements.reserve(static_cast<std::size_t>(n));
      for (Index i = 0; i < n; ++i) {
        auto l = next_or_truncated(reader, "NELEM", n, i);
        elements.push_back(parse_element_line(l, reader.line(), true));
      }
    } else if (kv->key == "NPOIN") {
      if (dim == 0) throw ParseError(line_no, "malformed header: NPOIN before NDIME");
      const Index n = header_count(*kv, line_no);
      npoin = n;
      points.reserve(static_cast<std::size_t>(n));
      for (Index i = 0; i < n; ++i) {
        auto l = next_or_truncated(reader, "NPOIN", n, i);
        auto toks = split_ws(l);
        const auto d = static_cast<std::size_t>(dim);
        if (toks.size() != d && toks.size() != d + 1) {
          throw ParseError(reader.line(),
                           fmt::format("expected {} coordinates, got {} fields", dim, toks.size()));
        }
        Vec3 p = Vec3::Zero();
        for (std::size_t k = 0; k < d; ++k) p[k] = to_number<double>(toks[k], reader.line(), "coordinate");
        points.push_back(p);
      }
    } else if (kv->key == "NMARK") {
      if (dim == 0) throw ParseError(line_no, "malformed header: NMARK before NDIME");
      const Index m = header_count(*kv, line_no);
      for (Index i = 0; i < m; ++i) {
        auto tag_line = next_or_truncated(reader, "NMARK", m, i);
        auto tag = split_key(tag_line);
        if (!tag || tag->key != "MARKER_TAG" || tag->value.empty()) {
          throw ParseError(reader.line(), "malformed header: expected MARKER_TAG= name");
        }
        PendingMarker pm{std::string(tag->value), {}};
        auto count_line = next_or_truncated(reader, "NMARK", m, i);
        auto count = split_key(count_line);
        if (!count || count->key != "MARKER_ELEMS") {
          throw ParseError(reader.line(), "malformed header: expected MARKER_ELEMS= count");
        }
        const Index k = header_count(*count, reader.line());
        for (Index j = 0; j < k; ++j) {
          auto l = next_or_truncated(reader, "MARKER_ELEMS", k, j);
          pm.faces.push_back(parse_element_line(l, reader.line(), false));
        }
        markers.push_back(std::move(pm));
      }
    } else if (kv->key == "NZONE" || kv->key == "IZONE") {
      // single-zone files only; the zone headers carry no data we need
    } else {
      throw ParseError(line_no, fmt::format("malformed header: unknown keyword '{}'", kv->key));
    }
  }

  if (dim == 0) throw ParseError(reader.line(), "malformed header: missing NDIME");
  if (!npoin) throw ParseError(reader.line(), "malformed header: missing NPOIN");
  if (!seen_nelem) throw ParseError(reader.line(), "malformed header: missing NELEM");

  const auto np = static_cast<Index>(points.size());
  std::vector<Element> cells;
  cells.reserve(elements.size());
  for (auto& pe : elements) {
    check_range(pe, np);
    if (topological_dim(pe.element.kind) != dim) {
      throw ParseError(pe.line, fmt::format("{} is not a {}D cell", kind_name(pe.element.kind), dim));
    }
    cells.push_back(std::move(pe.element));
  }
  std::vector<Marker> out_markers;
  for (auto& pm : markers) {
    Marker m{pm.name, {}};
    for (auto& pf : pm.faces) {
      check_range(pf, np);
      m.faces.push_back(std::move(pf.element));
    }
    out_markers.push_back(std::move(m));
  }
  return Mesh(dim, std::move(points), std::move(cells), std::move(out_markers));
}

Mesh read_mesh_file(const std::filesystem::path& path) { return parse_mesh(read_text_file(path)); }

std::string write_mesh(const Mesh& mesh) {
  fmt::memory_buffer out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "NDIME= {}\n", mesh.dim());
  fmt::format_to(it, "NELEM= {}\n", mesh.element_count());
  for (std::size_t i = 0; i < mesh.element_count(); ++i) {
    const auto& e = mesh.elements()[i];
    fmt::format_to(it, "{}", static_cast<int>(e.kind));
    for (Index v : e.vertices) fmt::format_to(it, " {}", v);
    fmt::format_to(it, " {}\n", i);
  }
  fmt::format_to(it, "NPOIN= {}\n", mesh.point_count());
  for (std::size_t i = 0; i < mesh.point_count(); ++i) {
    const auto& p = mesh.points()[i];
    for (int k = 0; k < mesh.dim(); ++k) fmt::format_to(it, "{} ", fmt_coord(p[k]));
    fmt::format_to(it, "{}\n", i);
  }
  fmt::format_to(it, "NMARK= {}\n", mesh.markers().size());
  for (const auto& m : mesh.markers()) {
    fmt::format_to(it, "MARKER_TAG= {}\nMARKER_ELEMS= {}\n", m.name, m.faces.size());
    for (const auto& f : m.faces) {
      fmt::format_to(it, "{}", static_cast<int>(f.kind));
      for (Index v : f.vertices) fmt::format_to(it, " {}", v);
      fmt::format_to(it, "\n");
    }
  }
  return fmt::to_string(out);
}

std::string write_vtk(const Mesh& mesh, std::span<const PointField> fields, std::string_view title) {
  const std::size_t np = mesh.point_count();
  for (const auto& f : fields) {
    const std::size_t n = std::visit([](const auto& v) { return v.size(); }, f.values);
    if (n != np) {
      throw Error(fmt::format("field '{}' has {} values, mesh has {} points", f.name, n, np));
    }
  }

  fmt::memory_buffer out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "# vtk DataFile Version 3.0\n{}\nASCII\nDATASET UNSTRUCTURED_GRID\n", title);
  fmt::format_to(it, "POINTS {} double\n", np);
  for (const auto& p : mesh.points()) {
    fmt::format_to(it, "{} {} {}\n", fmt_coord(p.x()), fmt_coord(p.y()), fmt_coord(p.z()));
  }
  std::size_t size = 0;
  for (const auto& e : mesh.elements()) size += e.vertices.size() + 1;
  fmt::format_to(it, "CELLS {} {}\n", mesh.element_count(), size);
  for (const auto& e : mesh.elements()) {
    fmt::format_to(it, "{}", e.vertices.size());
    for (Index v : e.vertices) fmt::format_to(it, " {}", v);
    fmt::format_to(it, "\n");
  }
  fmt::format_to(it, "CELL_TYPES {}\n", mesh.element_count());
  for (const auto& e : mesh.elements()) fmt::format_to(it, "{}\n", static_cast<int>(e.kind));

  if (!fields.empty()) {
    fmt::format_to(it, "POINT_DATA {}\n", np);
    for (const auto& f : fields) {
      if (const auto* s = std::get_if<std::vector<double>>(&f.values)) {
        fmt::format_to(it, "SCALARS {} double 1\nLOOKUP_TABLE default\n", f.name);
        for (double v : *s) fmt::format_to(it, "{}\n", fmt_coord(v));
      } else {
        fmt::format_to(it, "VECTORS {} double\n", f.name);
        for (const auto& v : std::get<std::vector<Vec3>>(f.values)) {
          fmt::format_to(it, "{} {} {}\n", fmt_coord(v.x()), fmt_coord(v.y()), fmt_coord(v.z()));
        }
      }
    }
  }
  return fmt::to_string(out);
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(fmt::format("failed writing '{}'", path.string()));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rotormesh
