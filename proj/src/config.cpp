#include "rotormesh/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "rotormesh/mesh_io.hpp"

namespace rotormesh {
namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(std::string s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& root) : root_(root) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) {
    const std::string path = section.empty() ? key : section + "." + key;
    used_.insert(path);
    auto v = root_.get_optional<std::string>(pt::ptree::path_type(path, '.'));
    if (!v) return std::nullopt;
    return trim(*v);
  }

  std::optional<double> number(const std::string& section, const std::string& key) {
    auto s = raw(section, key);
    if (!s) return std::nullopt;
    return to_double(*s, section, key);
  }

  std::optional<bool> boolean(const std::string& section, const std::string& key) {
    auto s = raw(section, key);
    if (!s) return std::nullopt;
    std::string v = *s;
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError(fmt::format("{}.{}: expected a boolean, got '{}'", section, key, *s),
                      {section + "." + key});
  }

  std::optional<std::vector<std::string>> list(const std::string& section, const std::string& key) {
    auto s = raw(section, key);
    if (!s) return std::nullopt;
    std::string body = *s;
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
      throw ConfigError(fmt::format("{}.{}: expected a list [a, b, ...]", section, key),
                        {section + "." + key});
    }
    body = trim(std::string_view(body).substr(1, body.size() - 2));
    std::vector<std::string> out;
    if (body.empty()) return out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(unquote(item));
    return out;
  }

  std::optional<std::vector<double>> numbers(const std::string& section, const std::string& key) {
    auto items = list(section, key);
    if (!items) return std::nullopt;
    std::vector<double> out;
    for (const auto& s : *items) out.push_back(to_double(s, section, key));
    return out;
  }

  std::vector<std::string> unused() const {
    std::vector<std::string> bad;
    for (const auto& [name, child] : root_) {
      if (child.empty()) {
        if (!used_.count(name)) bad.push_back(name);
        continue;
      }
      for (const auto& [key, _] : child) {
        const std::string path = name + "." + key;
        if (!used_.count(path)) bad.push_back(path);
      }
    }
    return bad;
  }

 private:
  static double to_double(const std::string& s, const std::string& section, const std::string& key) {
    try {
      std::size_t pos = 0;
      double v = std::stod(s, &pos);
      if (pos == s.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(fmt::format("{}.{}: expected a finite number, got '{}'", section, key, s),
                      {section + "." + key});
  }

  const pt::ptree& root_;
  std::set<std::string> used_;
};

MotionSeries read_series(Reader& r, const std::string& section) {
  MotionSeries s;
  s.mean = deg_to_rad(r.number(section, "mean_deg").value_or(0.0));
  for (double v : r.numbers(section, "sin_deg").value_or(std::vector<double>{})) {
    s.sin_coeffs.push_back(deg_to_rad(v));
  }
  for (double v : r.numbers(section, "cos_deg").value_or(std::vector<double>{})) {
    s.cos_coeffs.push_back(deg_to_rad(v));
  }
  return s;
}

std::string strip_comments(std::string_view text) {
  std::string out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line = trim(text.substr(start, end - start));
    if (!line.empty() && line.front() != '#' && line.front() != ';') out += line;
    out += '\n';  // keep line numbers aligned
    start = end + 1;
  }
  return out;
}

}  // namespace

double RunConfigFile::omega() const { return rotor.rpm * 2.0 * kPi / 60.0; }

BladeMotion RunConfigFile::blade_motion(int index) const {
  if (index < 0 || index >= rotor.n_blades) {
    throw Error(fmt::format("blade index {} out of range for {} blades", index, rotor.n_blades));
  }
  BladeMotion m;
  m.flap = flap;
  m.leadlag = leadlag;
  m.pitch = pitch;
  m.hinge = rotor.hinge;
  m.azimuth_offset = 2.0 * kPi * index / rotor.n_blades;
  m.rotation_rate = omega();
  m.restore_hinge_offset = rotor.restore_hinge_offset;
  return m;
}

double RunConfigFile::support_radius() const {
  if (rbf.support_radius_m) return *rbf.support_radius_m;
  if (!rotor.chord_m) {
    throw ConfigError("support radius needs [rbf] support_radius_m or [rotor] chord_m",
                      {"rotor.chord_m"});
  }
  return rbf.support_radius_chords * *rotor.chord_m;
}

GreedyOptions RunConfigFile::greedy_options(Exec exec) const {
  GreedyOptions o;
  const bool needs_radius = rbf.kernel != KernelKind::thin_plate_spline;
  o.kernel = RbfKernel(rbf.kernel, needs_radius ? support_radius() : 1.0);
  o.with_affine = rbf.affine;
  o.tol = rbf.greedy_tol_m;
  o.level_caps = rbf.level_caps;
  o.exec = exec;
  return o;
}

RunConfigFile parse_config(std::string_view text) {
  pt::ptree root;
  try {
    std::istringstream in(strip_comments(text));
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("line {}: {}", e.line(), e.message()));
  }

  Reader r(root);
  RunConfigFile c;

  auto positive = [](std::optional<double> v, const char* key) {
    if (v && !(*v > 0.0)) throw ConfigError(fmt::format("{} must be positive", key), {key});
    return v;
  };

  const auto rpm = positive(r.number("rotor", "rpm"), "rotor.rpm");
  if (!rpm) throw ConfigError("missing required key rotor.rpm", {"rotor.rpm"});
  c.rotor.rpm = *rpm;
  c.rotor.radius_m = positive(r.number("rotor", "radius_m"), "rotor.radius_m").value_or(1.0);
  if (auto n = r.number("rotor", "n_blades")) {
    if (*n < 1 || std::floor(*n) != *n) {
      throw ConfigError("rotor.n_blades must be a positive integer", {"rotor.n_blades"});
    }
    c.rotor.n_blades = static_cast<int>(*n);
  }
  if (auto h = r.numbers("rotor", "hinge")) {
    if (h->size() != 3) throw ConfigError("rotor.hinge needs three coordinates", {"rotor.hinge"});
    c.rotor.hinge = Vec3((*h)[0], (*h)[1], (*h)[2]);
  }
  c.rotor.chord_m = positive(r.number("rotor", "chord_m"), "rotor.chord_m");
  c.rotor.restore_hinge_offset = r.boolean("rotor", "restore_hinge_offset").value_or(true);

  c.pitch = read_series(r, "pitch");
  c.flap = read_series(r, "flap");
  c.leadlag = read_series(r, "leadlag");

  c.flight.rotor_radius = c.rotor.radius_m;
  const double derived_tip = c.omega() * c.rotor.radius_m / kSpeedOfSound;
  c.flight.tip_mach = r.number("flight", "tip_mach").value_or(derived_tip);
  c.flight.freestream_mach = r.number("flight", "freestream_mach").value_or(0.0);
  c.flight.thrust_coefficient = r.number("flight", "thrust_coefficient").value_or(0.0);
  if (c.flight.tip_mach <= 0.0) throw ConfigError("flight.tip_mach must be positive", {"flight.tip_mach"});
  if (c.flight.freestream_mach < 0.0) {
    throw ConfigError("flight.freestream_mach must be non-negative", {"flight.freestream_mach"});
  }
  const double implied_mu = c.flight.freestream_mach / c.flight.tip_mach;
  if (auto mu = r.number("flight", "advance_ratio")) {
    if (std::abs(*mu - implied_mu) > 0.01) {
      throw ConfigError(fmt::format("flight.advance_ratio {} disagrees with freestream_mach/tip_mach "
                                    "= {:.4f} by more than 0.01",
                                    *mu, implied_mu),
                        {"flight.advance_ratio"});
    }
    c.flight.advance_ratio = *mu;
  } else {
    c.flight.advance_ratio = implied_mu;
  }

  if (auto k = r.raw("rbf", "kernel")) {
    auto kind = kernel_from_name(unquote(*k));
    if (!kind) throw ConfigError(fmt::format("rbf.kernel: unknown kernel '{}'", *k), {"rbf.kernel"});
    c.rbf.kernel = *kind;
  }
  c.rbf.support_radius_chords =
      positive(r.number("rbf", "support_radius_chords"), "rbf.support_radius_chords")
          .value_or(c.rbf.support_radius_chords);
  c.rbf.support_radius_m = positive(r.number("rbf", "support_radius_m"), "rbf.support_radius_m");
  c.rbf.affine = r.boolean("rbf", "affine").value_or(false);
  c.rbf.greedy_tol_m =
      positive(r.number("rbf", "greedy_tol_m"), "rbf.greedy_tol_m").value_or(c.rbf.greedy_tol_m);
  if (auto caps = r.numbers("rbf", "level_caps")) {
    c.rbf.level_caps.clear();
    for (double v : *caps) {
      if (v < 1 || std::floor(v) != v) {
        throw ConfigError("rbf.level_caps must be positive integers", {"rbf.level_caps"});
      }
      c.rbf.level_caps.push_back(static_cast<int>(v));
    }
    if (!std::is_sorted(c.rbf.level_caps.begin(), c.rbf.level_caps.end())) {
      throw ConfigError("rbf.level_caps are cumulative and must be non-decreasing", {"rbf.level_caps"});
    }
  }
  c.rbf.fixed_markers = r.list("rbf", "fixed_markers").value_or(std::vector<std::string>{});

  // `interface` is either a top-level list or an [interface] section.
  const auto node = root.get_child_optional("interface");
  auto pair = node && node->empty() ? r.list("", "interface") : r.list("interface", "markers");
  if (pair) {
    if (pair->size() != 2) throw ConfigError("interface needs exactly two markers", {"interface"});
    c.interface_markers = *pair;
  }

  const auto bad = r.unused();
  if (!bad.empty()) {
    std::string list;
    for (const auto& k : bad) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError("unknown config keys: " + list, bad);
  }
  return c;
}

RunConfigFile load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path));
}

}  // namespace rotormesh
