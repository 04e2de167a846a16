#ifndef CETSP_INSTANCE_HPP
#define CETSP_INSTANCE_HPP

// Instance files are plain text, one "x y r" record per line. The first
// record is the depot and must carry radius 0. Blank lines and lines whose
// first non-blank character is '#' are ignored.

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cetsp/core.hpp"
#include "cetsp/random.hpp"

namespace cetsp {

struct Sensor {
  int id = 0;
  Point center;
  double radius = 0.0;

  friend bool operator==(const Sensor&, const Sensor&) = default;
};

struct Instance {
  std::string name;
  std::vector<Sensor> sensors;  // sensors[0] is the depot

  std::size_t node_count() const { return sensors.size(); }
  /// Number of sensors to serve, excluding the depot.
  std::size_t sensor_count() const { return sensors.empty() ? 0 : sensors.size() - 1; }

  friend bool operator==(const Instance&, const Instance&) = default;
};

inline void validate_instance(const Instance& inst) {
  if (inst.sensors.empty()) throw ValidationError("instance has no depot");
  for (std::size_t i = 0; i < inst.sensors.size(); ++i) {
    const Sensor& s = inst.sensors[i];
    if (s.id != static_cast<int>(i))
      throw ValidationError("sensor ids must be consecutive from 0");
    if (!std::isfinite(s.center.x) || !std::isfinite(s.center.y) || !std::isfinite(s.radius))
      throw ValidationError("sensor " + std::to_string(i) + " has a non-finite field");
    if (s.radius < 0.0)
      throw ValidationError("sensor " + std::to_string(i) + " has a negative radius");
  }
  if (inst.sensors[0].radius != 0.0) throw ValidationError("depot radius must be 0");
}

namespace detail {

inline bool parse_double(std::string_view token, double& out) {
  std::string buf(token);
  char* end = nullptr;
  out = std::strtod(buf.c_str(), &end);
  return end == buf.c_str() + buf.size() && !buf.empty() && std::isfinite(out);
}

/// Fixed-point with at most 6 fractional digits, trailing zeros trimmed.
inline std::string format_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

inline double round6(double v) { return std::round(v * 1e6) / 1e6; }

}  // namespace detail

inline Instance parse_instance(std::string_view text, std::string name = "instance") {
  if (text.empty()) throw ParseError(0, "empty instance text");
  Instance inst;
  inst.name = std::move(name);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::istringstream in{std::string(line)};
    std::vector<std::string> fields;
    for (std::string tok; in >> tok;) fields.push_back(tok);
    if (fields.empty() || fields[0][0] == '#') continue;
    if (fields.size() != 3)
      throw ParseError(line_no, "expected 3 fields \"x y r\", got " + std::to_string(fields.size()));
    double v[3];
    for (int k = 0; k < 3; ++k)
      if (!detail::parse_double(fields[k], v[k]))
        throw ParseError(line_no, "not a finite number: '" + fields[k] + "'");
    inst.sensors.push_back({static_cast<int>(inst.sensors.size()), {v[0], v[1]}, v[2]});
  }
  if (inst.sensors.empty()) throw ParseError(line_no, "no records");
  validate_instance(inst);
  return inst;
}

inline std::string write_instance(const Instance& inst) {
  validate_instance(inst);
  std::string out;
  for (const Sensor& s : inst.sensors) {
    out += detail::format_fixed6(s.center.x);
    out += ' ';
    out += detail::format_fixed6(s.center.y);
    out += ' ';
    out += detail::format_fixed6(s.radius);
    out += '\n';
  }
  return out;
}

struct GeneratorSpec {
  std::size_t sensors = 10;
  double width = 1000.0;
  double height = 1000.0;
  double r_min = 20.0;
  double r_max = 60.0;
  std::uint64_t seed = 1;
};

/// Depot at the box center; sensors and radii drawn uniformly. Values are
/// rounded to the 6-digit grid of the file format so that write/parse is
/// lossless.
inline Instance generate_instance(const GeneratorSpec& spec) {
  if (!(spec.width > 0.0) || !(spec.height > 0.0))
    throw ValidationError("bounding box must have positive width and height");
  if (!(spec.r_min >= 0.0) || !(spec.r_min <= spec.r_max))
    throw ValidationError("radius range must satisfy 0 <= r_min <= r_max");

  SplitMix64 rng(spec.seed);
  Instance inst;
  inst.name = "gen_n" + std::to_string(spec.sensors) + "_s" + std::to_string(spec.seed);
  inst.sensors.push_back(
      {0, {detail::round6(spec.width / 2.0), detail::round6(spec.height / 2.0)}, 0.0});
  for (std::size_t i = 1; i <= spec.sensors; ++i) {
    double x = detail::round6(rng.uniform(0.0, spec.width));
    double y = detail::round6(rng.uniform(0.0, spec.height));
    double r = detail::round6(rng.uniform(spec.r_min, spec.r_max));
    inst.sensors.push_back({static_cast<int>(i), {x, y}, r});
  }
  return inst;
}

}  // namespace cetsp

#endif  // CETSP_INSTANCE_HPP
