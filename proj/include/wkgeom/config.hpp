#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wkgeom/polytope.hpp"
#include "wkgeom/weights.hpp"

namespace wkgeom {

// Plain-text experiment configuration, TOML-compatible subset:
//   - `#` comments, `[section]` and `[section.sub]` headers,
//   - `key = value` with numbers, "strings", booleans and (nested) arrays
//     of numbers.
// Unknown sections or keys are rejected.

struct ConfigValue {
  enum class Kind { Number, String, Boolean, Array };
  Kind kind = Kind::Number;
  double num = 0.0;
  std::string str;
  bool boolean = false;
  std::vector<ConfigValue> arr;
};

using ConfigTable = std::map<std::string, ConfigValue>;

namespace config_detail {

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') ++line;
    ++pos;
  }
  void skip_ws_inline() {
    while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
  }
};

inline ConfigValue parse_value(Cursor& c);

inline ConfigValue parse_array(Cursor& c) {
  ConfigValue v;
  v.kind = ConfigValue::Kind::Array;
  c.advance();  // '['
  for (;;) {
    c.skip_ws_inline();
    while (!c.done() && c.peek() == '\n') {
      c.advance();
      c.skip_ws_inline();
    }
    if (c.done()) c.fail("unterminated array");
    if (c.peek() == ']') {
      c.advance();
      return v;
    }
    v.arr.push_back(parse_value(c));
    c.skip_ws_inline();
    while (!c.done() && c.peek() == '\n') {
      c.advance();
      c.skip_ws_inline();
    }
    if (!c.done() && c.peek() == ',') {
      c.advance();
      continue;
    }
    if (!c.done() && c.peek() == ']') {
      c.advance();
      return v;
    }
    c.fail("expected ',' or ']' in array");
  }
}

inline ConfigValue parse_value(Cursor& c) {
  c.skip_ws_inline();
  if (c.done()) c.fail("expected a value");
  const char ch = c.peek();
  ConfigValue v;
  if (ch == '[') return parse_array(c);
  if (ch == '"') {
    v.kind = ConfigValue::Kind::String;
    c.advance();
    while (!c.done() && c.peek() != '"') {
      if (c.peek() == '\n') c.fail("newline in string");
      v.str.push_back(c.peek());
      c.advance();
    }
    if (c.done()) c.fail("unterminated string");
    c.advance();
    return v;
  }
  std::string tok;
  while (!c.done() && c.peek() != '\n' && c.peek() != ',' && c.peek() != ']' &&
         c.peek() != '#' && c.peek() != ' ' && c.peek() != '\t' && c.peek() != '\r') {
    tok.push_back(c.peek());
    c.advance();
  }
  if (tok == "true" || tok == "false") {
    v.kind = ConfigValue::Kind::Boolean;
    v.boolean = tok == "true";
    return v;
  }
  try {
    size_t used = 0;
    v.num = std::stod(tok, &used);
    if (used != tok.size()) c.fail("malformed number '" + tok + "'");
  } catch (const std::exception&) {
    c.fail("malformed value '" + tok + "'");
  }
  return v;
}

}  // namespace config_detail

/// section path ("": top level) -> key -> value
inline std::map<std::string, ConfigTable> parse_config_text(const std::string& text) {
  using namespace config_detail;
  std::map<std::string, ConfigTable> doc;
  Cursor c{text};
  std::string section;
  doc[section];
  while (!c.done()) {
    c.skip_ws_inline();
    if (c.done()) break;
    const char ch = c.peek();
    if (ch == '\n') {
      c.advance();
      continue;
    }
    if (ch == '#') {
      while (!c.done() && c.peek() != '\n') c.advance();
      continue;
    }
    if (ch == '[') {
      c.advance();
      section.clear();
      while (!c.done() && c.peek() != ']' && c.peek() != '\n') {
        section.push_back(c.peek());
        c.advance();
      }
      if (c.done() || c.peek() != ']') c.fail("unterminated section header");
      c.advance();
      if (doc.count(section)) c.fail("duplicate section [" + section + "]");
      doc[section];
      continue;
    }
    std::string key;
    while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_' ||
                         c.peek() == '-')) {
      key.push_back(c.peek());
      c.advance();
    }
    if (key.empty()) c.fail("expected a key");
    c.skip_ws_inline();
    if (c.done() || c.peek() != '=') c.fail("expected '=' after key '" + key + "'");
    c.advance();
    ConfigValue v = parse_value(c);
    c.skip_ws_inline();
    if (!c.done() && c.peek() == '#')
      while (!c.done() && c.peek() != '\n') c.advance();
    if (!c.done() && c.peek() != '\n') c.fail("trailing characters after value of '" + key + "'");
    if (doc[section].count(key)) c.fail("duplicate key '" + key + "'");
    doc[section][key] = std::move(v);
  }
  return doc;
}

struct WeightSpec {
  WeightFamily family = WeightFamily::Constant;
  WeightParams params;
};

/// Declarative experiment description; schema-validated before any
/// computation.
struct ExperimentConfig {
  // polytope
  bool is_interval = true;
  Interval interval{-1.0, 1.0};
  std::vector<Facet> facets;

  WeightSpec v, w;
  std::map<std::string, std::vector<double>> potentials;

  std::string command;
  int samples = 41;
  int draws = 50;
  std::vector<double> eps_list{1e-1, 1e-2, 1e-3};
  int grid_mu = 33;
  int grid_t = 33;
  int quad_order = 0;  // 0: library defaults
  int degree = 64;
  std::string f, f0, f1;

  std::uint64_t seed = 12345;
  double tol_scale = 1.0;
  std::string raw_text;
};

namespace config_detail {

inline void require_keys(const ConfigTable& t, const std::set<std::string>& allowed,
                         const std::string& section) {
  for (const auto& [k, v] : t)
    if (!allowed.count(k))
      throw ConfigError("unknown key '" + k + "' in [" + section + "]");
}

inline double as_number(const ConfigValue& v, const std::string& what) {
  if (v.kind != ConfigValue::Kind::Number) throw ConfigError(what + " must be a number");
  return v.num;
}
inline std::string as_string(const ConfigValue& v, const std::string& what) {
  if (v.kind != ConfigValue::Kind::String) throw ConfigError(what + " must be a string");
  return v.str;
}
inline bool as_bool(const ConfigValue& v, const std::string& what) {
  if (v.kind != ConfigValue::Kind::Boolean) throw ConfigError(what + " must be a boolean");
  return v.boolean;
}
inline std::vector<double> as_number_array(const ConfigValue& v, const std::string& what) {
  if (v.kind != ConfigValue::Kind::Array) throw ConfigError(what + " must be an array");
  std::vector<double> out;
  for (const auto& e : v.arr) out.push_back(as_number(e, what + " entry"));
  return out;
}

inline WeightFamily family_from_string(const std::string& s) {
  if (s == "constant") return WeightFamily::Constant;
  if (s == "affine") return WeightFamily::Affine;
  if (s == "exponential") return WeightFamily::Exponential;
  if (s == "power") return WeightFamily::Power;
  if (s == "polynomial") return WeightFamily::Polynomial;
  throw ConfigError("unknown weight family '" + s + "'");
}

inline WeightSpec parse_weight(const ConfigTable& t, const std::string& section) {
  require_keys(t, {"family", "xi", "c", "alpha", "value", "coeffs", "amplitude",
                   "require_positive"},
               section);
  if (!t.count("family")) throw ConfigError("[" + section + "] needs 'family'");
  WeightSpec spec;
  spec.family = family_from_string(as_string(t.at("family"), section + ".family"));
  if (t.count("xi")) spec.params.xi = as_number_array(t.at("xi"), section + ".xi");
  if (t.count("c")) spec.params.c = as_number(t.at("c"), section + ".c");
  if (t.count("alpha")) spec.params.alpha = as_number(t.at("alpha"), section + ".alpha");
  if (t.count("value")) spec.params.value = as_number(t.at("value"), section + ".value");
  if (t.count("coeffs")) spec.params.coeffs = as_number_array(t.at("coeffs"), section + ".coeffs");
  if (t.count("amplitude"))
    spec.params.amplitude = as_number(t.at("amplitude"), section + ".amplitude");
  if (t.count("require_positive"))
    spec.params.require_positive = as_bool(t.at("require_positive"), section + ".require_positive");
  return spec;
}

}  // namespace config_detail

inline ExperimentConfig parse_experiment_config(const std::string& text) {
  using namespace config_detail;
  const auto doc = parse_config_text(text);
  ExperimentConfig cfg;
  cfg.raw_text = text;

  static const std::set<std::string> known_commands = {
      "polytope-info", "extremal", "energies", "geodesic-scan",
      "convexity",     "subslope", "epsgeo"};

  for (const auto& [section, table] : doc) {
    if (section.empty()) {
      require_keys(table, {"seed"}, "top level");
      if (table.count("seed")) {
        const double s = as_number(table.at("seed"), "seed");
        if (s < 0) throw ConfigError("seed must be nonnegative");
        cfg.seed = static_cast<std::uint64_t>(s);
      }
      continue;
    }
    if (section == "polytope") {
      require_keys(table, {"type", "bounds", "facets"}, section);
      const std::string type =
          table.count("type") ? as_string(table.at("type"), "polytope.type") : "interval";
      if (type == "interval") {
        cfg.is_interval = true;
        if (!table.count("bounds")) throw ConfigError("[polytope] interval needs 'bounds'");
        const auto b = as_number_array(table.at("bounds"), "polytope.bounds");
        if (b.size() != 2 || !(b[0] < b[1]))
          throw ConfigError("polytope.bounds must be [a, b] with a < b");
        cfg.interval = Interval{b[0], b[1]};
      } else if (type == "polygon2d") {
        cfg.is_interval = false;
        if (!table.count("facets")) throw ConfigError("[polytope] polygon2d needs 'facets'");
        const ConfigValue& fv = table.at("facets");
        if (fv.kind != ConfigValue::Kind::Array) throw ConfigError("polytope.facets must be an array");
        for (const auto& row : fv.arr) {
          const auto nums = as_number_array(row, "facet row");
          if (nums.size() != 3) throw ConfigError("each facet is [nx, ny, offset]");
          Facet F;
          F.normal = {static_cast<std::int64_t>(nums[0]), static_cast<std::int64_t>(nums[1])};
          if (F.normal[0] != nums[0] || F.normal[1] != nums[1])
            throw ConfigError("facet normals must be integers");
          F.offset = nums[2];
          cfg.facets.push_back(F);
        }
      } else {
        throw ConfigError("polytope.type must be 'interval' or 'polygon2d'");
      }
    } else if (section == "weights.v") {
      cfg.v = parse_weight(table, section);
    } else if (section == "weights.w") {
      cfg.w = parse_weight(table, section);
    } else if (section.rfind("potentials.", 0) == 0) {
      const std::string name = section.substr(11);
      if (name.empty()) throw ConfigError("potential section needs a name");
      require_keys(table, {"coeffs"}, section);
      if (!table.count("coeffs")) throw ConfigError("[" + section + "] needs 'coeffs'");
      cfg.potentials[name] = as_number_array(table.at("coeffs"), section + ".coeffs");
    } else if (section == "command") {
      require_keys(table, {"name", "samples", "draws", "eps", "grid_mu", "grid_t", "quad_order",
                           "degree", "f", "f0", "f1"},
                   section);
      if (table.count("name")) cfg.command = as_string(table.at("name"), "command.name");
      auto geti = [&](const char* key, int lo, int& dst) {
        if (!table.count(key)) return;
        const double x = as_number(table.at(key), std::string("command.") + key);
        if (x < lo) throw ConfigError(std::string("command.") + key + " must be >= " + std::to_string(lo));
        dst = static_cast<int>(x);
      };
      geti("samples", 5, cfg.samples);
      geti("draws", 1, cfg.draws);
      geti("grid_mu", 16, cfg.grid_mu);
      geti("grid_t", 16, cfg.grid_t);
      geti("quad_order", 1, cfg.quad_order);
      geti("degree", 4, cfg.degree);
      if (table.count("eps")) {
        cfg.eps_list = as_number_array(table.at("eps"), "command.eps");
        for (double e : cfg.eps_list)
          if (!(e > 0)) throw ConfigError("command.eps entries must be positive");
      }
      if (table.count("f")) cfg.f = as_string(table.at("f"), "command.f");
      if (table.count("f0")) cfg.f0 = as_string(table.at("f0"), "command.f0");
      if (table.count("f1")) cfg.f1 = as_string(table.at("f1"), "command.f1");
    } else {
      throw ConfigError("unknown section [" + section + "]");
    }
  }
  if (!cfg.command.empty() && !known_commands.count(cfg.command))
    throw ConfigError("unknown command '" + cfg.command + "'");
  if (!(cfg.tol_scale > 0)) throw ConfigError("tol-scale must be positive");
  return cfg;
}

/// FNV-1a digest of the raw configuration text (provenance).
inline std::uint64_t config_digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace wkgeom
