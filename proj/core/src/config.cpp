#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "witten/error.hpp"
#include "witten/harness.hpp"

namespace witten {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(const std::string& source, int line, const std::string& key,
                               const std::string& what) {
  std::ostringstream msg;
  msg << source;
  if (line > 0) msg << ':' << line;
  if (!key.empty()) msg << ": " << key;
  msg << ": " << what;
  throw Error(ErrorCode::ConfigError, msg.str());
}

std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const double v = std::stod(text, &used);
    if (used != text.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

ConfigValue parse_value(const std::string& raw, const std::string& source, int line,
                        const std::string& key) {
  const std::string text = trim(raw);
  if (text.empty()) config_error(source, line, key, "missing value");
  if (text == "true") return true;
  if (text == "false") return false;
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') config_error(source, line, key, "unterminated string");
    return text.substr(1, text.size() - 2);
  }
  if (text.front() == '[') {
    if (text.back() != ']') config_error(source, line, key, "unterminated list");
    std::vector<double> list;
    std::stringstream items(text.substr(1, text.size() - 2));
    std::string item;
    while (std::getline(items, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      auto v = parse_number(item);
      if (!v) config_error(source, line, key, "list item '" + item + "' is not a number");
      list.push_back(*v);
    }
    return list;
  }
  if (auto v = parse_number(text)) return *v;
  return text;
}

}  // namespace

ConfigFile parse_config_text(std::istream& in, const std::string& source) {
  ConfigFile file;
  file.source = source;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    // Comments end the line unless inside a quoted string.
    bool quoted = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        raw.erase(i);
        break;
      }
    }
    const std::string text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '[' && text.back() == ']') continue;  // section headers are ignored
    const auto eq = text.find('=');
    if (eq == std::string::npos) config_error(source, line, "", "expected 'key = value'");
    std::string key = trim(text.substr(0, eq));
    std::replace(key.begin(), key.end(), '-', '_');
    if (key.empty()) config_error(source, line, "", "empty key");
    if (file.values.count(key)) config_error(source, line, key, "duplicate key");
    file.values[key] = parse_value(text.substr(eq + 1), source, line, key);
    file.lines[key] = line;
  }
  return file;
}

ConfigFile read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, path + ": cannot open config file");
  return parse_config_text(in, path);
}

namespace {

struct Reader {
  const ConfigFile& file;

  int line(const std::string& key) const {
    auto it = file.lines.find(key);
    return it == file.lines.end() ? 0 : it->second;
  }
  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    config_error(file.source, line(key), key, what);
  }
  const ConfigValue* find(const std::string& key) const {
    auto it = file.values.find(key);
    return it == file.values.end() ? nullptr : &it->second;
  }
  void get(const std::string& key, std::string& out) const {
    if (const auto* v = find(key)) {
      if (const auto* s = std::get_if<std::string>(v)) {
        out = *s;
      } else if (const auto* d = std::get_if<double>(v)) {
        std::ostringstream text;
        text << *d;
        out = text.str();
      } else {
        fail(key, "expected a string");
      }
    }
  }
  void get(const std::string& key, double& out) const {
    if (const auto* v = find(key)) {
      if (const auto* d = std::get_if<double>(v)) {
        out = *d;
      } else {
        fail(key, "expected a number");
      }
    }
  }
  void get(const std::string& key, int& out) const {
    if (const auto* v = find(key)) {
      const auto* d = std::get_if<double>(v);
      if (!d || std::floor(*d) != *d || std::abs(*d) > 1e9) fail(key, "expected an integer");
      out = static_cast<int>(*d);
    }
  }
  void get(const std::string& key, std::uint64_t& out) const {
    if (const auto* v = find(key)) {
      const auto* d = std::get_if<double>(v);
      if (!d || std::floor(*d) != *d || *d < 0 || *d > 9e15) fail(key, "expected a nonnegative integer");
      out = static_cast<std::uint64_t>(*d);
    }
  }
  void get(const std::string& key, bool& out) const {
    if (const auto* v = find(key)) {
      const auto* b = std::get_if<bool>(v);
      if (!b) fail(key, "expected true or false");
      out = *b;
    }
  }
  void get(const std::string& key, std::vector<double>& out) const {
    if (const auto* v = find(key)) {
      if (const auto* l = std::get_if<std::vector<double>>(v)) {
        out = *l;
      } else if (const auto* d = std::get_if<double>(v)) {
        out = {*d};
      } else {
        fail(key, "expected a numeric list");
      }
    }
  }
  void get(const std::string& key, std::vector<int>& out) const {
    std::vector<double> raw;
    get(key, raw);
    if (!find(key)) return;
    out.clear();
    for (double d : raw) {
      if (std::floor(d) != d) fail(key, "expected integers");
      out.push_back(static_cast<int>(d));
    }
  }
};

}  // namespace

ExperimentConfig make_config(const ConfigFile& file) {
  static const std::vector<std::string> known = {
      "kind", "name", "complex", "off", "complex_size", "stars", "function", "resolution",
      "t_schedule", "lambda_schedule", "grid", "order", "potential", "box", "n_eigs", "tolerance",
      "pair_count", "match_tol", "low_lying", "eigs", "out", "seed", "timing", "expected"};
  for (const auto& [key, value] : file.values) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      config_error(file.source, file.lines.at(key), key, "unknown key");
    }
  }
  Reader r{file};
  ExperimentConfig c;
  r.get("kind", c.kind);
  r.get("name", c.name);
  r.get("complex", c.complex);
  r.get("off", c.off);
  r.get("complex_size", c.complex_size);
  r.get("stars", c.stars);
  r.get("function", c.function);
  r.get("resolution", c.resolution);
  r.get("t_schedule", c.t_schedule);
  r.get("lambda_schedule", c.lambda_schedule);
  r.get("grid", c.grid);
  r.get("order", c.order);
  r.get("potential", c.potential);
  r.get("box", c.box);
  r.get("n_eigs", c.n_eigs);
  r.get("tolerance", c.tolerance);
  r.get("pair_count", c.pair_count);
  r.get("match_tol", c.match_tol);
  r.get("low_lying", c.low_lying);
  r.get("eigs", c.eigs);
  r.get("out", c.out);
  r.get("seed", c.seed);
  r.get("timing", c.timing);
  r.get("expected", c.expected);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig c = make_config(read_config_file(path));
  return c;
}

void validate_config(const ExperimentConfig& c) {
  auto fail = [](const std::string& key, const std::string& what) {
    throw Error(ErrorCode::ConfigError, "config: " + key + ": " + what);
  };
  if (std::find(kExperimentKinds.begin(), kExperimentKinds.end(), c.kind) == kExperimentKinds.end()) {
    fail("kind", "'" + c.kind + "' is not one of betti, morse-verify, witten-scan, semiclassical, susy-pairing");
  }
  auto increasing = [&](const std::vector<double>& s, const std::string& key) {
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (!(s[i] > s[i - 1])) fail(key, "schedule must be strictly increasing");
    }
    for (double v : s) {
      if (!std::isfinite(v) || v < 0) fail(key, "schedule values must be finite and >= 0");
    }
  };
  increasing(c.t_schedule, "t_schedule");
  increasing(c.lambda_schedule, "lambda_schedule");
  if (c.stars != "combinatorial" && c.stars != "circumcentric") {
    fail("stars", "expected combinatorial or circumcentric");
  }
  if (c.grid < 0) fail("grid", "must be >= 0");
  if (c.resolution < 1) fail("resolution", "must be >= 1");
  if (c.n_eigs < 1) fail("n_eigs", "must be >= 1");
  if (c.eigs < 1) fail("eigs", "must be >= 1");
  if (c.pair_count < 0) fail("pair_count", "must be >= 0");
  if (!(c.match_tol > 0)) fail("match_tol", "must be > 0");
  if (!(c.box > 0)) fail("box", "must be > 0");
  if (c.out.empty()) fail("out", "must not be empty");
  const bool needs_function = c.kind == "morse-verify" || c.kind == "witten-scan" ||
                              (c.kind == "semiclassical" && c.potential == "witten-torus");
  if (needs_function && c.function.empty()) fail("function", "required for " + c.kind);
  if (c.kind == "betti" && c.complex.empty() && c.off.empty() && c.function.empty()) {
    fail("complex", "betti needs a complex, an OFF path or a catalog function");
  }
  if (c.kind == "witten-scan" && c.t_schedule.empty()) fail("t_schedule", "required for witten-scan");
  if (c.kind == "susy-pairing" && c.t_schedule.empty()) fail("t_schedule", "required for susy-pairing");
  if (c.kind == "semiclassical") {
    if (c.potential != "harmonic" && c.potential != "double_well" && c.potential != "witten-torus") {
      fail("potential", "expected harmonic, double_well or witten-torus");
    }
    const auto& s = c.potential == "witten-torus" ? c.t_schedule : c.lambda_schedule;
    if (s.empty()) fail(c.potential == "witten-torus" ? "t_schedule" : "lambda_schedule", "required");
    for (double v : s) {
      if (!(v > 0)) fail("schedule", "semiclassical parameters must be > 0");
    }
  }
}

}  // namespace witten
