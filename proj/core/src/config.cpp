#include "omcool/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "omcool/constants.hpp"

namespace omcool {

ConfigError::ConfigError(const std::string& source, int line, const std::string& what)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         what),
      line_(line) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Unit {
  const char* name;
  double factor;
};

const std::vector<Unit>& units_for(Quantity q) {
  static const std::vector<Unit> none;
  static const std::vector<Unit> freq{{"Hz", kTwoPi},        {"kHz", kTwoPi * 1e3},
                                      {"MHz", kTwoPi * 1e6}, {"GHz", kTwoPi * 1e9},
                                      {"THz", kTwoPi * 1e12}};
  static const std::vector<Unit> temp{{"K", 1.0}, {"mK", 1e-3}};
  static const std::vector<Unit> power{{"W", 1.0}, {"mW", 1e-3}, {"uW", 1e-6}, {"nW", 1e-9},
                                       {"pW", 1e-12}};
  static const std::vector<Unit> mass{{"kg", 1.0},   {"g", 1e-3},   {"mg", 1e-6}, {"ug", 1e-9},
                                      {"ng", 1e-12}, {"pg", 1e-15}, {"fg", 1e-18}};
  static const std::vector<Unit> length{{"m", 1.0}, {"um", 1e-6}, {"nm", 1e-9}, {"pm", 1e-12}};
  static const std::vector<Unit> vw{{"V/W", 1.0}};
  static const std::vector<Unit> va{{"V/A", 1.0}};
  static const std::vector<Unit> aw{{"A/W", 1.0}};
  static const std::vector<Unit> ohm{{"Ohm", 1.0}, {"kOhm", 1e3}};
  switch (q) {
    case Quantity::Frequency: return freq;
    case Quantity::Temperature: return temp;
    case Quantity::Power: return power;
    case Quantity::Mass: return mass;
    case Quantity::Length: return length;
    case Quantity::VoltPerWatt: return vw;
    case Quantity::VoltPerAmp: return va;
    case Quantity::AmpPerWatt: return aw;
    case Quantity::Ohm: return ohm;
    default: return none;
  }
}

bool is_numeric(Quantity q) {
  return q != Quantity::Integer && q != Quantity::Boolean && q != Quantity::Text;
}

/// Splits "<number><unit>" into its parts; unit may be empty.
std::pair<double, std::string> split_number(const std::string& text) {
  const std::string s = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("'" + s + "' does not start with a number");
  }
  return {v, trim(s.substr(used))};
}

double unit_factor(const std::string& unit, Quantity q) {
  const auto& table = units_for(q);
  if (table.empty()) {
    if (!unit.empty()) throw std::invalid_argument("dimensionless value must not carry unit '" + unit + "'");
    return 1.0;
  }
  if (unit.empty()) {
    std::string names;
    for (const auto& u : table) names += (names.empty() ? "" : ", ") + std::string(u.name);
    throw std::invalid_argument("missing unit suffix (one of " + names + ")");
  }
  for (const auto& u : table)
    if (unit == u.name) return u.factor;
  throw std::invalid_argument("unit '" + unit + "' is not valid here");
}

std::vector<double> parse_list(const std::string& raw, Quantity q) {
  const std::string s = trim(raw);
  for (const char* fn : {"logspace", "linspace"}) {
    const std::string head = std::string(fn) + "(";
    if (s.rfind(head, 0) != 0) continue;
    const auto close = s.find(')');
    if (close == std::string::npos) throw std::invalid_argument("unterminated " + std::string(fn) + "(");
    std::vector<double> args;
    std::stringstream ss(s.substr(head.size(), close - head.size()));
    std::string a;
    while (std::getline(ss, a, ',')) {
      const auto [v, u] = split_number(a);
      if (!u.empty()) throw std::invalid_argument("unexpected text '" + u + "' in " + fn);
      args.push_back(v);
    }
    if (args.size() != 3) throw std::invalid_argument(std::string(fn) + " takes (start, stop, count)");
    const int n = static_cast<int>(args[2]);
    if (n < 1 || n != args[2]) throw std::invalid_argument("count must be a positive integer");
    const double f = unit_factor(trim(s.substr(close + 1)), q);
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      const double x = args[0] + t * (args[1] - args[0]);
      out.push_back((fn[0] == 'l' && fn[1] == 'o' ? std::pow(10.0, x) : x) * f);
    }
    return out;
  }

  if (s.empty()) return {};
  std::vector<std::pair<double, std::string>> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(split_number(item));
  // a single trailing unit applies to every element
  const std::string shared = parts.back().second;
  std::vector<double> out;
  for (auto& [v, u] : parts) out.push_back(v * unit_factor(u.empty() ? shared : u, q));
  return out;
}

const KeySpec* find_spec(const std::vector<KeySpec>& schema, const std::string& section,
                         const std::string& key) {
  for (const auto& k : schema) {
    const bool family = k.section.size() > 2 && k.section.compare(k.section.size() - 2, 2, ".*") == 0;
    const bool match = family ? section.rfind(k.section.substr(0, k.section.size() - 1), 0) == 0
                              : section == k.section;
    if (match && k.key == key) return &k;
  }
  return nullptr;
}

bool section_known(const std::vector<KeySpec>& schema, const std::string& section) {
  for (const auto& k : schema) {
    const bool family = k.section.size() > 2 && k.section.compare(k.section.size() - 2, 2, ".*") == 0;
    if (family ? section.rfind(k.section.substr(0, k.section.size() - 1), 0) == 0
               : section == k.section)
      return true;
  }
  return false;
}

}  // namespace

double parse_quantity(const std::string& text, Quantity q) {
  const auto [v, u] = split_number(text);
  return v * unit_factor(u, q);
}

StructuredConfig StructuredConfig::parse(const std::string& text, const std::string& source,
                                         const std::vector<KeySpec>& schema) {
  StructuredConfig cfg;
  cfg.source_ = source;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string s = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(source, lineno, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ConfigError(source, lineno, "empty section name");
      if (!section_known(schema, section))
        throw ConfigError(source, lineno, "unknown section [" + section + "]");
      if (cfg.entries_.count(section))
        throw ConfigError(source, lineno, "section [" + section + "] appears twice");
      cfg.entries_[section];
      cfg.section_order_.push_back(section);
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(source, lineno, "expected 'key = value'");
    if (section.empty()) throw ConfigError(source, lineno, "key outside any [section]");
    const std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    const KeySpec* spec = find_spec(schema, section, key);
    if (!spec) throw ConfigError(source, lineno, "unknown key '" + key + "' in [" + section + "]");
    auto& slot = cfg.entries_[section];
    if (slot.count(key)) throw ConfigError(source, lineno, "duplicate key '" + key + "'");

    ConfigEntry e;
    e.line = lineno;
    e.quantity = spec->quantity;
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    e.raw = value;
    try {
      if (is_numeric(spec->quantity)) {
        if (spec->list) {
          e.numbers = parse_list(value, spec->quantity);
        } else {
          e.numbers = {parse_quantity(value, spec->quantity)};
        }
        for (double v : e.numbers)
          if (!std::isfinite(v)) throw std::invalid_argument("value is not finite");
      } else if (spec->quantity == Quantity::Integer) {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument("'" + value + "' is not an integer");
        e.numbers = {static_cast<double>(v)};
      } else if (spec->quantity == Quantity::Boolean) {
        if (value == "true" || value == "yes" || value == "on") e.numbers = {1.0};
        else if (value == "false" || value == "no" || value == "off") e.numbers = {0.0};
        else throw std::invalid_argument("expected true or false");
      }
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(source, lineno, key + ": " + ex.what());
    } catch (const std::out_of_range&) {
      throw ConfigError(source, lineno, key + ": value out of range");
    }
    slot.emplace(key, std::move(e));
  }
  return cfg;
}

StructuredConfig StructuredConfig::load(const std::string& path, const std::vector<KeySpec>& schema) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path, schema);
}

bool StructuredConfig::has(const std::string& section, const std::string& key) const {
  const auto s = entries_.find(section);
  return s != entries_.end() && s->second.count(key) > 0;
}

const ConfigEntry& StructuredConfig::entry(const std::string& section, const std::string& key) const {
  const auto s = entries_.find(section);
  if (s == entries_.end() || !s->second.count(key))
    throw ConfigError(source_, 0, "missing required key '" + key + "' in [" + section + "]");
  return s->second.at(key);
}

int StructuredConfig::line_of(const std::string& section, const std::string& key) const {
  return has(section, key) ? entry(section, key).line : 0;
}

double StructuredConfig::number(const std::string& section, const std::string& key) const {
  const ConfigEntry& e = entry(section, key);
  if (e.numbers.size() != 1) fail(section, key, "expected a single value");
  return e.numbers.front();
}

double StructuredConfig::number_or(const std::string& section, const std::string& key,
                                   double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

std::vector<double> StructuredConfig::numbers(const std::string& section, const std::string& key) const {
  return entry(section, key).numbers;
}

int StructuredConfig::integer_or(const std::string& section, const std::string& key, int fallback) const {
  return has(section, key) ? static_cast<int>(number(section, key)) : fallback;
}

bool StructuredConfig::flag_or(const std::string& section, const std::string& key, bool fallback) const {
  return has(section, key) ? number(section, key) != 0.0 : fallback;
}

std::string StructuredConfig::text(const std::string& section, const std::string& key) const {
  return entry(section, key).raw;
}

std::string StructuredConfig::text_or(const std::string& section, const std::string& key,
                                      const std::string& fallback) const {
  return has(section, key) ? text(section, key) : fallback;
}

std::vector<std::string> StructuredConfig::sections_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& s : section_order_)
    if (s.rfind(prefix, 0) == 0) out.push_back(s);
  return out;
}

void StructuredConfig::fail(const std::string& section, const std::string& key,
                            const std::string& what) const {
  throw ConfigError(source_, line_of(section, key), key + ": " + what);
}

}  // namespace omcool
