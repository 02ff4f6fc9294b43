#pragma once

// Structured-text configuration: "[section]" headers and "key = value" lines,
// '#' comments. Values with a physical dimension must carry a unit suffix;
// frequencies are given in Hz (any SI prefix) and stored as rad/s. List
// values are comma separated, or logspace(a, b, n) / linspace(a, b, n),
// with a single unit suffix applying to every element.
//
//   [device]
//   kappa = 500 MHz
//   T_b = 17.6 K
//   [sweep]
//   n_c = logspace(0, 3.30103, 20)

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace omcool {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

enum class Quantity {
  Frequency,      // Hz, kHz, MHz, GHz, THz -> rad/s
  Temperature,    // K
  Power,          // W, mW, uW, nW -> W
  Mass,           // kg, g, pg, fg -> kg
  Length,         // m, nm, pm -> m
  VoltPerWatt,    // V/W
  VoltPerAmp,     // V/A
  AmpPerWatt,     // A/W
  Ohm,            // Ohm
  Dimensionless,  // bare number
  Integer,
  Boolean,        // true / false
  Text,
};

struct KeySpec {
  std::string section;  // "point.*" matches any "point.<name>" section
  std::string key;
  Quantity quantity;
  bool list = false;
};

struct ConfigEntry {
  std::string raw;
  int line = 0;
  Quantity quantity = Quantity::Text;
  std::vector<double> numbers;  // SI values (frequencies in rad/s)
};

class StructuredConfig {
 public:
  /// Parses and validates every entry against `schema`; unknown sections or
  /// keys, missing or wrong units and duplicate keys throw ConfigError.
  static StructuredConfig parse(const std::string& text, const std::string& source,
                                const std::vector<KeySpec>& schema);
  static StructuredConfig load(const std::string& path, const std::vector<KeySpec>& schema);

  const std::string& source() const { return source_; }
  bool has(const std::string& section, const std::string& key) const;
  const ConfigEntry& entry(const std::string& section, const std::string& key) const;
  int line_of(const std::string& section, const std::string& key) const;

  double number(const std::string& section, const std::string& key) const;
  double number_or(const std::string& section, const std::string& key, double fallback) const;
  std::vector<double> numbers(const std::string& section, const std::string& key) const;
  int integer_or(const std::string& section, const std::string& key, int fallback) const;
  bool flag_or(const std::string& section, const std::string& key, bool fallback) const;
  std::string text(const std::string& section, const std::string& key) const;
  std::string text_or(const std::string& section, const std::string& key,
                      const std::string& fallback) const;

  /// Section names in file order, e.g. for "point.*" families.
  std::vector<std::string> sections_with_prefix(const std::string& prefix) const;

  /// ConfigError pointing at the given key (or line 0 if absent).
  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& what) const;

 private:
  std::string source_;
  std::vector<std::string> section_order_;
  std::map<std::string, std::map<std::string, ConfigEntry>> entries_;
};

/// Parses "<number> <unit>" for the given quantity; throws std::invalid_argument.
double parse_quantity(const std::string& text, Quantity q);

}  // namespace omcool
