#include "omcool/spectrum_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "omcool/constants.hpp"

namespace omcool {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw DataError(where + ": '" + s + "' is not a number");
  return v;
}

}  // namespace

namespace {

std::size_t column_index(const CsvTable& t, const std::string& name) {
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    if (t.columns[c] == name) return c;
  throw DataError(t.source + ": column '" + name + "' not found");
}

}  // namespace

std::vector<double> CsvTable::column(const std::string& name) const {
  const std::size_t c = column_index(*this, name);
  std::vector<double> v;
  v.reserve(cells.size());
  for (std::size_t r = 0; r < cells.size(); ++r)
    v.push_back(parse_number(cells[r][c], source + ":" + std::to_string(lines[r])));
  return v;
}

std::vector<std::string> CsvTable::text_column(const std::string& name) const {
  const std::size_t c = column_index(*this, name);
  std::vector<std::string> v;
  v.reserve(cells.size());
  for (const auto& row : cells) v.push_back(row[c]);
  return v;
}

CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  CsvTable t;
  t.source = path;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      const std::string body = trim(s.substr(1));
      const auto colon = body.find(':');
      if (colon != std::string::npos)
        t.metadata[trim(body.substr(0, colon))] = trim(body.substr(colon + 1));
      continue;
    }
    const auto cells = split(s, ',');
    if (t.columns.empty()) {
      t.columns = cells;
      continue;
    }
    const std::string where = path + ":" + std::to_string(lineno);
    if (cells.size() != t.columns.size())
      throw DataError(where + ": expected " + std::to_string(t.columns.size()) + " columns");
    t.cells.push_back(cells);
    t.lines.push_back(lineno);
  }
  if (t.columns.empty()) throw DataError(path + ": no header row");
  return t;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw DataError("cannot create directory " + p.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << content;
  if (!out) throw DataError("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_spectrum_csv(const std::string& path, const Spectrum& spectrum,
                        const std::map<std::string, std::string>& metadata) {
  std::string out;
  out += std::string("# schema: ") + kSpectrumSchema + "\n";
  out += "# units: " + spectrum.units + "\n";
  out += "# sidedness: " + to_string(spectrum.sidedness) + "\n";
  out += "# frequency_units: Hz\n";
  for (const auto& [k, v] : metadata) out += "# " + k + ": " + v + "\n";
  out += "frequency_Hz,psd_value\n";
  for (std::size_t k = 0; k < spectrum.size(); ++k)
    out += format_double(rad_to_hz(spectrum.grid[k])) + "," + format_double(spectrum.values[k]) + "\n";
  write_text_file(path, out);
}

Spectrum read_spectrum_csv(const std::string& path) {
  const CsvTable t = read_csv_table(path);
  const auto schema = t.metadata.find("schema");
  if (schema == t.metadata.end() || schema->second != kSpectrumSchema)
    throw DataError(path + ": not an " + std::string(kSpectrumSchema) + " file");
  const auto units = t.metadata.find("units");
  if (units == t.metadata.end() || units->second.empty())
    throw DataError(path + ": spectrum units missing");

  std::vector<double> omega = t.column("frequency_Hz");
  for (double& w : omega) w = hz_to_rad(w);

  Spectrum s;
  try {
    s.grid = FrequencyGrid::from_samples(omega);
    const auto side = t.metadata.find("sidedness");
    s.sidedness = sidedness_from_string(side == t.metadata.end() ? "" : side->second);
  } catch (const std::invalid_argument& e) {
    throw DataError(path + ": " + e.what());
  }
  s.values = t.column("psd_value");
  s.units = units->second;
  return s;
}

}  // namespace omcool
