#pragma once

// Plain-text interchange: numeric CSV tables and the spectrum CSV schema.
//
// Spectrum files carry '#'-prefixed "key: value" metadata lines (schema,
// units, sidedness, ...) followed by a header row `frequency_Hz,psd_value`
// and one row per sample, numbers printed with 17 significant digits.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "omcool/spectrum.hpp"

namespace omcool {

inline constexpr const char* kSpectrumSchema = "omcool-spectrum/1";

/// Thrown for malformed or unreadable data files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> cells;
  std::vector<int> lines;  // source line of each row
  std::map<std::string, std::string> metadata;
  std::string source;

  std::size_t size() const { return cells.size(); }
  /// Throws DataError if the column is absent or holds a non-numeric cell.
  std::vector<double> column(const std::string& name) const;
  std::vector<std::string> text_column(const std::string& name) const;
};

CsvTable read_csv_table(const std::string& path);

/// Round-trip decimal representation (%.17g).
std::string format_double(double v);

void write_spectrum_csv(const std::string& path, const Spectrum& spectrum,
                        const std::map<std::string, std::string>& metadata = {});

/// Rebuilds the uniform grid from the frequency column; throws DataError on a
/// schema mismatch, missing units or a non-uniform grid.
Spectrum read_spectrum_csv(const std::string& path);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace omcool
