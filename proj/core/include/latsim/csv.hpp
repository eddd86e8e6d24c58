#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace latsim {

// Minimal CSV with a fixed numeric format ("%.10g") so identical runs
// produce identical bytes.

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;  // throws if missing
};

std::string format_double(double v);

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

/// FNV-1a 64-bit over the file bytes, hex encoded.
std::string fnv1a64_file(const std::string& path);

}  // namespace latsim
