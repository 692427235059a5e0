#pragma once

#include <string>
#include <vector>

#include "se3sat/simulator.hpp"

namespace se3sat {

/// Fixed CSV column order of a run log; one header row, '.' decimals,
/// 17-significant-digit floats.
extern const char* const kCsvHeader;

std::string log_to_csv(const Log& log);
void write_csv(const std::string& path, const Log& log);

/// Minimal log view reconstructed from a CSV file (the columns the panel
/// exporter needs).
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // throws if absent
};

CsvTable read_csv(const std::string& path);

/// One columnar data file per figure panel; returns the file names
/// written (into `dir`).
std::vector<std::string> write_plot_panels(const CsvTable& table, const std::string& dir);

}  // namespace se3sat
