#pragma once

#include <string>
#include <vector>

#include "medfilter/numcore.hpp"

namespace medfilter {

struct CsvTable {
  std::vector<std::string> header;
  Matrix values;  // one row per data record, one column per header entry
};

// Strict numeric CSV: comma separated, first row is the header, decimal
// point, UTF-8 (a leading BOM is tolerated). Quoted fields may hold commas,
// doubled quotes and newlines. Every data cell must parse as a number;
// empty or non-numeric cells raise IoError naming the row and column.
CsvTable read_csv(const std::string& path);

// Same dialect out: header then rows, fields quoted only when needed,
// doubles rendered with the shortest round-trip representation.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& values);

// Formatting helpers for writers with non-numeric columns.
std::string csv_field(const std::string& s);  // quotes/escapes when needed
std::string csv_number(double v);             // shortest round-trip


}  // namespace medfilter
