#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qi::sweep {

/// Missing values (NA / null) are the monostate alternative.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Column {
  std::string name;
  std::string unit;
};

struct Series {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
};

struct DataTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<Series> series;

  Series& add_series(std::string name, std::vector<Column> columns);
};

enum class OutputFormat { text, structured };

/// `#`-prefixed metadata, then per series a `# series:` and `# units:` line,
/// one tab-separated header line and the rows. Missing and non-finite cells print as NA.
void write_text(const DataTable& table, std::ostream& out);

/// JSON object {metadata, series: [{name, columns: [{name, unit}], rows}]};
/// missing and non-finite cells are null.
void write_structured(const DataTable& table, std::ostream& out);

void write_table(const DataTable& table, OutputFormat format, std::ostream& out);

}  // namespace qi::sweep
