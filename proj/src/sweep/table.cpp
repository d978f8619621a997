#include "qi/sweep/table.hpp"

#include "qi/sweep/config.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace qi::sweep {

namespace {

std::string cell_text(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "NA"; }
    std::string operator()(double v) const { return std::isfinite(v) ? format_number(v) : "NA"; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(double v) const {
      // Round through the text form so both formats carry the same digits.
      return std::isfinite(v) ? nlohmann::ordered_json(std::stod(format_number(v)))
                              : nlohmann::ordered_json(nullptr);
    }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

void check_shape(const Series& series) {
  for (const auto& row : series.rows) {
    if (row.size() != series.columns.size()) {
      throw std::logic_error("series '" + series.name + "' has a row of the wrong width");
    }
  }
}

}  // namespace

Series& DataTable::add_series(std::string name, std::vector<Column> columns) {
  series.push_back({std::move(name), std::move(columns), {}});
  return series.back();
}

void write_text(const DataTable& table, std::ostream& out) {
  for (const auto& [key, value] : table.metadata) {
    out << "# " << key << ": " << value << '\n';
  }
  for (const auto& series : table.series) {
    check_shape(series);
    out << "# series: " << series.name << '\n';
    std::string units;
    std::string header;
    for (const auto& column : series.columns) {
      units += (units.empty() ? "" : "\t") + column.unit;
      header += (header.empty() ? "" : "\t") + column.name;
    }
    out << "# units: " << units << '\n' << header << '\n';
    for (const auto& row : series.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "\t" : "") << cell_text(row[i]);
      }
      out << '\n';
    }
  }
}

void write_structured(const DataTable& table, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.metadata) {
    doc["metadata"][key] = value;
  }
  doc["series"] = nlohmann::ordered_json::array();
  for (const auto& series : table.series) {
    check_shape(series);
    nlohmann::ordered_json entry;
    entry["name"] = series.name;
    entry["columns"] = nlohmann::ordered_json::array();
    for (const auto& column : series.columns) {
      entry["columns"].push_back({{"name", column.name}, {"unit", column.unit}});
    }
    entry["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : series.rows) {
      auto cells = nlohmann::ordered_json::array();
      for (const auto& cell : row) {
        cells.push_back(cell_json(cell));
      }
      entry["rows"].push_back(std::move(cells));
    }
    doc["series"].push_back(std::move(entry));
  }
  out << doc.dump(1) << '\n';
}

void write_table(const DataTable& table, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::text) {
    write_text(table, out);
  } else {
    write_structured(table, out);
  }
}

}  // namespace qi::sweep
