#include "tdprobe/store/report.hpp"

#include <charconv>
#include <fstream>

#include "tdprobe/errors.hpp"

namespace tdprobe {

ReportTable::ReportTable(std::string name, std::vector<ReportColumn> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {
  if (columns_.empty())
    throw ConfigError("report table '" + name_ + "' needs at least one column");
}

void ReportTable::add_row(std::vector<ReportCell> row) {
  if (row.size() != columns_.size())
    throw ConfigError("row arity " + std::to_string(row.size()) +
                      " != column count " + std::to_string(columns_.size()));
  for (std::size_t i = 0; i < row.size(); ++i) {
    bool ok = false;
    switch (columns_[i].kind) {
      case ColumnKind::integer: ok = std::holds_alternative<std::int64_t>(row[i]); break;
      case ColumnKind::real: ok = std::holds_alternative<double>(row[i]); break;
      case ColumnKind::text: ok = std::holds_alternative<std::string>(row[i]); break;
    }
    if (!ok)
      throw ConfigError("cell kind mismatch in column '" + columns_[i].name + "'");
  }
  rows_.push_back(std::move(row));
}

std::size_t ReportTable::column_index(const std::string& column) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == column) return i;
  throw ConfigError("no column '" + column + "' in table '" + name_ + "'");
}

double ReportTable::real_at(std::size_t row, const std::string& column) const {
  return std::get<double>(rows_.at(row).at(column_index(column)));
}

std::int64_t ReportTable::int_at(std::size_t row, const std::string& column) const {
  return std::get<std::int64_t>(rows_.at(row).at(column_index(column)));
}

const std::string& ReportTable::text_at(std::size_t row,
                                        const std::string& column) const {
  return std::get<std::string>(rows_.at(row).at(column_index(column)));
}

std::string format_real(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, p);
}

std::string csv_quote(const std::string& field) {
  bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

void ReportTable::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out << ',';
    out << csv_quote(columns_[i].name);
  }
  out << "\r\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      switch (columns_[i].kind) {
        case ColumnKind::integer: out << std::get<std::int64_t>(row[i]); break;
        case ColumnKind::real: out << format_real(std::get<double>(row[i])); break;
        case ColumnKind::text: out << csv_quote(std::get<std::string>(row[i])); break;
      }
    }
    out << "\r\n";
  }
}

void ReportTable::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw StoreError(StoreErrc::io_error, "cannot open " + path.string());
  write_csv(out);
}

}  // namespace tdprobe
