#ifndef TDPROBE_STORE_REPORT_HPP
#define TDPROBE_STORE_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace tdprobe {

enum class ColumnKind { integer, real, text };

struct ReportColumn {
  std::string name;
  ColumnKind kind;
};

using ReportCell = std::variant<std::int64_t, double, std::string>;

// Rectangular result table emitted as CSV (header row, RFC-4180 quoting).
class ReportTable {
 public:
  ReportTable(std::string name, std::vector<ReportColumn> columns);

  const std::string& name() const { return name_; }
  const std::vector<ReportColumn>& columns() const { return columns_; }
  const std::vector<std::vector<ReportCell>>& rows() const { return rows_; }
  std::size_t n_rows() const { return rows_.size(); }

  // Throws ConfigError unless the row matches column arity and kinds.
  void add_row(std::vector<ReportCell> row);

  double real_at(std::size_t row, const std::string& column) const;
  std::int64_t int_at(std::size_t row, const std::string& column) const;
  const std::string& text_at(std::size_t row, const std::string& column) const;

  void write_csv(std::ostream& out) const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  std::size_t column_index(const std::string& column) const;

  std::string name_;
  std::vector<ReportColumn> columns_;
  std::vector<std::vector<ReportCell>> rows_;
};

// Shortest round-trip decimal rendering, used for all CSV real values.
std::string format_real(double v);

std::string csv_quote(const std::string& field);

}  // namespace tdprobe

#endif
