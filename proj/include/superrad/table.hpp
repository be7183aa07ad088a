#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "superrad/model.hpp"

namespace superrad {

using Cell = std::variant<double, std::string>;

// Column-named result table. Rows are written in insertion order.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return columns_.size(); }

  void add_row(std::vector<Cell> row);
  const Cell& at(std::size_t row, std::size_t col) const;
  double number(std::size_t row, std::size_t col) const;  // NaN for text cells
  std::size_t column_index(const std::string& name) const;

  // Header comment lines ("# key = value").
  void add_meta(std::string key, std::string value);
  void attach_params(const SystemParams& p);
  const std::vector<std::pair<std::string, std::string>>& meta() const { return meta_; }

  void write_csv(std::ostream& os) const;
  void write_json(std::ostream& os) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

// Fixed 12-significant-digit rendering used by every emitted file.
std::string format_number(double v);
// Round-trip rendering (17 digits) for journals.
std::string format_exact(double v);

const char* version() noexcept;

}  // namespace superrad
