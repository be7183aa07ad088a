#include "superrad/table.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "superrad/error.hpp"

namespace superrad {

const char* version() noexcept { return SUPERRAD_VERSION; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_exact(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw Error(ErrorKind::InvalidArgument, "row width does not match table columns");
  rows_.push_back(std::move(row));
}

const Cell& Table::at(std::size_t row, std::size_t col) const {
  if (row >= rows_.size() || col >= columns_.size())
    throw Error(ErrorKind::InvalidArgument, "table index out of range");
  return rows_[row][col];
}

double Table::number(std::size_t row, std::size_t col) const {
  const Cell& c = at(row, col);
  if (const double* d = std::get_if<double>(&c)) return *d;
  return std::numeric_limits<double>::quiet_NaN();
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i] == name) return i;
  throw Error(ErrorKind::InvalidArgument, "no column named '" + name + "'");
}

void Table::add_meta(std::string key, std::string value) {
  for (auto& kv : meta_)
    if (kv.first == key) {
      kv.second = std::move(value);
      return;
    }
  meta_.emplace_back(std::move(key), std::move(value));
}

void Table::attach_params(const SystemParams& p) {
  for (const auto& k : param_keys()) add_meta(k, format_number(get_param(p, k)));
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

void Table::write_csv(std::ostream& os) const {
  os << "# superrad " << version() << "\n";
  for (const auto& [k, v] : meta_) os << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (const double* d = std::get_if<double>(&row[i]))
        os << format_number(*d);
      else
        os << csv_escape(std::get<std::string>(row[i]));
    }
    os << "\n";
  }
}

void Table::write_json(std::ostream& os) const {
  nlohmann::ordered_json j;
  j["version"] = version();
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta_) meta[k] = v;
  j["meta"] = meta;
  j["columns"] = columns_;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& c : row) {
      if (const double* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d))
          r.push_back(std::stod(format_number(*d)));
        else
          r.push_back(nullptr);
      } else {
        r.push_back(std::get<std::string>(c));
      }
    }
    rows.push_back(r);
  }
  j["rows"] = rows;
  os << j.dump(2) << "\n";
}

}  // namespace superrad
