#include "hyperell/report.hpp"

#include "json.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperell {

namespace {

bool kind_matches(ColumnKind kind, const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell)) return true;
  switch (kind) {
    case ColumnKind::text: return std::holds_alternative<std::string>(cell);
    case ColumnKind::integer: return std::holds_alternative<std::int64_t>(cell);
    case ColumnKind::real: return std::holds_alternative<double>(cell);
    case ColumnKind::boolean: return std::holds_alternative<bool>(cell);
    case ColumnKind::rational: return std::holds_alternative<Rational>(cell);
  }
  return false;
}

nlohmann::ordered_json real_json(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

void put_json(nlohmann::ordered_json& obj, const std::string& name, const Cell& cell) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          obj[name] = nullptr;
        } else if constexpr (std::is_same_v<T, Rational>) {
          obj[name] = to_string(v);
          obj[name + "_float"] = real_json(to_double(v));
        } else if constexpr (std::is_same_v<T, double>) {
          obj[name] = real_json(v);
        } else {
          obj[name] = v;
        }
      },
      cell);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return csv_escape(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_real(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return to_string(v) + "," + format_real(to_double(v));
        }
      },
      cell);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("row width does not match table " + name);
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!kind_matches(columns[i].kind, row[i])) {
      throw std::invalid_argument("cell kind mismatch in column " + columns[i].name + " of table " + name);
    }
  }
  rows.push_back(std::move(row));
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return nlohmann::json(x).dump();
}

std::string emit_report(const Report& report, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::json) {
    nlohmann::ordered_json meta;
    meta["record"] = "meta";
    for (const auto& [key, value] : report.meta) put_json(meta, key, value);
    out += meta.dump() + "\n";
    for (const auto& table : report.tables) {
      for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        obj["record"] = table.name;
        for (std::size_t i = 0; i < row.size(); ++i) put_json(obj, table.columns[i].name, row[i]);
        out += obj.dump() + "\n";
      }
    }
    return out;
  }
  for (const auto& [key, value] : report.meta) {
    std::string v = std::holds_alternative<Rational>(value) ? to_string(std::get<Rational>(value)) : csv_cell(value);
    out += "# " + key + "=" + v + "\n";
  }
  for (const auto& table : report.tables) {
    out += "record";
    for (const auto& col : table.columns) {
      out += "," + col.name;
      if (col.kind == ColumnKind::rational) out += "," + col.name + "_float";
    }
    out += "\n";
    for (const auto& row : table.rows) {
      out += csv_escape(table.name);
      for (std::size_t i = 0; i < row.size(); ++i) {
        out += ",";
        if (table.columns[i].kind == ColumnKind::rational && std::holds_alternative<std::monostate>(row[i])) {
          out += ",";
        } else {
          out += csv_cell(row[i]);
        }
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace hyperell
