#pragma once

// Tabular reports rendered as JSON-lines or CSV. Column order is fixed by
// the table definition; exact rationals render as "num/den" together with a
// `<name>_float` convenience column.

#include "hyperell/rational.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hyperell {

using Cell = std::variant<std::monostate, std::string, std::int64_t, double, bool, Rational>;

enum class ColumnKind { text, integer, real, boolean, rational };

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::text;
};

struct Table {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::invalid_argument when the row width or a cell kind is wrong.
  void add_row(std::vector<Cell> row);
};

struct Report {
  /// Provenance: ordered (key, value) pairs, emitted first.
  std::vector<std::pair<std::string, Cell>> meta;
  std::vector<Table> tables;
};

enum class ReportFormat { json, csv };

/// JSON-lines: one {"record": "meta", ...} line, then one line per row with
/// "record" naming its table. CSV: `# key=value` provenance lines, then per
/// table a header line (`record,...`) and its rows; a table without rows
/// still emits its header.
std::string emit_report(const Report& report, ReportFormat format);

/// Shortest round-trip decimal; "nan" / "inf" / "-inf" for non-finite values.
std::string format_real(double x);

}  // namespace hyperell
