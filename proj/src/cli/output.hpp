// output.hpp: tabular reports rendered as CSV or JSON.
#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qfcs::cli {

using Cell = std::variant<double, std::string>;

struct Table {
  std::string label;  // e.g. "method=unified, delta=0.01"; empty for single blocks
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  std::string command;
  std::string method;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<Table> blocks;
};

/// 17 significant digits, '.' decimal point regardless of locale.
std::string format_double(double value);

/// "# schema_version=1, method=..., params=k=v;k=v" then per block an
/// optional "# block: ..." line, the column line and the rows.
void write_csv(const Report& report, std::ostream& out);
void write_json(const Report& report, std::ostream& out);

}  // namespace qfcs::cli
