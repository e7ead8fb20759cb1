#include "output.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

namespace qfcs::cli {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string render(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return std::get<std::string>(cell);
}

std::string joined_params(const Report& report) {
  std::string out;
  for (const auto& [k, v] : report.params) {
    if (!out.empty()) out += ';';
    out += k + "=" + v;
  }
  return out;
}

}  // namespace

void write_csv(const Report& report, std::ostream& out) {
  out << "# schema_version=1, method=" << report.method << ", params=command=" << report.command;
  if (!report.params.empty()) out << ';' << joined_params(report);
  out << '\n';
  for (const auto& block : report.blocks) {
    if (!block.label.empty()) out << "# block: " << block.label << '\n';
    for (std::size_t c = 0; c < block.columns.size(); ++c) {
      out << (c ? "," : "") << block.columns[c];
    }
    out << '\n';
    for (const auto& row : block.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << render(row[c]);
      out << '\n';
    }
  }
}

void write_json(const Report& report, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["command"] = report.command;
  doc["method"] = report.method;
  doc["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.params) doc["params"][k] = v;
  doc["blocks"] = nlohmann::ordered_json::array();
  for (const auto& block : report.blocks) {
    nlohmann::ordered_json b;
    b["label"] = block.label;
    b["columns"] = block.columns;
    b["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : block.rows) {
      nlohmann::ordered_json r = nlohmann::ordered_json::array();
      for (const auto& cell : row) {
        if (const auto* d = std::get_if<double>(&cell)) {
          if (std::isfinite(*d)) {
            r.push_back(*d);
          } else {
            r.push_back(format_double(*d));
          }
        } else {
          r.push_back(std::get<std::string>(cell));
        }
      }
      b["rows"].push_back(std::move(r));
    }
    doc["blocks"].push_back(std::move(b));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace qfcs::cli
