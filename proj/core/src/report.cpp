#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "witten/error.hpp"
#include "witten/harness.hpp"

namespace witten {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::vector<std::string> header(const std::vector<ReportRow>& rows, bool timing) {
  std::vector<std::string> cols = {"experiment"};
  if (!rows.empty()) {
    for (const auto& [name, value] : rows.front().fields) cols.push_back(name);
    for (const auto& row : rows) {
      bool same = row.fields.size() == rows.front().fields.size();
      for (std::size_t i = 0; same && i < row.fields.size(); ++i) {
        same = row.fields[i].first == rows.front().fields[i].first;
      }
      if (!same) throw Error(ErrorCode::InvalidInput, "report rows have different columns");
    }
  }
  cols.push_back("verdict");
  if (timing) cols.push_back("seconds");
  return cols;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string plain(const ReportValue& v) {
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  return std::get<std::string>(v);
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_value(const ReportValue& v) {
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) {
    // JSON has no NaN or infinity.
    return std::isfinite(*d) ? format_double(*d) : json_string(format_double(*d));
  }
  return json_string(std::get<std::string>(v));
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace

std::string csv_text(const std::vector<ReportRow>& rows, bool timing) {
  std::ostringstream out;
  const auto cols = header(rows, timing);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << csv_cell(cols[i]);
  out << '\n';
  for (const auto& row : rows) {
    out << csv_cell(row.experiment);
    for (const auto& [name, value] : row.fields) out << ',' << csv_cell(plain(value));
    out << ',' << csv_cell(row.verdict);
    if (timing) out << ',' << format_double(row.seconds);
    out << '\n';
  }
  return out.str();
}

std::string json_text(const std::vector<ReportRow>& rows, bool timing) {
  header(rows, timing);
  std::ostringstream out;
  out << "[";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    out << (r ? ",\n " : "\n ") << "{" << json_string("experiment") << ": " << json_string(row.experiment);
    for (const auto& [name, value] : row.fields) out << ", " << json_string(name) << ": " << json_value(value);
    out << ", " << json_string("verdict") << ": " << json_string(row.verdict);
    if (timing) out << ", " << json_string("seconds") << ": " << format_double(row.seconds);
    out << "}";
  }
  out << (rows.empty() ? "]\n" : "\n]\n");
  return out.str();
}

void emit_csv(const std::vector<ReportRow>& rows, const std::string& path, bool timing) {
  write_file(path, csv_text(rows, timing));
}

void emit_json(const std::vector<ReportRow>& rows, const std::string& path, bool timing) {
  write_file(path, json_text(rows, timing));
}

}  // namespace witten
