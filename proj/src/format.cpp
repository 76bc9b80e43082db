#include "qmod/format.hpp"

#include <algorithm>
#include <stdexcept>

namespace qmod {

namespace {

std::string cell_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_null()) return "";
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "table") return OutputFormat::table;
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown format '" + s + "' (table, csv, json)");
}

std::string format_real(const Real& x) { return to_sig_string(x, 20); }

nlohmann::json ReportTable::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < columns.size() && i < r.size(); ++i) o[columns[i]] = r[i];
    arr.push_back(o);
  }
  return arr;
}

void write_csv(std::ostream& os, const ReportTable& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_escape(cell_text(r[i]));
    os << '\n';
  }
}

void write_aligned(std::ostream& os, const ReportTable& t) {
  std::vector<std::size_t> w(t.columns.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = t.columns[i].size();
  for (const auto& r : t.rows)
    for (std::size_t i = 0; i < r.size() && i < w.size(); ++i) w[i] = std::max(w[i], cell_text(r[i]).size());
  auto line = [&](auto get) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::string c = get(i);
      s += c + std::string(w[i] - c.size() + (i + 1 < w.size() ? 2 : 0), ' ');
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    os << s << '\n';
  };
  line([&](std::size_t i) { return t.columns[i]; });
  for (const auto& r : t.rows) line([&](std::size_t i) { return i < r.size() ? cell_text(r[i]) : std::string(); });
}

void write_report(std::ostream& os, const ReportTable& t, OutputFormat f) {
  if (f == OutputFormat::csv) {
    write_csv(os, t);
  } else if (f == OutputFormat::table) {
    write_aligned(os, t);
  } else {
    os << t.to_json().dump(2) << '\n';
  }
}

}  // namespace qmod
