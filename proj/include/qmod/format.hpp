#pragma once

#include "qmod/real.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

// Row-oriented report emission shared by the command-line tools.
namespace qmod {

enum class OutputFormat { table, csv, json };

OutputFormat output_format_from_string(const std::string& s);

/// Machine-format rendering of a real: 20 significant digits, round-half-even.
std::string format_real(const Real& x);

/// Cells are JSON values: strings (numbers are pre-rendered), integers or booleans.
struct ReportTable {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  void add(std::vector<nlohmann::json> row) { rows.push_back(std::move(row)); }
  nlohmann::json to_json() const;  // array of objects keyed by column
};

void write_csv(std::ostream& os, const ReportTable& t);
void write_aligned(std::ostream& os, const ReportTable& t);
/// table or csv rendering; json callers assemble their own documents.
void write_report(std::ostream& os, const ReportTable& t, OutputFormat f);

}  // namespace qmod
