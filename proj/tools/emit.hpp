#ifndef ITOLAB_TOOLS_EMIT_HPP
#define ITOLAB_TOOLS_EMIT_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "itolab/report.hpp"

namespace itolab::cli {

enum class Format { csv, json };
Format format_from_string(const std::string& s);

// Fail rows first; otherwise the input order is kept.
std::vector<CheckReport> sorted_for_output(const std::vector<CheckReport>& reports);

// %.17g; non-finite values as inf, -inf, nan.
std::string format_number(double x);

// Header check_id,case_id,p,q,lhs,rhs,constant,provenance,status,tolerance,seed,runtime_ms
// and one row per report, in the given order.
std::string to_csv(const std::vector<CheckReport>& reports);
// Array of objects with the CSV columns plus note. Non-finite numbers are
// written as strings.
nlohmann::ordered_json to_json(const std::vector<CheckReport>& reports);
std::string to_json_text(const std::vector<CheckReport>& reports);
std::vector<CheckReport> from_json(const nlohmann::json& j);

std::string render(const std::vector<CheckReport>& reports, Format format);
// Throws Error when the path cannot be written.
void write_file(const std::string& path, const std::string& content);

}  // namespace itolab::cli

#endif
