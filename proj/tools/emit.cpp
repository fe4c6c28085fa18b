#include "emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "itolab/errors.hpp"

namespace itolab::cli {

namespace {

// RFC 4180 quoting for fields holding a separator, quote or newline.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

double read_number(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw InvalidInput("not a number: '" + s + "'");
}

}  // namespace

Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw InvalidInput("unknown format '" + s + "'");
}

std::vector<CheckReport> sorted_for_output(const std::vector<CheckReport>& reports) {
  std::vector<CheckReport> out = reports;
  std::stable_sort(out.begin(), out.end(), [](const CheckReport& a, const CheckReport& b) {
    return a.status == Status::fail && b.status != Status::fail;
  });
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_csv(const std::vector<CheckReport>& reports) {
  std::string out = "check_id,case_id,p,q,lhs,rhs,constant,provenance,status,tolerance,seed,runtime_ms\n";
  for (const auto& r : reports) {
    out += csv_field(r.check_id) + ',' + csv_field(r.case_id) + ',' + format_number(r.p) + ',' + format_number(r.q) +
           ',' + format_number(r.lhs) + ',' + format_number(r.rhs) + ',' + format_number(r.constant) + ',' +
           to_string(r.provenance) + ',' + to_string(r.status) + ',' + format_number(r.tolerance) + ',' +
           std::to_string(r.seed) + ',' + format_number(r.runtime_ms) + '\n';
  }
  return out;
}

nlohmann::ordered_json to_json(const std::vector<CheckReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    arr.push_back({{"check_id", r.check_id},
                   {"case_id", r.case_id},
                   {"p", json_number(r.p)},
                   {"q", json_number(r.q)},
                   {"lhs", json_number(r.lhs)},
                   {"rhs", json_number(r.rhs)},
                   {"constant", json_number(r.constant)},
                   {"provenance", to_string(r.provenance)},
                   {"status", to_string(r.status)},
                   {"tolerance", json_number(r.tolerance)},
                   {"seed", r.seed},
                   {"runtime_ms", json_number(r.runtime_ms)},
                   {"note", r.note}});
  }
  return arr;
}

std::string to_json_text(const std::vector<CheckReport>& reports) { return to_json(reports).dump(2) + "\n"; }

std::vector<CheckReport> from_json(const nlohmann::json& j) {
  std::vector<CheckReport> out;
  for (const auto& o : j) {
    CheckReport r;
    r.check_id = o.at("check_id").get<std::string>();
    r.case_id = o.at("case_id").get<std::string>();
    r.p = read_number(o.at("p"));
    r.q = read_number(o.at("q"));
    r.lhs = read_number(o.at("lhs"));
    r.rhs = read_number(o.at("rhs"));
    r.constant = read_number(o.at("constant"));
    r.provenance = provenance_from_string(o.at("provenance").get<std::string>());
    r.status = status_from_string(o.at("status").get<std::string>());
    r.tolerance = read_number(o.at("tolerance"));
    r.seed = o.at("seed").get<std::uint64_t>();
    r.runtime_ms = read_number(o.at("runtime_ms"));
    r.note = o.value("note", "");
    out.push_back(std::move(r));
  }
  return out;
}

std::string render(const std::vector<CheckReport>& reports, Format format) {
  return format == Format::csv ? to_csv(reports) : to_json_text(reports);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out.flush()) throw Error("cannot write '" + path + "'");
}

}  // namespace itolab::cli
