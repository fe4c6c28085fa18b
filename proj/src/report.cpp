#include "itolab/report.hpp"

#include <algorithm>

#include "itolab/errors.hpp"

namespace itolab {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::paper_explicit: return "paper-explicit";
    case Provenance::configured: return "configured";
    case Provenance::measured_envelope: return "measured-envelope";
  }
  return "?";
}

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::report_only: return "report-only";
  }
  return "?";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "paper-explicit") return Provenance::paper_explicit;
  if (s == "configured") return Provenance::configured;
  if (s == "measured-envelope") return Provenance::measured_envelope;
  throw InvalidInput("unknown provenance '" + s + "'");
}

Status status_from_string(const std::string& s) {
  if (s == "pass") return Status::pass;
  if (s == "fail") return Status::fail;
  if (s == "report-only") return Status::report_only;
  throw InvalidInput("unknown status '" + s + "'");
}

double CheckReport::ratio() const {
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

CheckReport bound_check(std::string check_id, std::string case_id, double p, double q, double lhs, double constant,
                        double rhs, Provenance provenance, double tolerance, std::string note) {
  CheckReport r;
  r.check_id = std::move(check_id);
  r.case_id = std::move(case_id);
  r.p = p;
  r.q = q;
  r.lhs = lhs;
  r.rhs = rhs;
  r.constant = constant;
  r.provenance = provenance;
  r.tolerance = tolerance;
  r.note = std::move(note);
  r.status = r.holds() ? Status::pass : Status::fail;
  if (lhs == 0.0 && rhs == 0.0 && r.note.empty()) r.note = "degenerate 0/0";
  return r;
}

CheckReport ratio_report(std::string check_id, std::string case_id, double p, double q, double lhs, double rhs,
                         double constant, Provenance provenance, std::string note) {
  CheckReport r;
  r.check_id = std::move(check_id);
  r.case_id = std::move(case_id);
  r.p = p;
  r.q = q;
  r.lhs = lhs;
  r.rhs = rhs;
  r.constant = constant;
  r.provenance = provenance;
  r.status = Status::report_only;
  r.note = std::move(note);
  return r;
}

bool any_failed(const std::vector<CheckReport>& reports) {
  return std::any_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.status == Status::fail; });
}

}  // namespace itolab
