#ifndef ITOLAB_REPORT_HPP
#define ITOLAB_REPORT_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace itolab {

enum class Provenance { paper_explicit, configured, measured_envelope };
enum class Status { pass, fail, report_only };

std::string to_string(Provenance p);
std::string to_string(Status s);
Provenance provenance_from_string(const std::string& s);
Status status_from_string(const std::string& s);

// Every bound is recorded in the form lhs <= constant * rhs. A pass status
// implies lhs <= constant * rhs + tolerance.
struct CheckReport {
  std::string check_id;
  std::string case_id;
  double p = std::numeric_limits<double>::quiet_NaN();
  double q = std::numeric_limits<double>::quiet_NaN();
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 1.0;
  Provenance provenance = Provenance::paper_explicit;
  Status status = Status::report_only;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  double runtime_ms = 0.0;
  std::string note;

  double ratio() const;  // lhs / rhs, 0 for 0/0
  bool holds() const { return lhs <= constant * rhs + tolerance; }
  bool operator==(const CheckReport&) const = default;
};

// Hard assertion of lhs <= constant * rhs + tolerance.
CheckReport bound_check(std::string check_id, std::string case_id, double p, double q, double lhs, double constant,
                        double rhs, Provenance provenance, double tolerance, std::string note = {});

// Measured ratio lhs / rhs with no assertion; constant records the reference value.
CheckReport ratio_report(std::string check_id, std::string case_id, double p, double q, double lhs, double rhs,
                         double constant, Provenance provenance, std::string note = {});

bool any_failed(const std::vector<CheckReport>& reports);

}  // namespace itolab

#endif
