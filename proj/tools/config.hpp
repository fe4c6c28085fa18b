#ifndef ITOLAB_TOOLS_CONFIG_HPP
#define ITOLAB_TOOLS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "itolab/constants.hpp"
#include "itolab/errors.hpp"
#include "itolab/integrator.hpp"
#include "itolab/lq.hpp"
#include "itolab/randmat.hpp"
#include "itolab/seqnorms.hpp"

namespace itolab::cli {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Schema violations and malformed objects; maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Category { moments, rosenthal, integral, matrix, khintchine };
std::string to_string(Category c);
Category category_from_string(const std::string& s);
// Category of a check type; throws ConfigError for unknown types.
Category category_of(const std::string& type);
const std::vector<std::string>& check_types();

struct Tolerances {
  double float_slack = 1e-12;
  double sigmas = 3.0;
  double exact_eps = 1e-10;  // Poisson truncation level
  std::uint64_t budget = prob::kDefaultAtomBudget;
};

struct CheckSpec {
  std::string type;
  std::string id;
  json body;  // validated by the runner's planner
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  bool sampled = false;
  std::size_t samples = 10000;
  std::string output_csv;
  std::string output_json;
  Tolerances tolerances;
  ConstantTable constants;
  std::vector<CheckSpec> checks;
  std::filesystem::path base_dir;  // file references resolve against this
};

ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Throws ConfigError unless every key of the object j is in `allowed`.
void require_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where);

// Number, or the strings "inf" / "infinity".
double parse_exponent(const json& j, const std::string& where);
// A number or an array of numbers.
std::vector<double> parse_grid(const json& j, const std::string& where);

// number | [re, im] | {"matrix": rows, "imag"?: rows} | {"function": values, "weights"?: weights}
lq::LqElement parse_element(const json& j, const std::string& where);
std::vector<lq::LqElement> parse_elements(const json& j, const std::string& where);

// {"items": [{"probs", "values"} | {"constant"} | {"sign"}]} or {"file": path}.
seq::LqSequence parse_sequence(const json& j, const std::filesystem::path& base, const std::string& where);

struct ProcessSpec {
  integ::SimpleAdaptedProcess F;
  double t = 0.0;
  std::vector<std::size_t> sets;
};
// {"grid": {"times", "measures", "labels"?}, "shape"?, "terms": [...], "t"?, "sets"?} or {"file": path}.
ProcessSpec parse_process(const json& j, const std::filesystem::path& base, const std::string& where);

randmat::EntryLaw parse_law(const json& j, const std::string& where);
randmat::RealMatrix parse_real_matrix(const json& j, const std::string& where);
// {"kind": full|diagonal|entries, "d1", "d2", "n", "a", "law", "scale"?} or {"file": path}.
randmat::MatrixEnsemble parse_ensemble(const json& j, const std::filesystem::path& base, const std::string& where);

seq::Mode parse_mode(const json& j, const std::string& where);

}  // namespace itolab::cli

#endif
