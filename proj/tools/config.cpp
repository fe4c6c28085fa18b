#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace itolab::cli {

namespace {

const std::map<std::string, Category>& type_table() {
  static const std::map<std::string, Category> table = {
      {"poisson_moments", Category::moments},       {"symmetrization", Category::moments},
      {"khintchine", Category::khintchine},         {"kahane", Category::khintchine},
      {"type_cotype", Category::khintchine},        {"rosenthal_scalar", Category::rosenthal},
      {"rosenthal_positive", Category::rosenthal},  {"hoffmann_jorgensen", Category::rosenthal},
      {"rosenthal_spq", Category::rosenthal},       {"2pqqp", Category::rosenthal},
      {"duality", Category::rosenthal},             {"decoupling", Category::integral},
      {"ito_isomorphism", Category::integral},      {"running_max", Category::integral},
      {"matrix_rosenthal", Category::matrix},       {"matrix_entrywise", Category::matrix},
      {"matrix_latala", Category::matrix},          {"seginer", Category::matrix},
  };
  return table;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ConfigError(where + ": " + what); }

const json& member(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where, "missing key '" + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(where, "expected a finite number");
  return x;
}

std::size_t index(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(where, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

lq::cplx complex_number(const json& j, const std::string& where) {
  if (j.is_number()) return number(j, where);
  if (j.is_array() && j.size() == 2) return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
  fail(where, "expected a number or [re, im]");
}

// Rows of numbers into a dense matrix.
Eigen::MatrixXd rows_of(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) fail(where, "expected a nonempty array of rows");
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::vector<double> row = numbers(j[r], where + "[" + std::to_string(r) + "]");
    if (row.size() != cols) fail(where, "rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
  }
  return m;
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

// Follows {"file": path} references, relative to base; nested references are
// resolved against the referring file.
json resolve(const json& j, std::filesystem::path& base, const std::string& where) {
  if (!j.is_object() || !j.contains("file")) return j;
  require_keys(j, {"file"}, where);
  const std::filesystem::path path = base / text(j.at("file"), where + ".file");
  std::ifstream in(path);
  if (!in) fail(where, "cannot read '" + path.string() + "'");
  json out;
  try {
    out = json::parse(in);
  } catch (const json::exception& e) {
    fail(where, std::string("malformed JSON in '") + path.string() + "': " + e.what());
  }
  base = path.parent_path();
  return resolve(out, base, where);
}

// Runs a parser, turning library validation errors into ConfigError.
template <class F>
auto guarded(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    fail(where, e.what());
  } catch (const json::exception& e) {
    fail(where, e.what());
  }
}

integ::Factor::Kind factor_kind(const std::string& s, const std::string& where) {
  if (s == "count") return integ::Factor::Kind::count;
  if (s == "compensated") return integ::Factor::Kind::compensated;
  if (s == "occupied") return integ::Factor::Kind::occupied;
  fail(where, "unknown factor kind '" + s + "'");
}

}  // namespace

std::string to_string(Category c) {
  switch (c) {
    case Category::moments: return "moments";
    case Category::rosenthal: return "rosenthal";
    case Category::integral: return "integral";
    case Category::matrix: return "matrix";
    case Category::khintchine: return "khintchine";
  }
  return "?";
}

Category category_from_string(const std::string& s) {
  for (Category c : {Category::moments, Category::rosenthal, Category::integral, Category::matrix, Category::khintchine})
    if (to_string(c) == s) return c;
  throw ConfigError("unknown category '" + s + "'");
}

Category category_of(const std::string& type) {
  const auto it = type_table().find(type);
  if (it == type_table().end()) throw ConfigError("unknown check type '" + type + "'");
  return it->second;
}

const std::vector<std::string>& check_types() {
  static const std::vector<std::string> types = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : type_table()) out.push_back(k);
    return out;
  }();
  return types;
}

void require_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail(where, "unknown key '" + key + "'");
}

double parse_exponent(const json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return lq::kInf;
    fail(where, "expected a number or \"inf\"");
  }
  return number(j, where);
}

std::vector<double> parse_grid(const json& j, const std::string& where) {
  if (!j.is_array()) return {parse_exponent(j, where)};
  if (j.empty()) fail(where, "empty exponent grid");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_exponent(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

lq::LqElement parse_element(const json& j, const std::string& where) {
  return guarded(where, [&] {
    if (j.is_number() || j.is_array()) return lq::LqElement::scalar(complex_number(j, where));
    if (j.is_object() && j.contains("matrix")) {
      require_keys(j, {"matrix", "imag"}, where);
      const Eigen::MatrixXd re = rows_of(j.at("matrix"), where + ".matrix");
      Eigen::MatrixXd im = Eigen::MatrixXd::Zero(re.rows(), re.cols());
      if (j.contains("imag")) im = rows_of(j.at("imag"), where + ".imag");
      if (im.rows() != re.rows() || im.cols() != re.cols()) fail(where, "imag differs in shape from matrix");
      lq::Matrix m(re.rows(), re.cols());
      m.real() = re;
      m.imag() = im;
      return lq::LqElement::matrix(std::move(m));
    }
    if (j.is_object() && j.contains("function")) {
      require_keys(j, {"function", "weights"}, where);
      const json& fn = j.at("function");
      if (!fn.is_array() || fn.empty()) fail(where + ".function", "expected a nonempty array");
      Eigen::VectorXcd v(fn.size());
      for (std::size_t k = 0; k < fn.size(); ++k) v(k) = complex_number(fn[k], where + ".function[" + std::to_string(k) + "]");
      std::vector<double> w(fn.size(), 1.0);
      if (j.contains("weights")) w = numbers(j.at("weights"), where + ".weights");
      return lq::LqElement::commutative(lq::FiniteMeasureSpace::make(std::move(w)), std::move(v));
    }
    fail(where, "expected a number, [re, im], {\"matrix\"} or {\"function\"}");
  });
}

std::vector<lq::LqElement> parse_elements(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of elements");
  std::vector<lq::LqElement> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_element(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

seq::LqSequence parse_sequence(const json& in, const std::filesystem::path& base_dir, const std::string& where) {
  std::filesystem::path base = base_dir;
  const json j = resolve(in, base, where);
  require_keys(j, {"items"}, where);
  const json& items = member(j, "items", where);
  if (!items.is_array() || items.empty()) fail(where + ".items", "expected a nonempty array");
  return guarded(where, [&] {
    std::vector<prob::RandomLqVariable> out;
    for (std::size_t k = 0; k < items.size(); ++k) {
      const std::string w = where + ".items[" + std::to_string(k) + "]";
      const json& it = items[k];
      if (it.is_object() && it.contains("constant")) {
        require_keys(it, {"constant"}, w);
        out.push_back(prob::RandomLqVariable::constant(parse_element(it.at("constant"), w + ".constant")));
      } else if (it.is_object() && it.contains("sign")) {
        require_keys(it, {"sign"}, w);
        const lq::LqElement x = parse_element(it.at("sign"), w + ".sign");
        out.push_back(prob::RandomLqVariable::discrete({0.5, 0.5}, {x, -1.0 * x}));
      } else {
        require_keys(it, {"probs", "values"}, w);
        std::vector<double> probs = numbers(member(it, "probs", w), w + ".probs");
        std::vector<lq::LqElement> values = parse_elements(member(it, "values", w), w + ".values");
        if (probs.size() != values.size()) fail(w, "probs and values differ in length");
        out.push_back(prob::RandomLqVariable::discrete(std::move(probs), std::move(values)));
      }
    }
    return seq::LqSequence(std::move(out));
  });
}

ProcessSpec parse_process(const json& in, const std::filesystem::path& base_dir, const std::string& where) {
  std::filesystem::path base = base_dir;
  const json j = resolve(in, base, where);
  require_keys(j, {"grid", "shape", "terms", "t", "sets"}, where);
  return guarded(where, [&] {
    const json& g = member(j, "grid", where);
    require_keys(g, {"times", "measures", "labels"}, where + ".grid");
    std::vector<double> times = numbers(member(g, "times", where + ".grid"), where + ".grid.times");
    std::vector<double> measures = numbers(member(g, "measures", where + ".grid"), where + ".grid.measures");
    std::vector<std::string> labels;
    if (g.contains("labels")) {
      for (const auto& l : g.at("labels")) labels.push_back(text(l, where + ".grid.labels"));
    } else {
      for (std::size_t k = 0; k < measures.size(); ++k) labels.push_back("A" + std::to_string(k));
    }
    poisson::GridPartition grid(std::move(times), std::move(labels), std::move(measures));

    const json& terms = member(j, "terms", where);
    if (!terms.is_array()) fail(where + ".terms", "expected an array");
    lq::LqElement shape = lq::LqElement::scalar(0.0);
    if (j.contains("shape")) {
      shape = parse_element(j.at("shape"), where + ".shape");
    } else if (!terms.empty()) {
      shape = parse_element(member(terms[0], "value", where + ".terms[0]"), where + ".terms[0].value");
    }
    integ::SimpleAdaptedProcess F(grid, shape);
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const std::string w = where + ".terms[" + std::to_string(k) + "]";
      const json& t = terms[k];
      require_keys(t, {"interval", "set", "value", "coefficient"}, w);
      integ::Coefficient coef;
      if (t.contains("coefficient")) {
        const json& c = t.at("coefficient");
        if (c.is_number() || c.is_array()) {
          coef.constant = complex_number(c, w + ".coefficient");
        } else {
          require_keys(c, {"constant", "factors"}, w + ".coefficient");
          if (c.contains("constant")) coef.constant = complex_number(c.at("constant"), w + ".coefficient.constant");
          if (c.contains("factors")) {
            for (std::size_t f = 0; f < c.at("factors").size(); ++f) {
              const std::string wf = w + ".coefficient.factors[" + std::to_string(f) + "]";
              const json& fj = c.at("factors")[f];
              require_keys(fj, {"cells", "kind", "weight"}, wf);
              integ::Factor factor;
              for (const auto& cell : member(fj, "cells", wf)) {
                if (!cell.is_array() || cell.size() != 2) fail(wf + ".cells", "cells are [interval, set] pairs");
                const std::size_t i = index(cell[0], wf + ".cells");
                const std::size_t s = index(cell[1], wf + ".cells");
                if (i >= grid.interval_count() || s >= grid.set_count()) fail(wf + ".cells", "cell outside the grid");
                factor.cells.push_back(grid.cell(i, s));
              }
              if (fj.contains("kind")) factor.kind = factor_kind(text(fj.at("kind"), wf + ".kind"), wf + ".kind");
              if (fj.contains("weight")) factor.weight = number(fj.at("weight"), wf + ".weight");
              coef.factors.push_back(std::move(factor));
            }
          }
        }
      }
      F.add_term(index(member(t, "interval", w), w + ".interval"), index(member(t, "set", w), w + ".set"),
                 std::move(coef), parse_element(member(t, "value", w), w + ".value"));
    }
    ProcessSpec out{F, grid.horizon(), grid.all_sets()};
    if (j.contains("t")) out.t = number(j.at("t"), where + ".t");
    if (j.contains("sets")) {
      out.sets.clear();
      for (const auto& s : j.at("sets")) {
        if (s.is_string()) {
          out.sets.push_back(grid.set_indices({s.get<std::string>()}).front());
        } else {
          out.sets.push_back(index(s, where + ".sets"));
        }
      }
    }
    return out;
  });
}

randmat::EntryLaw parse_law(const json& j, const std::string& where) {
  using randmat::EntryLaw;
  if (j.is_string()) {
    const std::string k = j.get<std::string>();
    if (k == "rademacher") return EntryLaw::rademacher();
    if (k == "gaussian") return EntryLaw::gaussian();
    fail(where, "unknown law '" + k + "'");
  }
  require_keys(j, {"kind", "a", "prob", "dof", "values", "probs"}, where);
  return guarded(where, [&] {
    const std::string k = text(member(j, "kind", where), where + ".kind");
    if (k == "rademacher") return EntryLaw::rademacher();
    if (k == "gaussian") return EntryLaw::gaussian();
    if (k == "two_atom")
      return EntryLaw::two_atom(number(member(j, "a", where), where + ".a"),
                                number(member(j, "prob", where), where + ".prob"));
    if (k == "student_t") return EntryLaw::student_t(number(member(j, "dof", where), where + ".dof"));
    if (k == "table")
      return EntryLaw::table(numbers(member(j, "values", where), where + ".values"),
                             numbers(member(j, "probs", where), where + ".probs"));
    fail(where, "unknown law '" + k + "'");
  });
}

randmat::RealMatrix parse_real_matrix(const json& j, const std::string& where) { return rows_of(j, where); }

randmat::MatrixEnsemble parse_ensemble(const json& in, const std::filesystem::path& base_dir, const std::string& where) {
  std::filesystem::path base = base_dir;
  const json j = resolve(in, base, where);
  require_keys(j, {"kind", "d1", "d2", "d", "n", "a", "law", "scale", "label"}, where);
  return guarded(where, [&] {
    const std::string kind = text(member(j, "kind", where), where + ".kind");
    const randmat::EntryLaw law =
        j.contains("law") ? parse_law(j.at("law"), where + ".law") : randmat::EntryLaw::rademacher();
    auto dim = [&](const char* key) { return static_cast<int>(index(member(j, key, where), where + "." + key)); };
    randmat::MatrixEnsemble e;
    if (kind == "full") {
      e = randmat::MatrixEnsemble::full(dim("d1"), dim("d2"), dim("n"), law);
    } else if (kind == "diagonal") {
      e = randmat::MatrixEnsemble::diagonal(dim("d"), dim("n"), law);
    } else if (kind == "entries") {
      e = randmat::MatrixEnsemble::entries(rows_of(member(j, "a", where), where + ".a"), law);
    } else {
      fail(where + ".kind", "unknown ensemble kind '" + kind + "'");
    }
    if (j.contains("scale")) e = e.scaled(number(j.at("scale"), where + ".scale"));
    if (j.contains("label")) e.label = text(j.at("label"), where + ".label");
    e.validate();
    return e;
  });
}

seq::Mode parse_mode(const json& j, const std::string& where) {
  const std::string s = text(j, where);
  if (s == "commutative") return seq::Mode::commutative;
  if (s == "noncommutative") return seq::Mode::noncommutative;
  fail(where, "expected \"commutative\" or \"noncommutative\"");
}

ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  const std::string where = "config";
  require_keys(j, {"schema_version", "seed", "mode", "samples", "output", "tolerances", "constants", "checks"}, where);
  const json& version = member(j, "schema_version", where);
  if (!version.is_number_integer() || version.get<long long>() != kSchemaVersion)
    fail(where + ".schema_version", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
  ExperimentConfig c;
  c.base_dir = base_dir;
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) fail(where + ".seed", "expected a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("mode")) {
    const std::string m = text(j.at("mode"), where + ".mode");
    if (m != "exact" && m != "sampled") fail(where + ".mode", "expected \"exact\" or \"sampled\"");
    c.sampled = m == "sampled";
  }
  if (j.contains("samples")) {
    c.samples = index(j.at("samples"), where + ".samples");
    if (c.samples < 2) fail(where + ".samples", "at least 2 samples are needed");
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    require_keys(o, {"csv", "json"}, where + ".output");
    if (o.contains("csv")) c.output_csv = text(o.at("csv"), where + ".output.csv");
    if (o.contains("json")) c.output_json = text(o.at("json"), where + ".output.json");
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    require_keys(t, {"float_slack", "sigmas", "exact_eps", "budget"}, where + ".tolerances");
    if (t.contains("float_slack")) c.tolerances.float_slack = number(t.at("float_slack"), where + ".tolerances.float_slack");
    if (t.contains("sigmas")) c.tolerances.sigmas = number(t.at("sigmas"), where + ".tolerances.sigmas");
    if (t.contains("exact_eps")) c.tolerances.exact_eps = number(t.at("exact_eps"), where + ".tolerances.exact_eps");
    if (t.contains("budget")) c.tolerances.budget = index(t.at("budget"), where + ".tolerances.budget");
    if (c.tolerances.float_slack < 0.0 || c.tolerances.sigmas < 0.0 || !(c.tolerances.exact_eps > 0.0))
      fail(where + ".tolerances", "tolerances must be nonnegative and exact_eps positive");
  }
  if (j.contains("constants")) {
    const json& k = j.at("constants");
    require_keys(k, {"hoffmann_jorgensen", "rosenthal_scalar", "latala", "umd"}, where + ".constants");
    auto read = [&](const char* key, std::optional<double>& slot) {
      if (!k.contains(key)) return;
      const double v = number(k.at(key), where + ".constants." + key);
      if (!(v > 0.0)) fail(where + ".constants." + key, "constants must be positive");
      slot = v;
    };
    read("hoffmann_jorgensen", c.constants.hoffmann_jorgensen);
    read("rosenthal_scalar", c.constants.rosenthal_scalar);
    read("latala", c.constants.latala);
    read("umd", c.constants.umd);
  }
  if (j.contains("checks")) {
    const json& checks = j.at("checks");
    if (!checks.is_array()) fail(where + ".checks", "expected an array");
    for (std::size_t k = 0; k < checks.size(); ++k) {
      const std::string w = where + ".checks[" + std::to_string(k) + "]";
      const json& ch = checks[k];
      CheckSpec spec;
      spec.type = text(member(ch, "type", w), w + ".type");
      try {
        category_of(spec.type);
      } catch (const ConfigError& e) {
        fail(w, e.what());
      }
      spec.id = ch.contains("id") ? text(ch.at("id"), w + ".id") : spec.type + "#" + std::to_string(k);
      spec.body = ch;
      c.checks.push_back(std::move(spec));
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in '" + path.string() + "': " + e.what());
  }
  return parse_config(j, path.parent_path());
}

}  // namespace itolab::cli
