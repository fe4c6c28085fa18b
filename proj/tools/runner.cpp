#include "runner.hpp"

#include <chrono>
#include <exception>
#include <memory>

#include "itolab/lab.hpp"
#include "itolab/parallel.hpp"
#include "itolab/poisson.hpp"
#include "itolab/randmat.hpp"

namespace itolab::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

lab::LabOptions lab_options(const ExperimentConfig& c, const std::string& label) {
  lab::LabOptions o;
  o.constants = c.constants;
  o.exact.eps = c.tolerances.exact_eps;
  o.exact.budget = c.tolerances.budget;
  o.budget = c.tolerances.budget;
  o.mc_samples = c.samples;
  o.sampled = c.sampled;
  o.seed = c.seed;
  o.float_slack = c.tolerances.float_slack;
  o.sigmas = c.tolerances.sigmas;
  o.label = label;
  return o;
}

randmat::RandmatOptions matrix_options(const ExperimentConfig& c, const std::string& label) {
  randmat::RandmatOptions o;
  o.constants = c.constants;
  if (c.sampled) o.exact_atoms = 0;
  o.samples = c.samples;
  o.seed = c.seed;
  o.sigmas = c.tolerances.sigmas;
  o.float_slack = c.tolerances.float_slack;
  o.label = label;
  return o;
}

double number_or(const json& body, const char* key, double fallback, const std::string& where) {
  if (!body.contains(key)) return fallback;
  return parse_grid(body.at(key), where + "." + key).at(0);
}

std::vector<double> grid_of(const json& body, const char* key, const std::string& where) {
  if (!body.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return parse_grid(body.at(key), where + "." + key);
}

std::vector<double> lambda_grid(const json& j, const std::string& where) {
  if (j.is_array()) return parse_grid(j, where);
  require_keys(j, {"lo", "hi", "n"}, where);
  const double lo = number_or(j, "lo", 1e-4, where);
  const double hi = number_or(j, "hi", 1.0, where);
  const double n = number_or(j, "n", 60.0, where);
  if (!(lo > 0.0 && hi >= lo && n >= 1.0)) throw ConfigError(where + ": need 0 < lo <= hi and n >= 1");
  return poisson::log_spaced(lo, hi, static_cast<std::size_t>(n));
}

// Adds one job per (p, q) point; fn(p, q) runs the check.
void for_grid(std::vector<Job>& jobs, const std::string& type, const std::vector<double>& ps,
              const std::vector<double>& qs, const std::function<std::vector<CheckReport>(double, double)>& fn) {
  for (double p : ps)
    for (double q : qs) jobs.push_back(Job{type, [fn, p, q] { return fn(p, q); }});
}

void plan_check(std::vector<Job>& jobs, const ExperimentConfig& c, const CheckSpec& s, const std::string& w) {
  const json& b = s.body;
  const std::string& t = s.type;
  const lab::LabOptions lo = lab_options(c, s.id);
  const std::vector<double> none{kNaN};
  auto keys = [&](std::vector<std::string> extra) {
    extra.push_back("type");
    extra.push_back("id");
    require_keys(b, extra, w);
  };
  auto need = [&](const char* key) -> const json& {
    if (!b.contains(key)) throw ConfigError(w + ": missing key '" + key + "'");
    return b.at(key);
  };
  auto mode_of = [&] { return b.contains("mode") ? parse_mode(b.at("mode"), w + ".mode") : seq::Mode::noncommutative; };

  if (t == "poisson_moments") {
    keys({"p", "lambdas", "eps"});
    const auto lambdas = std::make_shared<std::vector<double>>(
        b.contains("lambdas") ? lambda_grid(b.at("lambdas"), w + ".lambdas") : poisson::log_spaced(1e-4, 1.0, 60));
    const double eps = number_or(b, "eps", 1e-15, w);
    const std::string id = s.id;
    for_grid(jobs, t, grid_of(b, "p", w), none, [lambdas, eps, id](double p, double) {
      auto r = poisson::verify_centered_moments({p}, *lambdas, eps);
      for (auto& x : r) x.case_id = id + "/" + x.case_id;
      return r;
    });
  } else if (t == "khintchine") {
    keys({"elements", "p", "q"});
    const auto xs = std::make_shared<std::vector<lq::LqElement>>(parse_elements(need("elements"), w + ".elements"));
    for_grid(jobs, t, grid_of(b, "p", w), grid_of(b, "q", w),
             [xs, lo](double p, double q) { return lab::check_khintchine(*xs, p, q, lo); });
  } else if (t == "kahane") {
    keys({"elements", "p", "r", "q"});
    const auto xs = std::make_shared<std::vector<lq::LqElement>>(parse_elements(need("elements"), w + ".elements"));
    const std::vector<double> rs = grid_of(b, "r", w);
    const double nq = number_or(b, "q", 2.0, w);
    for_grid(jobs, t, grid_of(b, "p", w), rs,
             [xs, lo, nq](double p, double r) { return lab::check_kahane(*xs, p, r, nq, lo); });
  } else if (t == "type_cotype") {
    keys({"family", "q", "band"});
    const json& fam = need("family");
    if (!fam.is_array() || fam.empty()) throw ConfigError(w + ".family: expected a nonempty array");
    auto family = std::make_shared<std::vector<std::vector<lq::LqElement>>>();
    for (std::size_t k = 0; k < fam.size(); ++k)
      family->push_back(parse_elements(fam[k], w + ".family[" + std::to_string(k) + "]"));
    const double band = number_or(b, "band", 4.0, w);
    for_grid(jobs, t, none, grid_of(b, "q", w),
             [family, band, lo](double, double q) { return lab::check_type_cotype(*family, q, band, lo); });
  } else if (t == "symmetrization" || t == "rosenthal_spq" || t == "2pqqp") {
    if (t == "symmetrization") {
      keys({"sequence", "p", "q"});
    } else {
      keys({"sequence", "p", "q", "mode"});
    }
    const auto sq = std::make_shared<seq::LqSequence>(parse_sequence(need("sequence"), c.base_dir, w + ".sequence"));
    const seq::Mode mode = mode_of();
    for_grid(jobs, t, grid_of(b, "p", w), grid_of(b, "q", w), [sq, lo, mode, t](double p, double q) {
      if (t == "symmetrization") return lab::check_symmetrization(*sq, p, q, lo);
      if (t == "rosenthal_spq") return lab::check_rosenthal_spq(*sq, p, q, mode, lo);
      return lab::check_2pqqp(*sq, p, q, mode, lo);
    });
  } else if (t == "rosenthal_scalar" || t == "rosenthal_positive") {
    keys({"sequence", "p"});
    const auto sq = std::make_shared<seq::LqSequence>(parse_sequence(need("sequence"), c.base_dir, w + ".sequence"));
    for_grid(jobs, t, grid_of(b, "p", w), none, [sq, lo, t](double p, double) {
      if (t == "rosenthal_scalar") return lab::check_rosenthal_scalar(*sq, p, lo);
      return lab::check_rosenthal_positive(sq->items(), p, lo);
    });
  } else if (t == "hoffmann_jorgensen") {
    keys({"family", "p", "q", "band"});
    const json& fam = need("family");
    if (!fam.is_array() || fam.empty()) throw ConfigError(w + ".family: expected a nonempty array");
    auto family = std::make_shared<std::vector<seq::LqSequence>>();
    for (std::size_t k = 0; k < fam.size(); ++k)
      family->push_back(parse_sequence(fam[k], c.base_dir, w + ".family[" + std::to_string(k) + "]"));
    const double band = number_or(b, "band", 4.0, w);
    for_grid(jobs, t, grid_of(b, "p", w), grid_of(b, "q", w), [family, band, lo](double p, double q) {
      return lab::check_hoffmann_jorgensen(*family, p, q, band, lo);
    });
  } else if (t == "duality") {
    keys({"f", "g", "p", "q", "mode", "tolerance"});
    const auto f = std::make_shared<seq::LqSequence>(parse_sequence(need("f"), c.base_dir, w + ".f"));
    const auto g = std::make_shared<seq::LqSequence>(parse_sequence(need("g"), c.base_dir, w + ".g"));
    const seq::Mode mode = mode_of();
    const double tol = number_or(b, "tolerance", 1e-3, w);
    for_grid(jobs, t, grid_of(b, "p", w), grid_of(b, "q", w),
             [f, g, mode, tol, lo](double p, double q) { return lab::check_duality(*f, *g, p, q, mode, tol, lo); });
  } else if (t == "decoupling" || t == "running_max") {
    keys({"process", "p", "q"});
    const auto pr = std::make_shared<ProcessSpec>(parse_process(need("process"), c.base_dir, w + ".process"));
    for_grid(jobs, t, grid_of(b, "p", w), grid_of(b, "q", w), [pr, lo, t](double p, double q) {
      if (t == "decoupling") return lab::check_decoupling(pr->F, pr->t, pr->sets, p, q, lo);
      return lab::check_doob(pr->F, pr->t, pr->sets, p, q, lo);
    });
  } else if (t == "ito_isomorphism") {
    keys({"family", "p", "q", "mode", "band", "scale"});
    const json& fam = need("family");
    if (!fam.is_array() || fam.empty()) throw ConfigError(w + ".family: expected a nonempty array");
    auto family = std::make_shared<std::vector<lab::ProcessCase>>();
    for (std::size_t k = 0; k < fam.size(); ++k) {
      const std::string wk = w + ".family[" + std::to_string(k) + "]";
      require_keys(fam[k], {"label", "process"}, wk);
      if (!fam[k].contains("process")) throw ConfigError(wk + ": missing key 'process'");
      ProcessSpec ps = parse_process(fam[k].at("process"), c.base_dir, wk + ".process");
      const std::string label = fam[k].contains("label") ? fam[k].at("label").get<std::string>() : std::to_string(k);
      family->push_back(lab::ProcessCase{ps.F, ps.t, ps.sets, label});
    }
    const seq::Mode mode = mode_of();
    const double band = number_or(b, "band", 16.0, w);
    const double scale = number_or(b, "scale", 10.0, w);
    for_grid(jobs, t, grid_of(b, "p", w), grid_of(b, "q", w), [family, mode, band, scale, lo](double p, double q) {
      return lab::check_ito_isomorphism(*family, p, q, mode, band, scale, 1e-12, lo);
    });
  } else if (t == "matrix_rosenthal" || t == "matrix_entrywise" || t == "matrix_latala") {
    keys({"ensemble", "p"});
    const auto e = std::make_shared<randmat::MatrixEnsemble>(parse_ensemble(need("ensemble"), c.base_dir, w + ".ensemble"));
    if (t != "matrix_rosenthal") {
      for (const auto& S : e->scales)
        if ((S.array() != 0.0).count() != 1)
          throw ConfigError(w + ".ensemble: the entrywise bound needs one random entry per summand (kind \"entries\")");
    }
    const randmat::RandmatOptions mo = matrix_options(c, s.id);
    for_grid(jobs, t, grid_of(b, "p", w), none, [e, mo, t](double p, double) {
      if (t == "matrix_rosenthal") return randmat::bound_matrix_rosenthal(*e, p, mo);
      if (t == "matrix_entrywise") return randmat::bound_entrywise(*e, p, mo);
      return randmat::bound_latala(*e, p, mo);
    });
  } else if (t == "seginer") {
    keys({"a", "p"});
    const auto a = std::make_shared<randmat::RealMatrix>(parse_real_matrix(need("a"), w + ".a"));
    const randmat::RandmatOptions mo = matrix_options(c, s.id);
    for_grid(jobs, t, grid_of(b, "p", w), none,
             [a, mo](double p, double) { return randmat::seginer_ensemble(*a, p, mo); });
  } else {
    throw ConfigError(w + ": unknown check type '" + t + "'");
  }
}

}  // namespace

std::vector<Job> plan(const ExperimentConfig& config, const RunOptions& options) {
  std::vector<Job> jobs;
  for (std::size_t k = 0; k < config.checks.size(); ++k) {
    const CheckSpec& s = config.checks[k];
    if (options.category && category_of(s.type) != *options.category) continue;
    const std::string w = "config.checks[" + std::to_string(k) + "] (" + s.id + ")";
    try {
      plan_check(jobs, config, s, w);
    } catch (const ConfigError&) {
      throw;
    } catch (const InvalidInput& e) {
      throw ConfigError(w + ": " + e.what());
    } catch (const json::exception& e) {
      throw ConfigError(w + ": " + e.what());
    }
  }
  return jobs;
}

std::vector<CheckReport> execute(const std::vector<Job>& jobs, const RunOptions& options) {
  std::vector<std::vector<CheckReport>> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t k) {
    const auto start = std::chrono::steady_clock::now();
    try {
      results[k] = jobs[k].run();
    } catch (const OptimizerError& e) {
      CheckReport r;
      r.check_id = jobs[k].check_id;
      r.status = Status::fail;
      r.lhs = e.best_value();
      r.note = std::string("optimizer did not converge: ") + e.what();
      results[k] = {r};
    } catch (...) {
      errors[k] = std::current_exception();
    }
    if (options.timing) {
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      for (auto& r : results[k]) r.runtime_ms = ms;
    }
  });
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<CheckReport> out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<CheckReport> run(const ExperimentConfig& config, const RunOptions& options) {
  return execute(plan(config, options), options);
}

}  // namespace itolab::cli
