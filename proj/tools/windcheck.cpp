// windcheck: model checking, simulation and sweeps for the wind-farm
// inspection mission (or any guarded-command / explicit DTMC model).

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "windcheck/config.hpp"
#include "windcheck/gcl/builder.hpp"
#include "windcheck/gcl/model.hpp"
#include "windcheck/mission.hpp"
#include "windcheck/pctl/checker.hpp"
#include "windcheck/report.hpp"
#include "windcheck/sim.hpp"
#include "windcheck/sweep.hpp"

namespace {

using namespace windcheck;
using nlohmann::json;

enum Exit { kOk = 0, kConfig = 2, kFormula = 3, kNumeric = 4 };

struct Globals {
  std::optional<int> scenario;
  std::string config_path;
  std::string variant;
  bool json = false;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

// Wraps an input-side failure so main() can map it to exit code 2 or 3.
struct InputFailure {
  int code;
  std::string message;
};

MissionConfig mission_config(const Globals& g) {
  MissionConfig c;
  if (g.scenario) c = scenario_preset(*g.scenario);
  if (!g.config_path.empty()) c = load_config(g.config_path, c);
  if (!g.variant.empty()) c.variant = parse_variant(g.variant);
  c.validate();
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

// Model from --model (guarded commands), --dtmc (explicit) or the mission.
Dtmc load_model(const Globals& g, const std::string& model_path, const std::string& dtmc_path) {
  try {
    if (!model_path.empty()) return gcl::compose_and_build(gcl::parse_model(read_file(model_path)));
    if (!dtmc_path.empty()) return deserialize(read_file(dtmc_path));
  } catch (const ParseError& e) {
    throw InputFailure{kConfig, (model_path.empty() ? dtmc_path : model_path) + ":" + e.what()};
  } catch (const ModelError& e) {
    throw InputFailure{kConfig, e.what()};
  }
  return build_mission_model(mission_config(g));
}

std::vector<pctl::Formula> parse_formulas(const std::vector<std::string>& texts) {
  std::vector<pctl::Formula> out;
  for (const auto& t : texts) {
    try {
      out.push_back(pctl::parse_formula(t));
    } catch (const ParseError& e) {
      throw InputFailure{kFormula, "formula '" + t + "': " + e.what()};
    }
  }
  return out;
}

std::vector<std::string> default_properties() {
  return {kSuccessProperty, kMissionTimeProperty, kRechargeProperty};
}

json number_json(double v) {
  if (std::isfinite(v)) return v;
  return report::number(v);
}

int cmd_verify(const Globals& g, std::vector<std::string> texts, const std::string& model_path,
               const std::string& dtmc_path, const std::string& method, pctl::SolverOptions opt) {
  if (texts.empty()) texts = default_properties();
  const auto formulas = parse_formulas(texts);
  if (method == "gauss-seidel") opt.method = pctl::Method::GaussSeidel;
  else if (method == "direct") opt.method = pctl::Method::Direct;

  const Dtmc d = load_model(g, model_path, dtmc_path);
  pctl::Checker checker(d, opt);
  json records = json::array();
  std::ostringstream text;
  text << "states " << d.num_states() << ", transitions " << d.num_transitions() << "\n";
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    const auto r = checker.check(formulas[i]);
    json rec{{"formula", texts[i]},
             {"states", d.num_states()},
             {"transitions", d.num_transitions()},
             {"iterations", r.iterations},
             {"residual", r.residual}};
    if (r.numeric) rec["value"] = number_json(r.value);
    else rec["holds"] = r.holds;
    records.push_back(rec);
    text << texts[i] << "  " << (r.numeric ? report::number(r.value) : (r.holds ? "true" : "false"))
         << "  (iterations " << r.iterations << ", residual " << report::number(r.residual) << ")\n";
  }
  std::cout << (g.json ? records.dump(2) + "\n" : text.str());
  return kOk;
}

std::string numbered_path(const std::string& path, std::size_t i, std::size_t k) {
  if (k == 1) return path;
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + "_" + std::to_string(i) + p.extension().string())).string();
}

int cmd_simulate(const Globals& g, std::uint64_t n, const std::string& trace_out, std::size_t traces,
                 std::uint64_t step_cap) {
  const Dtmc d = build_mission_model(mission_config(g));
  sim::EstimateOptions opt{n, g.seed, g.threads, step_cap};
  const auto done = d.label("done");
  const sim::Estimate est[3] = {sim::estimate_reach_probability(d, "success", opt),
                                sim::estimate_expected_reward(d, "mt", done, opt),
                                sim::estimate_expected_reward(d, "rc", done, opt)};
  const auto props = default_properties();

  json records = json::array();
  std::ostringstream text;
  text << "states " << d.num_states() << ", n " << n << ", seed " << g.seed << "\n";
  for (int i = 0; i < 3; ++i) {
    const auto& e = est[i];
    records.push_back({{"property", props[i]},
                       {"mean", number_json(e.mean)},
                       {"half_width", number_json(e.half_width)},
                       {"n", e.n},
                       {"seed", e.seed},
                       {"truncated", e.truncated},
                       {"degenerate", e.degenerate}});
    text << props[i] << "  " << report::number(e.mean) << " +- " << report::number(e.half_width)
         << (e.truncated ? "  (truncated)" : "") << (e.degenerate ? "  (single sample)" : "") << "\n";
  }

  if (!trace_out.empty()) {
    // Prefer failing traces: sample conditioned on reaching "fail" when it can happen.
    pctl::Checker checker(d);
    const auto fail_prob = checker.probabilities(*pctl::parse_formula("P=? [ F \"fail\" ]")->path);
    const bool failing = fail_prob[d.initial()] > 0;
    sim::TraceOptions topt;
    topt.step_cap = step_cap;
    for (std::size_t i = 0; i < traces; ++i) {
      const auto t = failing ? sim::simulate_conditioned_trace(d, fail_prob, g.seed, i, topt)
                             : sim::simulate_trace(d, g.seed, i, topt);
      const auto path = numbered_path(trace_out, i, traces);
      write_file(path, report::trace_csv(d, t));
      text << "trace " << path << ": " << t.steps.size() - 1 << " steps, "
           << (d.label("fail").contains(t.last()) ? "fail" : d.label("success").contains(t.last()) ? "success"
                                                                                                  : sim::to_string(t.outcome))
           << "\n";
    }
  }
  std::cout << (g.json ? records.dump(2) + "\n" : text.str());
  return kOk;
}

int cmd_sweep(const Globals& g, const std::string& param, double lo, double hi, double step,
              std::vector<std::string> variants, std::vector<std::string> props, const std::string& out) {
  MissionConfig base = mission_config(g);
  SweepSpec spec;
  spec.parameter = parse_sweep_param(param);
  spec.lo = lo;
  spec.hi = hi;
  spec.step = step;
  if (variants.empty()) variants.push_back(g.variant.empty() ? to_string(base.variant) : g.variant);
  spec.variants.clear();
  for (const auto& v : variants) spec.variants.push_back(parse_variant(v));
  if (!props.empty()) spec.properties = props;
  spec.validate();
  parse_formulas(spec.properties);

  const auto points = run_sweep(base, spec, g.threads);
  std::string body;
  if (g.json) {
    json rows = json::array();
    for (const auto& p : points) {
      json row{{"param", to_string(spec.parameter)},
               {"value", p.value},
               {"variant", to_string(p.variant)},
               {"states", p.states},
               {"transitions", p.transitions}};
      if (!p.error.empty()) row["error"] = p.error;
      for (std::size_t i = 0; i < p.results.size(); ++i) row[spec.properties[i]] = number_json(p.results[i]);
      rows.push_back(row);
    }
    body = rows.dump(2) + "\n";
  } else {
    body = sweep_csv(spec, points);
  }
  if (out.empty()) std::cout << body;
  else write_file(out, body);
  return kOk;
}

int cmd_emit(const Globals& g, bool explicit_form, bool config_form) {
  const MissionConfig c = mission_config(g);
  if (config_form) std::cout << format_config(c);
  else if (explicit_form) std::cout << serialize(build_mission_model(c));
  else std::cout << mission_model_text(c);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"windcheck: probabilistic model checking of a UAV wind-farm inspection mission"};
  app.set_version_flag("--version", std::string("windcheck ") + WINDCHECK_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  int scenario = 0;
  auto* scen = app.add_option("--scenario", scenario, "Reference scenario 1..4")->check(CLI::Range(1, 4));
  app.add_option("--config", g.config_path, "Mission config file (INI)");
  app.add_option("--variant", g.variant, "Battery model variant")
      ->check(CLI::IsMember({"advanced", "basic_high", "basic_medium", "basic_low"}));
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Check PCTL properties on a model");
  std::vector<std::string> formulas;
  std::string model_path, dtmc_path, method = "auto";
  verify->add_option("formulas", formulas, "Properties (default: success, mt, rc)");
  verify->add_option("--model", model_path, "Guarded-command model file instead of the mission");
  verify->add_option("--dtmc", dtmc_path, "Explicit DTMC file instead of the mission");
  verify->add_option("--method", method, "Linear solver")
      ->check(CLI::IsMember({"auto", "gauss-seidel", "direct"}));
  pctl::SolverOptions solver;
  verify->add_option("--tolerance", solver.tolerance, "Iterative solver tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--max-iterations", solver.max_iterations, "Iterative solver iteration cap")
      ->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates and example traces");
  std::uint64_t samples = 100000, step_cap = 1000000;
  std::string trace_out;
  std::size_t traces = 1;
  simulate->add_option("-n,--samples", samples, "Number of traces")->check(CLI::PositiveNumber);
  simulate->add_option("--trace-out", trace_out, "Write example traces as CSV");
  simulate->add_option("--traces", traces, "Number of example traces")->check(CLI::PositiveNumber);
  simulate->add_option("--step-cap", step_cap, "Steps per trace before truncation")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep as CSV");
  std::string param = "c_new", out;
  double lo = 8.0, hi = 16.0, step = 0.2;
  std::vector<std::string> variants, props;
  sweep->add_option("--param", param, "c_new, safe_t or p_wsp_c");
  sweep->add_option("--lo", lo);
  sweep->add_option("--hi", hi);
  sweep->add_option("--step", step);
  sweep->add_option("--variants", variants, "Variants to sweep (default: --variant or the config's)")
      ->delimiter(',');
  sweep->add_option("--property", props, "Property column (repeatable; default: success, mt, rc)");
  sweep->add_option("-o,--output", out, "Output file (default: stdout)");

  auto* emit = app.add_subcommand("emit-model", "Print the generated mission model");
  bool explicit_form = false, config_form = false;
  emit->add_flag("--explicit", explicit_form, "Explicit DTMC instead of guarded commands");
  emit->add_flag("--resolved-config", config_form, "The resolved mission config instead of the model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  if (*scen) g.scenario = scenario;

  try {
    if (*verify) return cmd_verify(g, formulas, model_path, dtmc_path, method, solver);
    if (*simulate) return cmd_simulate(g, samples, trace_out, traces, step_cap);
    if (*sweep) return cmd_sweep(g, param, lo, hi, step, variants, props, out);
    if (*emit) return cmd_emit(g, explicit_form, config_form);
  } catch (const InputFailure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const FormulaError& e) {
    std::cerr << "formula error: " << e.what() << "\n";
    return kFormula;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << " (iterations " << e.iterations() << ", residual "
              << report::number(e.residual()) << ")\n";
    return kNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
