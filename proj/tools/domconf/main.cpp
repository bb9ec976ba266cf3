// domconf: command-line front end over the domconf core library.

#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "domconf/bench.hpp"
#include "domconf/config_space.hpp"
#include "domconf/grounding.hpp"
#include "domconf/heuristics.hpp"
#include "domconf/macros.hpp"
#include "domconf/pddl.hpp"
#include "domconf/report.hpp"
#include "domconf/tune.hpp"

namespace fs = std::filesystem;
using namespace domconf;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitPartial = 3;

pddl::DomainModel load_domain(const std::string& path) {
  pddl::Warnings warnings;
  pddl::DomainModel d;
  try {
    d = pddl::load_domain_file(path, &warnings);
  } catch (const pddl::PddlError& e) {
    throw InputError(path + ":" + e.what());
  }
  for (const auto& w : warnings) std::cerr << path << ": warning: " << w << "\n";
  return d;
}

pddl::ProblemModel load_problem(const std::string& path) {
  pddl::Warnings warnings;
  pddl::ProblemModel p;
  try {
    p = pddl::load_problem_file(path, &warnings);
  } catch (const pddl::PddlError& e) {
    throw InputError(path + ":" + e.what());
  }
  for (const auto& w : warnings) std::cerr << path << ": warning: " << w << "\n";
  return p;
}

nlohmann::json load_json(const std::string& path) {
  try {
    return nlohmann::json::parse(pddl::read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void emit_text(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    pddl::write_text_file(out, text);
  }
}

// Randomised commands print a generated seed so the run can be replayed.
std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t value) {
  if (opt->count() > 0) return value;
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed: " << seed << "\n";
  return seed;
}

std::string scientific(const config::BigInt& n) {
  std::string digits = n.str();
  if (digits.size() <= 3) return digits;
  const std::size_t exponent = digits.size() - 1;
  std::string lead = digits.substr(0, 3);
  int value = std::stoi(lead);
  if (digits[3] >= '5') ++value;
  std::size_t shown_exp = exponent;
  if (value == 1000) {
    value = 100;
    ++shown_exp;
  }
  lead = std::to_string(value);
  return lead.substr(0, 1) + "." + lead.substr(1) + "e+" + std::to_string(shown_exp);
}

config::PrecedenceVector read_vector(const pddl::DomainModel& d, const nlohmann::json& j) {
  if (j.is_array()) {
    auto v = config::uniform_vector(d);
    try {
      v.values = j.get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("precedence vector: ") + e.what());
    }
    return v;
  }
  if (j.is_object() && !j.contains("layout")) return read_vector(d, j.value("values", nlohmann::json::array()));
  return config::precedence_from_json(j);
}

struct BenchFlags {
  CLI::Option* cutoff = nullptr;
  CLI::Option* mem = nullptr;
  CLI::Option* reps = nullptr;
  double cutoff_value = 300.0;
  std::uint64_t mem_value = 4096;
  unsigned reps_value = 3;

  void add_to(CLI::App* app) {
    cutoff = app->add_option("--cutoff", cutoff_value, "Time limit per run in seconds (default 300)")
                 ->check(CLI::PositiveNumber);
    mem = app->add_option("--mem", mem_value, "Memory limit per run in MB (default 4096)")->check(CLI::PositiveNumber);
    reps = app->add_option("--reps", reps_value, "Repetitions per cell, odd (default 3)")
               ->check(CLI::Validator(
                   [](std::string& s) -> std::string {
                     try {
                       const long v = std::stol(s);
                       if (v > 0 && v % 2 == 1) return {};
                     } catch (const std::exception&) {
                     }
                     return "repetitions must be a positive odd number";
                   },
                   "ODD"));
  }

  void apply(bench::RunLimits& limits) const {
    if (cutoff->count()) limits.cutoff_seconds = cutoff_value;
    if (mem->count()) limits.memory_mb = mem_value;
    if (reps->count()) limits.repetitions = reps_value;
  }
};

CLI::Validator placement_validator() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        try {
          macros::Placement::parse(s);
          return {};
        } catch (const InputError& e) {
          return e.what();
        }
      },
      "POSITION");
}

std::vector<std::string> heuristic_names() {
  std::vector<std::string> out;
  for (const auto& h : heuristics::all_heuristics()) out.push_back(h.to_string());
  return out;
}

bench::PlannerSpec planner_from_tune_json(const nlohmann::json& j, const fs::path& base) {
  if (j.is_object()) return bench::planner_from_json(j);
  if (!j.is_string()) throw InputError("tune: 'planner' must be an object or a catalog path");
  const fs::path p = fs::path(j.get<std::string>()).is_absolute() ? fs::path(j.get<std::string>())
                                                                  : base / j.get<std::string>();
  const auto catalog = load_json(p.string());
  if (catalog.is_object()) return bench::planner_from_json(catalog);
  if (catalog.size() != 1) throw InputError(p.string() + ": catalog must hold exactly one planner for tuning");
  return bench::planner_from_json(catalog.at(0));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"domconf: domain model configuration toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string out;

  // validate
  std::string v_domain, v_problem, v_plan;
  auto* validate = app.add_subcommand("validate", "Parse and check a domain, optionally a problem and a plan");
  validate->add_option("domain", v_domain, "Domain file")->required();
  validate->add_option("problem", v_problem, "Problem file");
  validate->add_option("--plan", v_plan, "Plan file to validate against the problem");

  // space-size
  std::string s_domain;
  bool s_json = false;
  auto* space = app.add_subcommand("space-size", "Number of configurations and precedence-vector dimension");
  space->add_option("domain", s_domain, "Domain file")->required();
  space->add_flag("--json", s_json, "Print a JSON object");

  // shuffle
  std::string sh_domain, sh_config;
  std::uint64_t sh_seed = 0;
  auto* shuffle = app.add_subcommand("shuffle", "Apply a uniformly random configuration");
  shuffle->add_option("domain", sh_domain, "Domain file")->required();
  auto* sh_seed_opt = shuffle->add_option("--seed", sh_seed, "Random seed");
  shuffle->add_option("--config", sh_config, "Also write the configuration as JSON");
  shuffle->add_option("-o,--output", out, "Output domain file (default stdout)");

  // order
  std::string o_domain, o_heuristic;
  auto* order = app.add_subcommand("order", "Reorder operators with an online heuristic");
  order->add_option("domain", o_domain, "Domain file")->required();
  order->add_option("--heuristic", o_heuristic, "eff1|eff2|pre1|pre2|rat1|rat2|neg1|neg2|par1|par2")
      ->required()
      ->check(CLI::IsMember(heuristic_names(), CLI::ignore_case));
  order->add_option("-o,--output", out, "Output domain file (default stdout)");

  // decode
  std::string dec_domain, dec_vector, dec_config;
  auto* decode = app.add_subcommand("decode", "Apply the configuration encoded by a precedence vector");
  decode->add_option("domain", dec_domain, "Domain file")->required();
  decode->add_option("vector", dec_vector, "JSON: array of values, or {layout, values}")->required();
  decode->add_option("--config", dec_config, "Also write the decoded configuration as JSON");
  decode->add_option("-o,--output", out, "Output domain file (default stdout)");

  // extract-config
  std::string ex_domain;
  auto* extract = app.add_subcommand("extract-config", "Print the configuration a domain file embodies");
  extract->add_option("domain", ex_domain, "Domain file")->required();
  extract->add_option("-o,--output", out, "Output JSON file (default stdout)");

  // macro
  auto* macro = app.add_subcommand("macro", "Macro-operator composition and placement");
  macro->require_subcommand(1);
  std::string m_domain, m_recipe, m_position = "end";
  std::vector<std::string> m_recipes, m_positions;
  auto* m_build = macro->add_subcommand("build", "Print the composed macro operator");
  m_build->add_option("domain", m_domain, "Domain file")->required();
  m_build->add_option("recipe", m_recipe, "Recipe JSON")->required();
  m_build->add_option("-o,--output", out, "Output file (default stdout)");
  auto* m_insert = macro->add_subcommand("insert", "Insert the macro at a numeric position");
  m_insert->add_option("domain", m_domain, "Domain file")->required();
  m_insert->add_option("recipe", m_recipe, "Recipe JSON")->required();
  m_insert->add_option("--position", m_position, "1-based position, 1..n+1")->required()->check(CLI::PositiveNumber);
  m_insert->add_option("-o,--output", out, "Output domain file (default stdout)");
  auto* m_enum = macro->add_subcommand("enumerate", "Write one domain per possible macro position");
  m_enum->add_option("domain", m_domain, "Domain file")->required();
  m_enum->add_option("recipe", m_recipe, "Recipe JSON")->required();
  m_enum->add_option("-o,--output", out, "Output directory")->required();
  auto* m_place = macro->add_subcommand("place", "Place one or more macros by symbolic position");
  m_place->add_option("domain", m_domain, "Domain file")->required();
  m_place->add_option("--recipe", m_recipes, "Recipe JSON (repeatable)")->required();
  m_place->add_option("--position", m_positions,
                      "idx|end|top|before-first|after-first|between:<k>, one per recipe (default end)")
      ->check(placement_validator());
  m_place->add_option("-o,--output", out, "Output domain file (default stdout)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run planners over benchmark problems");
  bench_cmd->require_subcommand(1);
  std::string b_plan, b_scratch;
  unsigned b_jobs = bench::default_jobs();
  BenchFlags b_flags;
  auto* b_run = bench_cmd->add_subcommand("run", "Execute a bench plan, resuming an existing results file");
  b_run->add_option("plan", b_plan, "bench.json")->required();
  b_run->add_option("-o,--output", out, "Results file (JSON lines)")->required();
  b_run->add_option("--scratch", b_scratch, "Scratch directory (default <output>.runs)");
  b_run->add_option("--jobs", b_jobs, "Parallel runs")->check(CLI::PositiveNumber);
  b_flags.add_to(b_run);

  // tune
  std::string t_spec, t_strategy, t_domain_out, t_scratch;
  std::uint64_t t_seed = 0, t_budget = 0;
  double t_sigma = 0.2;
  unsigned t_jobs = bench::default_jobs();
  BenchFlags t_flags;
  auto* tune_cmd = app.add_subcommand("tune", "Search precedence vectors for a good (or bad) configuration");
  tune_cmd->add_option("spec", t_spec, "tune.json")->required();
  tune_cmd->add_option("-o,--output", out, "Result JSON")->required();
  auto* t_strategy_opt = tune_cmd->add_option("--strategy", t_strategy, "random|ils|adversarial")
                             ->check(CLI::IsMember({"random", "ils", "adversarial"}));
  auto* t_budget_opt = tune_cmd->add_option("--budget", t_budget, "Objective evaluations")->check(CLI::PositiveNumber);
  auto* t_seed_opt = tune_cmd->add_option("--seed", t_seed, "Random seed");
  auto* t_sigma_opt = tune_cmd->add_option("--sigma", t_sigma, "ILS step size in (0,1]")->check(CLI::Range(0.0, 1.0));
  tune_cmd->add_option("--domain-out", t_domain_out, "Best domain as PDDL (default <output> with .pddl)");
  tune_cmd->add_option("--scratch", t_scratch, "Scratch directory (default <output>.runs)");
  tune_cmd->add_option("--jobs", t_jobs, "Parallel runs per evaluation")->check(CLI::PositiveNumber);
  t_flags.add_to(tune_cmd);

  // report
  auto* report_cmd = app.add_subcommand("report", "Statistics over bench results");
  report_cmd->require_subcommand(1);
  std::string r_results, r_format = "csv", r_by = "group", r_a, r_b, r_domain, r_method = "auto", r_planner;
  double r_alpha = 0.05;
  std::size_t r_resamples = 100;
  std::uint64_t r_seed = 0;
  auto* r_sum = report_cmd->add_subcommand("summarize", "PAR10, IPC score and coverage tables");
  r_sum->add_option("results", r_results, "Results file")->required();
  r_sum->add_option("--by", r_by, "group|variant|cumulative")->check(CLI::IsMember({"group", "variant", "cumulative"}));
  r_sum->add_option("--format", r_format, "csv|tsv|json")->check(CLI::IsMember({"csv", "tsv", "json"}));
  r_sum->add_option("-o,--output", out, "Output file (default stdout)");
  auto* r_wil = report_cmd->add_subcommand("wilcoxon", "Paired Wilcoxon signed-rank test on per-problem PAR10");
  r_wil->add_option("results", r_results, "Results file")->required();
  r_wil->add_option("--a", r_a, "planner[@variant]")->required();
  r_wil->add_option("--b", r_b, "planner[@variant]")->required();
  r_wil->add_option("--domain", r_domain, "Restrict both sides to one domain");
  r_wil->add_option("--alpha", r_alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  r_wil->add_option("--method", r_method, "auto|exact|normal")->check(CLI::IsMember({"auto", "exact", "normal"}));
  r_wil->add_option("-o,--output", out, "Output file (default stdout)");
  auto* r_boot = report_cmd->add_subcommand("bootstrap", "Bootstrap PAR10 over per-problem configurations");
  r_boot->add_option("results", r_results, "Results file")->required();
  r_boot->add_option("--planner", r_planner, "Planner id")->required();
  r_boot->add_option("--domain", r_domain, "Domain label")->required();
  r_boot->add_option("--resamples", r_resamples, "Number of resamples")->check(CLI::PositiveNumber);
  auto* r_seed_opt = r_boot->add_option("--seed", r_seed, "Random seed");
  r_boot->add_option("-o,--output", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*validate) {
      nlohmann::json report;
      const auto d = load_domain(v_domain);
      pddl::validate_domain(d);
      report["domain"] = d.name;
      report["predicates"] = d.predicates.size();
      report["operators"] = d.operators.size();
      bool ok = true;
      if (!v_problem.empty()) {
        const auto p = load_problem(v_problem);
        pddl::validate_problem(d, p);
        report["problem"] = p.name;
        if (!v_plan.empty()) {
          const auto plan = pddl::parse_plan(pddl::read_text_file(v_plan));
          const auto r = pddl::validate_plan(d, p, plan);
          report["plan"] = pddl::to_json(r);
          ok = r.valid;
        }
      } else if (!v_plan.empty()) {
        throw InputError("--plan needs a problem file");
      }
      std::cout << report.dump(2) << "\n";
      return ok ? 0 : kExitInput;
    }

    if (*space) {
      const auto d = load_domain(s_domain);
      const auto size = config::space_size(d);
      if (s_json) {
        nlohmann::ordered_json j;
        j["size"] = size.str();
        j["scientific"] = scientific(size);
        j["dimension"] = config::vector_dimension(d);
        nlohmann::ordered_json ops = nlohmann::ordered_json::object();
        for (const auto& o : d.operators) ops[o.name] = config::operator_space_size(o).str();
        j["operators"] = ops;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << size.str() << "\n" << scientific(size) << "\n";
      }
      return 0;
    }

    if (*shuffle) {
      const auto d = load_domain(sh_domain);
      const auto seed = resolve_seed(sh_seed_opt, sh_seed);
      const auto c = config::random_configuration(d, seed);
      const auto configured = config::apply_configuration(d, c);
      if (!sh_config.empty()) pddl::write_text_file(sh_config, config::to_json(c).dump(2) + "\n");
      emit_text(out, pddl::print_domain(configured));
      return 0;
    }

    if (*order) {
      const auto d = load_domain(o_domain);
      emit_text(out, pddl::print_domain(heuristics::order_operators(d, heuristics::HeuristicId::parse(o_heuristic))));
      return 0;
    }

    if (*decode) {
      const auto d = load_domain(dec_domain);
      const auto v = read_vector(d, load_json(dec_vector));
      const auto c = config::decode_precedence(d, v);
      if (!dec_config.empty()) pddl::write_text_file(dec_config, config::to_json(c).dump(2) + "\n");
      emit_text(out, pddl::print_domain(config::apply_configuration(d, c)));
      return 0;
    }

    if (*extract) {
      const auto d = load_domain(ex_domain);
      emit_text(out, config::to_json(config::configuration_of(d)).dump(2) + "\n");
      return 0;
    }

    if (*macro) {
      const auto d = load_domain(m_domain);
      if (*m_build || *m_insert || *m_enum) {
        const auto recipe = macros::recipe_from_json(load_json(m_recipe));
        const auto op = macros::compose_chain(recipe, d);
        if (*m_build) {
          emit_text(out, pddl::print_operator(op));
        } else if (*m_insert) {
          emit_text(out, pddl::print_domain(macros::insert_at(d, op, std::stoul(m_position))));
        } else {
          fs::create_directories(out);
          const auto models = macros::enumerate_positions(d, op);
          for (std::size_t i = 0; i < models.size(); ++i) {
            const fs::path file = fs::path(out) / (d.name + "-" + op.name + "-pos" + std::to_string(i + 1) + ".pddl");
            pddl::write_text_file(file.string(), pddl::print_domain(models[i]));
            std::cout << file.string() << "\n";
          }
        }
        return 0;
      }
      if (!m_positions.empty() && m_positions.size() != m_recipes.size())
        throw InputError("give one --position per --recipe, or none for end");
      std::vector<std::pair<macros::MacroRecipe, macros::Placement>> items;
      for (std::size_t i = 0; i < m_recipes.size(); ++i)
        items.emplace_back(macros::recipe_from_json(load_json(m_recipes[i])),
                           macros::Placement::parse(m_positions.empty() ? "end" : m_positions[i]));
      emit_text(out, pddl::print_domain(macros::place_all(d, items)));
      return 0;
    }

    if (*bench_cmd) {
      auto plan = bench::load_bench_plan(b_plan);
      b_flags.apply(plan.limits);
      bench::SuiteOptions options;
      options.results = out;
      options.scratch = b_scratch.empty() ? fs::path(out + ".runs") : fs::path(b_scratch);
      options.jobs = b_jobs;
      bench::ProcessExecutor executor;
      const auto result = bench::run_suite(plan, options, executor);
      std::cerr << "executed " << result.executed << ", skipped " << result.skipped << ", crashed " << result.crashed
                << "\n";
      if (!result.records.empty())
        std::cout << report::emit(report::summary_table(report::summarize(result.records)), report::TableFormat::Csv);
      return result.crashed > 0 ? kExitPartial : 0;
    }

    if (*tune_cmd) {
      const auto spec = load_json(t_spec);
      const fs::path base = fs::path(t_spec).parent_path();
      auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
      tune::TuneOptions options;
      bench::RunLimits limits;
      tune::BenchObjective::Spec obj;
      pddl::DomainModel d;
      try {
        obj.planner = planner_from_tune_json(spec.at("planner"), base);
        const fs::path domain_file = resolve(spec.at("domain").get<std::string>());
        d = load_domain(domain_file.string());
        obj.domain_label = spec.value("label", domain_file.stem().string());
        for (const auto& q : spec.at("problems")) {
          bench::ProblemInput in;
          in.file = resolve(q.get<std::string>());
          in.id = in.file.stem().string();
          in.model = load_problem(in.file.string());
          pddl::validate_problem(d, in.model);
          obj.problems.push_back(std::move(in));
        }
        if (spec.contains("limits")) {
          const auto& l = spec.at("limits");
          limits.cutoff_seconds = l.value("cutoff", limits.cutoff_seconds);
          limits.memory_mb = l.value("memory", limits.memory_mb);
          limits.repetitions = l.value("repetitions", limits.repetitions);
        }
        options.strategy = tune::strategy_from_string(spec.value("strategy", std::string("ils")));
        options.budget.max_evaluations = spec.value("budget", std::size_t{100});
        if (spec.contains("seed")) options.budget.seed = spec.at("seed").get<std::uint64_t>();
        if (spec.contains("wallClockSeconds")) options.budget.wall_seconds = spec.at("wallClockSeconds").get<double>();
        options.step_sigma = spec.value("stepSigma", options.step_sigma);
      } catch (const nlohmann::json::exception& e) {
        throw InputError(t_spec + ": " + e.what());
      }
      t_flags.apply(limits);
      if (*t_strategy_opt) options.strategy = tune::strategy_from_string(t_strategy);
      if (*t_budget_opt) options.budget.max_evaluations = t_budget;
      if (*t_sigma_opt) options.step_sigma = t_sigma;
      if (*t_seed_opt || !spec.contains("seed")) options.budget.seed = resolve_seed(t_seed_opt, t_seed);
      obj.limits = limits;
      obj.scratch = t_scratch.empty() ? fs::path(out + ".runs") : fs::path(t_scratch);
      obj.jobs = t_jobs;
      options.validate();

      bench::ProcessExecutor executor;
      tune::BenchObjective objective(obj, executor);
      const auto result = tune::tune(d, objective, options);
      pddl::write_text_file(out, tune::to_json(result).dump(2) + "\n");
      const std::string domain_out =
          t_domain_out.empty() ? fs::path(out).replace_extension(".pddl").string() : t_domain_out;
      pddl::write_text_file(domain_out, pddl::print_domain(config::apply_configuration(d, result.best_config)));
      std::cout << "best objective " << report::format_number(result.best_objective) << " after "
                << result.history.size() << " evaluations\n";
      return 0;
    }

    if (*report_cmd) {
      if (!fs::exists(r_results)) throw InputError("cannot open " + r_results);
      const auto records = bench::read_results(r_results);
      if (*r_sum) {
        const auto summaries = report::summarize(records);
        report::Table table;
        if (r_by == "group") {
          table = report::summary_table(summaries);
        } else if (r_by == "variant") {
          table = report::spread_table(report::spread_by_variant(summaries));
        } else {
          table = report::cumulative_table(report::cumulative_median(report::spread_by_variant(summaries)));
        }
        emit_text(out, report::emit(table, report::format_from_string(r_format)));
        return 0;
      }
      if (*r_wil) {
        auto a = report::Selector::parse(r_a);
        auto b = report::Selector::parse(r_b);
        if (!r_domain.empty()) a.domain = b.domain = r_domain;
        const auto sample = report::paired_par10(records, a, b);
        const auto method = r_method == "exact"    ? report::WilcoxonMethod::Exact
                            : r_method == "normal" ? report::WilcoxonMethod::Normal
                                                   : report::WilcoxonMethod::Auto;
        auto j = report::to_json(report::wilcoxon_signed_rank(sample, r_alpha, method));
        j["a"] = sample.label_a;
        j["b"] = sample.label_b;
        j["pairs"] = sample.pairs.size();
        emit_text(out, j.dump(2) + "\n");
        return 0;
      }
      if (*r_boot) {
        const auto seed = resolve_seed(r_seed_opt, r_seed);
        const auto box =
            report::bootstrap_par10(report::per_problem_par10(records, r_planner, r_domain), r_resamples, seed);
        auto j = report::to_json(box);
        j["planner"] = r_planner;
        j["domain"] = r_domain;
        emit_text(out, j.dump(2) + "\n");
        return 0;
      }
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
