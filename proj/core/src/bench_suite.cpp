#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "domconf/bench.hpp"
#include "domconf/rng.hpp"

namespace domconf::bench {

namespace fs = std::filesystem;

void BenchPlan::validate() const {
  if (planners.empty()) throw InputError("bench plan lists no planners");
  if (domains.empty()) throw InputError("bench plan lists no domains");
  if (problems.empty()) throw InputError("bench plan lists no problems");
  limits.validate();
  std::set<std::string> ids;
  for (const auto& p : planners) {
    p.validate();
    if (!ids.insert(p.id).second) throw InputError("duplicate planner id '" + p.id + "'");
  }
  std::set<std::string> labels;
  for (const auto& d : domains)
    if (!labels.insert(d.variant).second) throw InputError("duplicate domain label '" + d.variant + "'");
  std::set<std::string> problem_ids;
  for (const auto& q : problems) {
    if (!problem_ids.insert(q.id).second) throw InputError("duplicate problem id '" + q.id + "'");
    for (const auto& d : domains) pddl::validate_problem(d.model, q.model);
  }
}

BenchPlan load_bench_plan(const fs::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(pddl::read_text_file(path.string()));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  try {
    BenchPlan plan;
    nlohmann::json planners = j.at("planners");
    if (planners.is_string()) {
      const fs::path catalog = resolve(planners.get<std::string>());
      try {
        planners = nlohmann::json::parse(pddl::read_text_file(catalog.string()));
      } catch (const nlohmann::json::exception& e) {
        throw InputError(catalog.string() + ": " + e.what());
      }
    }
    for (const auto& p : planners) plan.planners.push_back(planner_from_json(p));

    for (const auto& d : j.at("domains")) {
      DomainInput in;
      in.variant = d.at("label").get<std::string>();
      in.label = d.value("domain", in.variant);
      in.file = resolve(d.at("file").get<std::string>());
      in.model = pddl::load_domain_file(in.file.string());
      in.config_digest = config::config_digest(config::configuration_of(in.model));
      plan.domains.push_back(std::move(in));
    }
    for (const auto& q : j.at("problems")) {
      ProblemInput in;
      if (q.is_string()) {
        in.file = resolve(q.get<std::string>());
        in.id = in.file.stem().string();
      } else {
        in.file = resolve(q.at("file").get<std::string>());
        in.id = q.value("id", in.file.stem().string());
      }
      in.model = pddl::load_problem_file(in.file.string());
      plan.problems.push_back(std::move(in));
    }
    if (j.contains("limits")) {
      const auto& l = j.at("limits");
      plan.limits.cutoff_seconds = l.value("cutoff", plan.limits.cutoff_seconds);
      plan.limits.memory_mb = l.value("memory", plan.limits.memory_mb);
      plan.limits.repetitions = l.value("repetitions", plan.limits.repetitions);
    }
    if (j.contains("randomization")) {
      const auto& r = j.at("randomization");
      const std::string mode = r.value("mode", std::string("off"));
      if (mode == "per_instance") {
        plan.randomization.per_instance = true;
        plan.randomization.seed = r.at("seed").get<std::uint64_t>();
      } else if (mode != "off") {
        throw InputError("unknown randomization mode '" + mode + "'");
      }
    }
    plan.validate();
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::vector<std::pair<std::string, config::ConfigurationSpec>> randomized_protocol(
    const pddl::DomainModel& d, const std::vector<std::string>& problem_ids, std::uint64_t seed) {
  if (problem_ids.empty()) throw InputError("randomized protocol needs at least one problem");
  std::vector<std::pair<std::string, config::ConfigurationSpec>> out;
  for (const auto& id : problem_ids) out.emplace_back(id, config::random_configuration(d, derive_seed(seed, id)));
  return out;
}

std::vector<RunRecord> read_results(const fs::path& path) {
  std::vector<RunRecord> out;
  std::ifstream in(path);
  if (!in) return out;
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(line);
  if (lines.empty()) return out;
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(lines.front());
  } catch (const nlohmann::json::exception&) {
    throw InputError(path.string() + ": missing results header");
  }
  if (header.value("schema", std::string{}) != kResultsSchema || header.value("version", 0) != kResultsVersion)
    throw InputError(path.string() + ": not a " + std::string(kResultsSchema) + " v" + std::to_string(kResultsVersion) +
                     " results file");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    try {
      out.push_back(record_from_json(nlohmann::json::parse(lines[i])));
    } catch (const nlohmann::json::parse_error&) {
      if (i + 1 == lines.size()) break;
      throw InputError(path.string() + ": line " + std::to_string(i + 1) + " is not valid JSON");
    }
  }
  return out;
}

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

namespace {

std::string safe_component(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
  return out.empty() ? "_" : out;
}

struct Cell {
  const PlannerSpec* planner;
  std::size_t domain;  // index into the per-problem domain table
  const ProblemInput* problem;
  std::size_t run;
};

std::string header_line() {
  return nlohmann::json{{"schema", kResultsSchema}, {"version", kResultsVersion}}.dump();
}

}  // namespace

SuiteResult run_suite(const BenchPlan& plan, const SuiteOptions& options, Executor& executor) {
  plan.validate();
  if (options.results.empty()) throw InputError("a results file is required");

  // Domain inputs per (domain, problem): the plan's own files, or one fresh
  // configuration per problem under per-instance randomization.
  std::vector<DomainInput> inputs;
  std::vector<std::vector<std::size_t>> input_of(plan.domains.size(), std::vector<std::size_t>(plan.problems.size()));
  for (std::size_t d = 0; d < plan.domains.size(); ++d) {
    const auto& dom = plan.domains[d];
    if (!plan.randomization.per_instance) {
      inputs.push_back(dom);
      for (auto& slot : input_of[d]) slot = inputs.size() - 1;
      continue;
    }
    std::vector<std::string> ids;
    for (const auto& q : plan.problems) ids.push_back(q.id);
    const auto assignment = randomized_protocol(dom.model, ids, plan.randomization.seed);
    for (std::size_t q = 0; q < plan.problems.size(); ++q) {
      DomainInput in;
      in.label = dom.label;
      in.model = config::apply_configuration(dom.model, assignment[q].second);
      in.config_digest = config::config_digest(assignment[q].second);
      in.variant = in.config_digest;
      in.file = options.scratch / "domains" / (safe_component(dom.variant) + "-" + in.config_digest + ".pddl");
      fs::create_directories(in.file.parent_path());
      pddl::write_text_file(in.file.string(), pddl::print_domain(in.model));
      inputs.push_back(std::move(in));
      input_of[d][q] = inputs.size() - 1;
    }
  }

  SuiteResult result;
  result.records = read_results(options.results);
  std::set<std::tuple<std::string, std::string, std::string, std::string, std::size_t>> done;
  for (const auto& r : result.records) done.emplace(r.planner, r.domain, r.variant, r.problem, r.run);

  if (!options.results.parent_path().empty()) fs::create_directories(options.results.parent_path());
  {
    // Rewrite so that a line cut off by an interruption disappears.
    std::ofstream out(options.results, std::ios::trunc);
    if (!out) throw InputError("cannot write " + options.results.string());
    out << header_line() << '\n';
    for (const auto& r : result.records) out << to_json(r).dump() << '\n';
  }

  std::vector<Cell> cells;
  for (const auto& p : plan.planners)
    for (std::size_t d = 0; d < plan.domains.size(); ++d)
      for (std::size_t q = 0; q < plan.problems.size(); ++q)
        for (std::size_t k = 0; k < plan.limits.repetitions; ++k) {
          const auto& in = inputs[input_of[d][q]];
          if (done.count({p.id, in.label, in.variant, plan.problems[q].id, k})) {
            ++result.skipped;
            continue;
          }
          cells.push_back({&p, input_of[d][q], &plan.problems[q], k});
        }

  std::ofstream sink(options.results, std::ios::app);
  std::mutex sink_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      const auto& in = inputs[c.domain];
      const fs::path scratch = options.scratch / safe_component(c.planner->id) / safe_component(in.label) /
                               safe_component(in.variant) / safe_component(c.problem->id) /
                               ("run-" + std::to_string(c.run));
      RunRecord rec = run_once(*c.planner, in, *c.problem, plan.limits, c.run, scratch, executor);
      std::lock_guard lock(sink_mutex);
      sink << to_json(rec).dump() << '\n';
      sink.flush();
      ++result.executed;
      if (rec.failure == FailureKind::Crash) ++result.crashed;
      if (options.on_record) options.on_record(rec);
      result.records.push_back(std::move(rec));
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::sort(result.records.begin(), result.records.end(), record_less);
  return result;
}

}  // namespace domconf::bench
