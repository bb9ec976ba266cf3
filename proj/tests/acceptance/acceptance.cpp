// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "domconf/bench.hpp"
#include "domconf/config_space.hpp"
#include "domconf/heuristics.hpp"
#include "domconf/macros.hpp"
#include "domconf/report.hpp"
#include "domconf/rng.hpp"
#include "domconf/tune.hpp"
#include "macro_oracle.hpp"
#include "scripted_executor.hpp"
#include "test_support.hpp"

using namespace domconf;
namespace ts = testsupport;
namespace fs = std::filesystem;

namespace {

// Collects the first failed expectation of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && !failure_) failure_ = what;
  }
  const std::optional<std::string>& failure() const { return failure_; }
  void note(std::string text) { note_ = std::move(text); }
  const std::string& note() const { return note_; }

 private:
  std::optional<std::string> failure_;
  std::string note_;
};

std::string str(double x) {
  std::ostringstream ss;
  ss << x;
  return ss.str();
}

std::vector<std::string> op_names(const pddl::DomainModel& d) {
  std::vector<std::string> out;
  for (const auto& o : d.operators) out.push_back(o.name);
  return out;
}

void space_size(Check& c) {
  auto d = ts::domain("blocksworld");
  const auto size = config::space_size(d);
  c.expect(size.str() == "1719926784000", "space size is " + size.str());
  c.expect(size.str() == ts::factorial_product(ts::group_sizes(d)), "space size disagrees with the decimal oracle");
  const auto* pick = d.find_operator("pick-up");
  c.expect(pick && config::operator_space_size(*pick) == 144, "pick-up factor is not 144");
}

void decode_example(Check& c) {
  auto d = ts::domain("blocksworld");
  auto v = config::uniform_vector(d);
  const std::vector<double> pre{0.32, 0.001, 0.7};
  const std::vector<double> eff{0.98, 0.11, 0.34, 0.35};
  std::size_t offset = 0;
  for (const auto& g : v.layout) {
    if (g.owner == "pick-up" && g.kind == config::GroupKind::Preconditions)
      for (std::size_t i = 0; i < pre.size(); ++i) v.values[offset + i] = pre[i];
    if (g.owner == "pick-up" && g.kind == config::GroupKind::Effects)
      for (std::size_t i = 0; i < eff.size(); ++i) v.values[offset + i] = eff[i];
    offset += g.elements.size();
  }
  const auto spec = config::decode_precedence(d, v);
  const auto m = config::apply_configuration(d, spec);
  const auto& orig = *d.find_operator("pick-up");
  const auto& got = *m.find_operator("pick-up");
  c.expect(got.pre == std::vector<pddl::Literal>{orig.pre[1], orig.pre[0], orig.pre[2]}, "precondition order");
  c.expect(got.eff == std::vector<pddl::Literal>{orig.eff[1], orig.eff[2], orig.eff[3], orig.eff[0]}, "effect order");
  c.expect(config::vector_dimension(ts::domain("parking")) == 41, "parking dimension");
  c.expect(config::vector_dimension(ts::domain("rovers")) == 109, "rovers dimension");
}

void semantic_preservation(Check& c) {
  const std::vector<std::pair<std::string, std::string>> tasks{
      {"blocksworld", "blocksworld-3"}, {"parking", "parking-3"}, {"toy-logistics", "toy-logistics-3"}};
  for (const auto& [dn, pn] : tasks) {
    auto d = ts::domain(dn);
    auto p = ts::problem(pn);
    const auto reference = ts::naive_reachable(d, p);
    c.expect(ts::library_reachable(d, p) == reference, pn + ": grounding disagrees with the naive search");
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      auto m = config::apply_configuration(d, config::random_configuration(d, seed));
      if (ts::library_reachable(m, p) != reference) {
        c.expect(false, pn + ": reachable states differ for seed " + std::to_string(seed));
        break;
      }
    }
  }
}

void macro_equivalence(Check& c) {
  const std::vector<std::tuple<std::string, std::string, std::string>> cases{
      {"blocksworld", "blocksworld-3", "blocksworld-unstack-putdown"}, {"depots", "depots-6", "depots-unload-drop"}};
  for (const auto& [dn, pn, rn] : cases) {
    auto r = ts::check_macro_equivalence(ts::domain(dn), ts::problem(pn), ts::recipe(rn));
    c.expect(r.applicable > 0, rn + ": macro never applicable");
    c.expect(r.mismatches == 0 && r.missed == 0, rn + ": " + r.first_problem);
  }
}

void macro_positions(Check& c) {
  auto d = ts::domain("blocksworld");
  const auto original = pddl::print_domain(d);
  auto macro = macros::compose_chain(ts::recipe("blocksworld-unstack-putdown"), d);
  auto models = macros::enumerate_positions(d, macro);
  c.expect(models.size() == 5, "expected 5 models, got " + std::to_string(models.size()));
  std::set<std::string> texts;
  for (std::size_t i = 0; i < models.size(); ++i) {
    texts.insert(pddl::print_domain(models[i]));
    c.expect(models[i].operator_index(macro.name) == i, "macro not at position " + std::to_string(i + 1));
    c.expect(pddl::print_domain(macros::remove_operator(models[i], macro.name)) == original,
             "removal does not restore the original at position " + std::to_string(i + 1));
  }
  c.expect(texts.size() == models.size(), "extended models are not distinct");
}

void scoring(Check& c) {
  using bench::Outcome;
  // T* = 4 on p1; p2 floors both times to 1; p3 unsolved by all.
  auto s = bench::ipc_scores({{"A", "p1", true, 4}, {"B", "p1", true, 40}, {"A", "p2", true, 0.3},
                              {"B", "p2", true, 0.9}, {"A", "p3", false, 300}, {"B", "p3", false, 300}});
  c.expect(std::abs(s.at("A") - 2.0) < 1e-12, "IPC of A is " + str(s.at("A")));
  c.expect(std::abs(s.at("B") - 1.5) < 1e-12, "IPC of B is " + str(s.at("B")));
  bench::RunRecord solved;
  solved.solved = true;
  solved.failure = bench::FailureKind::None;
  solved.time = 12.0;
  bench::RunRecord unsolved;
  unsolved.failure = bench::FailureKind::Memout;
  unsolved.time = 3.0;
  c.expect(bench::par10_value(solved, 300) == 12.0, "PAR10 of a solved run");
  c.expect(bench::par10_value(unsolved, 300) == 3000.0, "PAR10 of an unsolved run");
  c.expect(bench::par10({solved, unsolved}, 300) == 1506.0, "mean PAR10");
  c.expect(bench::coverage({solved, unsolved}).fraction() == 0.5, "coverage");

  c.expect(std::abs(bench::ipc_problem_score(50, 50) - 1.0) < 1e-9, "IPC with T = T*");
  c.expect(std::abs(bench::ipc_problem_score(500, 50) - 0.5) < 1e-9, "IPC with T = 10 T*");
  auto u = bench::ipc_scores({{"A", "p", true, 20}, {"B", "p", false, 300}});
  c.expect(u.at("B") == 0.0, "IPC of an unsolved problem");
  std::vector<bench::RunRecord> none(4, unsolved);
  c.expect(std::abs(bench::par10(none, 300) - 3000.0) < 1e-9, "PAR10 with nothing solved");
}

void heuristic_orders(Check& c) {
  auto d = ts::domain("blocksworld");
  using heuristics::HeuristicId;
  c.expect(op_names(heuristics::order_operators(d, HeuristicId::parse("eff1"))) ==
               std::vector<std::string>{"stack", "unstack", "pick-up", "put-down"},
           "eff1 order");
  c.expect(op_names(heuristics::order_operators(d, HeuristicId::parse("pre2"))) ==
               std::vector<std::string>{"put-down", "stack", "pick-up", "unstack"},
           "pre2 order");
  for (const auto& name : ts::domain_fixtures()) {
    auto dom = ts::domain(name);
    auto sorted = op_names(dom);
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [h, m] : heuristics::all_heuristic_models(dom)) {
      auto got = op_names(m);
      std::sort(got.begin(), got.end());
      c.expect(got == sorted, name + "/" + h.to_string() + " is not a permutation");
      auto rest = m;
      rest.operators = dom.operators;
      c.expect(rest == dom, name + "/" + h.to_string() + " changed more than the operator order");
    }
  }
  auto single = ts::domain("single-op");
  for (const auto& [h, m] : heuristics::all_heuristic_models(single))
    c.expect(m == single, "single operator moved under " + h.to_string());
}

void tuning(Check& c) {
  auto d = ts::domain("toy-logistics");
  const std::string plan = ts::slurp(ts::fixtures() / "plans" / "toy-logistics-3.plan");
  // The planner's time is the position of `load` in the file it is given.
  ts::ScriptedExecutor ex([&](const bench::ExecRequest& r) {
    ts::spit(r.plan_file, plan);
    return ts::reported_exit(static_cast<double>(ts::action_position_in_text(ts::slurp(r.domain_file), "load")));
  });
  auto root = ts::temp_dir("acceptance-tune");
  std::size_t load_first = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    tune::BenchObjective::Spec spec;
    spec.planner.id = "position";
    spec.planner.command = "position {domain} {problem} {planfile}";
    spec.planner.clock = bench::ClockKind::Reported;
    spec.domain_label = "toy";
    spec.problems = {{"toy-3", ts::problem_path("toy-logistics-3"), ts::problem("toy-logistics-3")}};
    spec.limits.cutoff_seconds = 10;
    spec.limits.repetitions = 1;
    spec.scratch = root / std::to_string(seed);
    tune::BenchObjective obj(spec, ex);
    tune::TuneOptions o;
    o.strategy = tune::Strategy::Ils;
    o.budget.max_evaluations = 500;
    o.budget.seed = seed;
    auto r = tune::tune(d, obj, o);
    if (!r.best_config.op_order.empty() && r.best_config.op_order.front() == "load") ++load_first;
    for (std::size_t i = 1; i < r.history.size(); ++i)
      if (r.history[i].incumbent > r.history[i - 1].incumbent) {
        c.expect(false, "incumbent increased in seed " + std::to_string(seed));
        break;
      }
    fs::remove_all(spec.scratch);
  }
  c.expect(load_first >= 95, "load first in only " + std::to_string(load_first) + "/100 seeds");
  c.note(std::to_string(load_first) + "/100 seeds");

  // A few seeds through the command line with a real mock planner process.
  nlohmann::json spec{
      {"planner",
       {{"id", "position"},
        {"command", ts::mock_planner() + " position {domain} {problem} {planfile} '" +
                        (ts::fixtures() / "plans" / "toy-logistics-3.plan").string() + "' load"},
        {"clock", "reported"}}},
      {"domain", ts::domain_path("toy-logistics").string()},
      {"problems", {ts::problem_path("toy-logistics-3").string()}},
      {"limits", {{"cutoff", 10}, {"memory", 1024}, {"repetitions", 1}}}};
  ts::spit(root / "tune.json", spec.dump());
  for (int seed = 1; seed <= 3; ++seed) {
    const auto out = root / ("cli-" + std::to_string(seed) + ".json");
    auto r = ts::run_command(ts::cli() + " tune '" + (root / "tune.json").string() + "' --strategy ils --budget 500 --seed " +
                                 std::to_string(seed) + " -o '" + out.string() + "'",
                             "acceptance-tune");
    c.expect(r.code == 0, "tune exited with " + std::to_string(r.code) + ": " + r.err);
    if (r.code != 0) break;
    auto j = nlohmann::json::parse(ts::slurp(out));
    c.expect(j.at("bestConfig").at("opOrder").at(0) == "load", "CLI tune did not put load first");
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& e : j.at("history")) {
      c.expect(e.at("incumbent").get<double>() <= prev, "CLI incumbent increased");
      prev = e.at("incumbent").get<double>();
    }
  }
}

void wilcoxon(Check& c) {
  auto r = report::wilcoxon_signed_rank(std::vector<double>{1, 2, 3});
  c.expect(std::abs(r.p_value - 0.25) < 1e-12, "p for [1,2,3] is " + str(r.p_value));
  Rng rng(2024);
  double worst = 0.0;
  for (int sample = 0; sample < 100; ++sample) {
    const std::size_t n = 15 + static_cast<std::size_t>(rng.below(11));
    const double shift = 0.6 * rng.uniform01();
    std::vector<double> d;
    for (std::size_t i = 0; i < n; ++i) d.push_back(rng.normal() + shift);
    auto ex = report::wilcoxon_signed_rank(d, 0.05, report::WilcoxonMethod::Exact);
    auto nm = report::wilcoxon_signed_rank(d, 0.05, report::WilcoxonMethod::Normal);
    worst = std::max(worst, std::abs(ex.p_value - nm.p_value));
  }
  c.expect(worst <= 0.02, "exact and normal p differ by " + str(worst));
  c.note("max |exact - normal| = " + str(worst));
}

void protocol(Check& c) {
  auto d = ts::domain("blocksworld");
  const std::vector<std::string> ids{"p1", "p2", "p3", "p4"};
  auto a = bench::randomized_protocol(d, ids, 77);
  auto b = bench::randomized_protocol(d, ids, 77);
  c.expect(a == b, "same seed gives different configurations");
  auto rev = bench::randomized_protocol(d, {"p4", "p3", "p2", "p1"}, 77);
  std::map<std::string, config::ConfigurationSpec> ma(a.begin(), a.end());
  std::map<std::string, config::ConfigurationSpec> mr(rev.begin(), rev.end());
  c.expect(ma == mr, "assignment depends on problem order");
  std::set<std::string> digests;
  for (const auto& [id, spec] : a) digests.insert(config::config_digest(spec));
  c.expect(digests.size() == ids.size(), "problems share a configuration");

  // The same through a whole suite run: variants are configuration digests.
  auto suite_digests = [&](const fs::path& dir) {
    bench::BenchPlan plan;
    bench::PlannerSpec p;
    p.id = "scripted";
    p.command = "x {domain} {problem} {planfile}";
    plan.planners = {p};
    bench::DomainInput in;
    in.label = in.variant = "bw";
    in.file = ts::domain_path("blocksworld");
    in.model = d;
    plan.domains = {in};
    for (const char* id : {"blocksworld-2", "blocksworld-3"})
      plan.problems.push_back({id, ts::problem_path(id), ts::problem(id)});
    plan.limits.repetitions = 1;
    plan.randomization = {true, 77};
    ts::ScriptedExecutor ex([](const bench::ExecRequest&) { return ts::reported_exit(1); });
    bench::SuiteOptions o;
    o.results = dir / "runs.jsonl";
    o.scratch = dir / "scratch";
    std::map<std::string, std::string> out;
    for (const auto& r : bench::run_suite(plan, o, ex).records) out[r.problem] = r.config_digest;
    return out;
  };
  auto first = suite_digests(ts::temp_dir("acceptance-protocol-a"));
  auto second = suite_digests(ts::temp_dir("acceptance-protocol-b"));
  c.expect(first == second, "suite runs assign different configurations");
  c.expect(first.at("blocksworld-2") == config::config_digest(bench::randomized_protocol(d, {"blocksworld-2"}, 77)[0].second),
           "suite assignment differs from the protocol");

  auto box = report::bootstrap_par10({{4.0}, {10.0}, {1.0}}, 100, 5);
  c.expect(box.min == 5.0 && box.max == 5.0 && box.median == 5.0 && box.q1 == 5.0 && box.q3 == 5.0,
           "degenerate bootstrap is not a point");
  auto x = report::bootstrap_par10({{1, 2, 30}, {4, 50}}, 100, 9);
  auto y = report::bootstrap_par10({{1, 2, 30}, {4, 50}}, 100, 9);
  c.expect(report::to_json(x) == report::to_json(y), "bootstrap not reproducible");
}

std::string cli(const std::string& args, int* code = nullptr) {
  auto r = ts::run_command(ts::cli() + " " + args, "acceptance");
  if (code) *code = r.code;
  return r.out;
}

void reproducibility(Check& c) {
  for (const auto& name : ts::domain_fixtures()) {
    auto once = pddl::print_domain(ts::domain(name));
    auto twice = pddl::print_domain(pddl::parse_domain(once));
    c.expect(once == twice, name + ": print/parse is not a fixpoint");
  }
  for (const auto& e : fs::directory_iterator(ts::fixtures() / "problems")) {
    auto once = pddl::print_problem(pddl::load_problem_file(e.path().string()));
    c.expect(pddl::print_problem(pddl::parse_problem(once)) == once, e.path().filename().string() + ": not a fixpoint");
  }

  auto dir = ts::temp_dir("acceptance-cli");
  const std::string q = "'";
  const std::string bw = q + ts::domain_path("blocksworld").string() + q;
  const std::string depots = q + ts::domain_path("depots").string() + q;
  const std::string recipe = q + (ts::fixtures() / "recipes" / "depots-unload-drop.json").string() + q;
  nlohmann::json zeros = nlohmann::json::array();
  for (int i = 0; i < 36; ++i) zeros.push_back(i % 3 == 0 ? 0.25 : 0.75);
  ts::spit(dir / "vec.json", zeros.dump());
  const std::string plan_file = (ts::fixtures() / "plans" / "toy-logistics-3.plan").string();
  nlohmann::json planner{{"id", "position"},
                         {"command", ts::mock_planner() + " position {domain} {problem} {planfile} " + plan_file + " load"},
                         {"clock", "reported"}};
  nlohmann::json bench{{"planners", {planner}},
                       {"domains", {{{"label", "toy"}, {"file", ts::domain_path("toy-logistics").string()}}}},
                       {"problems", {ts::problem_path("toy-logistics-3").string()}},
                       {"limits", {{"cutoff", 10}, {"memory", 1024}, {"repetitions", 3}}},
                       {"randomization", {{"mode", "per_instance"}, {"seed", 3}}}};
  ts::spit(dir / "bench.json", bench.dump());
  nlohmann::json tune_spec{{"planner", planner},
                           {"domain", ts::domain_path("toy-logistics").string()},
                           {"problems", {ts::problem_path("toy-logistics-3").string()}},
                           {"limits", {{"cutoff", 10}, {"memory", 1024}, {"repetitions", 1}}},
                           {"strategy", "ils"},
                           {"budget", 25},
                           {"seed", 6}};
  ts::spit(dir / "tune.json", tune_spec.dump());

  const std::vector<std::string> commands{
      "space-size " + bw,
      "shuffle " + bw + " --seed 31",
      "order " + depots + " --heuristic rat1",
      "decode " + bw + " '" + (dir / "vec.json").string() + "'",
      "extract-config " + bw,
      "macro place " + depots + " --recipe " + recipe + " --position between:1",
      "macro build " + depots + " " + recipe,
      "macro insert " + depots + " " + recipe + " --position 2",
      "validate " + bw + " '" + ts::problem_path("blocksworld-2").string() + "' --plan '" +
          (ts::fixtures() / "plans" / "blocksworld-2.plan").string() + "'",
  };
  for (const auto& cmd : commands) {
    int c1 = -1;
    int c2 = -1;
    auto first = cli(cmd, &c1);
    auto second = cli(cmd, &c2);
    c.expect(c1 == 0 && c2 == 0, "'" + cmd + "' failed");
    c.expect(!first.empty() && first == second, "'" + cmd + "' output differs between runs");
  }

  std::vector<std::string> results;
  std::vector<std::string> tuned;
  for (int round = 0; round < 2; ++round) {
    fs::remove_all(dir / "out");
    fs::create_directories(dir / "out");
    int code = -1;
    cli("bench run '" + (dir / "bench.json").string() + "' -o '" + (dir / "out" / "runs.jsonl").string() + "'", &code);
    c.expect(code == 0, "bench run failed");
    const std::string runs = "'" + (dir / "out" / "runs.jsonl").string() + "'";
    std::string text = ts::slurp(dir / "out" / "runs.jsonl");
    for (const char* by : {"group", "variant", "cumulative"})
      for (const char* format : {"csv", "tsv", "json"})
        text += cli("report summarize " + runs + " --by " + by + " --format " + format);
    text += cli("report bootstrap " + runs + " --planner position --domain toy --resamples 100 --seed 4");
    text += cli("report wilcoxon " + runs + " --a position --b position");
    cli("macro enumerate " + depots + " " + recipe + " -o '" + (dir / "out" / "enum").string() + "'", &code);
    c.expect(code == 0, "macro enumerate failed");
    std::set<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir / "out" / "enum")) files.insert(e.path());
    c.expect(files.size() == 6, "macro enumerate wrote " + std::to_string(files.size()) + " files");
    for (const auto& f : files) text += f.filename().string() + ts::slurp(f);
    results.push_back(text);
    cli("tune '" + (dir / "tune.json").string() + "' -o '" + (dir / "out" / "best.json").string() + "'", &code);
    c.expect(code == 0, "tune failed");
    tuned.push_back(ts::slurp(dir / "out" / "best.json") + ts::slurp(dir / "out" / "best.pddl"));
  }
  c.expect(results[0] == results[1], "bench results differ between identical runs");
  c.expect(tuned[0] == tuned[1], "tune output differs between identical runs");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"configuration space size of BlocksWorld and the pick-up factor", space_size},
      {"precedence vector decoding and vector dimensions", decode_example},
      {"reachable states are invariant under 200 random configurations", semantic_preservation},
      {"macros match their primitive sequences on every reachable state", macro_equivalence},
      {"every macro position yields a distinct model and removal restores the original", macro_positions},
      {"IPC score and PAR10 formulas", scoring},
      {"operator-ordering heuristics", heuristic_orders},
      {"ILS puts load first within 500 evaluations", tuning},
      {"Wilcoxon exact p-values and normal approximation", wilcoxon},
      {"randomized protocol reproducibility and degenerate bootstrap", protocol},
      {"print/parse fixpoint and byte-reproducible CLI output", reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = !c.failure();
    failed += ok ? 0 : 1;
    std::printf("%s %2zu %s%s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                ok ? (c.note().empty() ? "" : " (" + c.note() + ")").c_str() : (": " + *c.failure()).c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
