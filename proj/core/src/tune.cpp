#include "domconf/tune.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "domconf/digest.hpp"
#include "domconf/rng.hpp"

namespace domconf::tune {

namespace fs = std::filesystem;

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Random:
      return "random";
    case Strategy::Ils:
      return "ils";
    case Strategy::Adversarial:
      return "adversarial";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "random") return Strategy::Random;
  if (s == "ils") return Strategy::Ils;
  if (s == "adversarial") return Strategy::Adversarial;
  throw InputError("unknown strategy '" + s + "' (expected random, ils or adversarial)");
}

BenchObjective::BenchObjective(Spec spec, bench::Executor& executor) : spec_(std::move(spec)), executor_(executor) {
  if (spec_.problems.empty()) throw InputError("tuning needs at least one training problem");
  spec_.planner.validate();
  spec_.limits.validate();
}

double BenchObjective::evaluate(const pddl::DomainModel& configured, const config::ConfigurationSpec& c) {
  bench::DomainInput in;
  in.label = spec_.domain_label;
  in.config_digest = config::config_digest(c);
  in.variant = in.config_digest;
  in.model = configured;
  in.file = spec_.scratch / "domains" / (in.config_digest + ".pddl");
  fs::create_directories(in.file.parent_path());
  pddl::write_text_file(in.file.string(), pddl::print_domain(configured));

  const std::size_t n = spec_.problems.size();
  std::vector<std::vector<bench::RunRecord>> runs(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const auto& q = spec_.problems[i];
      runs[i] = bench::run_planner(spec_.planner, in, q, spec_.limits, spec_.scratch / "runs" / q.id, executor_);
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(spec_.jobs, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<bench::RunRecord> medians;
  for (auto& r : runs) {
    records_.insert(records_.end(), r.begin(), r.end());
    medians.push_back(bench::median_record(r));
  }
  return bench::par10(medians, spec_.limits.cutoff_seconds);
}

void TuneOptions::validate() const {
  if (budget.max_evaluations == 0) throw InputError("budget must allow at least one evaluation");
  if (strategy != Strategy::Random && !(step_sigma > 0.0 && step_sigma <= 1.0))
    throw InputError("step sigma must lie in (0, 1]");
  if (restart_after == 0) throw InputError("restart threshold must be positive");
  if (budget.wall_seconds && !(*budget.wall_seconds > 0.0)) throw InputError("wall-clock cap must be positive");
}

std::string vector_digest(const config::PrecedenceVector& v) { return digest_hex(nlohmann::json(v.values).dump()); }

namespace {

class Search {
 public:
  Search(const pddl::DomainModel& d, Objective& objective, const TuneOptions& options)
      : d_(d), objective_(objective), options_(options), sign_(options.strategy == Strategy::Adversarial ? -1.0 : 1.0),
        start_(std::chrono::steady_clock::now()) {
    result_.strategy = options.strategy;
    result_.step_sigma = options.strategy == Strategy::Random ? 0.0 : options.step_sigma;
    result_.restart_after = options.strategy == Strategy::Random ? 0 : options.restart_after;
    result_.seed = options.budget.seed;
    max_proposals_ = options.max_proposals ? options.max_proposals : 100 * options.budget.max_evaluations;
  }

  bool exhausted() const {
    if (result_.history.size() >= options_.budget.max_evaluations) return true;
    if (result_.proposals >= max_proposals_) return true;
    if (options_.budget.wall_seconds) {
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
      if (elapsed >= *options_.budget.wall_seconds) return true;
    }
    return false;
  }

  // Signed cost of `v` (lower is better for the search).
  double cost(const config::PrecedenceVector& v) {
    ++result_.proposals;
    const auto spec = config::decode_precedence(d_, v);
    const std::string key = config::config_digest(spec);
    if (auto it = cache_.find(key); it != cache_.end()) {
      ++result_.cache_hits;
      return sign_ * it->second;
    }
    const double value = objective_.evaluate(config::apply_configuration(d_, spec), spec);
    cache_.emplace(key, value);
    const bool better = result_.history.empty() || sign_ * value < sign_ * result_.best_objective;
    if (better) {
      result_.best_objective = value;
      result_.best_vector = v;
      result_.best_config = spec;
    }
    result_.history.push_back({result_.history.size(), vector_digest(v), key, value, result_.best_objective});
    return sign_ * value;
  }

  TuneResult run() {
    Rng rng(options_.budget.seed);
    const auto start = config::uniform_vector(d_, 0.0);
    const std::size_t m = start.values.size();
    auto uniform = [&] {
      auto v = start;
      for (auto& x : v.values) x = rng.uniform01();
      return v;
    };

    if (options_.strategy == Strategy::Random) {
      cost(start);
      while (!exhausted()) cost(uniform());
      return result_;
    }

    auto current = start;
    double current_cost = cost(start);
    std::size_t rejections = 0;
    while (!exhausted()) {
      if (rejections >= options_.restart_after) {
        current = uniform();
        current_cost = cost(current);
        rejections = 0;
        continue;
      }
      auto candidate = current;
      if (m > 0) {
        std::vector<std::size_t> chosen;
        for (std::size_t i = 0; i < m; ++i)
          if (rng.below(m) == 0) chosen.push_back(i);
        if (chosen.empty()) chosen.push_back(static_cast<std::size_t>(rng.below(m)));
        for (auto i : chosen)
          candidate.values[i] = std::clamp(candidate.values[i] + options_.step_sigma * rng.normal(), 0.0, 1.0);
      }
      const double c = cost(candidate);
      if (c < current_cost) {
        current = std::move(candidate);
        current_cost = c;
        rejections = 0;
      } else {
        ++rejections;
      }
    }
    return result_;
  }

 private:
  const pddl::DomainModel& d_;
  Objective& objective_;
  const TuneOptions& options_;
  double sign_;
  std::chrono::steady_clock::time_point start_;
  std::size_t max_proposals_ = 0;
  std::unordered_map<std::string, double> cache_;
  TuneResult result_;
};

}  // namespace

TuneResult tune(const pddl::DomainModel& d, Objective& objective, const TuneOptions& options) {
  options.validate();
  return Search(d, objective, options).run();
}

TuneResult tune_random(const pddl::DomainModel& d, Objective& objective, const TuneBudget& budget) {
  TuneOptions o;
  o.strategy = Strategy::Random;
  o.budget = budget;
  return tune(d, objective, o);
}

TuneResult tune_ils(const pddl::DomainModel& d, Objective& objective, const TuneBudget& budget, double step_sigma) {
  TuneOptions o;
  o.strategy = Strategy::Ils;
  o.budget = budget;
  o.step_sigma = step_sigma;
  return tune(d, objective, o);
}

TuneResult tune_adversarial(const pddl::DomainModel& d, Objective& objective, const TuneBudget& budget,
                            double step_sigma) {
  TuneOptions o;
  o.strategy = Strategy::Adversarial;
  o.budget = budget;
  o.step_sigma = step_sigma;
  return tune(d, objective, o);
}

nlohmann::json to_json(const TuneResult& r) {
  nlohmann::json history = nlohmann::json::array();
  for (const auto& e : r.history)
    history.push_back({{"index", e.index},
                       {"vectorDigest", e.vector_digest},
                       {"configDigest", e.config_digest},
                       {"objective", e.objective},
                       {"incumbent", e.incumbent}});
  nlohmann::json meta{{"strategy", to_string(r.strategy)},
                      {"seed", r.seed},
                      {"evaluations", r.history.size()},
                      {"cacheHits", r.cache_hits},
                      {"proposals", r.proposals},
                      {"metric", "par10"}};
  if (r.strategy != Strategy::Random) {
    meta["stepSigma"] = r.step_sigma;
    meta["restartAfter"] = r.restart_after;
  }
  return {{"bestObjective", r.best_objective},
          {"bestVector", config::to_json(r.best_vector)},
          {"bestConfig", config::to_json(r.best_config)},
          {"history", history},
          {"metadata", meta}};
}

}  // namespace domconf::tune
