#pragma once

// Search over precedence vectors for a configuration that minimises (or,
// adversarially, maximises) one planner's mean PAR10 on training problems.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "domconf/bench.hpp"
#include "domconf/config_space.hpp"
#include "domconf/pddl.hpp"

namespace domconf::tune {

enum class Strategy { Random, Ils, Adversarial };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

/// Cost of one configuration; lower is better.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double evaluate(const pddl::DomainModel& configured, const config::ConfigurationSpec& c) = 0;
};

class FunctionObjective : public Objective {
 public:
  using Fn = std::function<double(const pddl::DomainModel&, const config::ConfigurationSpec&)>;
  explicit FunctionObjective(Fn fn) : fn_(std::move(fn)) {}
  double evaluate(const pddl::DomainModel& configured, const config::ConfigurationSpec& c) override {
    return fn_(configured, c);
  }

 private:
  Fn fn_;
};

/// Mean over training problems of the PAR10 of the median run.
class BenchObjective : public Objective {
 public:
  struct Spec {
    bench::PlannerSpec planner;
    std::string domain_label;
    std::vector<bench::ProblemInput> problems;
    bench::RunLimits limits;
    std::filesystem::path scratch;
    unsigned jobs = 1;
  };

  BenchObjective(Spec spec, bench::Executor& executor);
  double evaluate(const pddl::DomainModel& configured, const config::ConfigurationSpec& c) override;

  /// Every run record produced so far, in evaluation order.
  const std::vector<bench::RunRecord>& records() const { return records_; }

 private:
  Spec spec_;
  bench::Executor& executor_;
  std::vector<bench::RunRecord> records_;
};

struct TuneBudget {
  std::size_t max_evaluations = 100;
  std::optional<double> wall_seconds;
  std::uint64_t seed = 0;
};

struct TuneOptions {
  Strategy strategy = Strategy::Ils;
  TuneBudget budget;
  double step_sigma = 0.2;
  std::size_t restart_after = 20;
  /// Stop after this many proposals even if cache hits kept the budget
  /// unspent; 0 means 100 × max_evaluations.
  std::size_t max_proposals = 0;

  void validate() const;
};

/// One objective evaluation (cache hits are not recorded).
struct Evaluation {
  std::size_t index = 0;
  std::string vector_digest;
  std::string config_digest;
  double objective = 0.0;
  double incumbent = 0.0;  ///< best objective up to and including this one
};

struct TuneResult {
  Strategy strategy = Strategy::Ils;
  config::PrecedenceVector best_vector;
  config::ConfigurationSpec best_config;
  double best_objective = 0.0;
  std::vector<Evaluation> history;
  std::size_t cache_hits = 0;
  std::size_t proposals = 0;
  double step_sigma = 0.0;
  std::size_t restart_after = 0;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const TuneResult& r);

std::string vector_digest(const config::PrecedenceVector& v);

/// Random search: the all-zero default vector, then uniform vectors.
/// ILS: starts at the default vector; each step perturbs every coordinate
/// with probability 1/m (at least one) by N(0, sigma) noise clipped to
/// [0,1], accepts strict improvements and restarts from a uniform vector
/// after `restart_after` consecutive rejections. Adversarial: ILS on the
/// negated objective; reported objectives stay un-negated.
TuneResult tune(const pddl::DomainModel& d, Objective& objective, const TuneOptions& options);

TuneResult tune_random(const pddl::DomainModel& d, Objective& objective, const TuneBudget& budget);
TuneResult tune_ils(const pddl::DomainModel& d, Objective& objective, const TuneBudget& budget, double step_sigma = 0.2);
TuneResult tune_adversarial(const pddl::DomainModel& d, Objective& objective, const TuneBudget& budget,
                            double step_sigma = 0.2);

}  // namespace domconf::tune
