#pragma once

// Running external planners under resource limits and scoring the outcome.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "domconf/config_space.hpp"
#include "domconf/pddl.hpp"

namespace domconf::bench {

enum class FailureKind { None, Timeout, Memout, Crash, InvalidPlan };
/// Cpu and Wall measure the child process; Reported takes the planner's
/// own last `Total time: <x>s` line from its standard output and falls back
/// to CPU time without one.
enum class ClockKind { Cpu, Wall, Reported };

const char* to_string(FailureKind kind);
const char* to_string(ClockKind kind);
FailureKind failure_from_string(const std::string& s);
ClockKind clock_from_string(const std::string& s);

/// How to call one planner. The command runs through `/bin/sh -c` after
/// the placeholders {domain}, {problem}, {planfile} and {seed} have been
/// replaced by shell-quoted values.
struct PlannerSpec {
  std::string id;
  std::string command;
  std::optional<std::string> seed;
  ClockKind clock = ClockKind::Cpu;

  /// Throws InputError on an empty id or a template lacking {domain},
  /// {problem}, or a {seed} value.
  void validate() const;
};

PlannerSpec planner_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PlannerSpec& p);

struct RunLimits {
  double cutoff_seconds = 300.0;
  std::uint64_t memory_mb = 4096;
  unsigned repetitions = 3;

  /// Positive cutoff and memory, odd repetition count.
  void validate() const;
};

struct RunRecord {
  std::string planner;
  std::string domain;   ///< label of the domain (base label under randomization)
  std::string variant;  ///< label of the configuration variant
  std::string domain_digest;
  std::string problem;
  std::string config_digest;
  std::size_t run = 0;
  bool solved = false;
  double time = 0.0;
  FailureKind failure = FailureKind::Crash;
  std::optional<std::size_t> plan_length;
  std::optional<std::string> plan_file;
  ClockKind clock = ClockKind::Cpu;
  double cutoff = 300.0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

nlohmann::json to_json(const RunRecord& r);
RunRecord record_from_json(const nlohmann::json& j);

/// Total order used before any aggregation: planner, domain, variant,
/// problem, run.
bool record_less(const RunRecord& a, const RunRecord& b);

// ---- metrics ----------------------------------------------------------

/// Median by time with unsolved runs ordered after every solved one. The
/// count must be odd.
RunRecord median_record(std::vector<RunRecord> records);

/// Penalised runtime of one record: its time when solved, 10·cutoff else.
double par10_value(const RunRecord& r, double cutoff);

/// Mean par10_value over per-problem records.
double par10(const std::vector<RunRecord>& records, double cutoff);

/// Times below this floor count as the floor in IPC ratios.
inline constexpr double kIpcTimeFloor = 1.0;

/// 1 / (1 + log10(T / T*)) after flooring both times.
double ipc_problem_score(double time, double best_time);

/// One per-problem outcome of one compared system.
struct Outcome {
  std::string system;
  std::string problem;
  bool solved = false;
  double time = 0.0;
};

/// IPC score summed over problems, for every system present. A problem
/// nobody solves contributes 0 to everyone.
std::map<std::string, double> ipc_scores(const std::vector<Outcome>& outcomes);

struct Coverage {
  std::size_t solved = 0;
  std::size_t total = 0;
  double fraction() const { return total == 0 ? 0.0 : static_cast<double>(solved) / static_cast<double>(total); }
};

Coverage coverage(const std::vector<RunRecord>& records);

/// Collapses repetitions: one median record per (planner, domain, variant,
/// problem), sorted with record_less.
std::vector<RunRecord> median_records(std::vector<RunRecord> records);

// ---- running ----------------------------------------------------------

struct ExecRequest {
  std::string command;  ///< placeholders already substituted
  std::filesystem::path workdir;
  std::filesystem::path domain_file;
  std::filesystem::path problem_file;
  std::filesystem::path plan_file;
  RunLimits limits;
  ClockKind clock = ClockKind::Cpu;
};

struct ExecResult {
  enum class Status { Exited, Signaled, TimedOut, SpawnFailed };
  Status status = Status::SpawnFailed;
  int code = 0;  ///< exit code or signal number
  double cpu_seconds = 0.0;
  double wall_seconds = 0.0;
  bool memory_exhausted = false;
  std::optional<double> reported_seconds;
};

/// Last `Total time: <x>` value in a planner's output.
std::optional<double> reported_time(const std::string& output);

/// Runs one planner process. Implementations must be callable from
/// several threads at once.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual ExecResult execute(const ExecRequest& request) = 0;
};

/// fork/exec through /bin/sh with RLIMIT_AS, RLIMIT_CPU and a wall-clock
/// watchdog that kills the whole process group at the cutoff.
class ProcessExecutor : public Executor {
 public:
  ExecResult execute(const ExecRequest& request) override;
};

/// `'...'` quoting for /bin/sh.
std::string shell_quote(const std::string& s);

/// Substitutes the placeholders of `planner.command`.
std::string expand_command(const PlannerSpec& planner, const std::filesystem::path& domain,
                           const std::filesystem::path& problem, const std::filesystem::path& plan);

/// Domain or problem handed to a planner: the file it reads plus the
/// parsed model used to validate plans.
struct DomainInput {
  std::string label;
  std::string variant;
  std::filesystem::path file;
  pddl::DomainModel model;
  std::string config_digest;
};

struct ProblemInput {
  std::string id;
  std::filesystem::path file;
  pddl::ProblemModel model;
};

/// One repetition. The scratch directory is recreated empty; the plan file
/// stays there so solved runs can be revalidated later.
RunRecord run_once(const PlannerSpec& planner, const DomainInput& domain, const ProblemInput& problem,
                   const RunLimits& limits, std::size_t run_index, const std::filesystem::path& scratch,
                   Executor& executor);

/// `limits.repetitions` repetitions in scratch/run-<k>.
std::vector<RunRecord> run_planner(const PlannerSpec& planner, const DomainInput& domain, const ProblemInput& problem,
                                   const RunLimits& limits, const std::filesystem::path& scratch, Executor& executor);

// ---- suites -----------------------------------------------------------

struct Randomization {
  bool per_instance = false;
  std::uint64_t seed = 0;
};

struct BenchPlan {
  std::vector<PlannerSpec> planners;
  std::vector<DomainInput> domains;
  std::vector<ProblemInput> problems;
  RunLimits limits;
  Randomization randomization;

  /// Unique labels and ids, valid planners and limits, problems that fit
  /// every domain.
  void validate() const;
};

/// Reads `bench.json`; relative paths resolve against its directory.
/// `planners` is either an array of planner objects or the path of a
/// planners.json catalog.
BenchPlan load_bench_plan(const std::filesystem::path& path);

/// One configuration per problem, drawn from a seed derived from
/// (seed, problem id); independent of the order of `problem_ids`.
std::vector<std::pair<std::string, config::ConfigurationSpec>> randomized_protocol(
    const pddl::DomainModel& d, const std::vector<std::string>& problem_ids, std::uint64_t seed);

inline constexpr const char* kResultsSchema = "domconf-runs";
inline constexpr int kResultsVersion = 1;

/// Records of an existing results file. A missing file yields nothing; an
/// unparsable final line (interrupted write) is dropped.
std::vector<RunRecord> read_results(const std::filesystem::path& path);

struct SuiteOptions {
  std::filesystem::path results;
  std::filesystem::path scratch;
  unsigned jobs = 1;
  /// Called once per finished cell, serialized.
  std::function<void(const RunRecord&)> on_record;
};

struct SuiteResult {
  std::vector<RunRecord> records;  ///< every record, sorted with record_less
  std::size_t executed = 0;
  std::size_t skipped = 0;
  std::size_t crashed = 0;
};

/// Runs every planner × domain × problem × repetition cell not already in
/// the results file, appending each record as it completes.
SuiteResult run_suite(const BenchPlan& plan, const SuiteOptions& options, Executor& executor);

/// Default pool size: the hardware concurrency, at least 1.
unsigned default_jobs();

}  // namespace domconf::bench
