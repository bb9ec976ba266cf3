#include <fcntl.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/time.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <regex>
#include <thread>

#include "domconf/bench.hpp"
#include "domconf/digest.hpp"
#include "domconf/grounding.hpp"

namespace domconf::bench {

namespace fs = std::filesystem;

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

namespace {

void replace_all(std::string& text, const std::string& slot, const std::string& value) {
  for (auto pos = text.find(slot); pos != std::string::npos; pos = text.find(slot, pos + value.size()))
    text.replace(pos, slot.size(), value);
}

double seconds(const timeval& tv) { return static_cast<double>(tv.tv_sec) + static_cast<double>(tv.tv_usec) / 1e6; }

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool mentions_memory_failure(const fs::path& stderr_file) {
  const std::string text = slurp(stderr_file);
  for (const char* marker : {"bad_alloc", "out of memory", "Out of memory", "MemoryError", "Cannot allocate memory",
                             "memory exhausted"})
    if (text.find(marker) != std::string::npos) return true;
  return false;
}

}  // namespace

std::optional<double> reported_time(const std::string& output) {
  static const std::regex pattern(R"(Total time:\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*s?)");
  std::optional<double> last;
  for (std::sregex_iterator it(output.begin(), output.end(), pattern), end; it != end; ++it)
    last = std::stod((*it)[1].str());
  return last;
}

std::string expand_command(const PlannerSpec& planner, const fs::path& domain, const fs::path& problem,
                           const fs::path& plan) {
  std::string cmd = planner.command;
  replace_all(cmd, "{domain}", shell_quote(domain.string()));
  replace_all(cmd, "{problem}", shell_quote(problem.string()));
  replace_all(cmd, "{planfile}", shell_quote(plan.string()));
  if (planner.seed) replace_all(cmd, "{seed}", shell_quote(*planner.seed));
  return cmd;
}

ExecResult ProcessExecutor::execute(const ExecRequest& request) {
  ExecResult result;
  // Everything the child touches is prepared before fork.
  const std::string workdir = request.workdir.string();
  const std::string out_path = (request.workdir / "stdout.txt").string();
  const std::string err_path = (request.workdir / "stderr.txt").string();
  const rlim_t mem_bytes = static_cast<rlim_t>(request.limits.memory_mb) * 1024 * 1024;
  const auto cpu_limit = static_cast<rlim_t>(std::ceil(request.limits.cutoff_seconds)) + 1;
  // A CPU-clocked run may lag behind the wall clock when the machine is busy.
  const double wall_limit = request.clock == ClockKind::Wall ? request.limits.cutoff_seconds
                                                             : request.limits.cutoff_seconds * 1.5 + 1.0;

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid < 0) return result;
  if (pid == 0) {
    setpgid(0, 0);
    if (chdir(workdir.c_str()) != 0) _exit(127);
    const int out = open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    const int err = open(err_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (out >= 0) dup2(out, STDOUT_FILENO);
    if (err >= 0) dup2(err, STDERR_FILENO);
    const int null = open("/dev/null", O_RDONLY);
    if (null >= 0) dup2(null, STDIN_FILENO);
    rlimit mem{mem_bytes, mem_bytes};
    setrlimit(RLIMIT_AS, &mem);
    rlimit cpu{cpu_limit, cpu_limit + 1};
    setrlimit(RLIMIT_CPU, &cpu);
    execl("/bin/sh", "sh", "-c", request.command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);

  int status = 0;
  rusage usage{};
  bool killed = false;
  for (;;) {
    const pid_t done = wait4(pid, &status, WNOHANG, &usage);
    if (done == pid) break;
    if (done < 0) {
      kill(-pid, SIGKILL);
      return result;
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!killed && elapsed > wall_limit) {
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      killed = true;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(killed ? 1 : 5));
  }
  // Stray children of the planner die with it.
  kill(-pid, SIGKILL);

  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.cpu_seconds = seconds(usage.ru_utime) + seconds(usage.ru_stime);
  const double max_rss_bytes = static_cast<double>(usage.ru_maxrss) * 1024.0;
  result.memory_exhausted =
      max_rss_bytes >= 0.9 * static_cast<double>(mem_bytes) || mentions_memory_failure(err_path);
  if (request.clock == ClockKind::Reported) result.reported_seconds = reported_time(slurp(out_path));
  if (killed) {
    result.status = ExecResult::Status::TimedOut;
  } else if (WIFSIGNALED(status)) {
    result.status = WTERMSIG(status) == SIGXCPU ? ExecResult::Status::TimedOut : ExecResult::Status::Signaled;
    result.code = WTERMSIG(status);
  } else {
    result.status = ExecResult::Status::Exited;
    result.code = WEXITSTATUS(status);
  }
  return result;
}

RunRecord run_once(const PlannerSpec& planner, const DomainInput& domain, const ProblemInput& problem,
                   const RunLimits& limits, std::size_t run_index, const fs::path& scratch, Executor& executor) {
  RunRecord rec;
  rec.planner = planner.id;
  rec.domain = domain.label;
  rec.variant = domain.variant;
  rec.problem = problem.id;
  rec.config_digest = domain.config_digest;
  rec.run = run_index;
  rec.clock = planner.clock;
  rec.cutoff = limits.cutoff_seconds;
  rec.failure = FailureKind::Crash;

  ExecRequest req;
  req.limits = limits;
  req.clock = planner.clock;
  ExecResult res;
  try {
    rec.domain_digest = digest_hex(pddl::read_text_file(domain.file.string()));
    fs::remove_all(scratch);
    fs::create_directories(scratch);
    req.workdir = fs::absolute(scratch);
    req.domain_file = fs::absolute(domain.file);
    req.problem_file = fs::absolute(problem.file);
    req.plan_file = req.workdir / "plan.txt";
    req.command = expand_command(planner, req.domain_file, req.problem_file, req.plan_file);
    res = executor.execute(req);
  } catch (const std::exception&) {
    return rec;
  }
  if (res.status == ExecResult::Status::SpawnFailed) return rec;

  switch (planner.clock) {
    case ClockKind::Cpu:
      rec.time = res.cpu_seconds;
      break;
    case ClockKind::Wall:
      rec.time = res.wall_seconds;
      break;
    case ClockKind::Reported:
      rec.time = res.reported_seconds.value_or(res.cpu_seconds);
      break;
  }
  if (res.status == ExecResult::Status::TimedOut || rec.time > limits.cutoff_seconds) {
    rec.failure = FailureKind::Timeout;
    rec.time = limits.cutoff_seconds;
    return rec;
  }

  std::error_code ec;
  if (fs::exists(req.plan_file, ec) && fs::file_size(req.plan_file, ec) > 0) {
    rec.plan_file = req.plan_file.string();
    try {
      const auto plan = pddl::parse_plan(pddl::read_text_file(req.plan_file.string()));
      const auto report = pddl::validate_plan(domain.model, problem.model, plan);
      if (report.valid) {
        rec.solved = true;
        rec.failure = FailureKind::None;
        rec.plan_length = report.plan_length;
        return rec;
      }
    } catch (const InputError&) {
    }
    rec.failure = FailureKind::InvalidPlan;
    return rec;
  }
  rec.failure = res.memory_exhausted ? FailureKind::Memout : FailureKind::Crash;
  return rec;
}

std::vector<RunRecord> run_planner(const PlannerSpec& planner, const DomainInput& domain, const ProblemInput& problem,
                                   const RunLimits& limits, const fs::path& scratch, Executor& executor) {
  planner.validate();
  limits.validate();
  std::vector<RunRecord> out;
  for (unsigned k = 0; k < limits.repetitions; ++k)
    out.push_back(run_once(planner, domain, problem, limits, k, scratch / ("run-" + std::to_string(k)), executor));
  return out;
}

}  // namespace domconf::bench
