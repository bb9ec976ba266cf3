#include <cmath>
#include <tuple>

#include <nlohmann/json.hpp>

#include "domconf/bench.hpp"

namespace domconf::bench {

const char* to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::None:
      return "none";
    case FailureKind::Timeout:
      return "timeout";
    case FailureKind::Memout:
      return "memout";
    case FailureKind::Crash:
      return "crash";
    case FailureKind::InvalidPlan:
      return "invalid_plan";
  }
  return "crash";
}

const char* to_string(ClockKind kind) {
  switch (kind) {
    case ClockKind::Cpu:
      return "cpu";
    case ClockKind::Wall:
      return "wall";
    case ClockKind::Reported:
      return "reported";
  }
  return "cpu";
}

FailureKind failure_from_string(const std::string& s) {
  for (auto k : {FailureKind::None, FailureKind::Timeout, FailureKind::Memout, FailureKind::Crash,
                 FailureKind::InvalidPlan})
    if (s == to_string(k)) return k;
  throw InputError("unknown failure kind '" + s + "'");
}

ClockKind clock_from_string(const std::string& s) {
  if (s == "cpu") return ClockKind::Cpu;
  if (s == "wall") return ClockKind::Wall;
  if (s == "reported") return ClockKind::Reported;
  throw InputError("unknown clock '" + s + "' (expected cpu, wall or reported)");
}

void PlannerSpec::validate() const {
  if (id.empty()) throw InputError("planner id must not be empty");
  for (const char* slot : {"{domain}", "{problem}"})
    if (command.find(slot) == std::string::npos)
      throw InputError("planner '" + id + "': command template lacks " + slot);
  if (command.find("{seed}") != std::string::npos && !seed)
    throw InputError("planner '" + id + "': command uses {seed} but no seed is given");
}

PlannerSpec planner_from_json(const nlohmann::json& j) {
  try {
    PlannerSpec p;
    p.id = j.at("id").get<std::string>();
    p.command = j.at("command").get<std::string>();
    if (j.contains("seed") && !j.at("seed").is_null()) {
      const auto& s = j.at("seed");
      p.seed = s.is_string() ? s.get<std::string>() : s.dump();
    }
    if (j.contains("clock")) p.clock = clock_from_string(j.at("clock").get<std::string>());
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed planner spec: ") + e.what());
  }
}

nlohmann::json to_json(const PlannerSpec& p) {
  nlohmann::json j{{"id", p.id}, {"command", p.command}, {"clock", to_string(p.clock)}};
  if (p.seed) j["seed"] = *p.seed;
  return j;
}

void RunLimits::validate() const {
  if (!(cutoff_seconds > 0.0) || !std::isfinite(cutoff_seconds)) throw InputError("cutoff must be a positive number of seconds");
  if (memory_mb == 0) throw InputError("memory limit must be positive");
  if (repetitions == 0 || repetitions % 2 == 0)
    throw InputError("repetitions must be odd so that the median is a single run");
}

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json j;
  j["planner"] = r.planner;
  j["domain"] = r.domain;
  j["variant"] = r.variant;
  j["domainDigest"] = r.domain_digest;
  j["problem"] = r.problem;
  j["configDigest"] = r.config_digest;
  j["run"] = r.run;
  j["solved"] = r.solved;
  j["time"] = r.time;
  j["failure"] = to_string(r.failure);
  j["planLength"] = r.plan_length ? nlohmann::json(*r.plan_length) : nlohmann::json(nullptr);
  j["planFile"] = r.plan_file ? nlohmann::json(*r.plan_file) : nlohmann::json(nullptr);
  j["clock"] = to_string(r.clock);
  j["cutoff"] = r.cutoff;
  return j;
}

RunRecord record_from_json(const nlohmann::json& j) {
  try {
    RunRecord r;
    r.planner = j.at("planner").get<std::string>();
    r.domain = j.at("domain").get<std::string>();
    r.variant = j.at("variant").get<std::string>();
    r.domain_digest = j.value("domainDigest", std::string{});
    r.problem = j.at("problem").get<std::string>();
    r.config_digest = j.value("configDigest", std::string{});
    r.run = j.at("run").get<std::size_t>();
    r.solved = j.at("solved").get<bool>();
    r.time = j.at("time").get<double>();
    r.failure = failure_from_string(j.at("failure").get<std::string>());
    if (j.contains("planLength") && !j.at("planLength").is_null()) r.plan_length = j.at("planLength").get<std::size_t>();
    if (j.contains("planFile") && !j.at("planFile").is_null()) r.plan_file = j.at("planFile").get<std::string>();
    r.clock = clock_from_string(j.value("clock", std::string("cpu")));
    r.cutoff = j.at("cutoff").get<double>();
    if (r.solved != (r.failure == FailureKind::None))
      throw InputError("run record: solved and failure disagree for " + r.planner + "/" + r.problem);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed run record: ") + e.what());
  }
}

bool record_less(const RunRecord& a, const RunRecord& b) {
  return std::tie(a.planner, a.domain, a.variant, a.problem, a.run) <
         std::tie(b.planner, b.domain, b.variant, b.problem, b.run);
}

}  // namespace domconf::bench
