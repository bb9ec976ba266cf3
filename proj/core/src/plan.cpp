#include <algorithm>
#include <cctype>
#include <sstream>

#include <nlohmann/json.hpp>

#include "domconf/grounding.hpp"

namespace domconf::pddl {

std::string PlanStep::name() const {
  std::string out = op;
  for (const auto& a : args) out += " " + a;
  return out;
}

Plan parse_plan(std::string_view text) {
  Plan plan;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto c = line.find(';'); c != std::string::npos) line.erase(c);
    const auto open = line.find('(');
    if (open == std::string::npos) {
      const bool blank = std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
      if (!blank) throw InputError("plan line " + std::to_string(line_no) + ": expected (action args...)");
      continue;
    }
    const auto close = line.find(')', open);
    if (close == std::string::npos) throw InputError("plan line " + std::to_string(line_no) + ": missing ')'");
    std::istringstream words(line.substr(open + 1, close - open - 1));
    PlanStep step;
    std::string w;
    while (words >> w) {
      std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (step.op.empty()) {
        step.op = w;
      } else {
        step.args.push_back(w);
      }
    }
    if (step.op.empty()) throw InputError("plan line " + std::to_string(line_no) + ": empty action");
    plan.push_back(std::move(step));
  }
  return plan;
}

std::string print_plan(const Plan& plan) {
  std::string out;
  for (const auto& s : plan) out += "(" + s.name() + ")\n";
  return out;
}

nlohmann::json to_json(const ValidationReport& r) {
  nlohmann::json j;
  j["valid"] = r.valid;
  j["failStep"] = r.fail_step ? nlohmann::json(*r.fail_step) : nlohmann::json(nullptr);
  j["failReason"] = r.fail_reason;
  j["planLength"] = r.plan_length;
  return j;
}

namespace {

ValidationReport simulate(const GroundTask& task, const Plan& plan, bool throw_unknown) {
  ValidationReport report;
  report.plan_length = plan.size();
  State state = task.init;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const GroundAction* a = task.find_action(plan[i].name());
    if (a == nullptr) {
      if (throw_unknown) throw UnknownActionError("plan step " + std::to_string(i + 1) + ": unknown action (" + plan[i].name() + ")");
      report.fail_step = i + 1;
      report.fail_reason = "unknown action (" + plan[i].name() + ")";
      return report;
    }
    try {
      state = apply_action(task, state, *a);
    } catch (const InapplicableActionError& e) {
      report.fail_step = i + 1;
      report.fail_reason = "precondition (" + e.missing_atom() + ") of (" + a->name + ") not satisfied";
      return report;
    }
  }
  for (AtomId g : task.goal) {
    if (!std::binary_search(state.begin(), state.end(), g)) {
      report.fail_reason = "goal (" + task.atoms[g] + ") not satisfied";
      return report;
    }
  }
  report.valid = true;
  return report;
}

}  // namespace

ValidationReport validate_plan(const GroundTask& task, const Plan& plan) { return simulate(task, plan, true); }

ValidationReport validate_plan(const DomainModel& domain, const ProblemModel& problem, const Plan& plan) {
  return simulate(ground_for_plan(domain, problem, plan), plan, false);
}

}  // namespace domconf::pddl
