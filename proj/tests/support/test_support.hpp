#pragma once

// Fixture access, process helpers and independent oracles shared by the
// unit, CLI and acceptance tests. The oracles deliberately avoid the
// library code they check.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "domconf/grounding.hpp"
#include "domconf/macros.hpp"
#include "domconf/pddl.hpp"

#include <nlohmann/json.hpp>

namespace testsupport {

namespace fs = std::filesystem;
using namespace domconf;

inline fs::path fixtures() { return fs::path(DOMCONF_FIXTURES_DIR); }
inline fs::path domain_path(const std::string& name) { return fixtures() / "domains" / (name + ".pddl"); }
inline fs::path problem_path(const std::string& name) { return fixtures() / "problems" / (name + ".pddl"); }

inline pddl::DomainModel domain(const std::string& name) {
  return pddl::load_domain_file(domain_path(name).string());
}
inline pddl::ProblemModel problem(const std::string& name) {
  return pddl::load_problem_file(problem_path(name).string());
}
inline macros::MacroRecipe recipe(const std::string& name) {
  std::ifstream in(fixtures() / "recipes" / (name + ".json"));
  return macros::recipe_from_json(nlohmann::json::parse(in));
}

inline const std::vector<std::string>& domain_fixtures() {
  static const std::vector<std::string> names{"blocksworld", "blocksworld-reordered", "parking", "depots",
                                              "satellite", "rovers", "toy-logistics", "single-op"};
  return names;
}

/// Fresh, empty directory below the test build tree.
inline fs::path temp_dir(const std::string& tag) {
  fs::path dir = fs::path(DOMCONF_TEST_TMP) / tag;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct CommandOutput {
  int code = -1;
  std::string out;
  std::string err;
};

/// Runs `cmd` through the shell with stdout and stderr captured to files.
inline CommandOutput run_command(const std::string& cmd, const std::string& tag = "cmd") {
  fs::path dir = fs::path(DOMCONF_TEST_TMP) / "capture";
  fs::create_directories(dir);
  const fs::path out = dir / (tag + ".out");
  const fs::path err = dir / (tag + ".err");
  const std::string full = cmd + " >'" + out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(full.c_str());
  CommandOutput r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

inline std::string cli() { return DOMCONF_CLI; }
inline std::string mock_planner() { return DOMCONF_MOCK_PLANNER; }

// ---- big-number oracle --------------------------------------------------

/// Decimal digits, least significant first.
using Decimal = std::vector<int>;

inline Decimal decimal_mul(const Decimal& a, unsigned long long k) {
  Decimal out;
  unsigned long long carry = 0;
  for (int d : a) {
    unsigned long long v = static_cast<unsigned long long>(d) * k + carry;
    out.push_back(static_cast<int>(v % 10));
    carry = v / 10;
  }
  while (carry) {
    out.push_back(static_cast<int>(carry % 10));
    carry /= 10;
  }
  return out;
}

/// Product of k! over the group sizes, as a decimal string.
inline std::string factorial_product(const std::vector<std::size_t>& sizes) {
  Decimal acc{1};
  for (auto n : sizes)
    for (std::size_t k = 2; k <= n; ++k) acc = decimal_mul(acc, k);
  std::string s;
  for (auto it = acc.rbegin(); it != acc.rend(); ++it) s.push_back(static_cast<char>('0' + *it));
  return s;
}

/// Group sizes read straight off the model: predicates, operators, then
/// each operator's preconditions and effects.
inline std::vector<std::size_t> group_sizes(const pddl::DomainModel& d) {
  std::vector<std::size_t> sizes{d.predicates.size(), d.operators.size()};
  for (const auto& op : d.operators) {
    sizes.push_back(op.pre.size());
    sizes.push_back(op.eff.size());
  }
  return sizes;
}

// ---- reachability oracle ------------------------------------------------

using NamedState = std::set<std::string>;

/// Breadth-first search over lifted schemas with string atoms. Types are
/// resolved by walking parent links; equality literals are evaluated on
/// the spot.
inline std::set<NamedState> naive_reachable(const pddl::DomainModel& d, const pddl::ProblemModel& p) {
  std::map<std::string, std::string> parent;
  for (const auto& t : d.types) parent[t.name] = t.parent;
  auto is_a = [&](std::string type, const std::string& want) {
    if (d.types.empty()) return true;
    for (int guard = 0; guard < 64; ++guard) {
      if (type == want) return true;
      auto it = parent.find(type);
      if (it == parent.end()) return want == "object";
      type = it->second;
    }
    return false;
  };
  std::vector<std::pair<std::string, std::string>> objects;
  for (const auto& o : p.objects) objects.emplace_back(o.name, o.type);
  for (const auto& c : d.constants) objects.emplace_back(c.name, c.type);

  struct Instance {
    std::vector<std::string> pre_pos;
    std::vector<std::string> add;
    std::vector<std::string> del;
  };
  std::vector<Instance> instances;
  for (const auto& op : d.operators) {
    std::vector<std::string> binding(op.params.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i < op.params.size()) {
        for (const auto& [name, type] : objects)
          if (is_a(type, op.params[i].type)) {
            binding[i] = name;
            rec(i + 1);
          }
        return;
      }
      auto sub = [&](const std::string& term) {
        for (std::size_t k = 0; k < op.params.size(); ++k)
          if (op.params[k].name == term) return binding[k];
        return term;
      };
      auto atom = [&](const pddl::Literal& l) {
        std::string s = l.predicate;
        for (const auto& a : l.args) s += " " + sub(a);
        return s;
      };
      Instance inst;
      for (const auto& l : op.pre) {
        if (l.predicate == "=") {
          const bool same = sub(l.args[0]) == sub(l.args[1]);
          if (same == l.negative()) return;
          continue;
        }
        inst.pre_pos.push_back(atom(l));
      }
      for (const auto& l : op.eff) (l.negative() ? inst.del : inst.add).push_back(atom(l));
      instances.push_back(std::move(inst));
    };
    rec(0);
  }

  NamedState init;
  for (const auto& a : p.init) {
    std::string s = a.predicate;
    for (const auto& x : a.args) s += " " + x;
    init.insert(s);
  }
  std::set<NamedState> seen{init};
  std::vector<NamedState> frontier{init};
  while (!frontier.empty()) {
    std::vector<NamedState> next;
    for (const auto& s : frontier)
      for (const auto& inst : instances) {
        if (!std::all_of(inst.pre_pos.begin(), inst.pre_pos.end(), [&](const auto& a) { return s.count(a) > 0; }))
          continue;
        NamedState t = s;
        for (const auto& a : inst.del) t.erase(a);
        for (const auto& a : inst.add) t.insert(a);
        if (seen.insert(t).second) next.push_back(t);
      }
    frontier = std::move(next);
  }
  return seen;
}

/// Reachable states of the library's grounding, as named atom sets.
inline std::set<NamedState> library_reachable(const pddl::DomainModel& d, const pddl::ProblemModel& p) {
  const auto task = pddl::ground_task(d, p);
  std::set<NamedState> out;
  for (const auto& s : pddl::reachable_states(task)) {
    auto names = task.names_of(s);
    out.insert(NamedState(names.begin(), names.end()));
  }
  return out;
}

/// 1-based position of `op` in the operator order of a domain file, read
/// from the raw text.
inline std::size_t action_position_in_text(const std::string& text, const std::string& op) {
  std::size_t pos = 0;
  std::size_t at = 0;
  while ((at = text.find("(:action", at)) != std::string::npos) {
    ++pos;
    at += 8;
    while (at < text.size() && std::isspace(static_cast<unsigned char>(text[at]))) ++at;
    std::size_t end = at;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])) && text[end] != ')') ++end;
    std::string name = text.substr(at, end - at);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    if (name == op) return pos;
  }
  return 0;
}

}  // namespace testsupport
