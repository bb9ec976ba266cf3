#include <doctest.h>

#include <algorithm>

#include "domconf/macros.hpp"
#include "domconf/types.hpp"
#include "macro_oracle.hpp"
#include "test_support.hpp"

using namespace domconf;
namespace ts = testsupport;
using macros::Placement;

namespace {

std::vector<std::string> op_names(const pddl::DomainModel& d) {
  std::vector<std::string> out;
  for (const auto& o : d.operators) out.push_back(o.name);
  return out;
}

std::vector<std::string> keys(const std::vector<pddl::Literal>& ls) {
  std::vector<std::string> out;
  for (const auto& l : ls) out.push_back(l.to_pddl());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("unstack then put-down composes to the expected schema") {
  auto d = ts::domain("blocksworld");
  auto m = macros::compose_chain(ts::recipe("blocksworld-unstack-putdown"), d);
  CHECK(m.params.size() == 2);
  CHECK(keys(m.pre) == std::vector<std::string>{"(clear ?a)", "(handempty)", "(on ?a ?b)"});
  CHECK(keys(m.delete_effects()) == std::vector<std::string>{"(not (holding ?a))", "(not (on ?a ?b))"});
  CHECK(keys(m.add_effects()) == std::vector<std::string>{"(clear ?a)", "(clear ?b)", "(handempty)", "(ontable ?a)"});
}

TEST_CASE("conflicting recipes name the step and literal") {
  auto d = ts::domain("blocksworld");
  try {
    macros::compose_chain(ts::recipe("blocksworld-conflict"), d);
    FAIL("expected a conflict");
  } catch (const macros::MacroConflictError& e) {
    CHECK(e.step() == 2);
    CHECK(e.literal().find("handempty") != std::string::npos);
  }
}

TEST_CASE("recipes must bind every parameter to distinct variables") {
  auto d = ts::domain("blocksworld");
  macros::MacroRecipe r;
  r.steps.push_back({"stack", {{"?x", "a"}}});
  CHECK_THROWS_AS(macros::compose_chain(r, d), macros::MacroError);
  r.steps[0].bind.emplace_back("?y", "a");
  CHECK_THROWS_AS(macros::compose_chain(r, d), macros::MacroError);
  macros::MacroRecipe unknown;
  unknown.steps.push_back({"fly", {}});
  CHECK_THROWS_AS(macros::compose_chain(unknown, d), InputError);
}

TEST_CASE("composition is associative on the fixture recipes") {
  for (const auto& [dn, rn] : std::vector<std::pair<std::string, std::string>>{
           {"satellite", "satellite-calibrate-turn-take-turn"}, {"depots", "depots-unload-drop"}}) {
    CAPTURE(rn);
    auto d = ts::domain(dn);
    auto r = ts::recipe(rn);
    pddl::TypeHierarchy types(d);
    std::vector<pddl::OperatorSchema> u;
    for (const auto& s : r.steps) u.push_back(macros::unify(*d.find_operator(s.op), s));
    auto left = u[0];
    for (std::size_t i = 1; i < u.size(); ++i) left = macros::compose_pair(left, u[i], "m", &types);
    auto right = u.back();
    for (std::size_t i = u.size() - 1; i-- > 0;) right = macros::compose_pair(u[i], right, "m", &types);
    CHECK(keys(left.pre) == keys(right.pre));
    CHECK(keys(left.eff) == keys(right.eff));
  }
}

TEST_CASE("macros behave like their step sequences") {
  const std::vector<std::tuple<std::string, std::string, std::string>> cases{
      {"blocksworld", "blocksworld-3", "blocksworld-unstack-putdown"},
      {"depots", "depots-6", "depots-unload-drop"},
      {"satellite", "satellite-5", "satellite-calibrate-turn-take-turn"},
      {"rovers", "rovers-small", "rovers-calibrate-take-image"}};
  for (const auto& [dn, pn, rn] : cases) {
    CAPTURE(rn);
    auto r = ts::check_macro_equivalence(ts::domain(dn), ts::problem(pn), ts::recipe(rn));
    CAPTURE(r.first_problem);
    CHECK(r.instances > 0);
    CHECK(r.applicable > 0);
    CHECK(r.mismatches == 0);
    CHECK(r.missed == 0);
  }
}

TEST_CASE("placements resolve to positions") {
  auto d = ts::domain("depots");
  auto r = ts::recipe("depots-unload-drop");
  const auto n = d.operators.size();
  CHECK(macros::resolve_position(d, r, Placement::parse("top")) == 1);
  CHECK(macros::resolve_position(d, r, Placement::parse("end")) == n + 1);
  CHECK(macros::resolve_position(d, r, Placement::parse("3")) == 3);
  const auto first = *d.operator_index("unload");
  CHECK(macros::resolve_position(d, r, Placement::parse("before-first")) == first + 1);
  CHECK(macros::resolve_position(d, r, Placement::parse("after-first")) == first + 2);
  CHECK_THROWS_AS(macros::resolve_position(d, r, Placement::parse(std::to_string(n + 2))), InputError);
  CHECK_THROWS_AS(Placement::parse("middle"), InputError);
  CHECK_THROWS_AS(Placement::parse("between:0"), InputError);
  for (const char* text : {"top", "end", "before-first", "after-first", "between:2", "4"})
    CHECK(Placement::parse(text).to_string() == text);

  auto placed = macros::place(d, r, Placement::parse("between:1"));
  CHECK(op_names(placed)[3] == "unload-drop");
  CHECK_THROWS_AS(macros::place(d, r, Placement::parse("between:" + std::to_string(macros::between_slots(d, r) + 1))),
                  InputError);
}

TEST_CASE("every position yields a distinct model that removal undoes") {
  for (const auto& [dn, rn] : std::vector<std::pair<std::string, std::string>>{
           {"blocksworld", "blocksworld-unstack-putdown"}, {"depots", "depots-unload-drop"}}) {
    auto d = ts::domain(dn);
    auto r = ts::recipe(rn);
    auto macro = macros::compose_chain(r, d);
    auto models = macros::enumerate_positions(d, macro);
    REQUIRE(models.size() == d.operators.size() + 1);
    for (std::size_t i = 0; i < models.size(); ++i) {
      CHECK(*models[i].operator_index(macro.name) == i);
      auto back = macros::remove_operator(models[i], macro.name);
      CHECK(back == d);
      CHECK(pddl::print_domain(back) == pddl::print_domain(d));
      for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(models[i] == models[j]);
    }
  }
}

TEST_CASE("placing several macros resolves against the growing model") {
  auto d = ts::domain("blocksworld");
  auto r1 = ts::recipe("blocksworld-unstack-putdown");
  macros::MacroRecipe r2;
  r2.macro_name = "pick-stack";
  r2.steps.push_back({"pick-up", {{"?x", "a"}}});
  r2.steps.push_back({"stack", {{"?x", "a"}, {"?y", "b"}}});
  auto m = macros::place_all(d, {{r1, Placement::parse("top")}, {r2, Placement::parse("top")}});
  CHECK(op_names(m)[0] == "pick-stack");
  CHECK(op_names(m)[1] == r1.resolved_name());
  CHECK_THROWS_AS(macros::place_all(d, {{r1, Placement::parse("top")}, {r1, Placement::parse("end")}}), InputError);
}

TEST_CASE("recipes round-trip through JSON") {
  auto r = ts::recipe("satellite-calibrate-turn-take-turn");
  auto back = macros::recipe_from_json(macros::to_json(r));
  CHECK(back.resolved_name() == r.resolved_name());
  REQUIRE(back.steps.size() == r.steps.size());
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    CHECK(back.steps[i].op == r.steps[i].op);
    auto a = back.steps[i].bind;
    auto b = r.steps[i].bind;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
  macros::MacroRecipe unnamed;
  unnamed.steps = {{"unstack", {}}, {"put-down", {}}};
  CHECK(unnamed.resolved_name() == "m-unstack-put-down");
}
