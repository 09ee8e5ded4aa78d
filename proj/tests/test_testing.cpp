#include "doctest.h"

#include <algorithm>
#include <set>

#include "ccsw/testing.hpp"

using namespace ccsw;

namespace {

const char* OMEGA = "names a. new c. rec w(c) = c!.0 | c?.w(c) in w(c)";
const char* OMEGA_ABAR = "names a. new c. rec w(c) = c!.0 | c?.w(c) in w(c) | a!.0";
const char* LOOPING = "names a. new b. rec x(a,b) = b!.0 | (b?.x(a,b) + a!.0) in x(a,b)";
const char* PROBE = "names a. a?.tick";

struct Fixture {
  GlobalStrategy world;
  TransitionGraph graph;
};

Fixture explored(const char* proc, const char* test, ExploreConfig cfg = {}) {
  Fixture f;
  f.world = compose(makeGlobal(parse(proc)), makeGlobal(parse(test)));
  f.graph = explore(f.world, cfg);
  return f;
}

// A lasso is only a counterexample if its frozen players jointly enable no
// move; recheck that directly against the world rules.
void recheckLasso(const Fixture& f, const CheckResult& r) {
  REQUIRE(r.witness.has_value());
  REQUIRE(r.witness->kind == TestWitness::Kind::UnfairLasso);
  const TestWitness& w = *r.witness;
  REQUIRE(w.cycle.size() >= 2);
  CHECK(w.cycle.front() == w.cycle.back());
  CHECK(w.path.back() == w.cycle.front());

  auto connected = [&](int u, int v) {
    for (const Transition& t : f.graph.transitions) {
      if (t.src == u && t.dst == v) return true;
    }
    return false;
  };
  for (size_t i = 0; i + 1 < w.path.size(); i++) CHECK(connected(w.path[i], w.path[i + 1]));
  for (size_t i = 0; i + 1 < w.cycle.size(); i++) CHECK(connected(w.cycle[i], w.cycle[i + 1]));

  std::set<int> frozen(w.frozen.begin(), w.frozen.end());
  const GlobalState& anchor = f.graph.states[w.cycle.front()];
  for (const WorldMove& m : enabledMoves(f.world.sys, anchor)) {
    bool within = true;
    for (int p : moveParticipants(m)) within &= frozen.count(p) > 0;
    CHECK(!within);
  }
}

}  // namespace

TEST_CASE("fair: omega never reaches success") {
  Fixture f = explored(OMEGA, PROBE);
  CheckResult r = checkFair(f.graph);
  CHECK(r.verdict == Verdict::Fail);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->kind == TestWitness::Kind::DeadState);
  CHECK(r.witness->path.front() == 0);
}

TEST_CASE("fair: omega|abar can always still answer") {
  Fixture f = explored(OMEGA_ABAR, PROBE);
  CHECK(checkFair(f.graph).verdict == Verdict::Pass);
}

TEST_CASE("fair: the looping choice keeps the exit reachable") {
  Fixture f = explored(LOOPING, PROBE);
  CHECK(checkFair(f.graph).verdict == Verdict::Pass);
}

TEST_CASE("must: omega fails on an unfair lasso freezing the probe") {
  Fixture f = explored(OMEGA, PROBE);
  CheckResult r = checkMust(f.graph, f.world.sys, 12);
  REQUIRE(r.verdict == Verdict::Fail);
  recheckLasso(f, r);
  // the frozen set is exactly the probe's avatar
  REQUIRE(r.witness->frozen.size() == 1);
  int slot = r.witness->frozen[0];
  const GlobalState& anchor = f.graph.states[r.witness->cycle.front()];
  CHECK(anchor.players[slot].node == f.world.players[1].root);
}

TEST_CASE("must: omega|abar passes, certified without a hunt") {
  Fixture f = explored(OMEGA_ABAR, PROBE);
  CheckResult r = checkMust(f.graph, f.world.sys, 12);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.note.empty());
}

TEST_CASE("must: the looping choice fails although fair passes") {
  Fixture f = explored(LOOPING, PROBE);
  CheckResult r = checkMust(f.graph, f.world.sys, 12);
  REQUIRE(r.verdict == Verdict::Fail);
  recheckLasso(f, r);
  REQUIRE(r.witness->frozen.size() == 1);
  const GlobalState& anchor = f.graph.states[r.witness->cycle.front()];
  CHECK(anchor.players[r.witness->frozen[0]].node == f.world.players[1].root);
}

TEST_CASE("must: a graph without any tick also fails fair") {
  // no success transition anywhere forces both verdicts down together
  Fixture f = explored(OMEGA, PROBE);
  bool anyTick = false;
  for (const Transition& t : f.graph.transitions) anyTick |= t.success;
  REQUIRE(!anyTick);
  CHECK(checkFair(f.graph).verdict == Verdict::Fail);
  CHECK(checkMust(f.graph, f.world.sys, 12).verdict == Verdict::Fail);
}

TEST_CASE("must: stuck states are reported with a path") {
  Fixture f = explored("names a. a?.0", "names b. b?.0");
  CheckResult r = checkMust(f.graph, f.world.sys, 12);
  REQUIRE(r.verdict == Verdict::Fail);
  CHECK(r.witness->kind == TestWitness::Kind::StuckRun);
  CHECK(r.witness->path.size() == 1);
  CHECK(checkFair(f.graph).verdict == Verdict::Fail);
}

TEST_CASE("verdicts on a lone tick") {
  Fixture f = explored("names a. tick", "names b. 0");
  CHECK(checkFair(f.graph).verdict == Verdict::Pass);
  CHECK(checkMust(f.graph, f.world.sys, 12).verdict == Verdict::Pass);
}

TEST_CASE("the empty strategy passes vacuously") {
  Fixture f = explored("names a. rec x(a) = x(a) in x(a)", PROBE);
  CHECK(f.graph.states.empty());
  CHECK(checkFair(f.graph).verdict == Verdict::Pass);
  CHECK(checkMust(f.graph, f.world.sys, 12).verdict == Verdict::Pass);
}

TEST_CASE("must: a too-small cycle bound is reported as Unknown") {
  Fixture f = explored(LOOPING, PROBE);
  CheckResult r1 = checkMust(f.graph, f.world.sys, 1);
  CHECK(r1.verdict == Verdict::Unknown);
  CHECK(r1.note == "cycle bound below component size");
  CheckResult r2 = checkMust(f.graph, f.world.sys, 2);
  CHECK(r2.verdict == Verdict::Fail);
}

TEST_CASE("truncated graphs never produce unearned verdicts") {
  ExploreConfig tiny;
  tiny.maxStates = 2;
  Fixture f = explored(OMEGA_ABAR, PROBE, tiny);
  REQUIRE(f.graph.truncated);
  CHECK(checkFair(f.graph).verdict == Verdict::Unknown);
  CHECK(checkMust(f.graph, f.world.sys, 12).verdict == Verdict::Unknown);
}

TEST_CASE("checkResultToJson carries the witness") {
  Fixture f = explored(OMEGA, PROBE);
  nlohmann::json j = checkResultToJson(checkMust(f.graph, f.world.sys, 12));
  CHECK(j["criterion"] == "must");
  CHECK(j["verdict"] == "Fail");
  CHECK(j["witness"]["kind"] == "unfairLasso");
  CHECK(j["witness"]["frozen"].size() == 1);
}

// ---------------------------------------------------------------------------
// Classical sanity

TEST_CASE("classicLts: omega folds back to a finite loop") {
  Lts l = classicLts(parse(OMEGA));
  CHECK(!l.truncated);
  CHECK(l.states.size() <= 4);
  bool hasTau = false;
  for (const Lts::Edge& e : l.edges) hasTau |= e.tau;
  CHECK(hasTau);
}

TEST_CASE("classicMust/classicFair: omega fails both") {
  Lts l = classicLts(parse(OMEGA));
  CHECK(classicMust(l).verdict == Verdict::Fail);
  CHECK(classicMust(l).witness->kind == TestWitness::Kind::UnfairLasso);
  CHECK(classicFair(l).verdict == Verdict::Fail);
}

TEST_CASE("classic verdicts split on omega|abar with the probe") {
  GlobalProcess combined = combineForTest(parse(OMEGA_ABAR), parse(PROBE));
  Lts l = classicLts(combined);
  CHECK(classicMust(l).verdict == Verdict::Fail);
  CHECK(classicFair(l).verdict == Verdict::Pass);
}

TEST_CASE("classic: the tau-loop masks omega|abar for must but not fair") {
  // the pair omega vs omega|abar is equated by classic must testing
  GlobalProcess a = combineForTest(parse(OMEGA), parse(PROBE));
  GlobalProcess b = combineForTest(parse(OMEGA_ABAR), parse(PROBE));
  CHECK(classicMust(classicLts(a)).verdict == Verdict::Fail);
  CHECK(classicMust(classicLts(b)).verdict == Verdict::Fail);
  CHECK(classicFair(classicLts(a)).verdict == Verdict::Fail);
  CHECK(classicFair(classicLts(b)).verdict == Verdict::Pass);
}

TEST_CASE("classic: a lone tick passes, a stuck input fails") {
  Lts ok = classicLts(parse("names a. tick"));
  CHECK(classicMust(ok).verdict == Verdict::Pass);
  CHECK(classicFair(ok).verdict == Verdict::Pass);

  Lts stuck = classicLts(parse("names a. a?.0"));
  CheckResult m = classicMust(stuck);
  CHECK(m.verdict == Verdict::Fail);
  CHECK(m.witness->kind == TestWitness::Kind::StuckRun);
  CHECK(classicFair(stuck).verdict == Verdict::Fail);
}

TEST_CASE("classic: success reached immediately passes must") {
  Lts l = classicLts(combineForTest(parse("names a. a!.0"), parse(PROBE)));
  CHECK(classicMust(l).verdict == Verdict::Pass);
  CHECK(classicFair(l).verdict == Verdict::Pass);
}

TEST_CASE("classicLts: respects its state budget") {
  // unbounded unfolding: x(a) = a!.(x(a) | x(a)) grows without normal-form reuse
  Lts l = classicLts(parse("names a. rec x(a) = a!.(x(a) | x(a)) in x(a)"), 10);
  CHECK(l.truncated);
  CHECK(classicMust(l).verdict != Verdict::Pass);
}

TEST_CASE("combineForTest: renames clashing definitions apart") {
  GlobalProcess proc = parse("names a. rec x(a) = a!.x(a) in x(a)");
  GlobalProcess test = parse("names a. rec x(a) = a?.x(a) in x(a)");
  GlobalProcess combined = combineForTest(proc, test);
  REQUIRE(combined.defs.size() == 2);
  CHECK(combined.defs[0].var != combined.defs[1].var);
  CHECK(combined.names == std::vector<std::string>{"a"});
  CHECK_NOTHROW(check(combined));
  CHECK(combined.main->kind == OpenProcess::Kind::Par);
}

TEST_CASE("combineForTest: fresh variables dodge parameters too") {
  GlobalProcess proc = parse("names a. rec x(a) = a!.x(a) in x(a)");
  GlobalProcess test = parse("names a. rec q(x) = x?.q(x) in q(a)");
  GlobalProcess combined = combineForTest(proc, test);
  std::set<std::string> vars;
  for (const Definition& d : combined.defs) vars.insert(d.var);
  CHECK(!vars.count("x"));  // x is a parameter of the test's definition
  CHECK_NOTHROW(check(combined));
}

TEST_CASE("compare bundles all four verdicts") {
  CompareOutcome o = compare(parse(OMEGA_ABAR), parse(PROBE));
  CHECK(o.fair.verdict == Verdict::Pass);
  CHECK(o.must.verdict == Verdict::Pass);
  CHECK(o.classicFair.verdict == Verdict::Pass);
  CHECK(o.classicMust.verdict == Verdict::Fail);
  nlohmann::json j = compareToJson(o);
  CHECK(j["must"]["verdict"] == "Pass");
  CHECK(j["classicMust"]["verdict"] == "Fail");
}
