#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccsw/syntax.hpp"
#include "ccsw/world.hpp"
#include "json.hpp"

namespace ccsw {

enum class Verdict { Pass, Fail, Unknown };
enum class Criterion { Fair, Must, ClassicFair, ClassicMust };

std::string verdictName(Verdict v);
std::string criterionName(Criterion c);

struct TestWitness {
  enum class Kind { DeadState, StuckRun, UnfairLasso } kind = Kind::DeadState;
  int state = -1;           // dead/stuck state id (also path.back())
  std::vector<int> path;    // state ids from an initial state
  std::vector<int> cycle;   // lasso cycle, first == last == anchor
  std::vector<int> frozen;  // anchor player slots never consumed along the cycle
  std::string detail;       // classic checks: the offending term
};

struct CheckResult {
  Criterion criterion = Criterion::Fair;
  Verdict verdict = Verdict::Unknown;
  std::optional<TestWitness> witness;
  long long statesExplored = 0;
  bool truncated = false;
  std::string note;
};

nlohmann::json checkResultToJson(const CheckResult& r);

// Fair criterion on an explored world: every reachable state either already
// ticked or can still reach a tick. Fail carries a dead state; truncation
// downgrades would-be passes (and unprovable fails) to Unknown.
CheckResult checkFair(const TransitionGraph& g);

// Must criterion: every maximal run ticks. Finite maximal runs are stuck
// states; infinite ones are lassos whose frozen players jointly enable no
// move (an enabled move among players the cycle never consumes means the run
// can be extended, hence is not maximal). Tick-free SCCs are certified by a
// safe-set fixpoint where possible, otherwise hunted for counterexample
// cycles by bounded closed-walk search.
CheckResult checkMust(const TransitionGraph& g, const StrategySystem& sys, int cycleBound = 12);

// ---------------------------------------------------------------------------
// Classical interleaving semantics, for comparison.

struct Lts {
  std::vector<std::string> states;  // pretty-printed normal forms
  struct Edge {
    int src = -1;
    int dst = -1;
    std::string label;
    bool tau = false;
    bool tick = false;
  };
  std::vector<Edge> edges;
  int initial = 0;
  std::vector<bool> expanded;
  bool truncated = false;
};

Lts classicLts(const GlobalProcess& g, int maxStates = 5000);
nlohmann::json ltsToJson(const Lts& l);

// Classical testing verdicts. Executions are tau-step sequences; a state
// with a tick edge counts as success. Must: every maximal execution passes
// through a success state. Fair: from every state reachable without having
// passed success, success stays reachable.
CheckResult classicMust(const Lts& l);
CheckResult classicFair(const Lts& l);

// process | test with union channel names; definition variables are renamed
// apart when the two sides clash.
GlobalProcess combineForTest(const GlobalProcess& proc, const GlobalProcess& test);

struct CompareOutcome {
  CheckResult fair;
  CheckResult must;
  CheckResult classicFair;
  CheckResult classicMust;
};

CompareOutcome compare(const GlobalProcess& proc, const GlobalProcess& test,
                       const ExploreConfig& cfg = {}, int cycleBound = 12,
                       int classicMaxStates = 5000);
nlohmann::json compareToJson(const CompareOutcome& o);

}  // namespace ccsw
