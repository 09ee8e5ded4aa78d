#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccsw/strategy.hpp"
#include "json.hpp"

namespace ccsw {

// A position: some channels (numbered 0..channels-1) and a list of players,
// each knowing an ordered tuple of channels. Tuple length = the player's
// arity; tuple entries are channel ids. Wherever a move mentions a tuple
// position it is 1-based, matching In/Out move indices.
struct Position {
  int channels = 0;
  std::vector<std::vector<int>> players;
};

// One event of a closed-world run. Players are named by avatar id: the
// initial players are avatars 0..p-1, and every event allocates fresh ids
// for the avatars it creates, in a fixed order (fork: left then right;
// sync: sender continuation then receiver continuation).
struct ClosedWorldMove {
  enum class Kind { Fork, Tick, Nu, Sync } kind = Kind::Fork;
  int player = -1;        // acting avatar (sender for Sync)
  int senderIndex = 0;    // 1-based tuple position (Sync only)
  int receiver = -1;      // receiving avatar (Sync only)
  int receiverIndex = 0;  // 1-based tuple position (Sync only)

  static ClosedWorldMove fork(int p) { return {Kind::Fork, p, 0, -1, 0}; }
  static ClosedWorldMove tick(int p) { return {Kind::Tick, p, 0, -1, 0}; }
  static ClosedWorldMove nu(int p) { return {Kind::Nu, p, 0, -1, 0}; }
  static ClosedWorldMove sync(int p, int i, int q, int j) { return {Kind::Sync, p, i, q, j}; }
  bool operator==(const ClosedWorldMove&) const = default;
};

struct Run {
  Position start;
  std::vector<ClosedWorldMove> moves;
};

// Every avatar's causal history, arranged by the prefix order. Node index ==
// avatar id; roots are the initial players.
struct PrefixForest {
  struct Node {
    int avatar = -1;
    int parent = -1;              // -1 for initial players
    BasicMove fromParent{};       // meaningless at roots
    std::vector<int> tuple;       // channels this avatar knows
    std::vector<int> children;
    bool alive = true;            // not consumed by any later event
  };
  std::vector<Node> nodes;
  std::vector<int> roots;
  int finalChannels = 0;
};

// The per-view decomposition of one closed-world move: which basic move each
// created avatar sees, paired with that avatar's id.
std::vector<std::pair<BasicMove, int>> viewDecomposition(const Run& r, size_t eventIndex);

// Validates the run (liveness of consumed avatars, tuple/channel sanity,
// matching sync channels) and builds the forest. Throws std::runtime_error
// on an invalid run.
PrefixForest viewsOf(const Run& r);

// The view of one avatar: basic moves from its initial ancestor down.
ViewPath viewOf(const PrefixForest& forest, int avatar);

// Number of compatible families of strategy threads over the run's prefix
// forest: for each initial player an assigned strategy root, for each forest
// node a choice of state of the owning player's strategy after that view,
// restriction-compatible along prefixes. Computed by the product/sum formula
// over the forest.
long long globalStates(const StrategySystem& sys, const std::vector<NodeRef>& assign,
                       const Run& r);

nlohmann::json runToJson(const Run& r);
Run runFromJson(const nlohmann::json& j);
std::string forestToDot(const PrefixForest& forest);

// ---------------------------------------------------------------------------
// Tabulated right Kan extension on a finite poset of views and plays.
//
// Objects carry a name, a view/play flag and an ordinal (a set size): for
// views the given value, for plays the claimed one. `leq` lists generating
// order pairs (lower, upper); the reflexive-transitive closure is taken.
// For every pair of distinct comparable views u <= v a restriction map
// F(v) -> F(u) must be supplied as a table of length value(v) with entries
// in [0, value(u)). The extension computes, at each play, the number of
// compatible families over the views below it and compares with the claim.

struct TabulatedPoset {
  struct Object {
    std::string name;
    bool isPlay = false;
    long long value = 0;
  };
  std::vector<Object> objects;
  std::vector<std::pair<int, int>> leq;
  std::map<std::pair<int, int>, std::vector<int>> maps;  // (lower, upper) -> table
};

struct KanOutcome {
  struct PlayValue {
    int object = -1;
    long long claimed = 0;
    long long computed = 0;
    bool innocent = false;
  };
  std::vector<PlayValue> plays;
  bool consistent = true;  // claimed == computed everywhere
};

KanOutcome kanExtendTabulated(const TabulatedPoset& poset);

}  // namespace ccsw
