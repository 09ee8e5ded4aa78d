#pragma once

#include <string>
#include <vector>

#include "ccsw/strategy.hpp"
#include "ccsw/syntax.hpp"
#include "json.hpp"

namespace ccsw {

// A whole closed world: one strategy system plus the initial position. Each
// player knows an ordered tuple of channels (ids into channelNames for the
// initial channels; fresh channels created by nu get larger ids).
struct GlobalStrategy {
  StrategySystem sys;
  std::vector<std::string> channelNames;
  struct GPlayer {
    std::vector<int> tuple;
    NodeRef root = -1;
  };
  std::vector<GPlayer> players;
};

// One player as a single-player world over the process's declared names.
GlobalStrategy makeGlobal(const GlobalProcess& g);

// Put two worlds side by side, identifying channels that share a name.
GlobalStrategy compose(const GlobalStrategy& a, const GlobalStrategy& b);

struct PlayerState {
  NodeRef node = -1;
  int state = 0;  // index into the node's state list
  std::vector<int> tuple;
  bool operator==(const PlayerState&) const = default;
};

struct GlobalState {
  int channels = 0;
  std::vector<std::string> channelLabels;  // display only, not part of identity
  std::vector<PlayerState> players;
  bool tickSeen = false;
};

struct WorldMove {
  enum class Kind { Fork, Tick, Nu, Sync } kind = Kind::Fork;
  int p = -1;  // acting player slot (sender for Sync)
  int i = 0;   // 1-based sender tuple position (Sync)
  int q = -1;  // receiver slot (Sync)
  int j = 0;   // 1-based receiver tuple position (Sync)
  bool operator==(const WorldMove&) const = default;
};

// Slots the move consumes: {p} for fork/tick/nu, {p,q} for sync.
std::vector<int> moveParticipants(const WorldMove& m);
std::string moveLabel(const WorldMove& m, const GlobalState* at = nullptr);
nlohmann::json moveToJson(const WorldMove& m);
WorldMove moveFromJson(const nlohmann::json& j);

// All combinations of initial state choices, lexicographic in slot order.
// Empty when some player's root strategy has no states at all.
std::vector<GlobalState> initialRawStates(const GlobalStrategy& g);

// Enabled closed-world moves in canonical order: per slot fork, tick, nu;
// then syncs ordered by (sender, sender position, receiver, receiver
// position). A move is enabled when every avatar it would create lands on a
// node with at least one state.
std::vector<WorldMove> enabledMoves(const StrategySystem& sys, const GlobalState& s);

struct StepBranch {
  GlobalState next;
  std::vector<int> slotMap;     // source slot -> slot in next, -1 for participants
  std::vector<int> createdRaw;  // slots in next created by the move
};

// All outcomes of one move: branches over the created avatars' state
// choices, lexicographic in creation order.
std::vector<StepBranch> step(const StrategySystem& sys, const GlobalState& s, const WorldMove& m);

// Exact canonical form under position isomorphism: inert players (whose
// current state can never move again) are dropped, channels no player
// mentions are dropped, and the remainder is renamed canonically by colour
// refinement with individualization on channel classes.
struct CanonicalState {
  GlobalState rep;
  std::string key;
  std::vector<int> witness;         // raw slot -> canonical slot, -1 if dropped
  std::vector<int> channelWitness;  // raw channel -> canonical channel, -1 if dropped
};

CanonicalState canonicalize(const StrategySystem& sys, const GlobalState& s);

struct ExploreConfig {
  int maxStates = 20000;
  int maxDepth = 200;
  int threads = 0;  // 0 = honor CCSW_THREADS, else 1
  unsigned long long moveOrderSeed = 0;  // nonzero shuffles per-state move order (test hook)
};

struct Transition {
  int src = -1;
  int dst = -1;
  WorldMove move;
  bool success = false;       // the move is a tick
  std::vector<int> witness;   // src slot -> dst slot; -1 = participated or dropped
  std::vector<int> created;   // dst slots created by the move (inert drops omitted)
};

struct TransitionGraph {
  std::vector<GlobalState> states;  // canonical representatives
  std::vector<std::string> keys;
  std::vector<int> depth;
  std::vector<bool> expanded;
  std::vector<int> initial;
  std::vector<Transition> transitions;
  bool truncated = false;  // some state with enabled moves was left unexpanded
};

// Layered breadth-first exploration with canonical merging. Deterministic:
// the same graph (ids, transitions, json) regardless of thread count.
TransitionGraph explore(const GlobalStrategy& g, const ExploreConfig& cfg = {});

nlohmann::json graphToJson(const TransitionGraph& g);
std::string graphToDot(const TransitionGraph& g);

}  // namespace ccsw
