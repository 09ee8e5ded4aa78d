#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ccsw/syntax.hpp"
#include "json.hpp"

namespace ccsw {

// One move a single player can perform at context arity n. In and Out carry a
// 1-based channel index into the player's tuple. Every move preserves the
// arity except Nu, which extends it by one.
enum class MoveKind : uint8_t { ForkL, ForkR, Tick, Nu, In, Out };

struct BasicMove {
  MoveKind kind = MoveKind::Tick;
  int index = 0;  // 1-based, meaningful for In/Out only
  bool operator==(const BasicMove&) const = default;
  auto operator<=>(const BasicMove&) const = default;
};

// The 2n+4 moves available at arity n, in the canonical enumeration order:
// ForkL, ForkR, Tick, Nu, In(1..n), Out(1..n).
std::vector<BasicMove> basicMoves(int arity);

// Arity of the position a move leads to.
int targetArity(int arity, const BasicMove& m);

std::string moveName(const BasicMove& m);
BasicMove moveFromName(const std::string& name);

using NodeRef = int32_t;

// A state of a node: the total table taking each basic move to the node the
// player continues as. Successor vectors are indexed by channel (0-based
// storage, 1-based in BasicMove).
struct MoveTable {
  NodeRef forkL = -1, forkR = -1, tick = -1, nu = -1;
  std::vector<NodeRef> ins, outs;

  NodeRef get(const BasicMove& m) const;
  void set(const BasicMove& m, NodeRef target);
  bool operator==(const MoveTable&) const = default;
};

struct StrategyNode {
  int arity = 0;
  bool hole = false;  // truncation marker; a hole compares equal to anything
  std::vector<MoveTable> states;
};

// A finite system of equations presenting a strategy: a node is a finite
// ordered family of states, each state a total move table. The denoted
// behaviour is the infinite unfolding from a root node.
struct StrategySystem {
  std::vector<StrategyNode> nodes;

  NodeRef add(StrategyNode n);
  const StrategyNode& at(NodeRef r) const;
  int stateCount(NodeRef r) const;

  // Canonical empty node (zero states) per arity, created on demand.
  NodeRef empty(int arity);
  // Fresh state with every move mapped to the empty node of the right arity.
  MoveTable blankTable(int arity);

 private:
  std::map<int, NodeRef> emptyByArity_;
};

struct Strategy {
  StrategySystem sys;
  NodeRef root = -1;
};

// The strategy with no states at all (denotes no behaviour, not even idling).
Strategy emptyStrategy(int arity);

// One-state strategies and sums inside a system under construction.
NodeRef addSingleton(StrategySystem& sys, int arity, MoveTable state);
// Concatenates the argument nodes' state lists; empty list gives the empty
// node, a single node is returned unchanged.
NodeRef addSum(StrategySystem& sys, int arity, const std::vector<NodeRef>& parts);

// A view: a source arity and a composable move sequence.
struct ViewPath {
  int arity = 0;
  std::vector<BasicMove> moves;
};

bool validView(const ViewPath& v);

// Number of threads of the strategy over the given view: complete sequences
// of state choices, one at the root and one after each move. Counted by
// explicit enumeration.
long long evaluate(const StrategySystem& sys, NodeRef root, const ViewPath& view);

// The CCS translation. The program is check()ed internally. Call sites become
// shared nodes keyed by definition, argument indices and arity; recursion
// through zero moves denotes the empty strategy. Throws SyntaxError if the
// equation system does not close at finite arity.
Strategy translateOpen(const GlobalProcess& g);

// Finite approximant translation: the main process derived (k+1)*(i+1) times
// (k = number of definitions), remaining calls denoting the empty strategy.
// Agrees with translateOpen on all views of length <= i.
Strategy translateApproximant(const GlobalProcess& g, int i);

// Cuts the unfolding at the given move depth, replacing deeper nodes by hole
// markers. Node identifiers in the result are breadth-first from the root, so
// equal truncations serialize identically.
Strategy truncate(const StrategySystem& sys, NodeRef root, int depth);

// Equality of unfoldings up to the given move depth; holes compare equal to
// anything. Depth 0 compares arity and root state count only.
bool equalUpToDepth(const StrategySystem& sa, NodeRef a, const StrategySystem& sb, NodeRef b,
                    int depth);

// Equality of the full (regular) unfoldings; holes compare equal only to
// holes.
bool regularEqual(const StrategySystem& sa, NodeRef a, const StrategySystem& sb, NodeRef b);

// Serialization. Node ids are reindexed breadth-first from the root; every
// state lists all 2n+4 moves.
nlohmann::json toJson(const StrategySystem& sys, NodeRef root);
Strategy strategyFromJson(const nlohmann::json& j);

}  // namespace ccsw
