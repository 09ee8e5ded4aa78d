#include "ccsw/plays.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ccsw {

namespace {

struct RunWalk {
  // Avatar bookkeeping shared by viewsOf and viewDecomposition.
  PrefixForest forest;

  explicit RunWalk(const Run& r) {
    const Position& p = r.start;
    forest.finalChannels = p.channels;
    for (size_t i = 0; i < p.players.size(); i++) {
      for (int c : p.players[i]) {
        if (c < 0 || c >= p.channels) {
          throw std::runtime_error("player tuple mentions channel " + std::to_string(c) +
                                   " outside the position");
        }
      }
      PrefixForest::Node n;
      n.avatar = static_cast<int>(i);
      n.tuple = p.players[i];
      forest.nodes.push_back(std::move(n));
      forest.roots.push_back(static_cast<int>(i));
    }
    for (size_t e = 0; e < r.moves.size(); e++) apply(r.moves[e], e);
  }

  PrefixForest::Node& alive(int avatar, size_t eventIndex) {
    if (avatar < 0 || avatar >= static_cast<int>(forest.nodes.size())) {
      throw std::runtime_error("event " + std::to_string(eventIndex) + " names avatar " +
                               std::to_string(avatar) + " which does not exist yet");
    }
    PrefixForest::Node& n = forest.nodes[static_cast<size_t>(avatar)];
    if (!n.alive) {
      throw std::runtime_error("event " + std::to_string(eventIndex) + " consumes avatar " +
                               std::to_string(avatar) + " twice");
    }
    return n;
  }

  int spawn(int parent, BasicMove via, std::vector<int> tuple) {
    PrefixForest::Node n;
    n.avatar = static_cast<int>(forest.nodes.size());
    n.parent = parent;
    n.fromParent = via;
    n.tuple = std::move(tuple);
    forest.nodes[static_cast<size_t>(parent)].children.push_back(n.avatar);
    forest.nodes.push_back(std::move(n));
    return forest.nodes.back().avatar;
  }

  void apply(const ClosedWorldMove& m, size_t e) {
    switch (m.kind) {
      case ClosedWorldMove::Kind::Fork: {
        PrefixForest::Node& p = alive(m.player, e);
        p.alive = false;
        std::vector<int> t = p.tuple;
        spawn(m.player, {MoveKind::ForkL, 0}, t);
        spawn(m.player, {MoveKind::ForkR, 0}, t);
        return;
      }
      case ClosedWorldMove::Kind::Tick: {
        PrefixForest::Node& p = alive(m.player, e);
        p.alive = false;
        spawn(m.player, {MoveKind::Tick, 0}, p.tuple);
        return;
      }
      case ClosedWorldMove::Kind::Nu: {
        PrefixForest::Node& p = alive(m.player, e);
        p.alive = false;
        std::vector<int> t = p.tuple;
        t.push_back(forest.finalChannels++);
        spawn(m.player, {MoveKind::Nu, 0}, std::move(t));
        return;
      }
      case ClosedWorldMove::Kind::Sync: {
        if (m.player == m.receiver) {
          throw std::runtime_error("event " + std::to_string(e) +
                                   " synchronises an avatar with itself");
        }
        PrefixForest::Node& s = alive(m.player, e);
        PrefixForest::Node& rv = alive(m.receiver, e);
        int i = m.senderIndex, j = m.receiverIndex;
        if (i < 1 || i > static_cast<int>(s.tuple.size()) || j < 1 ||
            j > static_cast<int>(rv.tuple.size())) {
          throw std::runtime_error("event " + std::to_string(e) + " uses a tuple index out of range");
        }
        if (s.tuple[static_cast<size_t>(i - 1)] != rv.tuple[static_cast<size_t>(j - 1)]) {
          throw std::runtime_error("event " + std::to_string(e) +
                                   " synchronises two different channels");
        }
        s.alive = false;
        rv.alive = false;
        std::vector<int> st = s.tuple, rt = rv.tuple;
        spawn(m.player, {MoveKind::Out, i}, std::move(st));
        spawn(m.receiver, {MoveKind::In, j}, std::move(rt));
        return;
      }
    }
  }
};

}  // namespace

std::vector<std::pair<BasicMove, int>> viewDecomposition(const Run& r, size_t eventIndex) {
  if (eventIndex >= r.moves.size()) throw std::runtime_error("event index out of range");
  RunWalk walk(r);  // validates and assigns avatar ids for the whole run
  // Created avatars are allocated contiguously per event; recover the ids by
  // replaying the allocation count up to this event.
  int next = static_cast<int>(r.start.players.size());
  auto createdBy = [](const ClosedWorldMove& m) {
    return m.kind == ClosedWorldMove::Kind::Tick || m.kind == ClosedWorldMove::Kind::Nu ? 1 : 2;
  };
  for (size_t e = 0; e < eventIndex; e++) next += createdBy(r.moves[e]);
  const ClosedWorldMove& m = r.moves[eventIndex];
  switch (m.kind) {
    case ClosedWorldMove::Kind::Fork:
      return {{{MoveKind::ForkL, 0}, next}, {{MoveKind::ForkR, 0}, next + 1}};
    case ClosedWorldMove::Kind::Tick:
      return {{{MoveKind::Tick, 0}, next}};
    case ClosedWorldMove::Kind::Nu:
      return {{{MoveKind::Nu, 0}, next}};
    case ClosedWorldMove::Kind::Sync:
      return {{{MoveKind::Out, m.senderIndex}, next}, {{MoveKind::In, m.receiverIndex}, next + 1}};
  }
  return {};
}

PrefixForest viewsOf(const Run& r) { return RunWalk(r).forest; }

ViewPath viewOf(const PrefixForest& forest, int avatar) {
  if (avatar < 0 || avatar >= static_cast<int>(forest.nodes.size())) {
    throw std::runtime_error("no such avatar");
  }
  std::vector<BasicMove> rev;
  int cur = avatar;
  while (forest.nodes[static_cast<size_t>(cur)].parent >= 0) {
    rev.push_back(forest.nodes[static_cast<size_t>(cur)].fromParent);
    cur = forest.nodes[static_cast<size_t>(cur)].parent;
  }
  ViewPath v;
  v.arity = static_cast<int>(forest.nodes[static_cast<size_t>(cur)].tuple.size());
  v.moves.assign(rev.rbegin(), rev.rend());
  return v;
}

long long globalStates(const StrategySystem& sys, const std::vector<NodeRef>& assign,
                       const Run& r) {
  PrefixForest forest = viewsOf(r);
  if (assign.size() != forest.roots.size()) {
    throw std::runtime_error("one strategy root per initial player required");
  }
  for (size_t i = 0; i < assign.size(); i++) {
    int want = static_cast<int>(forest.nodes[static_cast<size_t>(forest.roots[i])].tuple.size());
    if (sys.at(assign[i]).arity != want) {
      throw std::runtime_error("strategy arity does not match player " + std::to_string(i));
    }
  }
  // Compatible families: at each forest node a state of the owning strategy
  // after that view, each child constrained to a state of the parent state's
  // successor along the child's basic move. One sum/product sweep suffices.
  std::function<long long(NodeRef, int)> f = [&](NodeRef ref, int node) -> long long {
    const StrategyNode& nd = sys.at(ref);
    const PrefixForest::Node& fn = forest.nodes[static_cast<size_t>(node)];
    long long total = 0;
    for (const MoveTable& z : nd.states) {
      long long prod = 1;
      for (int c : fn.children) {
        const PrefixForest::Node& cn = forest.nodes[static_cast<size_t>(c)];
        prod *= f(z.get(cn.fromParent), c);
        if (prod == 0) break;
      }
      total += prod;
    }
    return total;
  };
  long long answer = 1;
  for (size_t i = 0; i < assign.size(); i++) {
    answer *= f(assign[i], forest.roots[i]);
    if (answer == 0) return 0;
  }
  return answer;
}

nlohmann::json runToJson(const Run& r) {
  nlohmann::json j;
  j["start"]["channels"] = r.start.channels;
  j["start"]["players"] = r.start.players;
  nlohmann::json moves = nlohmann::json::array();
  for (const ClosedWorldMove& m : r.moves) {
    nlohmann::json e;
    switch (m.kind) {
      case ClosedWorldMove::Kind::Fork:
        e["kind"] = "fork";
        e["player"] = m.player;
        break;
      case ClosedWorldMove::Kind::Tick:
        e["kind"] = "tick";
        e["player"] = m.player;
        break;
      case ClosedWorldMove::Kind::Nu:
        e["kind"] = "nu";
        e["player"] = m.player;
        break;
      case ClosedWorldMove::Kind::Sync:
        e["kind"] = "sync";
        e["sender"] = m.player;
        e["senderIndex"] = m.senderIndex;
        e["receiver"] = m.receiver;
        e["receiverIndex"] = m.receiverIndex;
        break;
    }
    moves.push_back(std::move(e));
  }
  j["moves"] = std::move(moves);
  return j;
}

Run runFromJson(const nlohmann::json& j) {
  Run r;
  r.start.channels = j.at("start").at("channels").get<int>();
  r.start.players = j.at("start").at("players").get<std::vector<std::vector<int>>>();
  for (const auto& e : j.at("moves")) {
    std::string kind = e.at("kind").get<std::string>();
    if (kind == "fork") {
      r.moves.push_back(ClosedWorldMove::fork(e.at("player").get<int>()));
    } else if (kind == "tick") {
      r.moves.push_back(ClosedWorldMove::tick(e.at("player").get<int>()));
    } else if (kind == "nu") {
      r.moves.push_back(ClosedWorldMove::nu(e.at("player").get<int>()));
    } else if (kind == "sync") {
      r.moves.push_back(ClosedWorldMove::sync(e.at("sender").get<int>(),
                                              e.at("senderIndex").get<int>(),
                                              e.at("receiver").get<int>(),
                                              e.at("receiverIndex").get<int>()));
    } else {
      throw std::runtime_error("unknown move kind '" + kind + "'");
    }
  }
  return r;
}

std::string forestToDot(const PrefixForest& forest) {
  std::ostringstream out;
  out << "digraph views {\n  rankdir=TB;\n  node [shape=box];\n";
  for (const auto& n : forest.nodes) {
    out << "  a" << n.avatar << " [label=\"avatar " << n.avatar;
    if (!n.alive) out << " (consumed)";
    out << "\\ntuple(";
    for (size_t i = 0; i < n.tuple.size(); i++) out << (i ? "," : "") << n.tuple[i];
    out << ")\"];\n";
  }
  for (const auto& n : forest.nodes) {
    if (n.parent >= 0) {
      out << "  a" << n.parent << " -> a" << n.avatar << " [label=\"" << moveName(n.fromParent)
          << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Tabulated Kan extension

KanOutcome kanExtendTabulated(const TabulatedPoset& poset) {
  int n = static_cast<int>(poset.objects.size());
  std::vector<std::vector<bool>> le(static_cast<size_t>(n),
                                    std::vector<bool>(static_cast<size_t>(n), false));
  for (int i = 0; i < n; i++) le[static_cast<size_t>(i)][static_cast<size_t>(i)] = true;
  for (auto& [lo, hi] : poset.leq) {
    if (lo < 0 || lo >= n || hi < 0 || hi >= n) throw std::runtime_error("order pair out of range");
    le[static_cast<size_t>(lo)][static_cast<size_t>(hi)] = true;
  }
  for (int k = 0; k < n; k++) {
    for (int i = 0; i < n; i++) {
      for (int j = 0; j < n; j++) {
        if (le[static_cast<size_t>(i)][static_cast<size_t>(k)] &&
            le[static_cast<size_t>(k)][static_cast<size_t>(j)]) {
          le[static_cast<size_t>(i)][static_cast<size_t>(j)] = true;
        }
      }
    }
  }
  for (int i = 0; i < n; i++) {
    for (int j = 0; j < n; j++) {
      if (i != j && le[static_cast<size_t>(i)][static_cast<size_t>(j)] &&
          le[static_cast<size_t>(j)][static_cast<size_t>(i)]) {
        throw std::runtime_error("order is not antisymmetric: " + poset.objects[static_cast<size_t>(i)].name +
                                 " and " + poset.objects[static_cast<size_t>(j)].name);
      }
    }
  }

  auto isView = [&](int i) { return !poset.objects[static_cast<size_t>(i)].isPlay; };
  auto mapFor = [&](int lo, int hi) -> const std::vector<int>* {
    auto it = poset.maps.find({lo, hi});
    return it == poset.maps.end() ? nullptr : &it->second;
  };
  auto applyMap = [&](int lo, int hi, int x) -> int {
    if (lo == hi) return x;
    const std::vector<int>* m = mapFor(lo, hi);
    if (!m) {
      throw std::runtime_error("missing restriction map " + poset.objects[static_cast<size_t>(hi)].name +
                               " -> " + poset.objects[static_cast<size_t>(lo)].name);
    }
    return (*m)[static_cast<size_t>(x)];
  };

  // Validate the supplied maps: well-typed tables, and functorial on every
  // comparable chain of three views.
  for (auto& [key, table] : poset.maps) {
    auto [lo, hi] = key;
    if (!le[static_cast<size_t>(lo)][static_cast<size_t>(hi)] || lo == hi) {
      throw std::runtime_error("restriction map given for an unordered pair");
    }
    if (!isView(lo) || !isView(hi)) throw std::runtime_error("restriction maps live on views only");
    long long loV = poset.objects[static_cast<size_t>(lo)].value;
    long long hiV = poset.objects[static_cast<size_t>(hi)].value;
    if (static_cast<long long>(table.size()) != hiV) {
      throw std::runtime_error("restriction map has wrong domain size");
    }
    for (int v : table) {
      if (v < 0 || v >= loV) throw std::runtime_error("restriction map value out of range");
    }
  }
  for (int u = 0; u < n; u++) {
    for (int v = 0; v < n; v++) {
      for (int w = 0; w < n; w++) {
        if (u == v || v == w || u == w) continue;
        if (!isView(u) || !isView(v) || !isView(w)) continue;
        if (!le[static_cast<size_t>(u)][static_cast<size_t>(v)] ||
            !le[static_cast<size_t>(v)][static_cast<size_t>(w)]) {
          continue;
        }
        for (int x = 0; x < poset.objects[static_cast<size_t>(w)].value; x++) {
          if (applyMap(u, w, x) != applyMap(u, v, applyMap(v, w, x))) {
            throw std::runtime_error("restriction maps do not compose between " +
                                     poset.objects[static_cast<size_t>(w)].name + " and " +
                                     poset.objects[static_cast<size_t>(u)].name);
          }
        }
      }
    }
  }

  KanOutcome out;
  for (int p = 0; p < n; p++) {
    if (isView(p)) continue;
    std::vector<int> below;
    for (int v = 0; v < n; v++) {
      if (v != p && isView(v) && le[static_cast<size_t>(v)][static_cast<size_t>(p)]) {
        below.push_back(v);
      }
    }
    // Count compatible families by assigning elements view by view and
    // checking every comparable pair already assigned.
    long long computed = 0;
    std::vector<int> chosen(below.size(), 0);
    std::function<void(size_t)> assign = [&](size_t k) {
      if (k == below.size()) {
        computed++;
        return;
      }
      int v = below[k];
      for (int x = 0; x < poset.objects[static_cast<size_t>(v)].value; x++) {
        bool ok = true;
        for (size_t k2 = 0; ok && k2 < k; k2++) {
          int u = below[k2];
          if (le[static_cast<size_t>(u)][static_cast<size_t>(v)] &&
              applyMap(u, v, x) != chosen[k2]) {
            ok = false;
          }
          if (le[static_cast<size_t>(v)][static_cast<size_t>(u)] &&
              applyMap(v, u, chosen[k2]) != x) {
            ok = false;
          }
        }
        if (!ok) continue;
        chosen[k] = x;
        assign(k + 1);
      }
    };
    assign(0);
    KanOutcome::PlayValue pv;
    pv.object = p;
    pv.claimed = poset.objects[static_cast<size_t>(p)].value;
    pv.computed = computed;
    pv.innocent = pv.claimed == pv.computed;
    if (!pv.innocent) out.consistent = false;
    out.plays.push_back(pv);
  }
  return out;
}

}  // namespace ccsw
