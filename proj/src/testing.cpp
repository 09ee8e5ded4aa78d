#include "ccsw/testing.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ccsw {

std::string verdictName(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Unknown: return "Unknown";
  }
  return "";
}

std::string criterionName(Criterion c) {
  switch (c) {
    case Criterion::Fair: return "fair";
    case Criterion::Must: return "must";
    case Criterion::ClassicFair: return "classic-fair";
    case Criterion::ClassicMust: return "classic-must";
  }
  return "";
}

nlohmann::json checkResultToJson(const CheckResult& r) {
  nlohmann::json j;
  j["criterion"] = criterionName(r.criterion);
  j["verdict"] = verdictName(r.verdict);
  j["statesExplored"] = r.statesExplored;
  j["truncated"] = r.truncated;
  if (!r.note.empty()) j["note"] = r.note;
  if (r.witness) {
    nlohmann::json w;
    switch (r.witness->kind) {
      case TestWitness::Kind::DeadState: w["kind"] = "deadState"; break;
      case TestWitness::Kind::StuckRun: w["kind"] = "stuckRun"; break;
      case TestWitness::Kind::UnfairLasso: w["kind"] = "unfairLasso"; break;
    }
    if (r.witness->state >= 0) w["state"] = r.witness->state;
    w["path"] = r.witness->path;
    if (!r.witness->cycle.empty()) w["cycle"] = r.witness->cycle;
    if (!r.witness->frozen.empty()) w["frozen"] = r.witness->frozen;
    if (!r.witness->detail.empty()) w["detail"] = r.witness->detail;
    j["witness"] = std::move(w);
  }
  return j;
}

namespace {

// Shortest path from any initial state, following transitions in listed
// order so witnesses are reproducible.
std::vector<int> pathTo(const TransitionGraph& g, int goal) {
  std::vector<int> parent(g.states.size(), -2);
  std::deque<int> queue;
  for (int i : g.initial) {
    if (parent[static_cast<size_t>(i)] == -2) {
      parent[static_cast<size_t>(i)] = -1;
      queue.push_back(i);
    }
  }
  std::vector<std::vector<int>> adj(g.states.size());
  for (const Transition& t : g.transitions) adj[static_cast<size_t>(t.src)].push_back(t.dst);
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    if (u == goal) break;
    for (int v : adj[static_cast<size_t>(u)]) {
      if (parent[static_cast<size_t>(v)] == -2) {
        parent[static_cast<size_t>(v)] = u;
        queue.push_back(v);
      }
    }
  }
  std::vector<int> path;
  if (parent[static_cast<size_t>(goal)] == -2) return path;
  for (int u = goal; u != -1; u = parent[static_cast<size_t>(u)]) path.push_back(u);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<bool> backwardClosure(size_t n, const std::vector<std::pair<int, int>>& edges,
                                  std::vector<bool> seed) {
  std::vector<std::vector<int>> radj(n);
  for (auto& [src, dst] : edges) radj[static_cast<size_t>(dst)].push_back(src);
  std::deque<int> queue;
  for (size_t i = 0; i < n; i++) {
    if (seed[i]) queue.push_back(static_cast<int>(i));
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : radj[static_cast<size_t>(u)]) {
      if (!seed[static_cast<size_t>(v)]) {
        seed[static_cast<size_t>(v)] = true;
        queue.push_back(v);
      }
    }
  }
  return seed;
}

}  // namespace

CheckResult checkFair(const TransitionGraph& g) {
  CheckResult r;
  r.criterion = Criterion::Fair;
  r.statesExplored = static_cast<long long>(g.states.size());
  r.truncated = g.truncated;
  size_t n = g.states.size();

  std::vector<std::pair<int, int>> edges;
  for (const Transition& t : g.transitions) edges.push_back({t.src, t.dst});
  std::vector<bool> good(n, false);
  for (size_t i = 0; i < n; i++) good[i] = g.states[i].tickSeen;
  for (const Transition& t : g.transitions) {
    if (t.success) good[static_cast<size_t>(t.src)] = true;
  }
  good = backwardClosure(n, edges, std::move(good));
  std::vector<bool> hopeful(n, false);
  for (size_t i = 0; i < n; i++) hopeful[i] = !g.expanded[i];
  hopeful = backwardClosure(n, edges, std::move(hopeful));

  for (size_t u = 0; u < n; u++) {
    if (good[u] || hopeful[u]) continue;
    TestWitness w;
    w.kind = TestWitness::Kind::DeadState;
    w.state = static_cast<int>(u);
    w.path = pathTo(g, static_cast<int>(u));
    r.verdict = Verdict::Fail;
    r.witness = std::move(w);
    return r;
  }
  if (g.truncated) {
    r.verdict = Verdict::Unknown;
    r.note = "exploration was cut before the frontier closed";
    return r;
  }
  r.verdict = Verdict::Pass;
  return r;
}

// ---------------------------------------------------------------------------
// Must

namespace {

// Strongly connected components, iterative Kosaraju restricted to `inRegion`.
std::vector<std::vector<int>> sccOf(size_t n, const std::vector<std::vector<int>>& adj,
                                    const std::vector<std::vector<int>>& radj,
                                    const std::vector<bool>& inRegion) {
  std::vector<bool> seen(n, false);
  std::vector<int> order;
  for (size_t s = 0; s < n; s++) {
    if (!inRegion[s] || seen[s]) continue;
    // Post-order DFS with an explicit stack.
    std::vector<std::pair<int, size_t>> stack{{static_cast<int>(s), 0}};
    seen[s] = true;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next < adj[static_cast<size_t>(u)].size()) {
        int v = adj[static_cast<size_t>(u)][next++];
        if (inRegion[static_cast<size_t>(v)] && !seen[static_cast<size_t>(v)]) {
          seen[static_cast<size_t>(v)] = true;
          stack.push_back({v, 0});
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }
  std::vector<std::vector<int>> comps;
  std::vector<bool> assigned(n, false);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (assigned[static_cast<size_t>(*it)]) continue;
    std::vector<int> comp;
    std::vector<int> stack{*it};
    assigned[static_cast<size_t>(*it)] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (int v : radj[static_cast<size_t>(u)]) {
        if (inRegion[static_cast<size_t>(v)] && !assigned[static_cast<size_t>(v)]) {
          assigned[static_cast<size_t>(v)] = true;
          stack.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  std::sort(comps.begin(), comps.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) { return a[0] < b[0]; });
  return comps;
}

bool anyMoveAmong(const StrategySystem& sys, const GlobalState& s, const std::set<int>& slots) {
  for (const WorldMove& m : enabledMoves(sys, s)) {
    bool within = true;
    for (int p : moveParticipants(m)) {
      if (!slots.count(p)) {
        within = false;
        break;
      }
    }
    if (within) return true;
  }
  return false;
}

}  // namespace

CheckResult checkMust(const TransitionGraph& g, const StrategySystem& sys, int cycleBound) {
  CheckResult r;
  r.criterion = Criterion::Must;
  r.statesExplored = static_cast<long long>(g.states.size());
  r.truncated = g.truncated;
  size_t n = g.states.size();

  std::vector<int> outDeg(n, 0);
  for (const Transition& t : g.transitions) outDeg[static_cast<size_t>(t.src)]++;
  for (size_t u = 0; u < n; u++) {
    if (g.expanded[u] && !g.states[u].tickSeen && outDeg[u] == 0) {
      TestWitness w;
      w.kind = TestWitness::Kind::StuckRun;
      w.state = static_cast<int>(u);
      w.path = pathTo(g, static_cast<int>(u));
      r.verdict = Verdict::Fail;
      r.witness = std::move(w);
      return r;
    }
  }

  // Tick-free region and its SCCs.
  std::vector<bool> region(n, false);
  for (size_t u = 0; u < n; u++) region[u] = !g.states[u].tickSeen;
  std::vector<std::vector<int>> adj(n), radj(n);
  std::vector<std::vector<int>> outT(n);  // transition indices by source
  for (size_t ti = 0; ti < g.transitions.size(); ti++) {
    const Transition& t = g.transitions[ti];
    outT[static_cast<size_t>(t.src)].push_back(static_cast<int>(ti));
    if (region[static_cast<size_t>(t.src)] && region[static_cast<size_t>(t.dst)] && !t.success) {
      adj[static_cast<size_t>(t.src)].push_back(t.dst);
      radj[static_cast<size_t>(t.dst)].push_back(t.src);
    }
  }

  bool undecided = false;
  std::string undecidedNote;
  for (const std::vector<int>& comp : sccOf(n, adj, radj, region)) {
    std::set<int> inComp(comp.begin(), comp.end());
    std::vector<int> internal;  // transition indices inside the component
    for (int u : comp) {
      for (int ti : outT[static_cast<size_t>(u)]) {
        const Transition& t = g.transitions[static_cast<size_t>(ti)];
        if (!t.success && inComp.count(t.dst) && region[static_cast<size_t>(t.dst)]) {
          internal.push_back(ti);
        }
      }
    }
    if (internal.empty()) continue;  // no cycle through this component

    // Safe-set certification: a slot is doomed if some internal path leads
    // to a move consuming it; otherwise it is frozen on every internal
    // continuation. If the safe slots of every component state jointly
    // enable a move, no run confined here is maximal.
    std::map<std::pair<int, int>, bool> doomed;
    for (int u : comp) {
      for (size_t s = 0; s < g.states[static_cast<size_t>(u)].players.size(); s++) {
        doomed[{u, static_cast<int>(s)}] = false;
      }
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (int ti : internal) {
        const Transition& t = g.transitions[static_cast<size_t>(ti)];
        for (size_t s = 0; s < t.witness.size(); s++) {
          auto& d = doomed[{t.src, static_cast<int>(s)}];
          if (d) continue;
          int s2 = t.witness[s];
          if (s2 < 0 || doomed[{t.dst, s2}]) {
            d = true;
            changed = true;
          }
        }
      }
    }
    bool certified = true;
    for (int u : comp) {
      std::set<int> safe;
      for (size_t s = 0; s < g.states[static_cast<size_t>(u)].players.size(); s++) {
        if (!doomed[{u, static_cast<int>(s)}]) safe.insert(static_cast<int>(s));
      }
      if (!anyMoveAmong(sys, g.states[static_cast<size_t>(u)], safe)) {
        certified = false;
        break;
      }
    }
    if (certified) continue;

    // Hunt closed walks up to cycleBound for an insertion-maximal lasso.
    std::vector<std::vector<int>> internalFrom(n);
    for (int ti : internal) {
      internalFrom[static_cast<size_t>(g.transitions[static_cast<size_t>(ti)].src)].push_back(ti);
    }
    long budget = 200000;
    bool exhausted = true;
    std::vector<int> walk;
    std::optional<TestWitness> found;
    for (int anchor : comp) {
      int K = static_cast<int>(g.states[static_cast<size_t>(anchor)].players.size());
      auto testWalk = [&]() -> bool {
        std::vector<int> sigma(static_cast<size_t>(K));
        for (int s = 0; s < K; s++) sigma[static_cast<size_t>(s)] = s;
        for (int ti : walk) {
          const Transition& t = g.transitions[static_cast<size_t>(ti)];
          for (int s = 0; s < K; s++) {
            int cur = sigma[static_cast<size_t>(s)];
            sigma[static_cast<size_t>(s)] = cur < 0 ? -1 : t.witness[static_cast<size_t>(cur)];
          }
        }
        std::set<int> frozen;
        for (int s = 0; s < K; s++) {
          int x = s;
          std::set<int> orbit;
          bool total = true;
          while (true) {
            x = sigma[static_cast<size_t>(x)];
            if (x < 0) {
              total = false;
              break;
            }
            if (!orbit.insert(x).second) break;
          }
          if (total) frozen.insert(s);
        }
        if (anyMoveAmong(sys, g.states[static_cast<size_t>(anchor)], frozen)) return false;
        TestWitness w;
        w.kind = TestWitness::Kind::UnfairLasso;
        w.state = anchor;
        w.path = pathTo(g, anchor);
        w.cycle.push_back(anchor);
        for (int ti : walk) w.cycle.push_back(g.transitions[static_cast<size_t>(ti)].dst);
        w.frozen.assign(frozen.begin(), frozen.end());
        found = std::move(w);
        return true;
      };
      std::function<bool(int, int)> dfs = [&](int state, int depth) -> bool {
        if (depth == cycleBound) return false;
        for (int ti : internalFrom[static_cast<size_t>(state)]) {
          if (--budget < 0) {
            exhausted = false;
            return false;
          }
          walk.push_back(ti);
          int nxt = g.transitions[static_cast<size_t>(ti)].dst;
          if (nxt == anchor && testWalk()) return true;
          if (dfs(nxt, depth + 1)) return true;
          walk.pop_back();
        }
        return false;
      };
      if (dfs(anchor, 0)) break;
      if (!exhausted) break;
    }
    if (found) {
      r.verdict = Verdict::Fail;
      r.witness = std::move(found);
      return r;
    }
    // Nothing found: walks up to the component size cover every simple
    // cycle, which is as far as the decided fragment goes.
    if (!exhausted || cycleBound < static_cast<int>(comp.size())) {
      undecided = true;
      undecidedNote = !exhausted ? "cycle search budget exhausted"
                                 : "cycle bound below component size";
    }
  }

  if (g.truncated) {
    r.verdict = Verdict::Unknown;
    r.note = "exploration was cut before the frontier closed";
    return r;
  }
  if (undecided) {
    r.verdict = Verdict::Unknown;
    r.note = undecidedNote;
    return r;
  }
  r.verdict = Verdict::Pass;
  return r;
}

// ---------------------------------------------------------------------------
// Classical interleaving semantics

namespace {

void flattenPar(const ProcPtr& p, std::vector<ProcPtr>& out) {
  if (p->kind == OpenProcess::Kind::Par) {
    flattenPar(p->left, out);
    flattenPar(p->right, out);
    return;
  }
  if (p->kind == OpenProcess::Kind::Sum && p->items.empty()) return;  // drop nil
  out.push_back(p);
}

ProcPtr normalizeClassic(const ProcPtr& p) {
  switch (p->kind) {
    case OpenProcess::Kind::Sum: {
      std::vector<std::pair<Prefix, ProcPtr>> items;
      for (auto& [pre, cont] : p->items) items.push_back({pre, normalizeClassic(cont)});
      return mkSum(std::move(items), p->pos);
    }
    case OpenProcess::Kind::Par: {
      std::vector<ProcPtr> comps;
      flattenPar(normalizeClassic(p->left), comps);
      flattenPar(normalizeClassic(p->right), comps);
      if (comps.empty()) return mkZero(p->pos);
      ProcPtr acc = comps[0];
      for (size_t i = 1; i < comps.size(); i++) acc = mkPar(acc, comps[i], p->pos);
      return acc;
    }
    case OpenProcess::Kind::Nu: {
      ProcPtr body = normalizeClassic(p->body);
      std::vector<std::string> fn = freeNames(body);
      if (std::find(fn.begin(), fn.end(), p->binder) == fn.end()) return body;
      return mkNu(p->binder, body, p->pos);
    }
    case OpenProcess::Kind::Call:
      return p;
  }
  return p;
}

struct Act {
  enum class Kind { In, Out, Tau, Tick } kind;
  std::string chan;
  ProcPtr target;
};

std::vector<Act> classicSteps(const ProcPtr& p, const std::vector<Definition>& defs,
                              std::set<std::string>& guard) {
  switch (p->kind) {
    case OpenProcess::Kind::Sum: {
      std::vector<Act> out;
      for (auto& [pre, cont] : p->items) {
        switch (pre.kind) {
          case PrefixKind::Input: out.push_back({Act::Kind::In, pre.channel, cont}); break;
          case PrefixKind::Output: out.push_back({Act::Kind::Out, pre.channel, cont}); break;
          case PrefixKind::Tick: out.push_back({Act::Kind::Tick, "", cont}); break;
        }
      }
      return out;
    }
    case OpenProcess::Kind::Par: {
      std::vector<Act> ls = classicSteps(p->left, defs, guard);
      std::vector<Act> rs = classicSteps(p->right, defs, guard);
      std::vector<Act> out;
      for (const Act& a : ls) out.push_back({a.kind, a.chan, mkPar(a.target, p->right)});
      for (const Act& a : rs) out.push_back({a.kind, a.chan, mkPar(p->left, a.target)});
      for (const Act& a : ls) {
        for (const Act& b : rs) {
          bool match = (a.kind == Act::Kind::Out && b.kind == Act::Kind::In) ||
                       (a.kind == Act::Kind::In && b.kind == Act::Kind::Out);
          if (match && a.chan == b.chan) {
            out.push_back({Act::Kind::Tau, "", mkPar(a.target, b.target)});
          }
        }
      }
      return out;
    }
    case OpenProcess::Kind::Nu: {
      std::vector<Act> inner = classicSteps(p->body, defs, guard);
      std::vector<Act> out;
      for (const Act& a : inner) {
        if ((a.kind == Act::Kind::In || a.kind == Act::Kind::Out) && a.chan == p->binder) continue;
        out.push_back({a.kind, a.chan, mkNu(p->binder, a.target)});
      }
      return out;
    }
    case OpenProcess::Kind::Call: {
      std::string key = p->var + "(";
      for (size_t i = 0; i < p->args.size(); i++) key += (i ? "," : "") + p->args[i];
      key += ")";
      if (guard.count(key)) return {};  // unguarded self-reference: no first moves
      const Definition* def = nullptr;
      for (const Definition& d : defs) {
        if (d.var == p->var) def = &d;
      }
      if (!def) throw SyntaxError("unknown process variable '" + p->var + "'", p->pos);
      Renaming ren;
      for (size_t i = 0; i < def->params.size(); i++) {
        if (def->params[i] != p->args[i]) ren[def->params[i]] = p->args[i];
      }
      guard.insert(key);
      std::vector<Act> out = classicSteps(substitute(def->body, ren), defs, guard);
      guard.erase(key);
      return out;
    }
  }
  return {};
}

std::string actLabel(const Act& a) {
  switch (a.kind) {
    case Act::Kind::In: return a.chan + "?";
    case Act::Kind::Out: return a.chan + "!";
    case Act::Kind::Tau: return "tau";
    case Act::Kind::Tick: return "tick";
  }
  return "";
}

}  // namespace

Lts classicLts(const GlobalProcess& g0, int maxStates) {
  GlobalProcess g = check(g0);
  Lts l;
  std::map<std::string, int> index;
  std::vector<ProcPtr> terms;
  auto intern = [&](const ProcPtr& t) {
    std::string key = pretty(t);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(l.states.size());
    index.emplace(std::move(key), id);
    l.states.push_back(pretty(t));
    l.expanded.push_back(false);
    terms.push_back(t);
    return id;
  };
  l.initial = intern(normalizeClassic(g.main));
  std::deque<int> queue{l.initial};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    if (static_cast<int>(l.states.size()) > maxStates) {
      l.truncated = true;
      continue;
    }
    l.expanded[static_cast<size_t>(u)] = true;
    std::set<std::string> guard;
    std::set<std::pair<int, std::string>> seen;
    for (const Act& a : classicSteps(terms[static_cast<size_t>(u)], g.defs, guard)) {
      int before = static_cast<int>(l.states.size());
      int v = intern(normalizeClassic(a.target));
      if (v == before) queue.push_back(v);
      std::string label = actLabel(a);
      if (!seen.insert({v, label}).second) continue;
      l.edges.push_back({u, v, label, a.kind == Act::Kind::Tau, a.kind == Act::Kind::Tick});
    }
  }
  return l;
}

nlohmann::json ltsToJson(const Lts& l) {
  nlohmann::json j;
  j["initial"] = l.initial;
  j["truncated"] = l.truncated;
  nlohmann::json states = nlohmann::json::array();
  for (size_t i = 0; i < l.states.size(); i++) {
    states.push_back({{"id", i}, {"term", l.states[i]}, {"expanded", static_cast<bool>(l.expanded[i])}});
  }
  j["states"] = std::move(states);
  nlohmann::json edges = nlohmann::json::array();
  for (const Lts::Edge& e : l.edges) {
    edges.push_back({{"src", e.src}, {"dst", e.dst}, {"label", e.label}});
  }
  j["edges"] = std::move(edges);
  return j;
}

namespace {

struct ClassicView {
  std::vector<bool> success;    // has a tick edge
  std::vector<std::vector<std::pair<int, int>>> tauAdj;  // (dst, edge idx)
  std::vector<bool> inR;        // reachable through non-success states
  std::vector<int> parent;      // tree into R for witness paths
};

ClassicView classicView(const Lts& l) {
  ClassicView v;
  size_t n = l.states.size();
  v.success.assign(n, false);
  v.tauAdj.assign(n, {});
  for (size_t ei = 0; ei < l.edges.size(); ei++) {
    const Lts::Edge& e = l.edges[ei];
    if (e.tick) v.success[static_cast<size_t>(e.src)] = true;
    if (e.tau) v.tauAdj[static_cast<size_t>(e.src)].push_back({e.dst, static_cast<int>(ei)});
  }
  v.inR.assign(n, false);
  v.parent.assign(n, -2);
  if (!v.success[static_cast<size_t>(l.initial)]) {
    v.inR[static_cast<size_t>(l.initial)] = true;
    v.parent[static_cast<size_t>(l.initial)] = -1;
    std::deque<int> queue{l.initial};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (auto& [d, ei] : v.tauAdj[static_cast<size_t>(u)]) {
        if (v.success[static_cast<size_t>(d)] || v.inR[static_cast<size_t>(d)]) continue;
        v.inR[static_cast<size_t>(d)] = true;
        v.parent[static_cast<size_t>(d)] = u;
        queue.push_back(d);
      }
    }
  }
  return v;
}

std::vector<int> classicPath(const ClassicView& v, int goal) {
  std::vector<int> path;
  for (int u = goal; u != -1; u = v.parent[static_cast<size_t>(u)]) path.push_back(u);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

CheckResult classicMust(const Lts& l) {
  CheckResult r;
  r.criterion = Criterion::ClassicMust;
  r.statesExplored = static_cast<long long>(l.states.size());
  r.truncated = l.truncated;
  size_t n = l.states.size();
  ClassicView v = classicView(l);

  // Finite maximal executions: a state in R with no internal step at all.
  for (size_t u = 0; u < n; u++) {
    if (!v.inR[u]) continue;
    if (!v.tauAdj[u].empty()) continue;
    if (!l.expanded[u]) continue;  // frontier, not provably stuck
    TestWitness w;
    w.kind = TestWitness::Kind::StuckRun;
    w.state = static_cast<int>(u);
    w.path = classicPath(v, static_cast<int>(u));
    w.detail = l.states[u];
    r.verdict = Verdict::Fail;
    r.witness = std::move(w);
    return r;
  }
  // Infinite executions: any tau cycle inside R never meets success.
  std::vector<int> color(n, 0);
  for (size_t s = 0; s < n; s++) {
    if (!v.inR[s] || color[s] != 0) continue;
    std::vector<std::pair<int, size_t>> stack{{static_cast<int>(s), 0}};
    std::vector<int> chain{static_cast<int>(s)};
    color[s] = 1;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      bool advanced = false;
      while (next < v.tauAdj[static_cast<size_t>(u)].size()) {
        int d = v.tauAdj[static_cast<size_t>(u)][next++].first;
        if (!v.inR[static_cast<size_t>(d)]) continue;
        if (color[static_cast<size_t>(d)] == 1) {
          // Found a cycle: slice it from the active chain.
          TestWitness w;
          w.kind = TestWitness::Kind::UnfairLasso;
          w.state = d;
          w.path = classicPath(v, d);
          auto at = std::find(chain.begin(), chain.end(), d);
          w.cycle.assign(at, chain.end());
          w.cycle.push_back(d);
          w.detail = l.states[static_cast<size_t>(d)];
          r.verdict = Verdict::Fail;
          r.witness = std::move(w);
          return r;
        }
        if (color[static_cast<size_t>(d)] == 0) {
          color[static_cast<size_t>(d)] = 1;
          stack.push_back({d, 0});
          chain.push_back(d);
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        color[static_cast<size_t>(u)] = 2;
        stack.pop_back();
        chain.pop_back();
      }
    }
  }
  if (l.truncated) {
    r.verdict = Verdict::Unknown;
    r.note = "state budget cut the transition system";
    return r;
  }
  r.verdict = Verdict::Pass;
  return r;
}

CheckResult classicFair(const Lts& l) {
  CheckResult r;
  r.criterion = Criterion::ClassicFair;
  r.statesExplored = static_cast<long long>(l.states.size());
  r.truncated = l.truncated;
  size_t n = l.states.size();
  ClassicView v = classicView(l);

  std::vector<std::pair<int, int>> tauEdges;
  for (const Lts::Edge& e : l.edges) {
    if (e.tau) tauEdges.push_back({e.src, e.dst});
  }
  std::vector<bool> canReach = backwardClosure(n, tauEdges, v.success);
  std::vector<bool> frontier(n, false);
  for (size_t i = 0; i < n; i++) frontier[i] = !l.expanded[i];
  std::vector<bool> hopeful = backwardClosure(n, tauEdges, std::move(frontier));

  for (size_t u = 0; u < n; u++) {
    if (!v.inR[u] || canReach[u] || hopeful[u]) continue;
    TestWitness w;
    w.kind = TestWitness::Kind::DeadState;
    w.state = static_cast<int>(u);
    w.path = classicPath(v, static_cast<int>(u));
    w.detail = l.states[u];
    r.verdict = Verdict::Fail;
    r.witness = std::move(w);
    return r;
  }
  if (l.truncated) {
    r.verdict = Verdict::Unknown;
    r.note = "state budget cut the transition system";
    return r;
  }
  r.verdict = Verdict::Pass;
  return r;
}

// ---------------------------------------------------------------------------
// Combination and comparison

namespace {

ProcPtr renameVarsIn(const ProcPtr& p, const std::map<std::string, std::string>& ren) {
  switch (p->kind) {
    case OpenProcess::Kind::Sum: {
      std::vector<std::pair<Prefix, ProcPtr>> items;
      for (auto& [pre, cont] : p->items) items.push_back({pre, renameVarsIn(cont, ren)});
      return mkSum(std::move(items), p->pos);
    }
    case OpenProcess::Kind::Par:
      return mkPar(renameVarsIn(p->left, ren), renameVarsIn(p->right, ren), p->pos);
    case OpenProcess::Kind::Nu:
      return mkNu(p->binder, renameVarsIn(p->body, ren), p->pos);
    case OpenProcess::Kind::Call: {
      auto it = ren.find(p->var);
      return mkCall(it == ren.end() ? p->var : it->second, p->args, p->pos);
    }
  }
  return p;
}

}  // namespace

GlobalProcess combineForTest(const GlobalProcess& proc, const GlobalProcess& test) {
  GlobalProcess a = check(proc);
  GlobalProcess b = check(test);
  GlobalProcess out;
  out.names = a.names;
  for (const std::string& nm : b.names) {
    if (std::find(out.names.begin(), out.names.end(), nm) == out.names.end()) {
      out.names.push_back(nm);
    }
  }
  std::set<std::string> taken(out.names.begin(), out.names.end());
  for (const Definition& d : a.defs) taken.insert(d.params.begin(), d.params.end());
  for (const Definition& d : b.defs) taken.insert(d.params.begin(), d.params.end());
  auto renameSide = [&taken](const GlobalProcess& side) {
    std::map<std::string, std::string> ren;
    for (const Definition& d : side.defs) {
      std::string v = d.var;
      while (taken.count(v)) v += "'";
      taken.insert(v);
      if (v != d.var) ren[d.var] = v;
    }
    return ren;
  };
  std::map<std::string, std::string> renA = renameSide(a);
  std::map<std::string, std::string> renB = renameSide(b);
  for (const Definition& d : a.defs) {
    out.defs.push_back(
        {renA.count(d.var) ? renA[d.var] : d.var, d.params, renameVarsIn(d.body, renA), d.pos});
  }
  for (const Definition& d : b.defs) {
    out.defs.push_back(
        {renB.count(d.var) ? renB[d.var] : d.var, d.params, renameVarsIn(d.body, renB), d.pos});
  }
  out.main = mkPar(renameVarsIn(a.main, renA), renameVarsIn(b.main, renB));
  return out;
}

CompareOutcome compare(const GlobalProcess& proc, const GlobalProcess& test,
                       const ExploreConfig& cfg, int cycleBound, int classicMaxStates) {
  CompareOutcome o;
  GlobalStrategy world = compose(makeGlobal(proc), makeGlobal(test));
  TransitionGraph graph = explore(world, cfg);
  o.fair = checkFair(graph);
  o.must = checkMust(graph, world.sys, cycleBound);
  Lts lts = classicLts(combineForTest(proc, test), classicMaxStates);
  o.classicFair = ccsw::classicFair(lts);
  o.classicMust = ccsw::classicMust(lts);
  return o;
}

nlohmann::json compareToJson(const CompareOutcome& o) {
  nlohmann::json j;
  j["fair"] = checkResultToJson(o.fair);
  j["must"] = checkResultToJson(o.must);
  j["classicFair"] = checkResultToJson(o.classicFair);
  j["classicMust"] = checkResultToJson(o.classicMust);
  return j;
}

}  // namespace ccsw
