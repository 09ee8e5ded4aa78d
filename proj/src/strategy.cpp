#include "ccsw/strategy.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>

namespace ccsw {

std::vector<BasicMove> basicMoves(int arity) {
  std::vector<BasicMove> out;
  out.reserve(static_cast<size_t>(2 * arity + 4));
  out.push_back({MoveKind::ForkL, 0});
  out.push_back({MoveKind::ForkR, 0});
  out.push_back({MoveKind::Tick, 0});
  out.push_back({MoveKind::Nu, 0});
  for (int i = 1; i <= arity; i++) out.push_back({MoveKind::In, i});
  for (int i = 1; i <= arity; i++) out.push_back({MoveKind::Out, i});
  return out;
}

int targetArity(int arity, const BasicMove& m) {
  return m.kind == MoveKind::Nu ? arity + 1 : arity;
}

std::string moveName(const BasicMove& m) {
  switch (m.kind) {
    case MoveKind::ForkL: return "forkL";
    case MoveKind::ForkR: return "forkR";
    case MoveKind::Tick: return "tick";
    case MoveKind::Nu: return "nu";
    case MoveKind::In: return "in:" + std::to_string(m.index);
    case MoveKind::Out: return "out:" + std::to_string(m.index);
  }
  return "";
}

BasicMove moveFromName(const std::string& name) {
  if (name == "forkL") return {MoveKind::ForkL, 0};
  if (name == "forkR") return {MoveKind::ForkR, 0};
  if (name == "tick") return {MoveKind::Tick, 0};
  if (name == "nu") return {MoveKind::Nu, 0};
  if (name.rfind("in:", 0) == 0) return {MoveKind::In, std::stoi(name.substr(3))};
  if (name.rfind("out:", 0) == 0) return {MoveKind::Out, std::stoi(name.substr(4))};
  throw std::runtime_error("unknown move name '" + name + "'");
}

NodeRef MoveTable::get(const BasicMove& m) const {
  switch (m.kind) {
    case MoveKind::ForkL: return forkL;
    case MoveKind::ForkR: return forkR;
    case MoveKind::Tick: return tick;
    case MoveKind::Nu: return nu;
    case MoveKind::In: return ins.at(static_cast<size_t>(m.index - 1));
    case MoveKind::Out: return outs.at(static_cast<size_t>(m.index - 1));
  }
  return -1;
}

void MoveTable::set(const BasicMove& m, NodeRef target) {
  switch (m.kind) {
    case MoveKind::ForkL: forkL = target; return;
    case MoveKind::ForkR: forkR = target; return;
    case MoveKind::Tick: tick = target; return;
    case MoveKind::Nu: nu = target; return;
    case MoveKind::In: ins.at(static_cast<size_t>(m.index - 1)) = target; return;
    case MoveKind::Out: outs.at(static_cast<size_t>(m.index - 1)) = target; return;
  }
}

NodeRef StrategySystem::add(StrategyNode n) {
  nodes.push_back(std::move(n));
  return static_cast<NodeRef>(nodes.size() - 1);
}

const StrategyNode& StrategySystem::at(NodeRef r) const {
  return nodes.at(static_cast<size_t>(r));
}

int StrategySystem::stateCount(NodeRef r) const {
  return static_cast<int>(at(r).states.size());
}

NodeRef StrategySystem::empty(int arity) {
  auto it = emptyByArity_.find(arity);
  if (it != emptyByArity_.end()) return it->second;
  NodeRef r = add(StrategyNode{arity, false, {}});
  emptyByArity_[arity] = r;
  return r;
}

MoveTable StrategySystem::blankTable(int arity) {
  MoveTable t;
  NodeRef e = empty(arity);
  t.forkL = t.forkR = t.tick = e;
  t.nu = empty(arity + 1);
  t.ins.assign(static_cast<size_t>(arity), e);
  t.outs.assign(static_cast<size_t>(arity), e);
  return t;
}

Strategy emptyStrategy(int arity) {
  Strategy s;
  s.root = s.sys.empty(arity);
  return s;
}

NodeRef addSingleton(StrategySystem& sys, int arity, MoveTable state) {
  return sys.add(StrategyNode{arity, false, {std::move(state)}});
}

NodeRef addSum(StrategySystem& sys, int arity, const std::vector<NodeRef>& parts) {
  if (parts.empty()) return sys.empty(arity);
  if (parts.size() == 1) return parts[0];
  StrategyNode n{arity, false, {}};
  for (NodeRef p : parts) {
    const StrategyNode& q = sys.at(p);
    if (q.arity != arity) throw std::runtime_error("sum of strategies at different arities");
    n.states.insert(n.states.end(), q.states.begin(), q.states.end());
  }
  return sys.add(std::move(n));
}

bool validView(const ViewPath& v) {
  int n = v.arity;
  if (n < 0) return false;
  for (const BasicMove& m : v.moves) {
    if ((m.kind == MoveKind::In || m.kind == MoveKind::Out) && (m.index < 1 || m.index > n)) {
      return false;
    }
    n = targetArity(n, m);
  }
  return true;
}

long long evaluate(const StrategySystem& sys, NodeRef root, const ViewPath& view) {
  if (!validView(view)) throw std::runtime_error("view does not compose");
  if (sys.at(root).arity != view.arity) {
    throw std::runtime_error("view arity does not match the strategy");
  }
  struct Frame {
    NodeRef node;
    size_t depth;
    size_t next;
  };
  long long count = 0;
  std::vector<Frame> stack;
  stack.push_back({root, 0, 0});
  while (!stack.empty()) {
    Frame& top = stack.back();
    const StrategyNode& nd = sys.at(top.node);
    if (nd.hole) throw std::runtime_error("evaluate hit a truncation hole");
    if (top.next >= nd.states.size()) {
      stack.pop_back();
      continue;
    }
    const MoveTable& z = nd.states[top.next];
    size_t depth = top.depth;
    top.next++;
    if (depth == view.moves.size()) {
      count++;  // one complete thread
      continue;
    }
    NodeRef succ = z.get(view.moves[depth]);
    stack.push_back({succ, depth + 1, 0});
  }
  return count;
}

// ---------------------------------------------------------------------------
// Translation

namespace {

int rlookup(const std::vector<std::string>& gamma, const std::string& n) {
  for (int i = static_cast<int>(gamma.size()) - 1; i >= 0; i--) {
    if (gamma[static_cast<size_t>(i)] == n) return i + 1;  // 1-based index
  }
  return 0;
}

struct Translator {
  const GlobalProcess& g;
  StrategySystem sys;
  bool callsAsEmpty = false;
  // call site -> node, keyed by (definition, 1-based argument indices, arity)
  std::map<std::tuple<int, std::vector<int>, int>, NodeRef> callMemo;
  // Guards against programs whose recursion keeps growing the context arity
  // (a nu above a recursive call inside the body); those have no finite
  // equation system in this representation.
  size_t callBudget = 1024;

  // Deferred call resolutions; a worklist rather than recursion so context
  // growth hits the budget instead of the stack.
  struct PendingCall {
    NodeRef shell;
    int defIdx;
    std::vector<int> argIdx;
    std::vector<std::string> gamma;
  };
  std::vector<PendingCall> pending;
  std::vector<std::pair<NodeRef, NodeRef>> bodyOf;  // shell <- translated body

  explicit Translator(const GlobalProcess& gp) : g(gp) {}

  int defIndex(const std::string& var, SourcePos pos) const {
    for (size_t i = 0; i < g.defs.size(); i++) {
      if (g.defs[i].var == var) return static_cast<int>(i);
    }
    throw SyntaxError("unknown process variable '" + var + "'", pos);
  }

  NodeRef trTerm(const ProcPtr& p, std::vector<std::string>& gamma) {
    int n = static_cast<int>(gamma.size());
    switch (p->kind) {
      case OpenProcess::Kind::Sum: {
        // Group summands by the move offering them, preserving summand order.
        std::vector<std::vector<NodeRef>> inParts(static_cast<size_t>(n));
        std::vector<std::vector<NodeRef>> outParts(static_cast<size_t>(n));
        std::vector<NodeRef> tickParts;
        for (auto& [pre, cont] : p->items) {
          NodeRef c = trTerm(cont, gamma);
          if (pre.kind == PrefixKind::Tick) {
            tickParts.push_back(c);
            continue;
          }
          int idx = rlookup(gamma, pre.channel);
          if (idx == 0) throw SyntaxError("unbound channel name '" + pre.channel + "'", p->pos);
          if (pre.kind == PrefixKind::Input) {
            inParts[static_cast<size_t>(idx - 1)].push_back(c);
          } else {
            outParts[static_cast<size_t>(idx - 1)].push_back(c);
          }
        }
        MoveTable t = sys.blankTable(n);
        t.tick = addSum(sys, n, tickParts);
        for (int j = 0; j < n; j++) {
          t.ins[static_cast<size_t>(j)] = addSum(sys, n, inParts[static_cast<size_t>(j)]);
          t.outs[static_cast<size_t>(j)] = addSum(sys, n, outParts[static_cast<size_t>(j)]);
        }
        return addSingleton(sys, n, std::move(t));
      }
      case OpenProcess::Kind::Par: {
        MoveTable t = sys.blankTable(n);
        t.forkL = trTerm(p->left, gamma);
        t.forkR = trTerm(p->right, gamma);
        return addSingleton(sys, n, std::move(t));
      }
      case OpenProcess::Kind::Nu: {
        gamma.push_back(p->binder);
        NodeRef inner = trTerm(p->body, gamma);
        gamma.pop_back();
        MoveTable t = sys.blankTable(n);
        t.nu = inner;
        return addSingleton(sys, n, std::move(t));
      }
      case OpenProcess::Kind::Call: {
        if (callsAsEmpty) return sys.empty(n);
        int di = defIndex(p->var, p->pos);
        std::vector<int> argIdx;
        argIdx.reserve(p->args.size());
        for (auto& a : p->args) {
          int idx = rlookup(gamma, a);
          if (idx == 0) throw SyntaxError("unbound channel name '" + a + "'", p->pos);
          argIdx.push_back(idx);
        }
        auto key = std::make_tuple(di, argIdx, n);
        auto it = callMemo.find(key);
        if (it != callMemo.end()) return it->second;
        if (callMemo.size() >= callBudget) {
          throw SyntaxError(
              "recursion through 'new' keeps growing the context; the strategy has no finite "
              "presentation",
              p->pos);
        }
        // Pre-created shell: recursion through zero moves leaves it empty,
        // which is exactly the empty strategy.
        NodeRef shell = sys.add(StrategyNode{n, false, {}});
        callMemo[key] = shell;
        pending.push_back({shell, di, argIdx, gamma});
        return shell;
      }
    }
    return -1;
  }

  void resolveCalls() {
    while (!pending.empty()) {
      PendingCall pc = std::move(pending.back());
      pending.pop_back();
      const Definition& d = g.defs[static_cast<size_t>(pc.defIdx)];
      Renaming r;
      for (size_t i = 0; i < d.params.size(); i++) {
        const std::string& to = pc.gamma[static_cast<size_t>(pc.argIdx[i] - 1)];
        if (d.params[i] != to) r[d.params[i]] = to;
      }
      ProcPtr body = substitute(d.body, r);
      bodyOf.emplace_back(pc.shell, trTerm(body, pc.gamma));
    }
    // A body that is itself a bare call resolved to another shell: chase the
    // chain to a structural node, or leave everything on a pure call cycle
    // empty (zero moves of recursion denote the empty strategy).
    std::map<NodeRef, NodeRef> via;
    for (auto& [shell, body] : bodyOf) via[shell] = body;
    for (auto& [shell, body] : bodyOf) {
      NodeRef cur = body;
      std::set<NodeRef> seen{shell};
      while (via.count(cur) && !seen.count(cur)) {
        seen.insert(cur);
        cur = via.at(cur);
      }
      if (via.count(cur)) continue;  // call cycle, stays empty
      std::vector<MoveTable> states = sys.at(cur).states;
      sys.nodes[static_cast<size_t>(shell)].states = std::move(states);
    }
  }
};

}  // namespace

Strategy translateOpen(const GlobalProcess& g) {
  GlobalProcess cg = check(g);
  Translator tr(cg);
  std::vector<std::string> gamma = cg.names;
  NodeRef root = tr.trTerm(cg.main, gamma);
  tr.resolveCalls();
  return Strategy{std::move(tr.sys), root};
}

Strategy translateApproximant(const GlobalProcess& g, int i) {
  GlobalProcess cg = check(g);
  int k = static_cast<int>(cg.defs.size());
  ProcPtr p = cg.main;
  // One round of k+1 derivations resolves every exposed call chain (it either
  // turns structural or provably cycles); depth i needs i+1 such rounds, one
  // per move layer, counting the root.
  long layers = static_cast<long>(k + 1) * (i + 1);
  for (long step = 0; step < layers; step++) p = derive(p, cg.defs);
  Translator tr(cg);
  tr.callsAsEmpty = true;
  std::vector<std::string> gamma = cg.names;
  NodeRef root = tr.trTerm(p, gamma);
  return Strategy{std::move(tr.sys), root};
}

// ---------------------------------------------------------------------------
// truncate / equality

Strategy truncate(const StrategySystem& sys, NodeRef root, int depth) {
  // Minimal move depth of each node kept, breadth-first for stable ids.
  std::map<NodeRef, int> md;
  std::vector<NodeRef> order;
  std::deque<NodeRef> queue;
  md[root] = 0;
  order.push_back(root);
  queue.push_back(root);
  while (!queue.empty()) {
    NodeRef u = queue.front();
    queue.pop_front();
    int d = md[u];
    if (d >= depth) continue;
    const StrategyNode& nd = sys.at(u);
    if (nd.hole) continue;
    for (const MoveTable& z : nd.states) {
      for (const BasicMove& m : basicMoves(nd.arity)) {
        NodeRef t = z.get(m);
        if (!md.count(t)) {
          md[t] = d + 1;
          order.push_back(t);
          queue.push_back(t);
        }
      }
    }
  }

  Strategy out;
  std::map<NodeRef, NodeRef> remap;
  for (NodeRef u : order) remap[u] = out.sys.add(StrategyNode{sys.at(u).arity, true, {}});
  std::map<int, NodeRef> holeByArity;
  auto holeFor = [&](int arity) {
    auto it = holeByArity.find(arity);
    if (it != holeByArity.end()) return it->second;
    NodeRef h = out.sys.add(StrategyNode{arity, true, {}});
    holeByArity[arity] = h;
    return h;
  };
  for (NodeRef u : order) {
    const StrategyNode& nd = sys.at(u);
    if (nd.hole || md[u] >= depth) continue;  // stays a hole marker
    // blankTable and holeFor may grow out.sys.nodes, so finish building the
    // state list before touching the destination node
    std::vector<MoveTable> states;
    for (const MoveTable& z : nd.states) {
      MoveTable oz = out.sys.blankTable(nd.arity);
      for (const BasicMove& m : basicMoves(nd.arity)) {
        NodeRef t = z.get(m);
        auto it = md.find(t);
        if (it != md.end()) {
          oz.set(m, remap[t]);
        } else {
          oz.set(m, holeFor(sys.at(t).arity));
        }
      }
      states.push_back(std::move(oz));
    }
    StrategyNode& on = out.sys.nodes[static_cast<size_t>(remap[u])];
    on.hole = false;
    on.states = std::move(states);
  }
  // A node kept at md == depth is shallow enough to keep its state count but
  // none of its structure; mark it a hole only below the root state counts.
  for (NodeRef u : order) {
    if (md[u] == depth && !sys.at(u).hole) {
      int arity = sys.at(u).arity;
      int cnt = static_cast<int>(sys.at(u).states.size());
      std::vector<MoveTable> states;
      for (int s = 0; s < cnt; s++) {
        MoveTable oz = out.sys.blankTable(arity);
        for (const BasicMove& m : basicMoves(arity)) {
          oz.set(m, holeFor(targetArity(arity, m)));
        }
        states.push_back(std::move(oz));
      }
      StrategyNode& on = out.sys.nodes[static_cast<size_t>(remap[u])];
      on.hole = false;
      on.states = std::move(states);
    }
  }
  out.root = remap[root];
  return out;
}

bool equalUpToDepth(const StrategySystem& sa, NodeRef a, const StrategySystem& sb, NodeRef b,
                    int depth) {
  std::map<std::tuple<NodeRef, NodeRef, int>, bool> memo;
  auto rec = [&](auto&& self, NodeRef x, NodeRef y, int k) -> bool {
    const StrategyNode& A = sa.at(x);
    const StrategyNode& B = sb.at(y);
    if (A.hole || B.hole) return true;
    if (A.arity != B.arity || A.states.size() != B.states.size()) return false;
    if (k == 0) return true;
    auto key = std::make_tuple(x, y, k);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool ok = true;
    for (size_t i = 0; ok && i < A.states.size(); i++) {
      for (const BasicMove& m : basicMoves(A.arity)) {
        if (!self(self, A.states[i].get(m), B.states[i].get(m), k - 1)) {
          ok = false;
          break;
        }
      }
    }
    memo[key] = ok;
    return ok;
  };
  return rec(rec, a, b, depth);
}

bool regularEqual(const StrategySystem& sa, NodeRef a, const StrategySystem& sb, NodeRef b) {
  std::set<std::pair<NodeRef, NodeRef>> visited;
  std::vector<std::pair<NodeRef, NodeRef>> work{{a, b}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    if (!visited.insert({x, y}).second) continue;
    const StrategyNode& A = sa.at(x);
    const StrategyNode& B = sb.at(y);
    if (A.hole != B.hole) return false;
    if (A.hole) continue;
    if (A.arity != B.arity || A.states.size() != B.states.size()) return false;
    for (size_t i = 0; i < A.states.size(); i++) {
      for (const BasicMove& m : basicMoves(A.arity)) {
        work.emplace_back(A.states[i].get(m), B.states[i].get(m));
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json toJson(const StrategySystem& sys, NodeRef root) {
  std::map<NodeRef, int> id;
  std::vector<NodeRef> order;
  std::deque<NodeRef> queue;
  id[root] = 0;
  order.push_back(root);
  queue.push_back(root);
  while (!queue.empty()) {
    NodeRef u = queue.front();
    queue.pop_front();
    const StrategyNode& nd = sys.at(u);
    for (const MoveTable& z : nd.states) {
      for (const BasicMove& m : basicMoves(nd.arity)) {
        NodeRef t = z.get(m);
        if (!id.count(t)) {
          id[t] = static_cast<int>(order.size());
          order.push_back(t);
          queue.push_back(t);
        }
      }
    }
  }
  nlohmann::json nodes = nlohmann::json::object();
  for (NodeRef u : order) {
    const StrategyNode& nd = sys.at(u);
    nlohmann::json jn;
    jn["arity"] = nd.arity;
    if (nd.hole) jn["hole"] = true;
    nlohmann::json states = nlohmann::json::array();
    for (const MoveTable& z : nd.states) {
      nlohmann::json st = nlohmann::json::object();
      for (const BasicMove& m : basicMoves(nd.arity)) st[moveName(m)] = id[z.get(m)];
      states.push_back(std::move(st));
    }
    jn["states"] = std::move(states);
    nodes[std::to_string(id[u])] = std::move(jn);
  }
  nlohmann::json j;
  j["root"] = 0;
  j["nodes"] = std::move(nodes);
  return j;
}

Strategy strategyFromJson(const nlohmann::json& j) {
  Strategy out;
  const auto& nodes = j.at("nodes");
  int maxId = -1;
  for (auto it = nodes.begin(); it != nodes.end(); ++it) {
    maxId = std::max(maxId, std::stoi(it.key()));
  }
  out.sys.nodes.resize(static_cast<size_t>(maxId + 1));
  for (auto it = nodes.begin(); it != nodes.end(); ++it) {
    int id = std::stoi(it.key());
    const auto& jn = it.value();
    StrategyNode nd;
    nd.arity = jn.at("arity").get<int>();
    nd.hole = jn.value("hole", false);
    for (const auto& st : jn.at("states")) {
      MoveTable z;
      z.ins.resize(static_cast<size_t>(nd.arity));
      z.outs.resize(static_cast<size_t>(nd.arity));
      for (const BasicMove& m : basicMoves(nd.arity)) {
        z.set(m, st.at(moveName(m)).get<NodeRef>());
      }
      nd.states.push_back(std::move(z));
    }
    out.sys.nodes[static_cast<size_t>(id)] = std::move(nd);
  }
  out.root = j.at("root").get<NodeRef>();
  if (out.root < 0 || out.root > maxId) throw std::runtime_error("bad root id");
  return out;
}

}  // namespace ccsw
