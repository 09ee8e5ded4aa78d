#include "ccsw/world.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace ccsw {

GlobalStrategy makeGlobal(const GlobalProcess& g) {
  Strategy s = translateOpen(g);
  GlobalStrategy out;
  out.channelNames = g.names;
  GlobalStrategy::GPlayer p;
  p.root = s.root;
  for (int i = 0; i < static_cast<int>(g.names.size()); i++) p.tuple.push_back(i);
  out.players.push_back(std::move(p));
  out.sys = std::move(s.sys);
  return out;
}

GlobalStrategy compose(const GlobalStrategy& a, const GlobalStrategy& b) {
  GlobalStrategy out = a;
  std::vector<int> chanMap(b.channelNames.size());
  for (size_t i = 0; i < b.channelNames.size(); i++) {
    auto it = std::find(out.channelNames.begin(), out.channelNames.end(), b.channelNames[i]);
    if (it != out.channelNames.end()) {
      chanMap[i] = static_cast<int>(it - out.channelNames.begin());
    } else {
      chanMap[i] = static_cast<int>(out.channelNames.size());
      out.channelNames.push_back(b.channelNames[i]);
    }
  }
  NodeRef off = static_cast<NodeRef>(out.sys.nodes.size());
  for (const StrategyNode& n : b.sys.nodes) {
    StrategyNode m = n;
    for (MoveTable& z : m.states) {
      z.forkL += off;
      z.forkR += off;
      z.tick += off;
      z.nu += off;
      for (NodeRef& r : z.ins) r += off;
      for (NodeRef& r : z.outs) r += off;
    }
    out.sys.nodes.push_back(std::move(m));
  }
  for (const auto& p : b.players) {
    GlobalStrategy::GPlayer q;
    q.root = p.root + off;
    for (int c : p.tuple) q.tuple.push_back(chanMap[static_cast<size_t>(c)]);
    out.players.push_back(std::move(q));
  }
  return out;
}

std::vector<int> moveParticipants(const WorldMove& m) {
  if (m.kind == WorldMove::Kind::Sync) return {m.p, m.q};
  return {m.p};
}

std::string moveLabel(const WorldMove& m, const GlobalState* at) {
  switch (m.kind) {
    case WorldMove::Kind::Fork: return "fork p" + std::to_string(m.p);
    case WorldMove::Kind::Tick: return "tick p" + std::to_string(m.p);
    case WorldMove::Kind::Nu: return "nu p" + std::to_string(m.p);
    case WorldMove::Kind::Sync: {
      std::string chan = "p" + std::to_string(m.p) + "." + std::to_string(m.i) + "=p" +
                         std::to_string(m.q) + "." + std::to_string(m.j);
      if (at) {
        int c = at->players[static_cast<size_t>(m.p)].tuple[static_cast<size_t>(m.i - 1)];
        if (c >= 0 && c < static_cast<int>(at->channelLabels.size())) {
          chan = at->channelLabels[static_cast<size_t>(c)] + " (" + chan + ")";
        }
      }
      return "sync " + chan;
    }
  }
  return "";
}

nlohmann::json moveToJson(const WorldMove& m) {
  nlohmann::json j;
  switch (m.kind) {
    case WorldMove::Kind::Fork:
      j["kind"] = "fork";
      j["player"] = m.p;
      break;
    case WorldMove::Kind::Tick:
      j["kind"] = "tick";
      j["player"] = m.p;
      break;
    case WorldMove::Kind::Nu:
      j["kind"] = "nu";
      j["player"] = m.p;
      break;
    case WorldMove::Kind::Sync:
      j["kind"] = "sync";
      j["sender"] = m.p;
      j["senderIndex"] = m.i;
      j["receiver"] = m.q;
      j["receiverIndex"] = m.j;
      break;
  }
  return j;
}

WorldMove moveFromJson(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  WorldMove m;
  if (kind == "fork") {
    m.kind = WorldMove::Kind::Fork;
    m.p = j.at("player").get<int>();
  } else if (kind == "tick") {
    m.kind = WorldMove::Kind::Tick;
    m.p = j.at("player").get<int>();
  } else if (kind == "nu") {
    m.kind = WorldMove::Kind::Nu;
    m.p = j.at("player").get<int>();
  } else if (kind == "sync") {
    m.kind = WorldMove::Kind::Sync;
    m.p = j.at("sender").get<int>();
    m.i = j.at("senderIndex").get<int>();
    m.q = j.at("receiver").get<int>();
    m.j = j.at("receiverIndex").get<int>();
  } else {
    throw std::runtime_error("unknown move kind '" + kind + "'");
  }
  return m;
}

std::vector<GlobalState> initialRawStates(const GlobalStrategy& g) {
  std::vector<GlobalState> out;
  std::vector<int> counts;
  counts.reserve(g.players.size());
  for (const auto& p : g.players) {
    int c = g.sys.stateCount(p.root);
    if (c == 0) return out;
    counts.push_back(c);
  }
  std::vector<int> choice(g.players.size(), 0);
  while (true) {
    GlobalState s;
    s.channels = static_cast<int>(g.channelNames.size());
    s.channelLabels = g.channelNames;
    for (size_t k = 0; k < g.players.size(); k++) {
      s.players.push_back({g.players[k].root, choice[k], g.players[k].tuple});
    }
    out.push_back(std::move(s));
    int k = static_cast<int>(choice.size()) - 1;
    while (k >= 0 && ++choice[static_cast<size_t>(k)] == counts[static_cast<size_t>(k)]) {
      choice[static_cast<size_t>(k)] = 0;
      k--;
    }
    if (k < 0) break;
  }
  return out;
}

namespace {

const MoveTable& tableOf(const StrategySystem& sys, const GlobalState& s, int p) {
  const PlayerState& pl = s.players.at(static_cast<size_t>(p));
  return sys.at(pl.node).states.at(static_cast<size_t>(pl.state));
}

}  // namespace

std::vector<WorldMove> enabledMoves(const StrategySystem& sys, const GlobalState& s) {
  std::vector<WorldMove> out;
  auto nonempty = [&](NodeRef r) { return sys.stateCount(r) > 0; };
  int P = static_cast<int>(s.players.size());
  for (int p = 0; p < P; p++) {
    const MoveTable& z = tableOf(sys, s, p);
    if (nonempty(z.forkL) && nonempty(z.forkR)) out.push_back({WorldMove::Kind::Fork, p, 0, -1, 0});
    if (nonempty(z.tick)) out.push_back({WorldMove::Kind::Tick, p, 0, -1, 0});
    if (nonempty(z.nu)) out.push_back({WorldMove::Kind::Nu, p, 0, -1, 0});
  }
  for (int p = 0; p < P; p++) {
    const MoveTable& zp = tableOf(sys, s, p);
    int np = static_cast<int>(s.players[static_cast<size_t>(p)].tuple.size());
    for (int i = 1; i <= np; i++) {
      if (!nonempty(zp.outs[static_cast<size_t>(i - 1)])) continue;
      int ci = s.players[static_cast<size_t>(p)].tuple[static_cast<size_t>(i - 1)];
      for (int q = 0; q < P; q++) {
        if (q == p) continue;
        const MoveTable& zq = tableOf(sys, s, q);
        int nq = static_cast<int>(s.players[static_cast<size_t>(q)].tuple.size());
        for (int j = 1; j <= nq; j++) {
          if (s.players[static_cast<size_t>(q)].tuple[static_cast<size_t>(j - 1)] != ci) continue;
          if (!nonempty(zq.ins[static_cast<size_t>(j - 1)])) continue;
          out.push_back({WorldMove::Kind::Sync, p, i, q, j});
        }
      }
    }
  }
  return out;
}

std::vector<StepBranch> step(const StrategySystem& sys, const GlobalState& s, const WorldMove& m) {
  struct Created {
    int slot;
    NodeRef node;
    std::vector<int> tuple;
  };
  GlobalState base = s;
  std::vector<Created> created;
  std::vector<int> slotMap(s.players.size());
  for (size_t k = 0; k < slotMap.size(); k++) slotMap[k] = static_cast<int>(k);

  switch (m.kind) {
    case WorldMove::Kind::Fork: {
      const MoveTable& z = tableOf(sys, s, m.p);
      const std::vector<int>& t = s.players[static_cast<size_t>(m.p)].tuple;
      created.push_back({m.p, z.forkL, t});
      created.push_back({static_cast<int>(s.players.size()), z.forkR, t});
      base.players.emplace_back();
      slotMap[static_cast<size_t>(m.p)] = -1;
      break;
    }
    case WorldMove::Kind::Tick: {
      const MoveTable& z = tableOf(sys, s, m.p);
      created.push_back({m.p, z.tick, s.players[static_cast<size_t>(m.p)].tuple});
      slotMap[static_cast<size_t>(m.p)] = -1;
      base.tickSeen = true;
      break;
    }
    case WorldMove::Kind::Nu: {
      const MoveTable& z = tableOf(sys, s, m.p);
      std::vector<int> t = s.players[static_cast<size_t>(m.p)].tuple;
      t.push_back(s.channels);
      created.push_back({m.p, z.nu, std::move(t)});
      base.channels++;
      base.channelLabels.push_back("nu" + std::to_string(s.channels));
      slotMap[static_cast<size_t>(m.p)] = -1;
      break;
    }
    case WorldMove::Kind::Sync: {
      const MoveTable& zp = tableOf(sys, s, m.p);
      const MoveTable& zq = tableOf(sys, s, m.q);
      created.push_back(
          {m.p, zp.outs[static_cast<size_t>(m.i - 1)], s.players[static_cast<size_t>(m.p)].tuple});
      created.push_back(
          {m.q, zq.ins[static_cast<size_t>(m.j - 1)], s.players[static_cast<size_t>(m.q)].tuple});
      slotMap[static_cast<size_t>(m.p)] = -1;
      slotMap[static_cast<size_t>(m.q)] = -1;
      break;
    }
  }

  std::vector<int> counts;
  for (const Created& c : created) {
    int n = sys.stateCount(c.node);
    if (n == 0) return {};  // move not enabled
    counts.push_back(n);
  }
  std::vector<StepBranch> out;
  std::vector<int> choice(created.size(), 0);
  while (true) {
    StepBranch br;
    br.next = base;
    for (size_t k = 0; k < created.size(); k++) {
      br.next.players[static_cast<size_t>(created[k].slot)] = {created[k].node, choice[k],
                                                               created[k].tuple};
    }
    br.slotMap = slotMap;
    for (const Created& c : created) br.createdRaw.push_back(c.slot);
    out.push_back(std::move(br));
    int k = static_cast<int>(choice.size()) - 1;
    while (k >= 0 && ++choice[static_cast<size_t>(k)] == counts[static_cast<size_t>(k)]) {
      choice[static_cast<size_t>(k)] = 0;
      k--;
    }
    if (k < 0) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical form

namespace {

std::vector<int> rankBy(std::vector<std::pair<std::vector<long long>, int>>& sigs) {
  std::sort(sigs.begin(), sigs.end());
  std::vector<int> out(sigs.size(), 0);
  int rank = -1;
  const std::vector<long long>* prev = nullptr;
  for (auto& [sig, idx] : sigs) {
    if (!prev || sig != *prev) {
      rank++;
      prev = &sig;
    }
    out[static_cast<size_t>(idx)] = rank;
  }
  return out;
}

}  // namespace

CanonicalState canonicalize(const StrategySystem& sys, const GlobalState& s) {
  int P = static_cast<int>(s.players.size());
  std::vector<int> kept;
  for (int p = 0; p < P; p++) {
    const PlayerState& pl = s.players[static_cast<size_t>(p)];
    const MoveTable& z = sys.at(pl.node).states.at(static_cast<size_t>(pl.state));
    bool inert = true;
    for (const BasicMove& bm : basicMoves(static_cast<int>(pl.tuple.size()))) {
      if (sys.stateCount(z.get(bm)) > 0) {
        inert = false;
        break;
      }
    }
    if (!inert) kept.push_back(p);
  }
  std::vector<int> chanKeep;
  {
    std::set<int> used;
    for (int p : kept) {
      for (int c : s.players[static_cast<size_t>(p)].tuple) used.insert(c);
    }
    chanKeep.assign(used.begin(), used.end());
  }
  int C = static_cast<int>(chanKeep.size());
  int K = static_cast<int>(kept.size());
  std::map<int, int> chanLocal;
  for (int k = 0; k < C; k++) chanLocal[chanKeep[static_cast<size_t>(k)]] = k;
  std::vector<NodeRef> pNode(static_cast<size_t>(K));
  std::vector<int> pState(static_cast<size_t>(K));
  std::vector<std::vector<int>> pTup(static_cast<size_t>(K));
  for (int k = 0; k < K; k++) {
    const PlayerState& pl = s.players[static_cast<size_t>(kept[static_cast<size_t>(k)])];
    pNode[static_cast<size_t>(k)] = pl.node;
    pState[static_cast<size_t>(k)] = pl.state;
    for (int c : pl.tuple) pTup[static_cast<size_t>(k)].push_back(chanLocal[c]);
  }

  // Colour refinement: player colour from (node, state, tuple channel
  // colours); channel colour from its previous colour plus the sorted
  // multiset of (player colour, tuple position) occurrences.
  auto refine = [&](std::vector<int> cc) {
    std::vector<int> pc(static_cast<size_t>(K), 0);
    while (true) {
      std::vector<std::pair<std::vector<long long>, int>> psigs;
      psigs.reserve(static_cast<size_t>(K));
      for (int k = 0; k < K; k++) {
        std::vector<long long> sig{pNode[static_cast<size_t>(k)], pState[static_cast<size_t>(k)]};
        for (int c : pTup[static_cast<size_t>(k)]) sig.push_back(cc[static_cast<size_t>(c)]);
        psigs.push_back({std::move(sig), k});
      }
      std::vector<int> npc = rankBy(psigs);
      std::vector<std::pair<std::vector<long long>, int>> csigs;
      csigs.reserve(static_cast<size_t>(C));
      for (int c = 0; c < C; c++) {
        std::vector<std::pair<long long, long long>> occ;
        for (int k = 0; k < K; k++) {
          const auto& t = pTup[static_cast<size_t>(k)];
          for (size_t pos = 0; pos < t.size(); pos++) {
            if (t[pos] == c) occ.push_back({npc[static_cast<size_t>(k)], static_cast<long long>(pos)});
          }
        }
        std::sort(occ.begin(), occ.end());
        std::vector<long long> sig{cc[static_cast<size_t>(c)]};
        for (auto& [a, b] : occ) {
          sig.push_back(a);
          sig.push_back(b);
        }
        csigs.push_back({std::move(sig), c});
      }
      std::vector<int> ncc = rankBy(csigs);
      if (npc == pc && ncc == cc) return std::pair{pc, cc};
      pc = std::move(npc);
      cc = std::move(ncc);
    }
  };

  // Individualization on the first non-singleton channel class; the minimal
  // full encoding over all branches is the canonical form.
  std::optional<std::string> best;
  std::vector<int> bestCc;
  std::vector<int> bestOrder;  // local player indices in canonical slot order

  std::function<void(std::vector<int>)> search = [&](std::vector<int> cc0) {
    auto [pc, cc] = refine(std::move(cc0));
    (void)pc;
    int target = -1;
    for (int color = 0; color < C && target < 0; color++) {
      int members = 0;
      for (int c = 0; c < C; c++) {
        if (cc[static_cast<size_t>(c)] == color) members++;
      }
      if (members >= 2) target = color;
    }
    if (target >= 0) {
      for (int c = 0; c < C; c++) {
        if (cc[static_cast<size_t>(c)] != target) continue;
        std::vector<int> cc1 = cc;
        cc1[static_cast<size_t>(c)] = C;  // fresh colour, distinct from all ranks
        search(std::move(cc1));
      }
      return;
    }
    // All channel colours are singletons: cc is a bijection onto 0..C-1.
    std::vector<std::pair<std::vector<long long>, int>> desc;
    desc.reserve(static_cast<size_t>(K));
    for (int k = 0; k < K; k++) {
      std::vector<long long> d{pNode[static_cast<size_t>(k)], pState[static_cast<size_t>(k)]};
      for (int c : pTup[static_cast<size_t>(k)]) d.push_back(cc[static_cast<size_t>(c)]);
      desc.push_back({std::move(d), k});
    }
    std::sort(desc.begin(), desc.end());
    std::ostringstream enc;
    enc << (s.tickSeen ? "T" : "F") << "|c" << C << "|";
    for (auto& [d, k] : desc) {
      enc << "(";
      for (size_t x = 0; x < d.size(); x++) enc << (x ? "," : "") << d[x];
      enc << ")";
    }
    std::string e = enc.str();
    if (!best || e < *best) {
      best = std::move(e);
      bestCc = cc;
      bestOrder.clear();
      for (auto& [d, k] : desc) bestOrder.push_back(k);
    }
  };
  search(std::vector<int>(static_cast<size_t>(C), 0));

  CanonicalState out;
  out.key = *best;
  out.rep.channels = C;
  out.rep.tickSeen = s.tickSeen;
  out.rep.channelLabels.assign(static_cast<size_t>(C), "");
  for (int k = 0; k < C; k++) {
    int raw = chanKeep[static_cast<size_t>(k)];
    std::string label = raw < static_cast<int>(s.channelLabels.size())
                            ? s.channelLabels[static_cast<size_t>(raw)]
                            : "c" + std::to_string(raw);
    out.rep.channelLabels[static_cast<size_t>(bestCc[static_cast<size_t>(k)])] = label;
  }
  out.witness.assign(static_cast<size_t>(P), -1);
  for (size_t slot = 0; slot < bestOrder.size(); slot++) {
    int local = bestOrder[slot];
    PlayerState ps;
    ps.node = pNode[static_cast<size_t>(local)];
    ps.state = pState[static_cast<size_t>(local)];
    for (int c : pTup[static_cast<size_t>(local)]) {
      ps.tuple.push_back(bestCc[static_cast<size_t>(c)]);
    }
    out.rep.players.push_back(std::move(ps));
    out.witness[static_cast<size_t>(kept[static_cast<size_t>(local)])] = static_cast<int>(slot);
  }
  out.channelWitness.assign(static_cast<size_t>(s.channels), -1);
  for (int k = 0; k < C; k++) {
    out.channelWitness[static_cast<size_t>(chanKeep[static_cast<size_t>(k)])] =
        bestCc[static_cast<size_t>(k)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exploration

namespace {

int threadCount(const ExploreConfig& cfg) {
  if (cfg.threads > 0) return std::min(cfg.threads, 64);
  if (const char* env = std::getenv("CCSW_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return std::min(v, 64);
  }
  return 1;
}

std::string transitionSig(const Transition& t) {
  std::ostringstream o;
  o << t.src << ">" << t.dst << ">" << static_cast<int>(t.move.kind) << "," << t.move.p << ","
    << t.move.i << "," << t.move.q << "," << t.move.j << ">";
  for (int w : t.witness) o << w << ",";
  o << ">";
  for (int c : t.created) o << c << ",";
  return o.str();
}

}  // namespace

TransitionGraph explore(const GlobalStrategy& g, const ExploreConfig& cfg) {
  TransitionGraph gr;
  std::map<std::string, int> index;
  auto intern = [&](const CanonicalState& c, int d) {
    auto it = index.find(c.key);
    if (it != index.end()) return std::pair{it->second, false};
    int id = static_cast<int>(gr.states.size());
    index.emplace(c.key, id);
    gr.states.push_back(c.rep);
    gr.keys.push_back(c.key);
    gr.depth.push_back(d);
    gr.expanded.push_back(false);
    return std::pair{id, true};
  };

  std::vector<int> layer;
  for (const GlobalState& raw : initialRawStates(g)) {
    CanonicalState c = canonicalize(g.sys, raw);
    auto [id, fresh] = intern(c, 0);
    if (fresh) layer.push_back(id);
    if (std::find(gr.initial.begin(), gr.initial.end(), id) == gr.initial.end()) {
      gr.initial.push_back(id);
    }
  }

  struct BranchOut {
    StepBranch raw;
    CanonicalState canon;
  };
  struct MoveOut {
    WorldMove move;
    std::vector<BranchOut> branches;
  };

  int T = threadCount(cfg);
  while (!layer.empty()) {
    std::vector<std::vector<MoveOut>> exp(layer.size());
    auto work = [&](int w) {
      for (size_t idx = static_cast<size_t>(w); idx < layer.size(); idx += static_cast<size_t>(T)) {
        int id = layer[idx];
        const GlobalState& rep = gr.states[static_cast<size_t>(id)];
        std::vector<WorldMove> mv = enabledMoves(g.sys, rep);
        if (cfg.moveOrderSeed != 0) {
          std::mt19937_64 rng(cfg.moveOrderSeed * 0x9E3779B97F4A7C15ull +
                              static_cast<unsigned long long>(id) * 0xBF58476D1CE4E5B9ull + 1);
          std::shuffle(mv.begin(), mv.end(), rng);
        }
        for (const WorldMove& m : mv) {
          MoveOut mo{m, {}};
          for (StepBranch& br : step(g.sys, rep, m)) {
            CanonicalState c = canonicalize(g.sys, br.next);
            mo.branches.push_back({std::move(br), std::move(c)});
          }
          exp[idx].push_back(std::move(mo));
        }
      }
    };
    if (T == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < T; w++) pool.emplace_back(work, w);
      for (auto& th : pool) th.join();
    }

    std::vector<int> nextLayer;
    for (size_t idx = 0; idx < layer.size(); idx++) {
      int id = layer[idx];
      if (exp[idx].empty()) {
        gr.expanded[static_cast<size_t>(id)] = true;  // nothing to expand
        continue;
      }
      if (gr.depth[static_cast<size_t>(id)] >= cfg.maxDepth ||
          static_cast<int>(gr.states.size()) >= cfg.maxStates) {
        gr.truncated = true;
        continue;
      }
      gr.expanded[static_cast<size_t>(id)] = true;
      std::set<std::string> seen;
      for (const MoveOut& mo : exp[idx]) {
        for (const BranchOut& bo : mo.branches) {
          auto [dst, fresh] = intern(bo.canon, gr.depth[static_cast<size_t>(id)] + 1);
          if (fresh) nextLayer.push_back(dst);
          Transition t;
          t.src = id;
          t.dst = dst;
          t.move = mo.move;
          t.success = mo.move.kind == WorldMove::Kind::Tick;
          t.witness.resize(bo.raw.slotMap.size());
          for (size_t k = 0; k < bo.raw.slotMap.size(); k++) {
            int rs = bo.raw.slotMap[k];
            t.witness[k] = rs < 0 ? -1 : bo.canon.witness[static_cast<size_t>(rs)];
          }
          for (int cslot : bo.raw.createdRaw) {
            int w = bo.canon.witness[static_cast<size_t>(cslot)];
            if (w >= 0) t.created.push_back(w);
          }
          if (seen.insert(transitionSig(t)).second) gr.transitions.push_back(std::move(t));
        }
      }
    }
    layer = std::move(nextLayer);
  }
  return gr;
}

nlohmann::json graphToJson(const TransitionGraph& g) {
  nlohmann::json j;
  j["truncated"] = g.truncated;
  j["initial"] = g.initial;
  nlohmann::json states = nlohmann::json::array();
  for (size_t i = 0; i < g.states.size(); i++) {
    const GlobalState& s = g.states[i];
    nlohmann::json js;
    js["id"] = i;
    js["key"] = g.keys[i];
    js["depth"] = g.depth[i];
    js["expanded"] = static_cast<bool>(g.expanded[i]);
    js["tickSeen"] = s.tickSeen;
    js["channels"] = s.channels;
    js["channelLabels"] = s.channelLabels;
    nlohmann::json players = nlohmann::json::array();
    for (const PlayerState& p : s.players) {
      players.push_back({{"node", p.node}, {"state", p.state}, {"tuple", p.tuple}});
    }
    js["players"] = std::move(players);
    states.push_back(std::move(js));
  }
  j["states"] = std::move(states);
  nlohmann::json transitions = nlohmann::json::array();
  for (const Transition& t : g.transitions) {
    nlohmann::json jt;
    jt["src"] = t.src;
    jt["dst"] = t.dst;
    jt["move"] = moveToJson(t.move);
    jt["success"] = t.success;
    jt["witness"] = t.witness;
    jt["created"] = t.created;
    transitions.push_back(std::move(jt));
  }
  j["transitions"] = std::move(transitions);
  return j;
}

std::string graphToDot(const TransitionGraph& g) {
  std::ostringstream out;
  out << "digraph world {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (size_t i = 0; i < g.states.size(); i++) {
    out << "  s" << i << " [label=\"s" << i << "\\n" << g.states[i].players.size() << " players\"";
    if (g.states[i].tickSeen) out << " peripheries=2";
    if (!g.expanded[i]) out << " style=dashed";
    out << "];\n";
  }
  for (int i : g.initial) {
    out << "  init" << i << " [shape=point];\n  init" << i << " -> s" << i << ";\n";
  }
  for (const Transition& t : g.transitions) {
    out << "  s" << t.src << " -> s" << t.dst << " [label=\""
        << moveLabel(t.move, &g.states[static_cast<size_t>(t.src)]) << "\"";
    if (t.success) out << " color=green penwidth=2";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace ccsw
