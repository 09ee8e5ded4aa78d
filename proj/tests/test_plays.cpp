#include "doctest.h"

#include "ccsw/plays.hpp"

using namespace ccsw;

namespace {

using CWM = ClosedWorldMove;

// Two players sharing one channel.
Position twoOnA() { return Position{1, {{0}, {0}}}; }

const BasicMove FORKL{MoveKind::ForkL, 0};
const BasicMove FORKR{MoveKind::ForkR, 0};
const BasicMove TICK{MoveKind::Tick, 0};
const BasicMove NU{MoveKind::Nu, 0};
BasicMove in(int i) { return {MoveKind::In, i}; }
BasicMove out(int i) { return {MoveKind::Out, i}; }

// A node whose every move leads nowhere, repeated `states` times.
NodeRef flatNode(StrategySystem& sys, int arity, int states) {
  std::vector<NodeRef> parts;
  for (int i = 0; i < states; i++) parts.push_back(addSingleton(sys, arity, sys.blankTable(arity)));
  return addSum(sys, arity, parts);
}

}  // namespace

TEST_CASE("viewDecomposition: the four move kinds") {
  Run fork{twoOnA(), {CWM::fork(0)}};
  auto df = viewDecomposition(fork, 0);
  REQUIRE(df.size() == 2);
  CHECK(df[0] == std::pair{FORKL, 2});
  CHECK(df[1] == std::pair{FORKR, 3});

  Run sync{twoOnA(), {CWM::sync(0, 1, 1, 1)}};
  auto ds = viewDecomposition(sync, 0);
  REQUIRE(ds.size() == 2);
  CHECK(ds[0] == std::pair{out(1), 2});
  CHECK(ds[1] == std::pair{in(1), 3});

  Run tick{twoOnA(), {CWM::tick(1)}};
  auto dt = viewDecomposition(tick, 0);
  REQUIRE(dt.size() == 1);
  CHECK(dt[0] == std::pair{TICK, 2});

  Run nu{twoOnA(), {CWM::nu(0)}};
  auto dn = viewDecomposition(nu, 0);
  REQUIRE(dn.size() == 1);
  CHECK(dn[0] == std::pair{NU, 2});
}

TEST_CASE("viewsOf: empty run gives identity views") {
  PrefixForest f = viewsOf(Run{twoOnA(), {}});
  REQUIRE(f.nodes.size() == 2);
  CHECK(f.roots == std::vector<int>{0, 1});
  CHECK(f.nodes[0].alive);
  CHECK(f.nodes[1].alive);
  CHECK(f.finalChannels == 1);
  CHECK(viewOf(f, 0).moves.empty());
}

TEST_CASE("viewsOf: one fork") {
  PrefixForest f = viewsOf(Run{twoOnA(), {CWM::fork(0)}});
  REQUIRE(f.nodes.size() == 4);
  CHECK(!f.nodes[0].alive);
  CHECK(f.nodes[1].alive);
  CHECK(f.nodes[0].children == std::vector<int>{2, 3});
  CHECK(f.nodes[2].fromParent == FORKL);
  CHECK(f.nodes[3].fromParent == FORKR);
  CHECK(f.nodes[2].tuple == f.nodes[0].tuple);
}

TEST_CASE("viewsOf: nu extends the tuple with a fresh channel") {
  PrefixForest f = viewsOf(Run{twoOnA(), {CWM::nu(0)}});
  REQUIRE(f.nodes.size() == 3);
  CHECK(f.nodes[2].tuple == std::vector<int>{0, 1});
  CHECK(f.finalChannels == 2);
}

TEST_CASE("viewsOf: the leftmost maximal view of a fork-fork-sync play") {
  Run r{twoOnA(), {CWM::fork(0), CWM::fork(2), CWM::sync(4, 1, 1, 1)}};
  PrefixForest f = viewsOf(r);
  // avatars: 0,1 initial; fork(0) -> 2,3; fork(2) -> 4,5; sync -> 6,7
  ViewPath v = viewOf(f, 6);
  CHECK(v.arity == 1);
  CHECK(v.moves == std::vector<BasicMove>{FORKL, FORKL, out(1)});
  ViewPath w = viewOf(f, 7);
  CHECK(w.moves == std::vector<BasicMove>{in(1)});
}

TEST_CASE("viewsOf: node growth equals the sum of decomposition sizes") {
  Run r{twoOnA(), {CWM::fork(0), CWM::fork(2), CWM::sync(4, 1, 1, 1), CWM::tick(6)}};
  PrefixForest f = viewsOf(r);
  size_t created = 0;
  for (size_t e = 0; e < r.moves.size(); e++) created += viewDecomposition(r, e).size();
  CHECK(f.nodes.size() == r.start.players.size() + created);
}

TEST_CASE("viewsOf: rejects double consumption") {
  CHECK_THROWS(viewsOf(Run{twoOnA(), {CWM::tick(0), CWM::tick(0)}}));
  CHECK_THROWS(viewsOf(Run{twoOnA(), {CWM::fork(0), CWM::sync(0, 1, 1, 1)}}));
}

TEST_CASE("viewsOf: rejects self-synchronisation and bad indices") {
  CHECK_THROWS(viewsOf(Run{twoOnA(), {CWM::sync(0, 1, 0, 1)}}));
  CHECK_THROWS(viewsOf(Run{twoOnA(), {CWM::sync(0, 2, 1, 1)}}));
  CHECK_THROWS(viewsOf(Run{twoOnA(), {CWM::tick(9)}}));
}

TEST_CASE("viewsOf: rejects syncs on different channels") {
  Position p{2, {{0}, {1}}};
  CHECK_THROWS(viewsOf(Run{p, {CWM::sync(0, 1, 1, 1)}}));
}

TEST_CASE("viewsOf: rejects tuples mentioning unknown channels") {
  Position bad{1, {{0}, {3}}};
  CHECK_THROWS(viewsOf(Run{bad, {}}));
}

TEST_CASE("globalStates: identity run multiplies root widths") {
  StrategySystem sys;
  NodeRef one = flatNode(sys, 1, 1);
  NodeRef three = flatNode(sys, 1, 3);
  CHECK(globalStates(sys, {one, one}, Run{twoOnA(), {}}) == 1);
  CHECK(globalStates(sys, {one, three}, Run{twoOnA(), {}}) == 3);
  CHECK(globalStates(sys, {three, three}, Run{twoOnA(), {}}) == 9);
}

TEST_CASE("globalStates: single move agrees with the hand formula") {
  // Two root states with different continuation widths under each move kind.
  StrategySystem sys;
  NodeRef a1 = flatNode(sys, 1, 1);
  NodeRef a2 = flatNode(sys, 1, 2);
  NodeRef b3 = flatNode(sys, 2, 3);  // for nu targets

  SUBCASE("fork") {
    MoveTable z0 = sys.blankTable(1);
    z0.set(FORKL, a1);
    z0.set(FORKR, a2);
    MoveTable z1 = sys.blankTable(1);
    z1.set(FORKL, a2);
    z1.set(FORKR, a2);
    NodeRef x = addSum(sys, 1, {addSingleton(sys, 1, z0), addSingleton(sys, 1, z1)});
    NodeRef idle = flatNode(sys, 1, 1);
    // sum over root states of |forkL target| * |forkR target|: 1*2 + 2*2
    CHECK(globalStates(sys, {x, idle}, Run{twoOnA(), {CWM::fork(0)}}) == 6);
  }
  SUBCASE("tick") {
    MoveTable z0 = sys.blankTable(1);
    z0.set(TICK, a2);
    NodeRef x = addSum(sys, 1, {addSingleton(sys, 1, z0), addSingleton(sys, 1, sys.blankTable(1))});
    NodeRef idle = flatNode(sys, 1, 1);
    CHECK(globalStates(sys, {x, idle}, Run{twoOnA(), {CWM::tick(0)}}) == 2);
  }
  SUBCASE("nu") {
    MoveTable z0 = sys.blankTable(1);
    z0.set(NU, b3);
    NodeRef x = addSingleton(sys, 1, z0);
    NodeRef idle = flatNode(sys, 1, 1);
    CHECK(globalStates(sys, {x, idle}, Run{twoOnA(), {CWM::nu(0)}}) == 3);
  }
  SUBCASE("sync") {
    MoveTable zs = sys.blankTable(1);
    zs.set(out(1), a2);
    NodeRef sender = addSingleton(sys, 1, zs);
    MoveTable zr0 = sys.blankTable(1);
    zr0.set(in(1), a2);
    MoveTable zr1 = sys.blankTable(1);
    zr1.set(in(1), a1);
    NodeRef receiver = addSum(sys, 1, {addSingleton(sys, 1, zr0), addSingleton(sys, 1, zr1)});
    // (sum of sender out-widths) * (sum of receiver in-widths): 2 * (2+1)
    CHECK(globalStates(sys, {sender, receiver}, Run{twoOnA(), {CWM::sync(0, 1, 1, 1)}}) == 6);
  }
}

TEST_CASE("globalStates: reordering independent events changes nothing") {
  Position p{2, {{0}, {0}, {1}, {1}}};
  StrategySystem sys;
  NodeRef cont = flatNode(sys, 1, 2);
  MoveTable zs = sys.blankTable(1);
  zs.set(out(1), cont);
  MoveTable zr = sys.blankTable(1);
  zr.set(in(1), cont);
  NodeRef sender = addSingleton(sys, 1, zs);
  NodeRef receiver = addSum(sys, 1, {addSingleton(sys, 1, zr), addSingleton(sys, 1, zr)});
  std::vector<NodeRef> assign{sender, receiver, sender, receiver};

  Run ab{p, {CWM::sync(0, 1, 1, 1), CWM::sync(2, 1, 3, 1)}};
  Run ba{p, {CWM::sync(2, 1, 3, 1), CWM::sync(0, 1, 1, 1)}};
  long long va = globalStates(sys, assign, ab);
  long long vb = globalStates(sys, assign, ba);
  CHECK(va == vb);
  CHECK(va == (2 * (2 + 2)) * (2 * (2 + 2)));
}

TEST_CASE("globalStates: rejects arity mismatches") {
  StrategySystem sys;
  NodeRef wrong = flatNode(sys, 2, 1);
  CHECK_THROWS(globalStates(sys, {wrong, wrong}, Run{twoOnA(), {}}));
}

TEST_CASE("run json roundtrip") {
  Run valid{twoOnA(), {CWM::fork(0), CWM::nu(2), CWM::sync(4, 1, 3, 1), CWM::tick(1)}};
  viewsOf(valid);  // sanity: the fixture run is well formed
  Run back = runFromJson(runToJson(valid));
  CHECK(back.start.channels == valid.start.channels);
  CHECK(back.start.players == valid.start.players);
  REQUIRE(back.moves.size() == valid.moves.size());
  for (size_t i = 0; i < valid.moves.size(); i++) CHECK(back.moves[i] == valid.moves[i]);
}

TEST_CASE("forestToDot mentions every avatar") {
  PrefixForest f = viewsOf(Run{twoOnA(), {CWM::fork(0)}});
  std::string dot = forestToDot(f);
  CHECK(dot.find("digraph") != std::string::npos);
  for (int a = 0; a < 4; a++) {
    CHECK(dot.find("avatar " + std::to_string(a)) != std::string::npos);
  }
  CHECK(dot.find("forkL") != std::string::npos);
}

// ---------------------------------------------------------------------------
// Tabulated Kan extension

namespace {

// The running three-player example: player x may input on a, players y and z
// may output. Two plays: x syncing with y, x syncing with z. Each maximal
// view has one thread; the play values are deliberately wrong (2 and 0).
TabulatedPoset ranFixture(long long claimXY, long long claimXZ) {
  TabulatedPoset p;
  p.objects = {
      {"eps_x", false, 1}, {"eps_y", false, 1}, {"eps_z", false, 1},
      {"I_x", false, 1},   {"O_y", false, 1},   {"O_z", false, 1},
      {"S_xy", true, claimXY}, {"S_xz", true, claimXZ},
  };
  p.leq = {{0, 3}, {1, 4}, {2, 5}, {3, 6}, {4, 6}, {3, 7}, {5, 7}};
  p.maps[{0, 3}] = {0};
  p.maps[{1, 4}] = {0};
  p.maps[{2, 5}] = {0};
  return p;
}

}  // namespace

TEST_CASE("kan: flags the two non-innocent plays and computes the completion") {
  KanOutcome o = kanExtendTabulated(ranFixture(2, 0));
  REQUIRE(o.plays.size() == 2);
  CHECK(!o.consistent);
  CHECK(o.plays[0].claimed == 2);
  CHECK(o.plays[0].computed == 1);
  CHECK(!o.plays[0].innocent);
  CHECK(o.plays[1].claimed == 0);
  CHECK(o.plays[1].computed == 1);
  CHECK(!o.plays[1].innocent);
}

TEST_CASE("kan: the completion is a fixed point") {
  KanOutcome o = kanExtendTabulated(ranFixture(1, 1));
  CHECK(o.consistent);
  CHECK(o.plays[0].innocent);
  CHECK(o.plays[1].innocent);
}

TEST_CASE("kan: incomparable views multiply") {
  TabulatedPoset p;
  p.objects = {{"u", false, 2}, {"v", false, 3}, {"P", true, 6}};
  p.leq = {{0, 2}, {1, 2}};
  KanOutcome o = kanExtendTabulated(p);
  CHECK(o.consistent);
  CHECK(o.plays[0].computed == 6);
}

TEST_CASE("kan: restriction maps constrain families along chains") {
  TabulatedPoset p;
  p.objects = {{"u", false, 2}, {"v", false, 2}, {"P", true, 2}};
  p.leq = {{0, 1}, {1, 2}};
  p.maps[{0, 1}] = {0, 1};
  KanOutcome o = kanExtendTabulated(p);
  // each choice at v forces the matching choice at u
  CHECK(o.plays[0].computed == 2);

  p.maps[{0, 1}] = {0, 0};
  o = kanExtendTabulated(p);
  CHECK(o.plays[0].computed == 2);
}

TEST_CASE("kan: a play with no views below counts one empty family") {
  TabulatedPoset p;
  p.objects = {{"P", true, 0}};
  KanOutcome o = kanExtendTabulated(p);
  CHECK(o.plays[0].computed == 1);
  CHECK(!o.plays[0].innocent);
}

TEST_CASE("kan: rejects non-antisymmetric orders") {
  TabulatedPoset p;
  p.objects = {{"u", false, 1}, {"v", false, 1}};
  p.leq = {{0, 1}, {1, 0}};
  CHECK_THROWS(kanExtendTabulated(p));
}

TEST_CASE("kan: rejects non-functorial maps") {
  TabulatedPoset p;
  p.objects = {{"u", false, 2}, {"v", false, 2}, {"w", false, 2}, {"P", true, 1}};
  p.leq = {{0, 1}, {1, 2}, {2, 3}};
  p.maps[{0, 1}] = {0, 1};
  p.maps[{1, 2}] = {0, 1};
  p.maps[{0, 2}] = {1, 0};  // disagrees with the composite
  CHECK_THROWS(kanExtendTabulated(p));
}

TEST_CASE("kan: rejects ill-typed maps") {
  TabulatedPoset p;
  p.objects = {{"u", false, 1}, {"v", false, 2}, {"P", true, 1}};
  p.leq = {{0, 1}, {1, 2}};
  p.maps[{0, 1}] = {0};  // wrong domain size
  CHECK_THROWS(kanExtendTabulated(p));
  p.maps[{0, 1}] = {0, 7};  // out of range
  CHECK_THROWS(kanExtendTabulated(p));
}
