// Command-line front end: parse | translate | explore | check | compare.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "ccsw/testing.hpp"

namespace {

using namespace ccsw;

struct Config {
  int maxStates = 20000;
  int maxDepth = 200;
  int cycleBound = 12;
  int dumpDepth = 6;
  unsigned long long seed = 0;
  std::string format;  // per-command default when empty
};

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

GlobalProcess loadProgram(const std::string& path) { return check(parse(readFile(path))); }

void loadConfigFile(const std::string& path, Config& cfg) {
  nlohmann::json j = nlohmann::json::parse(readFile(path));
  if (j.contains("maxStates")) cfg.maxStates = j["maxStates"].get<int>();
  if (j.contains("maxDepth")) cfg.maxDepth = j["maxDepth"].get<int>();
  if (j.contains("cycleBound")) cfg.cycleBound = j["cycleBound"].get<int>();
  if (j.contains("dumpDepth")) cfg.dumpDepth = j["dumpDepth"].get<int>();
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  if (cfg.maxStates <= 0 || cfg.maxDepth <= 0 || cfg.cycleBound <= 0 || cfg.dumpDepth <= 0) {
    throw std::runtime_error("config bounds must be positive");
  }
}

ExploreConfig exploreConfig(const Config& cfg) {
  ExploreConfig ec;
  ec.maxStates = cfg.maxStates;
  ec.maxDepth = cfg.maxDepth;
  ec.moveOrderSeed = cfg.seed;
  return ec;
}

std::string pickFormat(const std::string& flag, const Config& cfg, const std::string& fallback) {
  if (!flag.empty()) return flag;
  if (!cfg.format.empty()) return cfg.format;
  return fallback;
}

// The test side keeps only the names listed in `shared` in common with the
// process; its other declared names are renamed apart so composition cannot
// accidentally identify them.
GlobalProcess isolateNonShared(const GlobalProcess& proc, const GlobalProcess& test,
                               const std::vector<std::string>& shared) {
  std::set<std::string> procNames(proc.names.begin(), proc.names.end());
  std::set<std::string> testNames(test.names.begin(), test.names.end());
  for (const std::string& s : shared) {
    if (!procNames.count(s) || !testNames.count(s)) {
      throw std::runtime_error("shared name '" + s + "' is not declared on both sides");
    }
  }
  std::set<std::string> keep(shared.begin(), shared.end());
  std::set<std::string> used = procNames;
  used.insert(testNames.begin(), testNames.end());
  Renaming ren;
  GlobalProcess out = test;
  for (std::string& nm : out.names) {
    if (!procNames.count(nm) || keep.count(nm)) continue;
    std::string fresh = nm;
    while (used.count(fresh)) fresh += "'";
    used.insert(fresh);
    ren[nm] = fresh;
    nm = fresh;
  }
  if (!ren.empty()) out.main = substitute(out.main, ren);
  return out;
}

Criterion criterionFromName(const std::string& s) {
  if (s == "fair") return Criterion::Fair;
  if (s == "must") return Criterion::Must;
  if (s == "classic-fair") return Criterion::ClassicFair;
  if (s == "classic-must") return Criterion::ClassicMust;
  throw std::runtime_error("unknown criterion '" + s + "'");
}

// Shared evaluation for check and compare; the world graph and the classic
// transition system are each built at most once per (process, test) pair.
struct Checker {
  const GlobalProcess& proc;
  const GlobalProcess& test;
  const Config& cfg;
  std::optional<GlobalStrategy> world;
  std::optional<TransitionGraph> graph;
  std::optional<Lts> lts;

  CheckResult run(Criterion c) {
    if (c == Criterion::Fair || c == Criterion::Must) {
      if (!graph) {
        world = compose(makeGlobal(proc), makeGlobal(test));
        graph = explore(*world, exploreConfig(cfg));
      }
      return c == Criterion::Fair ? checkFair(*graph)
                                  : checkMust(*graph, world->sys, cfg.cycleBound);
    }
    if (!lts) lts = classicLts(combineForTest(proc, test), cfg.maxStates);
    return c == Criterion::ClassicFair ? classicFair(*lts) : classicMust(*lts);
  }
};

int cmdParse(const std::string& file, const std::string& format) {
  GlobalProcess g = loadProgram(file);
  if (format == "json") {
    nlohmann::json j;
    j["names"] = g.names;
    nlohmann::json defs = nlohmann::json::array();
    for (const Definition& d : g.defs) {
      defs.push_back({{"var", d.var}, {"params", d.params}, {"body", pretty(d.body)}});
    }
    j["defs"] = std::move(defs);
    j["main"] = pretty(g.main);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << pretty(g) << "\n";
  }
  return 0;
}

int cmdTranslate(const std::string& file, const std::string& mode, int index, int depth,
                 const std::string& format) {
  GlobalProcess g = loadProgram(file);
  Strategy s = mode == "approximant" ? translateApproximant(g, index) : translateOpen(g);
  Strategy cut = truncate(s.sys, s.root, depth);
  if (format == "text") {
    std::cout << "root " << cut.root << "\n";
    for (size_t i = 0; i < cut.sys.nodes.size(); i++) {
      const StrategyNode& n = cut.sys.nodes[i];
      std::cout << "node " << i << ": arity " << n.arity << ", " << n.states.size() << " states"
                << (n.hole ? ", hole" : "") << "\n";
    }
  } else {
    std::cout << toJson(cut.sys, cut.root).dump(2) << "\n";
  }
  return 0;
}

int cmdExplore(const std::string& file, const Config& cfg, const std::string& format,
               const std::string& dotOut) {
  GlobalProcess g = loadProgram(file);
  GlobalStrategy w = makeGlobal(g);
  TransitionGraph graph = explore(w, exploreConfig(cfg));
  if (!dotOut.empty()) {
    std::ofstream out(dotOut, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + dotOut + "'");
    out << graphToDot(graph);
  }
  if (format == "dot") {
    if (dotOut.empty()) std::cout << graphToDot(graph);
  } else {
    std::cout << graphToJson(graph).dump(2) << "\n";
  }
  return 0;
}

int cmdCheck(const std::string& procFile, const std::string& testFile,
             const std::vector<std::string>& shared, std::vector<std::string> criteria,
             const Config& cfg, const std::string& format) {
  GlobalProcess proc = loadProgram(procFile);
  GlobalProcess test = loadProgram(testFile);
  if (!shared.empty()) test = isolateNonShared(proc, test, shared);
  if (criteria.empty()) criteria = {"fair", "must", "classic-fair", "classic-must"};
  Checker checker{proc, test, cfg, {}, {}, {}};
  std::vector<CheckResult> results;
  for (const std::string& name : criteria) results.push_back(checker.run(criterionFromName(name)));
  if (format == "text") {
    for (const CheckResult& r : results) {
      std::cout << criterionName(r.criterion) << ": " << verdictName(r.verdict);
      if (!r.note.empty()) std::cout << " (" << r.note << ")";
      std::cout << "\n";
    }
  } else {
    nlohmann::json j = nlohmann::json::array();
    for (const CheckResult& r : results) j.push_back(checkResultToJson(r));
    std::cout << j.dump(2) << "\n";
  }
  bool anyFail = false, anyUnknown = false;
  for (const CheckResult& r : results) {
    anyFail |= r.verdict == Verdict::Fail;
    anyUnknown |= r.verdict == Verdict::Unknown;
  }
  return anyFail ? 1 : anyUnknown ? 2 : 0;
}

int cmdCompare(const std::string& leftFile, const std::string& rightFile,
               const std::string& testsPath, const std::vector<std::string>& shared,
               const std::string& criterion, const Config& cfg, const std::string& format) {
  GlobalProcess left = loadProgram(leftFile);
  GlobalProcess right = loadProgram(rightFile);
  Criterion crit = criterionFromName(criterion);

  std::vector<std::string> testFiles;
  std::filesystem::path tp(testsPath);
  if (std::filesystem::is_directory(tp)) {
    for (const auto& e : std::filesystem::directory_iterator(tp)) {
      if (e.path().extension() == ".ccs") testFiles.push_back(e.path().string());
    }
    std::sort(testFiles.begin(), testFiles.end());
  } else {
    testFiles.push_back(testsPath);
  }
  if (testFiles.empty()) throw std::runtime_error("no .ccs tests under '" + testsPath + "'");

  nlohmann::json rows = nlohmann::json::array();
  std::vector<std::string> distinguishing;
  for (const std::string& tf : testFiles) {
    GlobalProcess test = loadProgram(tf);
    GlobalProcess testL = shared.empty() ? test : isolateNonShared(left, test, shared);
    GlobalProcess testR = shared.empty() ? test : isolateNonShared(right, test, shared);
    Checker cl{left, testL, cfg, {}, {}, {}};
    Checker cr{right, testR, cfg, {}, {}, {}};
    CheckResult a = cl.run(crit);
    CheckResult b = cr.run(crit);
    bool dist = (a.verdict == Verdict::Pass && b.verdict == Verdict::Fail) ||
                (a.verdict == Verdict::Fail && b.verdict == Verdict::Pass);
    if (dist) distinguishing.push_back(tf);
    rows.push_back({{"test", tf},
                    {"left", verdictName(a.verdict)},
                    {"right", verdictName(b.verdict)},
                    {"distinguishing", dist}});
    if (format == "text") {
      std::cout << tf << ": " << verdictName(a.verdict) << " vs " << verdictName(b.verdict)
                << (dist ? "  <- distinguishes" : "") << "\n";
    }
  }
  if (format != "text") {
    nlohmann::json j;
    j["criterion"] = criterion;
    j["rows"] = std::move(rows);
    j["distinguishing"] = distinguishing;
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CCS game-semantics workbench"};
  app.require_subcommand(1);

  std::string configFile;
  Config cfg;
  app.add_option("--config", configFile, "JSON config file");
  app.add_option("--max-states", cfg.maxStates, "exploration state budget");
  app.add_option("--max-depth", cfg.maxDepth, "exploration depth budget");
  app.add_option("--cycle-bound", cfg.cycleBound, "lasso search length bound");
  app.add_option("--seed", cfg.seed, "move enumeration shuffle seed (0 = off)");

  std::string file, testFile, rightFile, testsPath, dotOut;
  std::string format, mode = "lazy", criterion = "must";
  std::vector<std::string> shared, criteria;
  int depth = -1, index = -1;

  CLI::App* parseCmd = app.add_subcommand("parse", "parse and validate a program");
  parseCmd->add_option("file", file)->required();
  parseCmd->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  CLI::App* translateCmd = app.add_subcommand("translate", "dump a process's strategy");
  translateCmd->add_option("file", file)->required();
  translateCmd->add_option("--mode", mode)->check(CLI::IsMember({"lazy", "approximant"}));
  translateCmd->add_option("--index", index, "approximant index (defaults to the dump depth)");
  translateCmd->add_option("--depth", depth, "dump truncation depth");
  translateCmd->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  CLI::App* exploreCmd = app.add_subcommand("explore", "explore the closed-world graph");
  exploreCmd->add_option("file", file)->required();
  exploreCmd->add_option("--dot", dotOut, "write DOT to this file");
  exploreCmd->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}));

  CLI::App* checkCmd = app.add_subcommand("check", "run a process against a test");
  checkCmd->add_option("proc", file)->required();
  checkCmd->add_option("test", testFile)->required();
  checkCmd->add_option("--shared", shared, "shared channel names")->delimiter(',');
  checkCmd->add_option("--criterion", criteria, "fair|must|classic-fair|classic-must")
      ->delimiter(',');
  checkCmd->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  CLI::App* compareCmd = app.add_subcommand("compare", "compare two processes over a test set");
  compareCmd->add_option("left", file)->required();
  compareCmd->add_option("right", rightFile)->required();
  compareCmd->add_option("--tests", testsPath, "directory of .ccs tests (or one file)")
      ->required();
  compareCmd->add_option("--shared", shared, "shared channel names")->delimiter(',');
  compareCmd->add_option("--criterion", criterion)
      ->check(CLI::IsMember({"fair", "must", "classic-fair", "classic-must"}));
  compareCmd->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (!configFile.empty()) loadConfigFile(configFile, cfg);
    if (depth < 0) depth = cfg.dumpDepth;
    if (index < 0) index = depth;
    if (parseCmd->parsed()) return cmdParse(file, pickFormat(format, cfg, "text"));
    if (translateCmd->parsed()) {
      return cmdTranslate(file, mode, index, depth, pickFormat(format, cfg, "json"));
    }
    if (exploreCmd->parsed()) {
      return cmdExplore(file, cfg, pickFormat(format, cfg, "json"), dotOut);
    }
    if (checkCmd->parsed()) {
      return cmdCheck(file, testFile, shared, criteria, cfg, pickFormat(format, cfg, "json"));
    }
    if (compareCmd->parsed()) {
      return cmdCompare(file, rightFile, testsPath, shared, criterion, cfg,
                        pickFormat(format, cfg, "json"));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    bool verdictCommand = checkCmd->parsed() || compareCmd->parsed();
    return verdictCommand ? 3 : 1;
  }
  return 0;
}
