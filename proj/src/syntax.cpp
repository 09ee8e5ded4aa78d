#include "ccsw/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace ccsw {

SyntaxError::SyntaxError(const std::string& msg, SourcePos p)
    : std::runtime_error(msg + " (line " + std::to_string(p.line) + ", col " +
                         std::to_string(p.col) + ")"),
      pos(p) {}

ProcPtr mkZero(SourcePos pos) { return mkSum({}, pos); }

ProcPtr mkSum(std::vector<std::pair<Prefix, ProcPtr>> items, SourcePos pos) {
  auto p = std::make_shared<OpenProcess>();
  p->kind = OpenProcess::Kind::Sum;
  p->items = std::move(items);
  p->pos = pos;
  return p;
}

ProcPtr mkPar(ProcPtr left, ProcPtr right, SourcePos pos) {
  auto p = std::make_shared<OpenProcess>();
  p->kind = OpenProcess::Kind::Par;
  p->left = std::move(left);
  p->right = std::move(right);
  p->pos = pos;
  return p;
}

ProcPtr mkNu(std::string binder, ProcPtr body, SourcePos pos) {
  auto p = std::make_shared<OpenProcess>();
  p->kind = OpenProcess::Kind::Nu;
  p->binder = std::move(binder);
  p->body = std::move(body);
  p->pos = pos;
  return p;
}

ProcPtr mkCall(std::string var, std::vector<std::string> args, SourcePos pos) {
  auto p = std::make_shared<OpenProcess>();
  p->kind = OpenProcess::Kind::Call;
  p->var = std::move(var);
  p->args = std::move(args);
  p->pos = pos;
  return p;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  KwNames,
  KwRec,
  KwIn,
  KwNew,
  KwTick,
  Ident,
  Zero,
  LParen,
  RParen,
  Dot,
  Comma,
  Bar,
  Plus,
  Quest,
  Bang,
  Equals,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identCont(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto bump = [&](char c) {
    if (c == '\n') {
      line++;
      col = 1;
    } else {
      col++;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') {
        bump(text[i]);
        i++;
      }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump(c);
      i++;
      continue;
    }
    SourcePos pos{line, col};
    if (identStart(c)) {
      std::string word;
      while (i < text.size() && identCont(text[i])) {
        word += text[i];
        bump(text[i]);
        i++;
      }
      Tok k = Tok::Ident;
      if (word == "names") k = Tok::KwNames;
      else if (word == "rec") k = Tok::KwRec;
      else if (word == "in") k = Tok::KwIn;
      else if (word == "new") k = Tok::KwNew;
      else if (word == "tick") k = Tok::KwTick;
      out.push_back({k, word, pos});
      continue;
    }
    Tok k;
    switch (c) {
      case '0': k = Tok::Zero; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '.': k = Tok::Dot; break;
      case ',': k = Tok::Comma; break;
      case '|': k = Tok::Bar; break;
      case '+': k = Tok::Plus; break;
      case '?': k = Tok::Quest; break;
      case '!': k = Tok::Bang; break;
      case '=': k = Tok::Equals; break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
    }
    out.push_back({k, std::string(1, c), pos});
    bump(c);
    i++;
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
  std::vector<Token> toks;
  size_t at = 0;

  const Token& peek(int ahead = 0) const {
    size_t k = at + static_cast<size_t>(ahead);
    return k < toks.size() ? toks[k] : toks.back();
  }
  Token next() {
    Token t = peek();
    if (t.kind != Tok::End) at++;
    return t;
  }
  bool accept(Tok k) {
    if (peek().kind == k) {
      at++;
      return true;
    }
    return false;
  }
  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k) {
      throw SyntaxError("expected " + what + ", found '" + peek().text + "'", peek().pos);
    }
    return next();
  }

  bool startsPrefix() const {
    if (peek().kind == Tok::KwTick) return true;
    if (peek().kind == Tok::Ident) {
      Tok n = peek(1).kind;
      return n == Tok::Quest || n == Tok::Bang;
    }
    return false;
  }

  Prefix parsePrefix() {
    if (accept(Tok::KwTick)) return Prefix{PrefixKind::Tick, ""};
    Token id = expect(Tok::Ident, "channel name");
    if (accept(Tok::Quest)) return Prefix{PrefixKind::Input, id.text};
    expect(Tok::Bang, "'?' or '!'");
    return Prefix{PrefixKind::Output, id.text};
  }

  std::pair<Prefix, ProcPtr> parseGuard() {
    SourcePos pos = peek().pos;
    Prefix pre = parsePrefix();
    if (accept(Tok::Dot)) {
      if (startsPrefix()) {
        // prefix chain: a?.tick means a?.(tick.0)
        auto inner = parseGuard();
        return {pre, mkSum({inner}, pos)};
      }
      return {pre, parseAtom()};
    }
    return {pre, mkZero(pos)};
  }

  ProcPtr parseAtom() {
    SourcePos pos = peek().pos;
    if (accept(Tok::Zero)) return mkZero(pos);
    if (accept(Tok::LParen)) {
      ProcPtr p = parseProc();
      expect(Tok::RParen, "')'");
      return p;
    }
    if (accept(Tok::KwNew)) {
      Token id = expect(Tok::Ident, "channel name after 'new'");
      expect(Tok::Dot, "'.' after 'new' binder");
      return mkNu(id.text, parseAtom(), pos);
    }
    if (peek().kind == Tok::Ident) {
      Token id = next();
      expect(Tok::LParen, "'(' after process variable");
      std::vector<std::string> args;
      if (peek().kind != Tok::RParen) {
        args.push_back(expect(Tok::Ident, "argument name").text);
        while (accept(Tok::Comma)) {
          args.push_back(expect(Tok::Ident, "argument name").text);
        }
      }
      expect(Tok::RParen, "')'");
      return mkCall(id.text, std::move(args), pos);
    }
    throw SyntaxError("expected a process, found '" + peek().text + "'", peek().pos);
  }

  ProcPtr parseSum() {
    SourcePos pos = peek().pos;
    if (startsPrefix()) {
      std::vector<std::pair<Prefix, ProcPtr>> items;
      items.push_back(parseGuard());
      while (accept(Tok::Plus)) items.push_back(parseGuard());
      return mkSum(std::move(items), pos);
    }
    return parseAtom();
  }

  ProcPtr parseProc() {
    SourcePos pos = peek().pos;
    ProcPtr p = parseSum();
    while (accept(Tok::Bar)) {
      ProcPtr q = parseSum();
      p = mkPar(p, q, pos);
    }
    return p;
  }

  Definition parseDef() {
    Token id = expect(Tok::Ident, "process variable");
    expect(Tok::LParen, "'(' after process variable");
    std::vector<std::string> params;
    if (peek().kind != Tok::RParen) {
      params.push_back(expect(Tok::Ident, "parameter name").text);
      while (accept(Tok::Comma)) {
        params.push_back(expect(Tok::Ident, "parameter name").text);
      }
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Equals, "'='");
    ProcPtr body = parseProc();
    return Definition{id.text, std::move(params), std::move(body), id.pos};
  }

  bool recAhead() const {
    for (size_t k = at; k < toks.size(); k++) {
      if (toks[k].kind == Tok::KwRec) return true;
    }
    return false;
  }

  GlobalProcess parseGlobal() {
    GlobalProcess g;
    expect(Tok::KwNames, "'names'");
    g.names.push_back(expect(Tok::Ident, "channel name").text);
    while (accept(Tok::Comma)) {
      g.names.push_back(expect(Tok::Ident, "channel name").text);
    }
    expect(Tok::Dot, "'.' after name declaration");

    // Restrictions written before the rec block scope over the whole program;
    // since definition bodies only see their own parameters this is the same
    // as restricting the main process.
    std::vector<std::pair<std::string, SourcePos>> outerNus;
    if (recAhead()) {
      while (peek().kind == Tok::KwNew) {
        SourcePos pos = next().pos;
        Token id = expect(Tok::Ident, "channel name after 'new'");
        expect(Tok::Dot, "'.' after 'new' binder");
        outerNus.emplace_back(id.text, pos);
      }
      expect(Tok::KwRec, "'rec'");
      g.defs.push_back(parseDef());
      while (accept(Tok::Comma)) g.defs.push_back(parseDef());
      expect(Tok::KwIn, "'in'");
    }
    g.main = parseProc();
    expect(Tok::End, "end of input");
    for (auto it = outerNus.rbegin(); it != outerNus.rend(); ++it) {
      g.main = mkNu(it->first, g.main, it->second);
    }
    return g;
  }
};

}  // namespace

GlobalProcess parse(const std::string& text) {
  Parser p{lex(text)};
  return p.parseGlobal();
}

// ---------------------------------------------------------------------------
// Free names

namespace {

void freeNamesInto(const ProcPtr& p, std::set<std::string>& out) {
  switch (p->kind) {
    case OpenProcess::Kind::Sum:
      for (auto& [pre, cont] : p->items) {
        if (pre.kind != PrefixKind::Tick) out.insert(pre.channel);
        freeNamesInto(cont, out);
      }
      break;
    case OpenProcess::Kind::Par:
      freeNamesInto(p->left, out);
      freeNamesInto(p->right, out);
      break;
    case OpenProcess::Kind::Nu: {
      std::set<std::string> inner;
      freeNamesInto(p->body, inner);
      inner.erase(p->binder);
      out.insert(inner.begin(), inner.end());
      break;
    }
    case OpenProcess::Kind::Call:
      out.insert(p->args.begin(), p->args.end());
      break;
  }
}

}  // namespace

std::vector<std::string> freeNames(const ProcPtr& p) {
  std::set<std::string> s;
  freeNamesInto(p, s);
  return {s.begin(), s.end()};
}

// ---------------------------------------------------------------------------
// Substitution

ProcPtr substitute(const ProcPtr& p, const Renaming& r) {
  if (r.empty()) return p;
  switch (p->kind) {
    case OpenProcess::Kind::Sum: {
      std::vector<std::pair<Prefix, ProcPtr>> items;
      items.reserve(p->items.size());
      for (auto& [pre, cont] : p->items) {
        Prefix pre2 = pre;
        if (pre.kind != PrefixKind::Tick) {
          auto it = r.find(pre.channel);
          if (it != r.end()) pre2.channel = it->second;
        }
        items.emplace_back(pre2, substitute(cont, r));
      }
      return mkSum(std::move(items), p->pos);
    }
    case OpenProcess::Kind::Par:
      return mkPar(substitute(p->left, r), substitute(p->right, r), p->pos);
    case OpenProcess::Kind::Nu: {
      std::set<std::string> bodyFree;
      freeNamesInto(p->body, bodyFree);
      // Only the part of the renaming that touches actually free names matters.
      Renaming rr;
      std::set<std::string> range;
      for (auto& [from, to] : r) {
        if (from != p->binder && bodyFree.count(from)) {
          rr[from] = to;
          range.insert(to);
        }
      }
      if (rr.empty()) return mkNu(p->binder, p->body, p->pos);
      std::string binder = p->binder;
      if (range.count(binder)) {
        // The binder would capture a renamed-in name; alpha-rename it first.
        std::string fresh = binder;
        auto clashes = [&](const std::string& n) {
          return range.count(n) || rr.count(n) ||
                 (bodyFree.count(n) && n != p->binder);
        };
        do {
          fresh += "'";
        } while (clashes(fresh));
        rr[binder] = fresh;
        binder = fresh;
      }
      return mkNu(binder, substitute(p->body, rr), p->pos);
    }
    case OpenProcess::Kind::Call: {
      std::vector<std::string> args;
      args.reserve(p->args.size());
      for (auto& a : p->args) {
        auto it = r.find(a);
        args.push_back(it != r.end() ? it->second : a);
      }
      return mkCall(p->var, std::move(args), p->pos);
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// check

namespace {

struct Checker {
  const GlobalProcess& g;
  std::set<std::string> varNames;

  explicit Checker(const GlobalProcess& gp) : g(gp) {
    for (auto& d : g.defs) varNames.insert(d.var);
  }

  const Definition* findDef(const std::string& var) const {
    for (auto& d : g.defs) {
      if (d.var == var) return &d;
    }
    return nullptr;
  }

  int indexOf(const std::vector<std::string>& gamma, const std::string& n) const {
    // innermost binding wins
    for (int i = static_cast<int>(gamma.size()) - 1; i >= 0; i--) {
      if (gamma[static_cast<size_t>(i)] == n) return i;
    }
    return -1;
  }

  std::string canonicalBinder(const std::vector<std::string>& gamma) const {
    std::string base = "v" + std::to_string(gamma.size() + 1);
    auto clashes = [&](const std::string& n) {
      return varNames.count(n) || indexOf(gamma, n) >= 0;
    };
    while (clashes(base)) base += "'";
    return base;
  }

  ProcPtr checkTerm(const ProcPtr& p, const std::vector<std::string>& gamma) {
    switch (p->kind) {
      case OpenProcess::Kind::Sum: {
        std::vector<std::pair<Prefix, ProcPtr>> items;
        items.reserve(p->items.size());
        for (auto& [pre, cont] : p->items) {
          if (pre.kind != PrefixKind::Tick) {
            if (varNames.count(pre.channel)) {
              throw SyntaxError("'" + pre.channel + "' is a process variable, not a channel",
                                p->pos);
            }
            if (indexOf(gamma, pre.channel) < 0) {
              throw SyntaxError("unbound channel name '" + pre.channel + "'", p->pos);
            }
          }
          items.emplace_back(pre, checkTerm(cont, gamma));
        }
        auto q = std::make_shared<OpenProcess>();
        q->kind = OpenProcess::Kind::Sum;
        q->items = std::move(items);
        q->gamma = gamma;
        q->pos = p->pos;
        return q;
      }
      case OpenProcess::Kind::Par: {
        auto q = std::make_shared<OpenProcess>();
        q->kind = OpenProcess::Kind::Par;
        q->left = checkTerm(p->left, gamma);
        q->right = checkTerm(p->right, gamma);
        q->gamma = gamma;
        q->pos = p->pos;
        return q;
      }
      case OpenProcess::Kind::Nu: {
        std::string canon = canonicalBinder(gamma);
        ProcPtr body = p->body;
        if (p->binder != canon) {
          body = substitute(body, Renaming{{p->binder, canon}});
        }
        std::vector<std::string> inner = gamma;
        inner.push_back(canon);
        auto q = std::make_shared<OpenProcess>();
        q->kind = OpenProcess::Kind::Nu;
        q->binder = canon;
        q->body = checkTerm(body, inner);
        q->gamma = gamma;
        q->pos = p->pos;
        return q;
      }
      case OpenProcess::Kind::Call: {
        const Definition* d = findDef(p->var);
        if (!d) throw SyntaxError("unknown process variable '" + p->var + "'", p->pos);
        if (d->params.size() != p->args.size()) {
          throw SyntaxError("'" + p->var + "' expects " + std::to_string(d->params.size()) +
                                " argument(s), got " + std::to_string(p->args.size()),
                            p->pos);
        }
        for (auto& a : p->args) {
          if (varNames.count(a)) {
            throw SyntaxError("'" + a + "' is a process variable, not a channel", p->pos);
          }
          if (indexOf(gamma, a) < 0) {
            throw SyntaxError("unbound channel name '" + a + "'", p->pos);
          }
        }
        auto q = std::make_shared<OpenProcess>();
        q->kind = OpenProcess::Kind::Call;
        q->var = p->var;
        q->args = p->args;
        q->gamma = gamma;
        q->pos = p->pos;
        return q;
      }
    }
    return p;
  }
};

}  // namespace

GlobalProcess check(const GlobalProcess& g) {
  std::set<std::string> seen;
  for (auto& n : g.names) {
    if (n.empty()) throw SyntaxError("empty channel name", {});
    if (!seen.insert(n).second) {
      throw SyntaxError("duplicate declared name '" + n + "'", {});
    }
  }
  std::set<std::string> vars;
  for (auto& d : g.defs) {
    if (!vars.insert(d.var).second) {
      throw SyntaxError("duplicate definition of '" + d.var + "'", d.pos);
    }
    if (seen.count(d.var)) {
      throw SyntaxError("'" + d.var + "' is used both as a channel name and a process variable",
                        d.pos);
    }
  }
  Checker ck(g);
  GlobalProcess out;
  out.names = g.names;
  for (auto& d : g.defs) {
    std::set<std::string> ps;
    for (auto& p : d.params) {
      if (!ps.insert(p).second) {
        throw SyntaxError("duplicate parameter '" + p + "' of '" + d.var + "'", d.pos);
      }
      if (vars.count(p)) {
        throw SyntaxError("'" + p + "' is a process variable, not a channel", d.pos);
      }
    }
    Definition nd{d.var, d.params, ck.checkTerm(d.body, d.params), d.pos};
    out.defs.push_back(std::move(nd));
  }
  if (!g.main) throw SyntaxError("missing main process", {});
  out.main = ck.checkTerm(g.main, g.names);
  return out;
}

// ---------------------------------------------------------------------------
// Equality

bool structurallyEqual(const ProcPtr& a, const ProcPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case OpenProcess::Kind::Sum: {
      if (a->items.size() != b->items.size()) return false;
      for (size_t i = 0; i < a->items.size(); i++) {
        if (!(a->items[i].first == b->items[i].first)) return false;
        if (!structurallyEqual(a->items[i].second, b->items[i].second)) return false;
      }
      return true;
    }
    case OpenProcess::Kind::Par:
      return structurallyEqual(a->left, b->left) && structurallyEqual(a->right, b->right);
    case OpenProcess::Kind::Nu:
      return a->binder == b->binder && structurallyEqual(a->body, b->body);
    case OpenProcess::Kind::Call:
      return a->var == b->var && a->args == b->args;
  }
  return false;
}

bool structurallyEqual(const GlobalProcess& a, const GlobalProcess& b) {
  if (a.names != b.names || a.defs.size() != b.defs.size()) return false;
  for (size_t i = 0; i < a.defs.size(); i++) {
    if (a.defs[i].var != b.defs[i].var || a.defs[i].params != b.defs[i].params) return false;
    if (!structurallyEqual(a.defs[i].body, b.defs[i].body)) return false;
  }
  return structurallyEqual(a.main, b.main);
}

GlobalProcess withMain(const GlobalProcess& g, ProcPtr main) {
  GlobalProcess out;
  out.names = g.names;
  out.defs = g.defs;
  out.main = std::move(main);
  return out;
}

bool alphaEqual(const GlobalProcess& g, const ProcPtr& a, const ProcPtr& b) {
  GlobalProcess ga = check(withMain(g, a));
  GlobalProcess gb = check(withMain(g, b));
  return structurallyEqual(ga.main, gb.main);
}

// ---------------------------------------------------------------------------
// derive / approximant

ProcPtr derive(const ProcPtr& p, const std::vector<Definition>& defs) {
  switch (p->kind) {
    case OpenProcess::Kind::Sum: {
      std::vector<std::pair<Prefix, ProcPtr>> items;
      items.reserve(p->items.size());
      for (auto& [pre, cont] : p->items) items.emplace_back(pre, derive(cont, defs));
      return mkSum(std::move(items), p->pos);
    }
    case OpenProcess::Kind::Par:
      return mkPar(derive(p->left, defs), derive(p->right, defs), p->pos);
    case OpenProcess::Kind::Nu:
      return mkNu(p->binder, derive(p->body, defs), p->pos);
    case OpenProcess::Kind::Call: {
      for (auto& d : defs) {
        if (d.var == p->var) {
          if (d.params.size() != p->args.size()) {
            throw SyntaxError("'" + p->var + "' expects " + std::to_string(d.params.size()) +
                                  " argument(s), got " + std::to_string(p->args.size()),
                              p->pos);
          }
          Renaming r;
          for (size_t i = 0; i < d.params.size(); i++) {
            if (d.params[i] != p->args[i]) r[d.params[i]] = p->args[i];
          }
          return substitute(d.body, r);
        }
      }
      throw SyntaxError("unknown process variable '" + p->var + "'", p->pos);
    }
  }
  return p;
}

ProcPtr approximant(const GlobalProcess& g, int i) {
  GlobalProcess cg = check(g);
  ProcPtr p = cg.main;
  for (int k = 0; k < i; k++) p = derive(p, cg.defs);
  return p;
}

// ---------------------------------------------------------------------------
// Pretty printing

namespace {

std::string prettyPrefix(const Prefix& pre) {
  switch (pre.kind) {
    case PrefixKind::Input: return pre.channel + "?";
    case PrefixKind::Output: return pre.channel + "!";
    case PrefixKind::Tick: return "tick";
  }
  return "";
}

bool isZero(const ProcPtr& p) {
  return p->kind == OpenProcess::Kind::Sum && p->items.empty();
}

std::string prettyProc(const ProcPtr& p);

std::string prettyAtomish(const ProcPtr& p) {
  switch (p->kind) {
    case OpenProcess::Kind::Sum:
      if (p->items.empty()) return "0";
      return "(" + prettyProc(p) + ")";
    case OpenProcess::Kind::Par:
      return "(" + prettyProc(p) + ")";
    case OpenProcess::Kind::Nu:
      return "new " + p->binder + ". " + prettyAtomish(p->body);
    case OpenProcess::Kind::Call: {
      std::string s = p->var + "(";
      for (size_t i = 0; i < p->args.size(); i++) {
        if (i) s += ", ";
        s += p->args[i];
      }
      return s + ")";
    }
  }
  return "";
}

std::string prettyGuard(const Prefix& pre, const ProcPtr& cont) {
  std::string s = prettyPrefix(pre);
  if (isZero(cont)) return s;
  // A single-summand continuation keeps the prefix chain flat.
  if (cont->kind == OpenProcess::Kind::Sum && cont->items.size() == 1) {
    return s + "." + prettyGuard(cont->items[0].first, cont->items[0].second);
  }
  return s + "." + prettyAtomish(cont);
}

std::string prettySum(const ProcPtr& p) {
  if (p->kind != OpenProcess::Kind::Sum || p->items.empty()) return prettyAtomish(p);
  std::string s;
  for (size_t i = 0; i < p->items.size(); i++) {
    if (i) s += " + ";
    s += prettyGuard(p->items[i].first, p->items[i].second);
  }
  return s;
}

std::string prettyProc(const ProcPtr& p) {
  if (p->kind == OpenProcess::Kind::Par) {
    // left-associated chains print flat, right-nested pars need parens
    std::string l = prettyProc(p->left);
    std::string r = p->right->kind == OpenProcess::Kind::Par ? "(" + prettyProc(p->right) + ")"
                                                             : prettySum(p->right);
    return l + " | " + r;
  }
  return prettySum(p);
}

}  // namespace

std::string pretty(const ProcPtr& p) { return prettyProc(p); }

std::string pretty(const GlobalProcess& g) {
  std::ostringstream os;
  os << "names ";
  for (size_t i = 0; i < g.names.size(); i++) {
    if (i) os << ", ";
    os << g.names[i];
  }
  os << ".";
  if (!g.defs.empty()) {
    os << " rec ";
    for (size_t i = 0; i < g.defs.size(); i++) {
      if (i) os << ", ";
      const Definition& d = g.defs[i];
      os << d.var << "(";
      for (size_t k = 0; k < d.params.size(); k++) {
        if (k) os << ", ";
        os << d.params[k];
      }
      os << ") = " << prettyProc(d.body);
    }
    os << " in";
  }
  os << " " << prettyProc(g.main);
  return os.str();
}

}  // namespace ccsw
