#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ccsw {

struct SourcePos {
  int line = 0;
  int col = 0;
};

// Parse and validation failures; pos points at the offending token.
struct SyntaxError : std::runtime_error {
  SourcePos pos;
  SyntaxError(const std::string& msg, SourcePos p);
};

enum class PrefixKind { Input, Output, Tick };

struct Prefix {
  PrefixKind kind = PrefixKind::Tick;
  std::string channel;  // empty for Tick
  bool operator==(const Prefix&) const = default;
};

struct OpenProcess;
using ProcPtr = std::shared_ptr<const OpenProcess>;

// One node of a process term. Tagged struct rather than std::variant so the
// recursive traversals stay readable.
struct OpenProcess {
  enum class Kind { Sum, Par, Nu, Call };
  Kind kind = Kind::Sum;

  // Sum: guarded summands; the empty sum is the nil process.
  std::vector<std::pair<Prefix, ProcPtr>> items;

  // Par
  ProcPtr left, right;

  // Nu
  std::string binder;
  ProcPtr body;

  // Call
  std::string var;
  std::vector<std::string> args;

  // Ordered channel context of this subterm, filled in by check().
  std::vector<std::string> gamma;

  SourcePos pos;
};

ProcPtr mkZero(SourcePos pos = {});
ProcPtr mkSum(std::vector<std::pair<Prefix, ProcPtr>> items, SourcePos pos = {});
ProcPtr mkPar(ProcPtr left, ProcPtr right, SourcePos pos = {});
ProcPtr mkNu(std::string binder, ProcPtr body, SourcePos pos = {});
ProcPtr mkCall(std::string var, std::vector<std::string> args, SourcePos pos = {});

struct Definition {
  std::string var;
  std::vector<std::string> params;
  ProcPtr body;
  SourcePos pos;
};

// A closed program: declared free names, mutually recursive definitions,
// and the main process.
struct GlobalProcess {
  std::vector<std::string> names;
  std::vector<Definition> defs;
  ProcPtr main;
};

using Renaming = std::map<std::string, std::string>;

// Concrete syntax -> term. Does not validate name binding; run check() next.
GlobalProcess parse(const std::string& text);

// Validates binding, arities and name/variable disjointness, annotates every
// subterm with its ordered channel context, and renames nu binders to
// canonical position-derived names so alpha-equivalent terms become
// structurally equal. Idempotent.
GlobalProcess check(const GlobalProcess& g);

// Structural equality ignoring gamma annotations and source positions.
bool structurallyEqual(const ProcPtr& a, const ProcPtr& b);
bool structurallyEqual(const GlobalProcess& a, const GlobalProcess& b);

// Alpha-equivalence of two mains under the same declarations: equality of the
// check-normalized forms.
bool alphaEqual(const GlobalProcess& g, const ProcPtr& a, const ProcPtr& b);

// Same declarations, different main.
GlobalProcess withMain(const GlobalProcess& g, ProcPtr main);

// Capture-avoiding renaming of free channel names.
ProcPtr substitute(const ProcPtr& p, const Renaming& r);

// One unfolding layer: every call replaced by its definition body with
// parameters renamed to the call arguments; all other constructors are mapped
// homomorphically (including under prefixes).
ProcPtr derive(const ProcPtr& p, const std::vector<Definition>& defs);

// i-fold derive of the main process.
ProcPtr approximant(const GlobalProcess& g, int i);

std::vector<std::string> freeNames(const ProcPtr& p);

// Canonical concrete syntax; parse(pretty(g)) reproduces g up to positions.
std::string pretty(const ProcPtr& p);
std::string pretty(const GlobalProcess& g);

}  // namespace ccsw
