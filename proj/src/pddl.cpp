#include "planq/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace planq::pddl {

namespace {

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 1;
  int column = 1;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExpr read_document() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, column_);
    SExpr e = read();
    skip_space();
    if (pos_ < text_.size()) throw ParseError("trailing content after definition", line_, column_);
    return e;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, column_);
    SExpr e;
    e.line = line_;
    e.column = column_;
    const char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", line_, column_);
    if (c == '(') {
      e.is_list = true;
      advance();
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unclosed '('", e.line, e.column);
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    while (pos_ < text_.size()) {
      const char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      e.atom.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(d))));
      advance();
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

[[noreturn]] void fail(const SExpr& at, const std::string& what) {
  throw ParseError(what, at.line, at.column);
}

[[noreturn]] void unsupported(const SExpr& at, const std::string& construct) {
  throw UnsupportedError(construct, at.line, at.column);
}

bool is_symbol(const SExpr& e, std::string_view s) { return !e.is_list && e.atom == s; }

const std::string& symbol(const SExpr& e, const char* what) {
  if (e.is_list || e.atom.empty()) fail(e, std::string("expected ") + what);
  return e.atom;
}

const SExpr& list(const SExpr& e, const char* what) {
  if (!e.is_list) fail(e, std::string("expected ") + what);
  return e;
}

/// `a b - t c - u d` style lists. Untyped entries default to the root type.
std::vector<TypedName> typed_list(const SExpr& e, std::size_t first = 0) {
  std::vector<TypedName> out;
  std::size_t pending = 0;
  for (std::size_t i = first; i < e.items.size(); ++i) {
    const SExpr& item = e.items[i];
    if (is_symbol(item, "-")) {
      if (i + 1 >= e.items.size()) fail(item, "expected type after '-'");
      const SExpr& t = e.items[i + 1];
      if (t.is_list) unsupported(t, "either-types");
      if (pending == 0) fail(item, "type without names");
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) out[k].type = t.atom;
      pending = 0;
      ++i;
      continue;
    }
    out.push_back({symbol(item, "name"), std::string(kRootType)});
    ++pending;
  }
  return out;
}

AtomExpr atom_expr(const SExpr& e) {
  list(e, "atom");
  if (e.items.empty()) fail(e, "empty atom");
  const std::string& head = symbol(e.items[0], "predicate name");
  if (head == "=") unsupported(e, "equality");
  AtomExpr a{head, {}};
  for (std::size_t i = 1; i < e.items.size(); ++i) a.args.push_back(symbol(e.items[i], "argument"));
  return a;
}

void check_formula_head(const SExpr& e, bool effect) {
  if (e.items.empty()) return;
  const SExpr& head = e.items[0];
  if (head.is_list) return;
  static const std::map<std::string, std::string> kUnsupported = {
      {"or", "disjunctive conditions"},      {"imply", "disjunctive conditions"},
      {"exists", "existential conditions"},  {"forall", "universal quantification"},
      {"when", "conditional effects"},       {"increase", "numeric fluents"},
      {"decrease", "numeric fluents"},       {"assign", "numeric fluents"},
      {"scale-up", "numeric fluents"},       {"scale-down", "numeric fluents"},
      {">", "numeric fluents"},              {"<", "numeric fluents"},
      {">=", "numeric fluents"},             {"<=", "numeric fluents"},
      {"preference", "preferences"},
  };
  auto it = kUnsupported.find(head.atom);
  if (it != kUnsupported.end()) unsupported(head, it->second);
  if (!effect && head.atom == "not") unsupported(head, "negative preconditions");
}

void conjunction(const SExpr& e, std::vector<AtomExpr>& out) {
  list(e, "condition");
  if (e.items.empty()) return;
  check_formula_head(e, false);
  if (is_symbol(e.items[0], "and")) {
    for (std::size_t i = 1; i < e.items.size(); ++i) conjunction(e.items[i], out);
    return;
  }
  out.push_back(atom_expr(e));
}

void effect(const SExpr& e, ActionSchema& a) {
  list(e, "effect");
  if (e.items.empty()) return;
  check_formula_head(e, true);
  if (is_symbol(e.items[0], "and")) {
    for (std::size_t i = 1; i < e.items.size(); ++i) effect(e.items[i], a);
    return;
  }
  if (is_symbol(e.items[0], "not")) {
    if (e.items.size() != 2) fail(e, "malformed negative effect");
    check_formula_head(list(e.items[1], "atom"), true);
    a.del_effects.push_back(atom_expr(e.items[1]));
    return;
  }
  a.add_effects.push_back(atom_expr(e));
}

/// Expect `(define (<kind> NAME) ...)` and return the section list start.
const std::string& header(const SExpr& root, const char* kind) {
  list(root, "(define ...)");
  if (root.items.size() < 2 || !is_symbol(root.items[0], "define")) fail(root, "expected (define ...)");
  const SExpr& h = list(root.items[1], kind);
  if (h.items.size() != 2 || !is_symbol(h.items[0], kind)) fail(h, std::string("expected (") + kind + " NAME)");
  return symbol(h.items[1], "name");
}

void check_atom(const LiftedDomain& d, const AtomExpr& a, const std::string& where,
                const std::map<std::string, std::string>& scope) {
  const PredicateDecl* p = d.find_predicate(a.predicate);
  if (p == nullptr) throw TypeCheckError(where + ": undeclared predicate '" + a.predicate + "'");
  if (p->params.size() != a.args.size())
    throw TypeCheckError(where + ": predicate '" + a.predicate + "' expects " +
                         std::to_string(p->params.size()) + " argument(s), got " +
                         std::to_string(a.args.size()));
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    auto it = scope.find(a.args[i]);
    if (it == scope.end())
      throw TypeCheckError(where + ": undeclared " +
                           std::string(a.args[i].starts_with("?") ? "variable" : "object") + " '" +
                           a.args[i] + "'");
    if (!d.is_subtype(it->second, p->params[i].type))
      throw TypeCheckError(where + ": argument '" + a.args[i] + "' of type '" + it->second +
                           "' does not match '" + p->params[i].type + "' in '" + a.predicate + "'");
  }
}

void validate_domain(LiftedDomain& d) {
  std::set<std::string> type_names{std::string(kRootType)};
  for (const auto& t : d.types) type_names.insert(t.name);
  for (const auto& t : d.types)
    if (!type_names.count(t.parent)) throw TypeCheckError("type '" + t.name + "' has undeclared parent '" + t.parent + "'");
  // Acyclicity: walk parents with a step bound.
  for (const auto& t : d.types) {
    std::string cur = t.name;
    for (std::size_t steps = 0; cur != kRootType; ++steps) {
      if (steps > d.types.size()) throw TypeCheckError("cyclic type hierarchy at '" + t.name + "'");
      auto it = std::find_if(d.types.begin(), d.types.end(), [&](const TypeDecl& x) { return x.name == cur; });
      cur = it->parent;
    }
  }
  auto check_type = [&](const TypedName& n, const std::string& where) {
    if (!type_names.count(n.type)) throw TypeCheckError(where + ": undeclared type '" + n.type + "'");
  };
  std::set<std::string> preds;
  for (const auto& p : d.predicates) {
    if (!preds.insert(p.name).second) throw TypeCheckError("duplicate predicate '" + p.name + "'");
    for (const auto& v : p.params) check_type(v, "predicate '" + p.name + "'");
  }
  std::map<std::string, std::string> constants;
  for (const auto& c : d.constants) {
    check_type(c, "constant '" + c.name + "'");
    constants[c.name] = c.type;
  }
  std::set<std::string> schema_names;
  for (const auto& a : d.actions) {
    if (!schema_names.insert(a.name).second) throw TypeCheckError("duplicate action '" + a.name + "'");
    auto scope = constants;
    for (const auto& v : a.parameters) {
      check_type(v, "action '" + a.name + "'");
      if (!v.name.starts_with("?")) throw TypeCheckError("action '" + a.name + "': parameter '" + v.name + "' must start with '?'");
      if (!scope.emplace(v.name, v.type).second)
        throw TypeCheckError("action '" + a.name + "': duplicate parameter '" + v.name + "'");
    }
    const std::string where = "action '" + a.name + "'";
    for (const auto& x : a.precondition) check_atom(d, x, where, scope);
    for (const auto& x : a.add_effects) check_atom(d, x, where, scope);
    for (const auto& x : a.del_effects) check_atom(d, x, where, scope);
  }
}

}  // namespace

const PredicateDecl* LiftedDomain::find_predicate(std::string_view n) const {
  for (const auto& p : predicates)
    if (p.name == n) return &p;
  return nullptr;
}

const ActionSchema* LiftedDomain::find_action(std::string_view n) const {
  for (const auto& a : actions)
    if (a.name == n) return &a;
  return nullptr;
}

bool LiftedDomain::has_type(std::string_view t) const {
  if (t == kRootType) return true;
  return std::any_of(types.begin(), types.end(), [&](const TypeDecl& x) { return x.name == t; });
}

bool LiftedDomain::is_subtype(std::string_view sub, std::string_view super) const {
  if (super == kRootType) return true;
  std::string cur(sub);
  for (std::size_t steps = 0; steps <= types.size(); ++steps) {
    if (cur == super) return true;
    if (cur == kRootType) return false;
    auto it = std::find_if(types.begin(), types.end(), [&](const TypeDecl& x) { return x.name == cur; });
    if (it == types.end()) return false;
    cur = it->parent;
  }
  return false;
}

LiftedDomain parse_domain(std::string_view text) {
  const SExpr root = Reader(text).read_document();
  LiftedDomain d;
  d.name = header(root, "domain");
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& sec = list(root.items[i], "domain section");
    if (sec.items.empty()) fail(sec, "empty section");
    const std::string& key = symbol(sec.items[0], "section keyword");
    if (key == ":requirements") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const std::string& r = symbol(sec.items[k], "requirement");
        if (r != ":strips" && r != ":typing") unsupported(sec.items[k], "requirement " + r);
        d.requirements.push_back(r);
      }
    } else if (key == ":types") {
      for (const auto& t : typed_list(sec, 1)) {
        if (t.name == kRootType) continue;
        d.types.push_back({t.name, t.type});
      }
    } else if (key == ":constants") {
      auto cs = typed_list(sec, 1);
      d.constants.insert(d.constants.end(), cs.begin(), cs.end());
    } else if (key == ":predicates") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const SExpr& p = list(sec.items[k], "predicate declaration");
        if (p.items.empty()) fail(p, "empty predicate declaration");
        d.predicates.push_back({symbol(p.items[0], "predicate name"), typed_list(p, 1)});
      }
    } else if (key == ":action") {
      if (sec.items.size() < 2) fail(sec, "action without name");
      ActionSchema a;
      a.name = symbol(sec.items[1], "action name");
      for (std::size_t k = 2; k < sec.items.size(); k += 2) {
        const std::string& field = symbol(sec.items[k], "action field");
        if (k + 1 >= sec.items.size()) fail(sec.items[k], "missing value for " + field);
        const SExpr& value = sec.items[k + 1];
        if (field == ":parameters") {
          a.parameters = typed_list(list(value, "parameter list"));
        } else if (field == ":precondition") {
          conjunction(value, a.precondition);
        } else if (field == ":effect") {
          effect(value, a);
        } else {
          unsupported(sec.items[k], "action field " + field);
        }
      }
      d.actions.push_back(std::move(a));
    } else if (key == ":functions") {
      unsupported(sec, "numeric fluents");
    } else if (key == ":derived") {
      unsupported(sec, "axioms");
    } else if (key == ":durative-action") {
      unsupported(sec, "durative actions");
    } else {
      unsupported(sec, "section " + key);
    }
  }
  validate_domain(d);
  return d;
}

LiftedProblem parse_problem(std::string_view text, const LiftedDomain& domain) {
  const SExpr root = Reader(text).read_document();
  LiftedProblem p;
  p.name = header(root, "problem");
  bool have_goal = false;
  bool have_domain = false;
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& sec = list(root.items[i], "problem section");
    if (sec.items.empty()) fail(sec, "empty section");
    const std::string& key = symbol(sec.items[0], "section keyword");
    if (key == ":domain") {
      if (sec.items.size() != 2) fail(sec, "expected (:domain NAME)");
      p.domain_name = symbol(sec.items[1], "domain name");
      have_domain = true;
    } else if (key == ":objects") {
      auto os = typed_list(sec, 1);
      p.objects.insert(p.objects.end(), os.begin(), os.end());
    } else if (key == ":init") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const SExpr& a = list(sec.items[k], "initial atom");
        if (!a.items.empty() && is_symbol(a.items[0], "=")) unsupported(a, "numeric fluents");
        if (!a.items.empty() && is_symbol(a.items[0], "not")) unsupported(a, "negative initial literals");
        p.init.push_back(atom_expr(a));
      }
    } else if (key == ":goal") {
      if (sec.items.size() != 2) fail(sec, "expected (:goal FORMULA)");
      conjunction(sec.items[1], p.goal);
      have_goal = true;
    } else if (key == ":requirements") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const std::string& r = symbol(sec.items[k], "requirement");
        if (r != ":strips" && r != ":typing") unsupported(sec.items[k], "requirement " + r);
      }
    } else if (key == ":metric") {
      unsupported(sec, "metric");
    } else {
      unsupported(sec, "section " + key);
    }
  }
  if (!have_domain) fail(root, "missing (:domain ...) section");
  if (!have_goal) fail(root, "missing (:goal ...) section");
  if (p.domain_name != domain.name)
    throw TypeCheckError("problem '" + p.name + "' is for domain '" + p.domain_name + "', not '" + domain.name + "'");

  std::map<std::string, std::string> scope;
  for (const auto& c : domain.constants) scope[c.name] = c.type;
  for (const auto& o : p.objects) {
    if (!domain.has_type(o.type)) throw TypeCheckError("object '" + o.name + "': undeclared type '" + o.type + "'");
    if (!scope.emplace(o.name, o.type).second) throw TypeCheckError("duplicate object '" + o.name + "'");
  }
  for (const auto& a : p.init) check_atom(domain, a, "init", scope);
  for (const auto& a : p.goal) check_atom(domain, a, "goal", scope);
  return p;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const UnsupportedError& e) {
    throw UnsupportedError(e.construct(), e.line(), e.column(), path);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), e.line(), e.column(), path);
  } catch (const TypeCheckError& e) {
    throw TypeCheckError(path + ": " + e.what());
  }
}

void print_typed(std::ostream& out, const std::vector<TypedName>& names) {
  bool first = true;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!first) out << ' ';
    first = false;
    out << names[i].name;
    const bool last_of_type = i + 1 == names.size() || names[i + 1].type != names[i].type;
    if (last_of_type && names[i].type != kRootType) out << " - " << names[i].type;
  }
}

void print_atom(std::ostream& out, const AtomExpr& a) {
  out << '(' << a.predicate;
  for (const auto& x : a.args) out << ' ' << x;
  out << ')';
}

void print_conj(std::ostream& out, const std::vector<AtomExpr>& atoms) {
  out << "(and";
  for (const auto& a : atoms) {
    out << ' ';
    print_atom(out, a);
  }
  out << ')';
}

}  // namespace

LiftedDomain load_domain(const std::string& path) {
  return with_path(path, [&] { return parse_domain(read_file(path)); });
}

LiftedProblem load_problem(const std::string& path, const LiftedDomain& domain) {
  return with_path(path, [&] { return parse_problem(read_file(path), domain); });
}

std::string print_domain(const LiftedDomain& d) {
  std::ostringstream out;
  out << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    out << "  (:requirements";
    for (const auto& r : d.requirements) out << ' ' << r;
    out << ")\n";
  }
  if (!d.types.empty()) {
    std::vector<TypedName> ts;
    for (const auto& t : d.types) ts.push_back({t.name, t.parent});
    out << "  (:types ";
    print_typed(out, ts);
    out << ")\n";
  }
  if (!d.constants.empty()) {
    out << "  (:constants ";
    print_typed(out, d.constants);
    out << ")\n";
  }
  out << "  (:predicates";
  for (const auto& p : d.predicates) {
    out << " (" << p.name;
    if (!p.params.empty()) out << ' ';
    print_typed(out, p.params);
    out << ')';
  }
  out << ")\n";
  for (const auto& a : d.actions) {
    out << "  (:action " << a.name << "\n    :parameters (";
    print_typed(out, a.parameters);
    out << ")\n    :precondition ";
    print_conj(out, a.precondition);
    out << "\n    :effect (and";
    for (const auto& x : a.add_effects) {
      out << ' ';
      print_atom(out, x);
    }
    for (const auto& x : a.del_effects) {
      out << " (not ";
      print_atom(out, x);
      out << ')';
    }
    out << "))\n";
  }
  out << ")\n";
  return out.str();
}

std::string print_problem(const LiftedProblem& p) {
  std::ostringstream out;
  out << "(define (problem " << p.name << ")\n  (:domain " << p.domain_name << ")\n  (:objects ";
  print_typed(out, p.objects);
  out << ")\n  (:init";
  for (const auto& a : p.init) {
    out << ' ';
    print_atom(out, a);
  }
  out << ")\n  (:goal ";
  print_conj(out, p.goal);
  out << "))\n";
  return out.str();
}

}  // namespace planq::pddl
