#include "planq/ground.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace planq {

namespace {

std::string key_of(const std::string& head, const std::vector<ObjectId>& args,
                   const std::vector<std::string>& objects) {
  std::string k = "(" + head;
  for (auto a : args) {
    k += ' ';
    k += objects[a];
  }
  k += ')';
  return k;
}

void sort_unique(std::vector<AtomId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

/// Parameter slot of a schema argument, or the bound object for constants.
struct ArgRef {
  bool is_param = false;
  std::size_t param = 0;
  ObjectId object = 0;
};

struct LiftedAtom {
  std::uint32_t predicate = 0;
  std::vector<ArgRef> args;
  std::size_t ready_at = 0;  // number of bound parameters needed
};

struct CompiledSchema {
  std::uint32_t index = 0;
  std::vector<std::vector<ObjectId>> domains;
  std::vector<LiftedAtom> pre, add, del;
};

}  // namespace

std::optional<ObjectId> GroundTask::find_object(std::string_view name) const {
  auto it = object_index_.find(std::string(name));
  if (it == object_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> GroundTask::find_predicate(std::string_view name) const {
  for (std::uint32_t i = 0; i < predicates.size(); ++i)
    if (predicates[i].name == name) return i;
  return std::nullopt;
}

std::optional<AtomId> GroundTask::find_atom(std::uint32_t predicate, const std::vector<ObjectId>& args) const {
  if (predicate >= predicates.size()) return std::nullopt;
  return find_atom(key_of(predicates[predicate].name, args, objects));
}

namespace {

/// Canonical `(head a b)` spelling: lower case, single spaces.
std::string normalize_sexpr(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = true;
      continue;
    }
    if (space && !out.empty() && out.back() != '(' && c != ')') out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (!out.empty() && out.front() != '(') out = "(" + out + ")";
  return out;
}

}  // namespace

std::optional<AtomId> GroundTask::find_atom(std::string_view pddl) const {
  auto it = atom_index_.find(normalize_sexpr(pddl));
  if (it == atom_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ActionId> GroundTask::find_action(std::string_view pddl) const {
  auto it = action_index_.find(normalize_sexpr(pddl));
  if (it == action_index_.end()) return std::nullopt;
  return it->second;
}

std::string GroundTask::atom_name(AtomId a) const {
  return key_of(predicates[atoms[a].predicate].name, atoms[a].args, objects);
}

std::string GroundTask::action_name(ActionId a) const {
  return key_of(schemas[actions[a].schema].name, actions[a].args, objects);
}

std::vector<ObjectId> GroundTask::objects_of_type(std::string_view type) const {
  std::vector<ObjectId> out;
  for (ObjectId o = 0; o < objects.size(); ++o)
    if (domain_.is_subtype(object_types[o], type)) out.push_back(o);
  return out;
}

State GroundTask::make_state(const std::vector<AtomId>& dynamic_atoms) const {
  State s = static_true;
  for (auto a : dynamic_atoms) s.insert(a);
  return s;
}

GroundTask ground_task(const pddl::LiftedDomain& domain, const pddl::LiftedProblem& problem,
                       const GroundOptions& options) {
  GroundTask t;
  t.domain_ = domain;
  t.domain_name = domain.name;
  t.problem_name = problem.name;

  for (const auto& c : domain.constants) {
    t.object_index_[c.name] = static_cast<ObjectId>(t.objects.size());
    t.objects.push_back(c.name);
    t.object_types.push_back(c.type);
  }
  for (const auto& o : problem.objects) {
    t.object_index_[o.name] = static_cast<ObjectId>(t.objects.size());
    t.objects.push_back(o.name);
    t.object_types.push_back(o.type);
  }

  std::set<std::string> affected;
  for (const auto& a : domain.actions) {
    for (const auto& x : a.add_effects) affected.insert(x.predicate);
    for (const auto& x : a.del_effects) affected.insert(x.predicate);
  }
  for (const auto& p : domain.predicates) {
    PredicateInfo info{p.name, {}, affected.count(p.name) == 0, false};
    for (const auto& v : p.params) info.param_types.push_back(v.type);
    t.predicates.push_back(std::move(info));
  }
  for (const auto& ty : domain.types) {
    if (domain.find_predicate(ty.name) != nullptr) continue;
    t.predicates.push_back({ty.name, {std::string(pddl::kRootType)}, true, true});
  }

  // Atom universe.
  std::size_t total = 0;
  std::vector<std::vector<std::vector<ObjectId>>> pred_domains;
  for (const auto& p : t.predicates) {
    std::vector<std::vector<ObjectId>> doms;
    std::size_t n = 1;
    for (const auto& ty : p.param_types) {
      doms.push_back(t.objects_of_type(ty));
      n *= doms.back().size();
      if (n > options.max_atoms) break;
    }
    total += n;
    if (total > options.max_atoms)
      throw ResourceError("atom universe exceeds cap: more than " + std::to_string(options.max_atoms) +
                          " atoms (predicate '" + p.name + "')");
    pred_domains.push_back(std::move(doms));
  }
  for (std::uint32_t pi = 0; pi < t.predicates.size(); ++pi) {
    const auto& doms = pred_domains[pi];
    std::vector<ObjectId> args(doms.size());
    std::vector<std::size_t> idx(doms.size(), 0);
    if (std::any_of(doms.begin(), doms.end(), [](const auto& d) { return d.empty(); })) continue;
    for (;;) {
      for (std::size_t k = 0; k < doms.size(); ++k) args[k] = doms[k][idx[k]];
      const auto id = static_cast<AtomId>(t.atoms.size());
      t.atom_index_.emplace(key_of(t.predicates[pi].name, args, t.objects), id);
      t.atoms.push_back({pi, args});
      // Odometer over the argument domains, last slot fastest.
      std::size_t k = doms.size();
      while (k > 0 && ++idx[k - 1] == doms[k - 1].size()) {
        idx[k - 1] = 0;
        --k;
      }
      if (k == 0) break;
    }
  }
  const std::size_t n_atoms = t.atoms.size();

  auto lookup = [&](const pddl::AtomExpr& a) -> AtomId {
    std::vector<ObjectId> args;
    for (const auto& x : a.args) args.push_back(t.object_index_.at(x));
    auto id = t.find_atom(*t.find_predicate(a.predicate), args);
    if (!id) throw pddl::TypeCheckError("atom " + key_of(a.predicate, args, t.objects) + " is not type-consistent");
    return *id;
  };

  t.init = AtomSet(n_atoms);
  for (const auto& a : problem.init) t.init.insert(lookup(a));
  for (std::uint32_t pi = 0; pi < t.predicates.size(); ++pi) {
    if (!t.predicates[pi].is_type) continue;
    for (auto o : t.objects_of_type(t.predicates[pi].name)) t.init.insert(*t.find_atom(pi, {o}));
  }
  // Declared unary predicates named after a type also receive the type facts.
  for (const auto& ty : domain.types) {
    if (const auto* decl = domain.find_predicate(ty.name); decl != nullptr && decl->params.size() == 1) {
      auto pi = *t.find_predicate(ty.name);
      for (auto o : t.objects_of_type(ty.name))
        if (auto id = t.find_atom(pi, {o})) t.init.insert(*id);
    }
  }
  t.goal = AtomSet(n_atoms);
  for (const auto& a : problem.goal) {
    const AtomId id = lookup(a);
    if (!t.goal.contains(id)) t.goal_order.push_back(id);
    t.goal.insert(id);
  }

  // Compile schemas.
  std::vector<CompiledSchema> compiled;
  for (std::uint32_t si = 0; si < domain.actions.size(); ++si) {
    const auto& a = domain.actions[si];
    SchemaInfo info{a.name, {}, {}};
    CompiledSchema cs;
    cs.index = si;
    std::map<std::string, std::size_t> slot;
    for (std::size_t k = 0; k < a.parameters.size(); ++k) {
      info.param_names.push_back(a.parameters[k].name);
      info.param_types.push_back(a.parameters[k].type);
      slot[a.parameters[k].name] = k;
      cs.domains.push_back(t.objects_of_type(a.parameters[k].type));
    }
    auto compile = [&](const pddl::AtomExpr& x) {
      LiftedAtom la;
      la.predicate = *t.find_predicate(x.predicate);
      for (const auto& arg : x.args) {
        ArgRef r;
        if (auto it = slot.find(arg); it != slot.end()) {
          r.is_param = true;
          r.param = it->second;
          la.ready_at = std::max(la.ready_at, it->second + 1);
        } else {
          r.object = t.object_index_.at(arg);
        }
        la.args.push_back(r);
      }
      return la;
    };
    for (const auto& x : a.precondition) cs.pre.push_back(compile(x));
    for (const auto& x : a.add_effects) cs.add.push_back(compile(x));
    for (const auto& x : a.del_effects) cs.del.push_back(compile(x));
    t.schemas.push_back(std::move(info));
    compiled.push_back(std::move(cs));
  }

  auto instantiate = [&](const LiftedAtom& la, const std::vector<ObjectId>& binding) -> std::optional<AtomId> {
    std::vector<ObjectId> args;
    args.reserve(la.args.size());
    for (const auto& r : la.args) args.push_back(r.is_param ? binding[r.param] : r.object);
    return t.find_atom(la.predicate, args);
  };

  // Delete-relaxed exploration from init.
  AtomSet reachable = t.init;
  std::set<std::pair<std::uint32_t, std::vector<ObjectId>>> seen;
  std::vector<GroundAction> found;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& cs : compiled) {
      const std::size_t arity = cs.domains.size();
      std::vector<ObjectId> binding(arity);
      // Returns false when a precondition ready at `bound` fails.
      auto pre_ok = [&](std::size_t bound) {
        for (const auto& la : cs.pre) {
          if (la.ready_at != bound) continue;
          auto id = instantiate(la, binding);
          if (!id || !reachable.contains(*id)) return false;
        }
        return true;
      };
      if (!pre_ok(0)) continue;
      std::vector<std::size_t> idx(arity, 0);
      std::size_t depth = 0;
      if (std::any_of(cs.domains.begin(), cs.domains.end(), [](const auto& d) { return d.empty(); })) continue;
      // Iterative backtracking over parameter slots.
      auto emit = [&]() {
        if (!seen.emplace(cs.index, binding).second) return;
        GroundAction ga;
        ga.schema = cs.index;
        ga.args = binding;
        bool ok = true;
        for (const auto& la : cs.pre) {
          auto id = instantiate(la, binding);
          if (!id) ok = false;
          else ga.pre.push_back(*id);
        }
        for (const auto& la : cs.add) {
          auto id = instantiate(la, binding);
          if (!id) ok = false;
          else ga.add.push_back(*id);
        }
        for (const auto& la : cs.del) {
          auto id = instantiate(la, binding);
          if (!id) ok = false;
          else ga.del.push_back(*id);
        }
        if (!ok) return;
        sort_unique(ga.pre);
        sort_unique(ga.add);
        sort_unique(ga.del);
        std::vector<AtomId> both;
        std::set_intersection(ga.add.begin(), ga.add.end(), ga.del.begin(), ga.del.end(), std::back_inserter(both));
        if (!both.empty()) return;  // add ∩ del must be empty
        for (auto a : ga.add)
          if (!reachable.contains(a)) {
            reachable.insert(a);
          }
        found.push_back(std::move(ga));
        changed = true;
        if (found.size() > options.max_actions)
          throw ResourceError("ground action count exceeds cap: more than " + std::to_string(options.max_actions) +
                              " actions");
      };
      if (arity == 0) {
        emit();
        continue;
      }
      idx[0] = 0;
      depth = 0;
      for (;;) {
        if (idx[depth] >= cs.domains[depth].size()) {
          if (depth == 0) break;
          idx[depth] = 0;
          --depth;
          ++idx[depth];
          continue;
        }
        binding[depth] = cs.domains[depth][idx[depth]];
        if (!pre_ok(depth + 1)) {
          ++idx[depth];
          continue;
        }
        if (depth + 1 == arity) {
          emit();
          ++idx[depth];
        } else {
          ++depth;
          idx[depth] = 0;
        }
      }
    }
  }

  std::sort(found.begin(), found.end(), [&](const GroundAction& a, const GroundAction& b) {
    const auto& na = t.schemas[a.schema].name;
    const auto& nb = t.schemas[b.schema].name;
    if (na != nb) return na < nb;
    return a.args < b.args;
  });
  for (std::size_t i = 0; i < found.size(); ++i) {
    found[i].id = static_cast<ActionId>(i);
    t.action_index_.emplace(key_of(t.schemas[found[i].schema].name, found[i].args, t.objects),
                            static_cast<ActionId>(i));
  }
  t.actions = std::move(found);

  t.pruned.assign(n_atoms, false);
  t.static_true = AtomSet(n_atoms);
  t.static_false = AtomSet(n_atoms);
  t.dynamic = AtomSet(n_atoms);
  for (AtomId a = 0; a < n_atoms; ++a) {
    t.pruned[a] = !reachable.contains(a);
    if (t.predicates[t.atoms[a].predicate].is_static) {
      if (t.init.contains(a)) t.static_true.insert(a);
      else t.static_false.insert(a);
    } else {
      t.dynamic.insert(a);
    }
  }
  return t;
}

StaticAtoms static_atoms(const GroundTask& task) { return {task.static_true, task.static_false}; }

}  // namespace planq
