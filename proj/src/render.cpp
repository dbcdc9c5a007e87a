#include "planq/render.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace planq {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

void append_line(std::string& to, const std::string& line) {
  if (!to.empty()) to += ' ';
  to += line;
}

std::string join_with(const std::vector<std::string>& items, TemplateSet::Join join) {
  const char* sep = ", ";
  switch (join) {
    case TemplateSet::Join::list:
      return join_list(items);
    case TemplateSet::Join::comma:
      sep = ", ";
      break;
    case TemplateSet::Join::semicolon:
      sep = "; ";
      break;
    case TemplateSet::Join::space:
      sep = " ";
      break;
  }
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

/// Replaces {name} placeholders; unknown names are left as written.
template <typename F>
std::string substitute(const std::string& pattern, F&& value) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == '{') {
      const auto close = pattern.find('}', i);
      if (close != std::string::npos) {
        if (auto v = value(std::string_view(pattern).substr(i + 1, close - i - 1))) {
          out += *v;
          i = close;
          continue;
        }
      }
    }
    out += pattern[i];
  }
  return out;
}

std::optional<std::size_t> slot_index(std::string_view key) {
  if (key.empty() || key.size() > 2) return std::nullopt;
  std::size_t v = 0;
  for (char c : key) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

/// Largest {i} slot used by a pattern, or -1.
int max_slot(const std::string& pattern) {
  int m = -1;
  substitute(pattern, [&](std::string_view key) -> std::optional<std::string> {
    if (auto i = slot_index(key)) m = std::max(m, static_cast<int>(*i));
    return std::nullopt;
  });
  return m;
}

}  // namespace

std::string join_list(const std::vector<std::string>& items) {
  if (items.empty()) return "";
  if (items.size() == 1) return items[0];
  if (items.size() == 2) return items[0] + " and " + items[1];
  std::string out;
  for (std::size_t i = 0; i + 1 < items.size(); ++i) out += items[i] + ", ";
  return out + "and " + items.back();
}

std::string normalize_text(std::string_view text) {
  std::string out;
  for (const auto& w : words(text)) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  while (!out.empty() && out.back() == '.') out.pop_back();
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

TemplateSet TemplateSet::parse(std::string_view text, std::string source) {
  TemplateSet t;
  t.source = source;
  enum class Kind { none, domain_intro, problem_intro, section, predicate, group, merge, action, corrupt };
  Kind kind = Kind::none;
  std::string name;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& what) -> ConfigError {
    return ConfigError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw fail("unterminated section header");
      const auto w = words(std::string_view(line).substr(1, line.size() - 2));
      if (w.empty()) throw fail("empty section header");
      if (w[0] == "domain_intro" && w.size() == 1) kind = Kind::domain_intro;
      else if (w[0] == "problem_intro" && w.size() == 1) kind = Kind::problem_intro;
      else if (w[0] == "section" && w.size() == 2) {
        kind = Kind::section;
        if (std::any_of(t.sections.begin(), t.sections.end(), [&](const Section& s) { return s.name == w[1]; }))
          throw fail("duplicate section '" + w[1] + "'");
        t.sections.push_back({w[1], "", Join::list, "."});
      } else if (w[0] == "predicate" && w.size() == 2) {
        kind = Kind::predicate;
        name = w[1];
        if (!t.predicates.emplace(name, Predicate{}).second) throw fail("duplicate predicate '" + name + "'");
      } else if (w[0] == "group" && w.size() == 4 && w[2] == "by") {
        kind = Kind::group;
        auto by = slot_index(w[3]);
        if (!by) throw fail("group index must be a number");
        t.groups.push_back({w[1], *by, "", "", ""});
      } else if (w[0] == "merge" && w.size() == 3) {
        kind = Kind::merge;
        t.merges.push_back({w[1], w[2], "", ""});
      } else if (w[0] == "action" && w.size() == 2) {
        kind = Kind::action;
        name = w[1];
        t.actions[name];
      } else if (w[0] == "corrupt_action" && w.size() == 2) {
        kind = Kind::corrupt;
        name = w[1];
        t.corrupt_actions[name];
      } else {
        throw fail("unknown section header '" + line + "'");
      }
      continue;
    }
    if (kind == Kind::domain_intro) {
      append_line(t.domain_intro, line);
      continue;
    }
    if (kind == Kind::problem_intro) {
      append_line(t.problem_intro, line);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw fail("expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    auto unknown = [&]() { return fail("unknown key '" + key + "'"); };
    switch (kind) {
      case Kind::section: {
        auto& s = t.sections.back();
        if (key == "lead") s.lead = value;
        else if (key == "end") s.end = value;
        else if (key == "join") {
          if (value == "list") s.join = Join::list;
          else if (value == "comma") s.join = Join::comma;
          else if (value == "semicolon") s.join = Join::semicolon;
          else if (value == "space") s.join = Join::space;
          else throw fail("unknown join style '" + value + "'");
        } else throw unknown();
        break;
      }
      case Kind::predicate: {
        auto& p = t.predicates[name];
        if (key == "fact") p.fact = value;
        else if (key == "state") p.state = value;
        else if (key == "section") p.section = value;
        else throw unknown();
        break;
      }
      case Kind::group: {
        auto& g = t.groups.back();
        if (key == "one") g.one = value;
        else if (key == "many") g.many = value;
        else if (key == "all") g.all = value;
        else throw unknown();
        break;
      }
      case Kind::merge: {
        auto& m = t.merges.back();
        if (key == "state") m.state = value;
        else if (key == "section") m.section = value;
        else throw unknown();
        break;
      }
      case Kind::action:
      case Kind::corrupt:
        if (key != "text") throw unknown();
        (kind == Kind::action ? t.actions : t.corrupt_actions)[name].push_back(value);
        break;
      default:
        throw fail("key outside of a section");
    }
  }
  return t;
}

TemplateSet TemplateSet::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read template file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

Renderer::Renderer(const GroundTask& task, TemplateSet templates)
    : task_(&task), tpl_(std::move(templates)), pred_tpl_(task.predicates.size(), nullptr),
      type_fact_(task.predicates.size()) {
  auto fail = [&](const std::string& what) { return ConfigError(tpl_.source + ": " + what); };
  auto has_section = [&](const std::string& s) {
    return std::any_of(tpl_.sections.begin(), tpl_.sections.end(), [&](const auto& x) { return x.name == s; });
  };
  for (std::size_t i = 0; i < task.predicates.size(); ++i) {
    const auto& info = task.predicates[i];
    auto it = tpl_.predicates.find(info.name);
    if (it == tpl_.predicates.end()) {
      if (info.is_type) {
        const char c = info.name.empty() ? 'x' : info.name[0];
        const bool vowel = std::string_view("aeiou").find(c) != std::string_view::npos;
        type_fact_[i] = "{0} is " + std::string(vowel ? "an " : "a ") + info.name;
        continue;
      }
      throw fail("missing template for predicate '" + info.name + "'");
    }
    const auto& p = it->second;
    pred_tpl_[i] = &p;
    const int arity = static_cast<int>(info.param_types.size());
    if (p.fact.empty()) throw fail("predicate '" + info.name + "' has no fact text");
    if (max_slot(p.fact) >= arity || max_slot(p.state) >= arity)
      throw fail("predicate '" + info.name + "' template uses a slot beyond its arity");
    const bool grouped = std::any_of(tpl_.groups.begin(), tpl_.groups.end(), [&](const auto& g) { return g.predicate == info.name; });
    if (!info.is_static && !info.is_type && p.section.empty())
      throw fail("predicate '" + info.name + "' needs a section (or section = none)");
    if (!p.section.empty() && p.section != "none") {
      if (!has_section(p.section)) throw fail("predicate '" + info.name + "' names unknown section '" + p.section + "'");
      if (p.state.empty() && !grouped) throw fail("predicate '" + info.name + "' has no state text");
    }
  }
  for (const auto& g : tpl_.groups) {
    auto pi = task.find_predicate(g.predicate);
    if (!pi) throw fail("group names unknown predicate '" + g.predicate + "'");
    if (task.predicates[*pi].param_types.size() != 2 || g.by > 1)
      throw fail("group '" + g.predicate + "' needs a binary predicate and index 0 or 1");
    if (g.one.empty() || g.many.empty()) throw fail("group '" + g.predicate + "' needs one and many texts");
  }
  for (const auto& m : tpl_.merges) {
    auto a = task.find_predicate(m.first);
    auto b = task.find_predicate(m.second);
    if (!a || !b) throw fail("merge names unknown predicate");
    if (m.state.empty()) throw fail("merge '" + m.first + " " + m.second + "' has no state text");
    const auto sec = m.section.empty() ? tpl_.predicates[m.first].section : m.section;
    if (!has_section(sec)) throw fail("merge '" + m.first + " " + m.second + "' names unknown section '" + sec + "'");
  }
  for (const auto& s : task.schemas) {
    auto a = tpl_.actions.find(s.name);
    if (a == tpl_.actions.end() || a->second.empty()) throw fail("missing template for action '" + s.name + "'");
    auto c = tpl_.corrupt_actions.find(s.name);
    if (c == tpl_.corrupt_actions.end() || c->second.empty())
      throw fail("missing corrupt template for action '" + s.name + "'");
    const int arity = static_cast<int>(s.param_names.size());
    for (const auto& text : a->second)
      if (max_slot(text) >= arity) throw fail("action '" + s.name + "' template uses a slot beyond its arity");
    for (const auto& text : c->second)
      if (max_slot(text) >= arity) throw fail("action '" + s.name + "' corrupt template uses a slot beyond its arity");
  }

  for (const auto& a : task.actions) {
    for (std::size_t v = 0; v < num_action_variants(a.id); ++v) {
      auto [it, fresh] = by_text_.emplace(normalize_text(render_action(a.id, v)), a.id);
      if (!fresh && it->second != a.id)
        throw fail("action text '" + it->first + "' names both " + task.action_name(it->second) + " and " +
                   task.action_name(a.id));
    }
  }
  for (const auto& a : task.actions)
    for (std::size_t v = 0; v < num_corrupt_variants(a.id); ++v)
      if (by_text_.contains(normalize_text(render_corrupt_action(a.id, v))))
        throw fail("corrupt text '" + render_corrupt_action(a.id, v) + "' names a real action");
}

std::string Renderer::fill(const std::string& pattern, const std::vector<ObjectId>& args) const {
  return substitute(pattern, [&](std::string_view key) -> std::optional<std::string> {
    auto i = slot_index(key);
    if (!i || *i >= args.size()) return std::nullopt;
    return task_->objects[args[*i]];
  });
}

std::string Renderer::fill_counts(const std::string& pattern) const {
  auto members = [&](std::string_view name) {
    std::vector<ObjectId> out;
    if (auto p = task_->find_predicate(name); p && task_->predicates[*p].param_types.size() == 1) {
      task_->init.for_each([&](AtomId a) {
        if (task_->atoms[a].predicate == *p) out.push_back(task_->atoms[a].args[0]);
      });
      std::sort(out.begin(), out.end());
      return out;
    }
    return task_->objects_of_type(name);
  };
  return substitute(pattern, [&](std::string_view key) -> std::optional<std::string> {
    if (key.starts_with("count:")) return std::to_string(members(key.substr(6)).size());
    if (key.starts_with("objects:")) {
      std::vector<std::string> names;
      for (auto o : members(key.substr(8))) names.push_back(task_->objects[o]);
      return join_list(names);
    }
    return std::nullopt;
  });
}

std::string Renderer::domain_intro() const { return fill_counts(tpl_.domain_intro); }
std::string Renderer::problem_intro() const { return fill_counts(tpl_.problem_intro); }

std::string Renderer::render_state(const State& s) const {
  if (s.universe_size() != task_->num_atoms()) throw ContractViolation("state does not belong to the task");
  struct Item {
    AtomId key;
    std::string text;
  };
  std::map<std::string, std::vector<Item>> items;
  std::vector<bool> used(task_->num_atoms(), false);

  auto section_of = [&](AtomId a) -> std::string {
    const auto* p = pred_tpl_[task_->atoms[a].predicate];
    if (p == nullptr || p->section.empty() || p->section == "none") return "";
    return p->section;
  };

  for (const auto& m : tpl_.merges) {
    const auto pa = *task_->find_predicate(m.first);
    const auto pb = *task_->find_predicate(m.second);
    std::optional<AtomId> a, b;
    s.for_each([&](AtomId x) {
      if (used[x]) return;
      if (!a && task_->atoms[x].predicate == pa) a = x;
      else if (!b && task_->atoms[x].predicate == pb) b = x;
    });
    if (!a || !b) continue;
    used[*a] = used[*b] = true;
    auto args = task_->atoms[*a].args;
    args.insert(args.end(), task_->atoms[*b].args.begin(), task_->atoms[*b].args.end());
    const auto sec = m.section.empty() ? section_of(*a) : m.section;
    items[sec].push_back({std::min(*a, *b), fill(m.state, args)});
  }

  for (const auto& g : tpl_.groups) {
    const auto pred = *task_->find_predicate(g.predicate);
    const std::size_t item_arg = 1 - g.by;
    std::vector<std::pair<ObjectId, std::vector<AtomId>>> buckets;
    s.for_each([&](AtomId x) {
      if (used[x] || task_->atoms[x].predicate != pred) return;
      used[x] = true;
      const ObjectId k = task_->atoms[x].args[g.by];
      auto it = std::find_if(buckets.begin(), buckets.end(), [&](const auto& b) { return b.first == k; });
      if (it == buckets.end()) buckets.push_back({k, {x}});
      else it->second.push_back(x);
    });
    const auto* ptpl = pred_tpl_[pred];
    const std::string group_section = ptpl != nullptr ? ptpl->section : "";
    if (group_section.empty() || group_section == "none") continue;
    const auto universe = task_->objects_of_type(task_->predicates[pred].param_types[item_arg]);
    for (const auto& [k, atoms] : buckets) {
      std::vector<std::string> names;
      std::set<ObjectId> members;
      for (auto x : atoms) {
        names.push_back(task_->objects[task_->atoms[x].args[item_arg]]);
        members.insert(task_->atoms[x].args[item_arg]);
      }
      const bool all = !g.all.empty() && members.size() == universe.size() && universe.size() > 1 &&
                       std::all_of(universe.begin(), universe.end(), [&](ObjectId o) { return members.contains(o); });
      const std::string& pattern = all ? g.all : (atoms.size() == 1 ? g.one : g.many);
      const std::string with_items = substitute(pattern, [&](std::string_view key) -> std::optional<std::string> {
        if (key == "items") return join_list(names);
        return std::nullopt;
      });
      items[group_section].push_back({atoms.front(), fill(with_items, task_->atoms[atoms.front()].args)});
    }
  }

  s.for_each([&](AtomId x) {
    if (used[x]) return;
    const auto sec = section_of(x);
    if (sec.empty()) return;
    items[sec].push_back({x, fill(pred_tpl_[task_->atoms[x].predicate]->state, task_->atoms[x].args)});
  });

  std::string out;
  for (const auto& sec : tpl_.sections) {
    auto it = items.find(sec.name);
    if (it == items.end() || it->second.empty()) continue;
    auto& list = it->second;
    std::stable_sort(list.begin(), list.end(), [](const Item& a, const Item& b) { return a.key < b.key; });
    std::vector<std::string> texts;
    for (auto& i : list) texts.push_back(std::move(i.text));
    std::string part = sec.lead.empty() ? "" : sec.lead + " ";
    part += join_with(texts, sec.join) + sec.end;
    append_line(out, part);
  }
  return out;
}

std::string Renderer::render_goal() const {
  std::vector<std::string> facts;
  for (auto g : task_->goal_order) facts.push_back(render_fact(g));
  return "The goal is to reach a state where the following facts hold: " +
         (facts.empty() ? std::string("(none)") : join_list(facts)) + ".";
}

std::string Renderer::render_context(const State& s, bool with_goal) const {
  std::vector<std::string> parts{domain_intro(), problem_intro(), render_state(s)};
  if (with_goal) parts.push_back(render_goal());
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += "  ";
    out += p;
  }
  return out;
}

std::string Renderer::render_fact(AtomId a) const {
  if (a >= task_->num_atoms()) throw ContractViolation("atom id " + std::to_string(a) + " is not part of the task");
  const auto& atom = task_->atoms[a];
  const auto* p = pred_tpl_[atom.predicate];
  return fill(p != nullptr ? p->fact : type_fact_[atom.predicate], atom.args);
}

std::string Renderer::render_facts(const std::vector<AtomId>& atoms) const {
  std::vector<std::string> texts;
  for (auto a : atoms) texts.push_back(render_fact(a));
  return join_list(texts);
}

std::size_t Renderer::num_action_variants(ActionId a) const {
  if (a >= task_->num_actions()) throw ContractViolation("action id " + std::to_string(a) + " is not part of the task");
  return tpl_.actions.at(task_->schemas[task_->actions[a].schema].name).size();
}

std::string Renderer::render_action(ActionId a, std::size_t variant) const {
  const auto& texts = tpl_.actions.at(task_->schemas[task_->actions.at(a).schema].name);
  return fill(texts.at(variant), task_->actions[a].args);
}

std::size_t Renderer::num_corrupt_variants(ActionId a) const {
  if (a >= task_->num_actions()) throw ContractViolation("action id " + std::to_string(a) + " is not part of the task");
  return tpl_.corrupt_actions.at(task_->schemas[task_->actions[a].schema].name).size();
}

std::string Renderer::render_corrupt_action(ActionId a, std::size_t variant) const {
  const auto& texts = tpl_.corrupt_actions.at(task_->schemas[task_->actions.at(a).schema].name);
  return fill(texts.at(variant), task_->actions[a].args);
}

std::optional<ActionId> Renderer::parse_action_name(std::string_view text) const {
  auto it = by_text_.find(normalize_text(text));
  if (it == by_text_.end()) return std::nullopt;
  return it->second;
}

ActionResolver Renderer::resolver() const {
  return [this](std::string_view name) { return parse_action_name(name); };
}

}  // namespace planq
