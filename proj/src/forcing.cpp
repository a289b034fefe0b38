#include "sheafkit/forcing.hpp"

#include <algorithm>

namespace sheafkit {

namespace {

std::vector<int> merge_used(std::vector<int> a, const std::vector<int>& b) {
  for (int s : b)
    if (!std::binary_search(a.begin(), a.end(), s)) a.insert(std::lower_bound(a.begin(), a.end(), s), s);
  return a;
}

std::vector<int> without(std::vector<int> a, int s) {
  a.erase(std::remove(a.begin(), a.end(), s), a.end());
  return a;
}

}  // namespace

int Forcing::compile(const FormulaPtr& f, std::vector<std::pair<std::string, int>>& scope) {
  using K = Formula::Kind;
  CNode n;
  n.kind = f->kind;
  auto term_slot = [&](const Term& t) {
    if (t.is_var) {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == t.var) return it->second;
      throw Error("OpenFormula", "unbound variable '" + t.var + "'");
    }
    if (t.literal < 0 || t.literal >= static_cast<int>(u_->classes.size()))
      throw Error("UnknownLiteral", "#" + std::to_string(t.literal));
    int slot = n_slots_++;
    literal_slots_.push_back(t.literal);  // parallel to slot index
    return slot;
  };

  switch (f->kind) {
    case K::True:
    case K::False: break;
    case K::Eq:
    case K::Mem:
      n.t1 = term_slot(f->t1);
      n.t2 = term_slot(f->t2);
      n.used = {n.t1, n.t2};
      std::sort(n.used.begin(), n.used.end());
      n.used.erase(std::unique(n.used.begin(), n.used.end()), n.used.end());
      break;
    case K::And:
    case K::Or:
    case K::Implies:
      n.a = compile(f->a, scope);
      n.b = compile(f->b, scope);
      n.used = merge_used(nodes_[n.a].used, nodes_[n.b].used);
      break;
    case K::Not:
      n.a = compile(f->a, scope);
      n.used = nodes_[n.a].used;
      break;
    case K::Forall:
    case K::Exists: {
      n.var_slot = n_slots_++;
      literal_slots_.push_back(-1);
      scope.emplace_back(f->var, n.var_slot);
      n.a = compile(f->a, scope);
      scope.pop_back();
      n.used = without(nodes_[n.a].used, n.var_slot);
      break;
    }
    case K::ForallIn:
    case K::ExistsIn: {
      n.t2 = term_slot(f->t2);
      n.var_slot = n_slots_++;
      literal_slots_.push_back(-1);
      scope.emplace_back(f->var, n.var_slot);
      n.a = compile(f->a, scope);
      scope.pop_back();
      n.used = without(merge_used(nodes_[n.a].used, {n.t2}), n.var_slot);
      break;
    }
  }
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

bool Forcing::forces(int stage, const FormulaPtr& formula) {
  nodes_.clear();
  literal_slots_.clear();
  memo_.clear();
  n_slots_ = 0;
  std::vector<std::pair<std::string, int>> scope;
  int root = compile(formula, scope);

  std::vector<int> slots(n_slots_, -1);
  for (int s = 0; s < n_slots_; ++s) {
    if (literal_slots_[s] < 0) continue;
    int cls = literal_slots_[s];
    if (u_->classes[cls].at != stage)
      throw Error("UnknownLiteral", "literal #" + std::to_string(cls) +
                                        " is not rooted at " + u_->cat->objects[stage]);
    slots[s] = cls;
  }
  return eval(root, stage, slots);
}

bool Forcing::eval(int node, int stage, const std::vector<int>& slots) {
  using K = Formula::Kind;
  const CNode& n = nodes_[node];
  std::vector<int> key_vals;
  key_vals.reserve(n.used.size());
  for (int s : n.used) key_vals.push_back(slots[s]);
  auto key = std::make_tuple(node, stage, key_vals);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;

  const auto& cat = *u_->cat;
  auto restricted = [&](int arrow) {
    std::vector<int> out(slots);
    for (int s : n.used)
      if (out[s] >= 0) out[s] = u_->restrict_class(out[s], arrow);
    return out;
  };

  bool result = false;
  switch (n.kind) {
    case K::True: result = true; break;
    case K::False: result = u_->empty_covered(stage); break;
    case K::Eq: result = slots[n.t1] == slots[n.t2]; break;
    case K::Mem: result = u_->forced_mem(slots[n.t1], slots[n.t2]); break;
    case K::And: result = eval(n.a, stage, slots) && eval(n.b, stage, slots); break;
    case K::Or: {
      Bitset decided(cat.n_arrows());
      for (int f : cat.arrows_into[stage]) {
        auto rs = restricted(f);
        if (eval(n.a, cat.dom(f), rs) || eval(n.b, cat.dom(f), rs)) decided.set(f);
      }
      result = u_->top.covers(stage, decided);
      break;
    }
    case K::Implies: {
      result = true;
      for (int f : cat.arrows_into[stage]) {
        auto rs = restricted(f);
        if (eval(n.a, cat.dom(f), rs) && !eval(n.b, cat.dom(f), rs)) {
          result = false;
          break;
        }
      }
      break;
    }
    case K::Not: {
      result = true;
      for (int f : cat.arrows_into[stage]) {
        auto rs = restricted(f);
        if (eval(n.a, cat.dom(f), rs) && !u_->empty_covered(cat.dom(f))) {
          result = false;
          break;
        }
      }
      break;
    }
    case K::Forall: {
      result = true;
      for (int f : cat.arrows_into[stage]) {
        auto rs = restricted(f);
        for (int cls : u_->carrier[cat.dom(f)]) {
          rs[n.var_slot] = cls;
          if (!eval(n.a, cat.dom(f), rs)) {
            result = false;
            break;
          }
        }
        if (!result) break;
      }
      break;
    }
    case K::Exists: {
      Bitset witnessed(cat.n_arrows());
      for (int f : cat.arrows_into[stage]) {
        auto rs = restricted(f);
        for (int cls : u_->carrier[cat.dom(f)]) {
          rs[n.var_slot] = cls;
          if (eval(n.a, cat.dom(f), rs)) {
            witnessed.set(f);
            break;
          }
        }
      }
      result = u_->top.covers(stage, witnessed);
      break;
    }
    case K::ForallIn: {
      result = true;
      for (int f : cat.arrows_into[stage]) {
        auto rs = restricted(f);
        for (int cls : u_->carrier[cat.dom(f)]) {
          if (!u_->forced_mem(cls, rs[n.t2])) continue;
          rs[n.var_slot] = cls;
          if (!eval(n.a, cat.dom(f), rs)) {
            result = false;
            break;
          }
        }
        if (!result) break;
      }
      break;
    }
    case K::ExistsIn: {
      Bitset witnessed(cat.n_arrows());
      for (int f : cat.arrows_into[stage]) {
        auto rs = restricted(f);
        for (int cls : u_->carrier[cat.dom(f)]) {
          if (!u_->forced_mem(cls, rs[n.t2])) continue;
          rs[n.var_slot] = cls;
          if (eval(n.a, cat.dom(f), rs)) {
            witnessed.set(f);
            break;
          }
        }
      }
      result = u_->top.covers(stage, witnessed);
      break;
    }
  }
  memo_.emplace(std::move(key), result);
  return result;
}

FormulaPtr restrict_formula_literals(const Universe& u, const FormulaPtr& f, int arrow) {
  using K = Formula::Kind;
  auto rterm = [&](const Term& t) {
    if (t.is_var) return t;
    return Term::lit(u.restrict_class(t.literal, arrow));
  };
  switch (f->kind) {
    case K::True:
    case K::False: return f;
    case K::Eq: return f_eq(rterm(f->t1), rterm(f->t2));
    case K::Mem: return f_mem(rterm(f->t1), rterm(f->t2));
    case K::And:
      return f_and(restrict_formula_literals(u, f->a, arrow),
                   restrict_formula_literals(u, f->b, arrow));
    case K::Or:
      return f_or(restrict_formula_literals(u, f->a, arrow),
                  restrict_formula_literals(u, f->b, arrow));
    case K::Implies:
      return f_implies(restrict_formula_literals(u, f->a, arrow),
                       restrict_formula_literals(u, f->b, arrow));
    case K::Not: return f_not(restrict_formula_literals(u, f->a, arrow));
    case K::Forall: return f_forall(f->var, restrict_formula_literals(u, f->a, arrow));
    case K::Exists: return f_exists(f->var, restrict_formula_literals(u, f->a, arrow));
    case K::ForallIn:
      return f_forall_in(f->var, rterm(f->t2), restrict_formula_literals(u, f->a, arrow));
    case K::ExistsIn:
      return f_exists_in(f->var, rterm(f->t2), restrict_formula_literals(u, f->a, arrow));
  }
  return f;
}

namespace {

Term lit(int cls) { return Term::lit(cls); }
Term var(const char* v) { return Term::variable(v); }

}  // namespace

RstReport check_rst_axioms(const Universe& u) {
  const auto& cat = *u.cat;
  RstReport rep;
  rep.rank = u.rank_bound;
  Forcing forcing(u);
  int k = u.rank_bound;

  auto run = [&](AxiomResult& res, int stage, const FormulaPtr& inst,
                 const std::string& what) {
    ++res.instances;
    if (!forcing.forces(stage, inst)) {
      res.pass = false;
      res.failures.push_back("at " + cat.objects[stage] + ": " + what);
    }
  };

  {  // Extensionality: ∀x (x ε a ↔ x ε b) → a = b, all carrier pairs
    AxiomResult res;
    res.axiom = "Extensionality";
    for (int c = 0; c < cat.n_objects(); ++c)
      for (int a : u.carrier[c])
        for (int b : u.carrier[c]) {
          auto inst = f_implies(
              f_forall("x", f_iff(f_mem(var("x"), lit(a)), f_mem(var("x"), lit(b)))),
              f_eq(lit(a), lit(b)));
          run(res, c, inst, "a=" + u.describe(a) + " b=" + u.describe(b));
        }
    rep.axioms.push_back(std::move(res));
  }

  {  // Empty set: ∃x ∀y ¬(y ε x)
    AxiomResult res;
    res.axiom = "Empty set";
    auto inst = f_exists("x", f_forall("y", f_not(f_mem(var("y"), var("x")))));
    for (int c = 0; c < cat.n_objects(); ++c) run(res, c, inst, "empty-set instance");
    rep.axioms.push_back(std::move(res));
  }

  {  // Pairing, restricted to pairs whose pair name fits the rank bound
    AxiomResult res;
    res.axiom = "Pairing";
    for (int c = 0; c < cat.n_objects(); ++c)
      for (int a : u.carrier[c]) {
        if (u.classes[a].rank > k - 2) continue;
        for (int b : u.carrier[c]) {
          if (u.classes[b].rank > k - 2) continue;
          auto inst = f_exists(
              "x", f_forall("y", f_iff(f_mem(var("y"), var("x")),
                                       f_or(f_eq(var("y"), lit(a)), f_eq(var("y"), lit(b))))));
          run(res, c, inst, "a=" + u.describe(a) + " b=" + u.describe(b));
        }
      }
    rep.axioms.push_back(std::move(res));
  }

  {  // Union: ∃x ∀y (y ε x ↔ ∃z ε a, y ε z)
    AxiomResult res;
    res.axiom = "Union";
    for (int c = 0; c < cat.n_objects(); ++c)
      for (int a : u.carrier[c]) {
        auto inst = f_exists(
            "x", f_forall("y", f_iff(f_mem(var("y"), var("x")),
                                     f_exists_in("z", lit(a), f_mem(var("y"), var("z"))))));
        run(res, c, inst, "a=" + u.describe(a));
      }
    rep.axioms.push_back(std::move(res));
  }

  {  // Bounded separation for a pool of bounded formulas φ(y)
    AxiomResult res;
    res.axiom = "Bounded separation";
    std::vector<std::pair<std::string, FormulaPtr>> pool = {
        {"true", f_true()},
        {"false", f_false()},
        {"inhabited", f_exists_in("z", Term::variable("y"), f_true())},
        {"empty", f_not(f_exists_in("z", Term::variable("y"), f_true()))},
    };
    for (int c = 0; c < cat.n_objects(); ++c)
      for (int a : u.carrier[c])
        for (auto& [pname, phi] : pool) {
          auto inst = f_exists(
              "x", f_forall("y", f_iff(f_mem(var("y"), var("x")),
                                       f_and(f_mem(var("y"), lit(a)), phi))));
          run(res, c, inst, "a=" + u.describe(a) + " φ=" + pname);
        }
    rep.axioms.push_back(std::move(res));
  }

  {  // Set induction, as acyclicity of forced membership per object
    AxiomResult res;
    res.axiom = "Set induction";
    for (int c = 0; c < cat.n_objects(); ++c) {
      ++res.instances;
      int n = static_cast<int>(u.carrier[c].size());
      // DFS for a cycle in the digraph i → j iff i ε j
      std::vector<int> state(n, 0);
      std::function<bool(int)> dfs = [&](int j) {
        state[j] = 1;
        for (int i = 0; i < n; ++i) {
          if (!u.mem[c][j].test(i)) continue;
          if (state[i] == 1) return false;
          if (state[i] == 0 && !dfs(i)) return false;
        }
        state[j] = 2;
        return true;
      };
      bool acyclic = true;
      for (int j = 0; j < n && acyclic; ++j)
        if (state[j] == 0) acyclic = dfs(j);
      if (!acyclic) {
        res.pass = false;
        res.failures.push_back("at " + cat.objects[c] + ": forced membership has a cycle");
      }
    }
    rep.axioms.push_back(std::move(res));
  }

  {  // Strong collection over a pool of relations φ(x, y)
    AxiomResult res;
    res.axiom = "Strong collection";
    std::vector<std::pair<std::string, FormulaPtr>> pool = {
        {"y=x", f_eq(var("y"), var("x"))},
        {"y ε x", f_mem(var("y"), var("x"))},
        {"x ε y", f_mem(var("x"), var("y"))},
    };
    for (int c = 0; c < cat.n_objects(); ++c)
      for (int a : u.carrier[c]) {
        if (u.classes[a].rank > k - 2) continue;
        for (auto& [pname, phi] : pool) {
          auto both = f_and(f_forall_in("x", Term::variable("b2"),
                                        f_exists_in("y", Term::variable("b"), phi)),
                            f_forall_in("y", Term::variable("b"),
                                        f_exists_in("x", Term::variable("b2"), phi)));
          // b2 names a throughout; substituting the literal directly keeps
          // the instance closed
          auto subst_a = [&](const FormulaPtr& f) -> FormulaPtr {
            // replace variable b2 by the literal a
            std::function<FormulaPtr(const FormulaPtr&)> go =
                [&](const FormulaPtr& g) -> FormulaPtr {
              using K = Formula::Kind;
              auto rt = [&](const Term& t) {
                return (t.is_var && t.var == "b2") ? lit(a) : t;
              };
              switch (g->kind) {
                case K::True:
                case K::False: return g;
                case K::Eq: return f_eq(rt(g->t1), rt(g->t2));
                case K::Mem: return f_mem(rt(g->t1), rt(g->t2));
                case K::And: return f_and(go(g->a), go(g->b));
                case K::Or: return f_or(go(g->a), go(g->b));
                case K::Implies: return f_implies(go(g->a), go(g->b));
                case K::Not: return f_not(go(g->a));
                case K::Forall: return f_forall(g->var, go(g->a));
                case K::Exists: return f_exists(g->var, go(g->a));
                case K::ForallIn: return f_forall_in(g->var, rt(g->t2), go(g->a));
                case K::ExistsIn: return f_exists_in(g->var, rt(g->t2), go(g->a));
              }
              return g;
            };
            return go(f);
          };
          auto inst = f_implies(
              subst_a(f_forall_in("x", Term::variable("b2"), f_exists("y", phi))),
              f_exists("b", subst_a(both)));
          run(res, c, inst, "a=" + u.describe(a) + " φ=" + pname);
        }
      }
    rep.axioms.push_back(std::move(res));
  }

  {  // Infinity is out of reach at finite rank
    AxiomResult res;
    res.axiom = "Infinity";
    res.checkable = false;
    res.pass = true;
    rep.axioms.push_back(std::move(res));
  }
  return rep;
}

}  // namespace sheafkit
