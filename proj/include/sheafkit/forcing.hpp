#pragma once

#include "sheafkit/formula.hpp"
#include "sheafkit/names.hpp"

namespace sheafkit {

// Kripke–Joyal evaluator over a rank-bounded universe. Literal terms #n name
// classes of the universe (the canonical carrier listing); a formula can be
// forced at a stage only when all its literals are rooted there. Unbounded
// quantifiers range over the rank-bounded carrier, so every verdict is
// relative to the universe's rank.
class Forcing {
public:
  explicit Forcing(const Universe& u) : u_(&u) {}

  // c ⊩ φ for a closed formula. Throws OpenFormula / UnknownLiteral.
  bool forces(int stage, const FormulaPtr& formula);

  const Universe& universe() const { return *u_; }

private:
  struct CNode {
    Formula::Kind kind;
    int t1 = -1, t2 = -1;  // slot indices
    int a = -1, b = -1;    // child nodes
    int var_slot = -1;
    std::vector<int> used;  // slots free in this subformula, sorted
  };

  int compile(const FormulaPtr& f, std::vector<std::pair<std::string, int>>& scope);
  bool eval(int node, int stage, const std::vector<int>& slots);

  const Universe* u_;
  std::vector<CNode> nodes_;
  std::vector<int> literal_slots_;  // slot → class id for literal slots
  std::map<std::tuple<int, int, std::vector<int>>, bool> memo_;
  int n_slots_ = 0;
};

// φ·f: the same formula with every literal replaced by its restriction along
// `arrow` (cod(arrow) must be the stage the literals live at).
FormulaPtr restrict_formula_literals(const Universe& u, const FormulaPtr& f, int arrow);

struct AxiomResult {
  std::string axiom;
  bool checkable = true;
  bool pass = true;
  int instances = 0;
  std::vector<std::string> failures;  // witnesses: object + instance
};

struct RstReport {
  int rank = 0;
  std::vector<AxiomResult> axioms;

  bool all_pass() const {
    for (const auto& a : axioms)
      if (a.checkable && !a.pass) return false;
    return true;
  }
};

// Evaluates finite instance suites of the rudimentary set theory axioms at
// every object: extensionality, empty set, pairing, union, bounded
// separation, set induction (as well-foundedness of forced membership),
// strong collection (pool relations, collecting witness searched in the
// carrier). Infinity is reported not checkable at finite rank.
RstReport check_rst_axioms(const Universe& u);

}  // namespace sheafkit
