#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sheafkit/category.hpp"

namespace sheafkit {

// Abstract syntax of the first-order language of set theory evaluated by the
// forcing interpreter. Terms are variables (by name) or literals (#n indices
// into a universe's canonical carrier listing).
struct Term {
  bool is_var = false;
  std::string var;
  int literal = -1;

  static Term variable(std::string name) { return Term{true, std::move(name), -1}; }
  static Term lit(int idx) { return Term{false, {}, idx}; }
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind {
    True,
    False,
    Eq,        // eq(t1, t2)
    Mem,       // mem(t1, t2)
    And,
    Or,
    Implies,
    Not,
    Forall,    // all(x, φ) — rank-bounded
    Exists,    // ex(x, φ) — rank-bounded
    ForallIn,  // allIn(x, t, φ)
    ExistsIn,  // exIn(x, t, φ)
  };

  Kind kind;
  Term t1, t2;        // Eq/Mem; t2 is the bound of ForallIn/ExistsIn
  FormulaPtr a, b;    // subformulas
  std::string var;    // bound variable
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_eq(Term a, Term b);
FormulaPtr f_mem(Term a, Term b);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);  // (a→b) ∧ (b→a)
FormulaPtr f_forall(std::string var, FormulaPtr body);
FormulaPtr f_exists(std::string var, FormulaPtr body);
FormulaPtr f_forall_in(std::string var, Term bound, FormulaPtr body);
FormulaPtr f_exists_in(std::string var, Term bound, FormulaPtr body);

// Parenthesized prefix syntax:
//   (forall x (implies (mem x #0) (mem x #1)))
//   (forall-in y #2 (or (eq y #0) true))
// Heads: true false eq mem and or implies not forall exists forall-in
// exists-in. Literals are #n; anything else is a variable. ParseError carries
// line/column in the message.
FormulaPtr parse_formula(const std::string& text);

std::string print_formula(const FormulaPtr& f);

// Free variables in order of first occurrence (a closed formula has none).
std::vector<std::string> free_variables(const FormulaPtr& f);

}  // namespace sheafkit
