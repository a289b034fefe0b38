#include "sheafkit/formula.hpp"

#include <algorithm>
#include <cctype>

namespace sheafkit {

namespace {
FormulaPtr mk(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
}

FormulaPtr f_true() { return mk({Formula::Kind::True, {}, {}, nullptr, nullptr, {}}); }
FormulaPtr f_false() { return mk({Formula::Kind::False, {}, {}, nullptr, nullptr, {}}); }
FormulaPtr f_eq(Term a, Term b) {
  return mk({Formula::Kind::Eq, std::move(a), std::move(b), nullptr, nullptr, {}});
}
FormulaPtr f_mem(Term a, Term b) {
  return mk({Formula::Kind::Mem, std::move(a), std::move(b), nullptr, nullptr, {}});
}
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  return mk({Formula::Kind::And, {}, {}, std::move(a), std::move(b), {}});
}
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  return mk({Formula::Kind::Or, {}, {}, std::move(a), std::move(b), {}});
}
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return mk({Formula::Kind::Implies, {}, {}, std::move(a), std::move(b), {}});
}
FormulaPtr f_not(FormulaPtr a) {
  return mk({Formula::Kind::Not, {}, {}, std::move(a), nullptr, {}});
}
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) {
  return f_and(f_implies(a, b), f_implies(b, a));
}
FormulaPtr f_forall(std::string var, FormulaPtr body) {
  return mk({Formula::Kind::Forall, {}, {}, std::move(body), nullptr, std::move(var)});
}
FormulaPtr f_exists(std::string var, FormulaPtr body) {
  return mk({Formula::Kind::Exists, {}, {}, std::move(body), nullptr, std::move(var)});
}
FormulaPtr f_forall_in(std::string var, Term bound, FormulaPtr body) {
  return mk({Formula::Kind::ForallIn, {}, std::move(bound), std::move(body), nullptr,
             std::move(var)});
}
FormulaPtr f_exists_in(std::string var, Term bound, FormulaPtr body) {
  return mk({Formula::Kind::ExistsIn, {}, std::move(bound), std::move(body), nullptr,
             std::move(var)});
}

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1, col = 1;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("ParseError", msg + " at line " + std::to_string(line) + ", column " +
                                  std::to_string(col));
  }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (pos < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[pos]))) {
        advance();
      } else if (text[pos] == ';') {  // comment to end of line
        while (pos < text.size() && text[pos] != '\n') advance();
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  std::string token() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    char c = text[pos];
    if (c == '(' || c == ')') {
      advance();
      return std::string(1, c);
    }
    std::string t;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')' && text[pos] != ';') {
      t += text[pos];
      advance();
    }
    if (t.empty()) fail("empty token");
    return t;
  }

  std::string peek() {
    auto save_pos = pos;
    auto save_line = line, save_col = col;
    std::string t = token();
    pos = save_pos;
    line = save_line;
    col = save_col;
    return t;
  }

  Term term() {
    std::string t = token();
    if (t == "(" || t == ")") fail("expected a term, found '" + t + "'");
    if (t[0] == '#') {
      try {
        std::size_t used = 0;
        int idx = std::stoi(t.substr(1), &used);
        if (used != t.size() - 1 || idx < 0) fail("bad literal '" + t + "'");
        return Term::lit(idx);
      } catch (const std::logic_error&) {
        fail("bad literal '" + t + "'");
      }
    }
    return Term::variable(t);
  }

  void expect(const std::string& tok) {
    std::string t = token();
    if (t != tok) fail("expected '" + tok + "', found '" + t + "'");
  }

  FormulaPtr formula() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    if (text[pos] != '(') {
      std::string t = token();
      if (t == "true") return f_true();
      if (t == "false") return f_false();
      fail("expected '(' or a constant, found '" + t + "'");
    }
    expect("(");
    std::string head = token();
    FormulaPtr out;
    if (head == "eq" || head == "mem") {
      Term a = term(), b = term();
      out = head == "eq" ? f_eq(a, b) : f_mem(a, b);
    } else if (head == "and" || head == "or" || head == "implies" || head == "iff") {
      FormulaPtr a = formula(), b = formula();
      out = head == "and"       ? f_and(a, b)
            : head == "or"      ? f_or(a, b)
            : head == "implies" ? f_implies(a, b)
                                : f_iff(a, b);
    } else if (head == "not") {
      out = f_not(formula());
    } else if (head == "forall" || head == "exists") {
      std::string v = token();
      if (v == "(" || v == ")" || v[0] == '#') fail("expected a variable after " + head);
      FormulaPtr body = formula();
      out = head == "forall" ? f_forall(v, body) : f_exists(v, body);
    } else if (head == "forall-in" || head == "exists-in") {
      std::string v = token();
      if (v == "(" || v == ")" || v[0] == '#') fail("expected a variable after " + head);
      Term bound = term();
      FormulaPtr body = formula();
      out = head == "forall-in" ? f_forall_in(v, bound, body) : f_exists_in(v, bound, body);
    } else if (head == "true") {
      out = f_true();
    } else if (head == "false") {
      out = f_false();
    } else {
      fail("unknown connective '" + head + "'");
    }
    expect(")");
    return out;
  }
};

std::string term_str(const Term& t) {
  return t.is_var ? t.var : "#" + std::to_string(t.literal);
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  Parser p{text};
  FormulaPtr f = p.formula();
  if (!p.at_end()) p.fail("trailing input after formula");
  return f;
}

std::string print_formula(const FormulaPtr& f) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Eq: return "(eq " + term_str(f->t1) + " " + term_str(f->t2) + ")";
    case K::Mem: return "(mem " + term_str(f->t1) + " " + term_str(f->t2) + ")";
    case K::And: return "(and " + print_formula(f->a) + " " + print_formula(f->b) + ")";
    case K::Or: return "(or " + print_formula(f->a) + " " + print_formula(f->b) + ")";
    case K::Implies:
      return "(implies " + print_formula(f->a) + " " + print_formula(f->b) + ")";
    case K::Not: return "(not " + print_formula(f->a) + ")";
    case K::Forall: return "(forall " + f->var + " " + print_formula(f->a) + ")";
    case K::Exists: return "(exists " + f->var + " " + print_formula(f->a) + ")";
    case K::ForallIn:
      return "(forall-in " + f->var + " " + term_str(f->t2) + " " + print_formula(f->a) + ")";
    case K::ExistsIn:
      return "(exists-in " + f->var + " " + term_str(f->t2) + " " + print_formula(f->a) + ")";
  }
  return "?";
}

namespace {
void free_vars_rec(const FormulaPtr& f, std::vector<std::string>& bound,
                   std::vector<std::string>& out) {
  using K = Formula::Kind;
  auto add_term = [&](const Term& t) {
    if (!t.is_var) return;
    if (std::find(bound.begin(), bound.end(), t.var) != bound.end()) return;
    if (std::find(out.begin(), out.end(), t.var) == out.end()) out.push_back(t.var);
  };
  switch (f->kind) {
    case K::True:
    case K::False: return;
    case K::Eq:
    case K::Mem:
      add_term(f->t1);
      add_term(f->t2);
      return;
    case K::And:
    case K::Or:
    case K::Implies:
      free_vars_rec(f->a, bound, out);
      free_vars_rec(f->b, bound, out);
      return;
    case K::Not: free_vars_rec(f->a, bound, out); return;
    case K::Forall:
    case K::Exists:
      bound.push_back(f->var);
      free_vars_rec(f->a, bound, out);
      bound.pop_back();
      return;
    case K::ForallIn:
    case K::ExistsIn:
      add_term(f->t2);
      bound.push_back(f->var);
      free_vars_rec(f->a, bound, out);
      bound.pop_back();
      return;
  }
}
}  // namespace

std::vector<std::string> free_variables(const FormulaPtr& f) {
  std::vector<std::string> bound, out;
  free_vars_rec(f, bound, out);
  return out;
}

}  // namespace sheafkit
