#include "pfl/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "pfl/smallfield.hpp"

namespace pfl {

namespace {

TermPtr mk_term(Term::Kind k, TermPtr a = nullptr, TermPtr b = nullptr, std::string name = {}) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->a = std::move(a);
  t->b = std::move(b);
  t->name = std::move(name);
  return t;
}

FormulaPtr mk_formula(Formula::Kind k) { return std::make_shared<Formula>(Formula{k, {}, {}, {}, {}, {}}); }

}  // namespace

TermPtr t_zero() { return mk_term(Term::Kind::Zero); }
TermPtr t_one() { return mk_term(Term::Kind::One); }
TermPtr t_var(const std::string& name) { return mk_term(Term::Kind::Var, nullptr, nullptr, name); }
TermPtr t_add(TermPtr a, TermPtr b) { return mk_term(Term::Kind::Add, std::move(a), std::move(b)); }
TermPtr t_sub(TermPtr a, TermPtr b) { return mk_term(Term::Kind::Sub, std::move(a), std::move(b)); }
TermPtr t_mul(TermPtr a, TermPtr b) { return mk_term(Term::Kind::Mul, std::move(a), std::move(b)); }
TermPtr t_neg(TermPtr a) { return t_sub(t_zero(), std::move(a)); }

TermPtr t_int(int64_t n) {
  if (n < 0) fail(errc::bad_input, "t_int needs n >= 0");
  if (n == 0) return t_zero();
  TermPtr t = t_one();
  for (int64_t i = 1; i < n; ++i) t = t_add(t, t_one());
  return t;
}

TermPtr t_pow(TermPtr a, int64_t e) {
  if (e < 1) fail(errc::bad_input, "t_pow needs e >= 1");
  TermPtr t = a;
  for (int64_t i = 1; i < e; ++i) t = t_mul(t, a);
  return t;
}

FormulaPtr f_eq(TermPtr a, TermPtr b) {
  auto f = mk_formula(Formula::Kind::Eq);
  auto m = std::const_pointer_cast<Formula>(f);
  m->t1 = std::move(a);
  m->t2 = std::move(b);
  return f;
}

FormulaPtr f_neq(TermPtr a, TermPtr b) { return f_not(f_eq(std::move(a), std::move(b))); }

FormulaPtr f_not(FormulaPtr f) {
  auto r = mk_formula(Formula::Kind::Not);
  std::const_pointer_cast<Formula>(r)->f1 = std::move(f);
  return r;
}

namespace {
FormulaPtr binary(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
  auto r = mk_formula(k);
  auto m = std::const_pointer_cast<Formula>(r);
  m->f1 = std::move(a);
  m->f2 = std::move(b);
  return r;
}
}  // namespace

FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::And, std::move(a), std::move(b)); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Or, std::move(a), std::move(b)); }
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return binary(Formula::Kind::Implies, std::move(a), std::move(b));
}

FormulaPtr f_exists(const std::string& var, FormulaPtr f) {
  auto r = mk_formula(Formula::Kind::Exists);
  auto m = std::const_pointer_cast<Formula>(r);
  m->var = var;
  m->f1 = std::move(f);
  return r;
}

FormulaPtr f_forall(const std::string& var, FormulaPtr f) {
  auto r = mk_formula(Formula::Kind::Forall);
  auto m = std::const_pointer_cast<Formula>(r);
  m->var = var;
  m->f1 = std::move(f);
  return r;
}

FormulaPtr f_insub(TermPtr t) {
  auto r = mk_formula(Formula::Kind::InSub);
  std::const_pointer_cast<Formula>(r)->t1 = std::move(t);
  return r;
}

FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_eq(t_zero(), t_zero());
  FormulaPtr r = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) r = f_and(r, fs[i]);
  return r;
}

FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_not(f_eq(t_zero(), t_zero()));
  FormulaPtr r = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) r = f_or(r, fs[i]);
  return r;
}

int quantifier_depth(const FormulaPtr& f) {
  if (!f) return 0;
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::InSub:
      return 0;
    case Formula::Kind::Not:
      return quantifier_depth(f->f1);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      return std::max(quantifier_depth(f->f1), quantifier_depth(f->f2));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      return 1 + quantifier_depth(f->f1);
  }
  return 0;
}

namespace {

size_t term_size(const TermPtr& t) {
  if (!t) return 0;
  return 1 + term_size(t->a) + term_size(t->b);
}

void collect_free_term(const TermPtr& t, const std::set<std::string>& bound,
                       std::set<std::string>& out) {
  if (!t) return;
  if (t->kind == Term::Kind::Var) {
    if (!bound.count(t->name)) out.insert(t->name);
    return;
  }
  collect_free_term(t->a, bound, out);
  collect_free_term(t->b, bound, out);
}

void collect_free(const FormulaPtr& f, std::set<std::string> bound, std::set<std::string>& out) {
  if (!f) return;
  switch (f->kind) {
    case Formula::Kind::Eq:
      collect_free_term(f->t1, bound, out);
      collect_free_term(f->t2, bound, out);
      return;
    case Formula::Kind::InSub:
      collect_free_term(f->t1, bound, out);
      return;
    case Formula::Kind::Not:
      collect_free(f->f1, bound, out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      collect_free(f->f1, bound, out);
      collect_free(f->f2, bound, out);
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      bound.insert(f->var);
      collect_free(f->f1, std::move(bound), out);
      return;
  }
}

}  // namespace

size_t formula_size(const FormulaPtr& f) {
  if (!f) return 0;
  return 1 + term_size(f->t1) + term_size(f->t2) + formula_size(f->f1) + formula_size(f->f2);
}

std::vector<std::string> free_variables(const FormulaPtr& f) {
  std::set<std::string> out;
  collect_free(f, {}, out);
  return {out.begin(), out.end()};
}

// --- substitution -----------------------------------------------------------

namespace {

TermPtr subst_term(const TermPtr& t, const std::map<std::string, TermPtr>& s) {
  if (!t) return t;
  if (t->kind == Term::Kind::Var) {
    auto it = s.find(t->name);
    return it == s.end() ? t : it->second;
  }
  if (!t->a && !t->b) return t;
  return mk_term(t->kind, subst_term(t->a, s), subst_term(t->b, s), t->name);
}

FormulaPtr subst_impl(const FormulaPtr& f, std::map<std::string, TermPtr> s, int& fresh) {
  if (!f) return f;
  switch (f->kind) {
    case Formula::Kind::Eq:
      return f_eq(subst_term(f->t1, s), subst_term(f->t2, s));
    case Formula::Kind::InSub:
      return f_insub(subst_term(f->t1, s));
    case Formula::Kind::Not:
      return f_not(subst_impl(f->f1, s, fresh));
    case Formula::Kind::And:
      return f_and(subst_impl(f->f1, s, fresh), subst_impl(f->f2, s, fresh));
    case Formula::Kind::Or:
      return f_or(subst_impl(f->f1, s, fresh), subst_impl(f->f2, s, fresh));
    case Formula::Kind::Implies:
      return f_implies(subst_impl(f->f1, s, fresh), subst_impl(f->f2, s, fresh));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      std::string var = f->var;
      s.erase(var);  // the bound variable shadows the substitution
      // capture check: does any replacement mention this bound name?
      bool captured = false;
      std::set<std::string> bound_none;
      for (const auto& [k, rep] : s) {
        std::set<std::string> fv;
        collect_free_term(rep, {}, fv);
        if (fv.count(var)) captured = true;
      }
      FormulaPtr body = f->f1;
      if (captured) {
        std::string nv = "r" + std::to_string(fresh++);
        std::map<std::string, TermPtr> rn{{var, t_var(nv)}};
        int dummy = fresh;
        body = subst_impl(body, rn, dummy);
        fresh = dummy;
        var = nv;
      }
      FormulaPtr nb = subst_impl(body, s, fresh);
      return f->kind == Formula::Kind::Exists ? f_exists(var, nb) : f_forall(var, nb);
    }
  }
  return f;
}

}  // namespace

FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, TermPtr>& subst) {
  int fresh = 0;
  return subst_impl(f, subst, fresh);
}

// --- canonical renaming / equality -------------------------------------------

namespace {

TermPtr canon_term(const TermPtr& t, const std::map<std::string, std::string>& names) {
  if (!t) return t;
  if (t->kind == Term::Kind::Var) {
    auto it = names.find(t->name);
    return t_var(it == names.end() ? t->name : it->second);
  }
  if (!t->a && !t->b) return t;
  return mk_term(t->kind, canon_term(t->a, names), canon_term(t->b, names), t->name);
}

FormulaPtr canon_impl(const FormulaPtr& f, std::map<std::string, std::string> names, int& next) {
  if (!f) return f;
  switch (f->kind) {
    case Formula::Kind::Eq:
      return f_eq(canon_term(f->t1, names), canon_term(f->t2, names));
    case Formula::Kind::InSub:
      return f_insub(canon_term(f->t1, names));
    case Formula::Kind::Not:
      return f_not(canon_impl(f->f1, names, next));
    case Formula::Kind::And:
      return f_and(canon_impl(f->f1, names, next), canon_impl(f->f2, names, next));
    case Formula::Kind::Or:
      return f_or(canon_impl(f->f1, names, next), canon_impl(f->f2, names, next));
    case Formula::Kind::Implies:
      return f_implies(canon_impl(f->f1, names, next), canon_impl(f->f2, names, next));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      std::string nv = "v" + std::to_string(next++);
      names[f->var] = nv;
      FormulaPtr body = canon_impl(f->f1, std::move(names), next);
      return f->kind == Formula::Kind::Exists ? f_exists(nv, body) : f_forall(nv, body);
    }
  }
  return f;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  if (a->kind == Term::Kind::Var) return a->name == b->name;
  return term_equal(a->a, b->a) && term_equal(a->b, b->b);
}

bool formula_equal_raw(const FormulaPtr& a, const FormulaPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  if (a->var != b->var) return false;
  return term_equal(a->t1, b->t1) && term_equal(a->t2, b->t2) && formula_equal_raw(a->f1, b->f1) &&
         formula_equal_raw(a->f2, b->f2);
}

}  // namespace

bool formulas_equal(const FormulaPtr& a, const FormulaPtr& b) {
  int na = 0, nb = 0;
  return formula_equal_raw(canon_impl(a, {}, na), canon_impl(b, {}, nb));
}

// --- printing -----------------------------------------------------------------

namespace {

// term precedence: sum 1, product 2, atom 3
void print_term(const TermPtr& t, int parent_prec, std::string& out) {
  switch (t->kind) {
    case Term::Kind::Zero:
      out += "0";
      return;
    case Term::Kind::One:
      out += "1";
      return;
    case Term::Kind::Var:
      out += t->name;
      return;
    case Term::Kind::Add:
    case Term::Kind::Sub: {
      bool parens = parent_prec > 1;
      if (parens) out += "(";
      print_term(t->a, 1, out);
      out += t->kind == Term::Kind::Add ? "+" : "-";
      print_term(t->b, 2, out);  // right operand binds tighter to keep a-b-c unambiguous
      if (parens) out += ")";
      return;
    }
    case Term::Kind::Mul: {
      bool parens = parent_prec > 2;
      if (parens) out += "(";
      print_term(t->a, 2, out);
      out += "*";
      print_term(t->b, 3, out);
      if (parens) out += ")";
      return;
    }
  }
}

// formula precedence: quantifier 0, -> 1, | 2, & 3, ~ 4, atoms 5
void print_formula(const FormulaPtr& f, int parent_prec, std::string& out) {
  switch (f->kind) {
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      bool parens = parent_prec > 0;
      if (parens) out += "(";
      out += f->kind == Formula::Kind::Forall ? "A " : "E ";
      out += f->var;
      out += ".";
      print_formula(f->f1, 0, out);
      if (parens) out += ")";
      return;
    }
    case Formula::Kind::Implies: {
      bool parens = parent_prec > 1;
      if (parens) out += "(";
      print_formula(f->f1, 2, out);
      out += " -> ";
      print_formula(f->f2, 1, out);  // right associative
      if (parens) out += ")";
      return;
    }
    case Formula::Kind::Or: {
      bool parens = parent_prec > 2;
      if (parens) out += "(";
      print_formula(f->f1, 2, out);
      out += " | ";
      print_formula(f->f2, 3, out);
      if (parens) out += ")";
      return;
    }
    case Formula::Kind::And: {
      bool parens = parent_prec > 3;
      if (parens) out += "(";
      print_formula(f->f1, 3, out);
      out += " & ";
      print_formula(f->f2, 4, out);
      if (parens) out += ")";
      return;
    }
    case Formula::Kind::Not:
      out += "~";
      print_formula(f->f1, 4, out);
      return;
    case Formula::Kind::Eq:
      print_term(f->t1, 0, out);
      out += " = ";
      print_term(f->t2, 0, out);
      return;
    case Formula::Kind::InSub:
      out += "InSub(";
      print_term(f->t1, 0, out);
      out += ")";
      return;
  }
}

}  // namespace

std::string pretty_print(const FormulaPtr& f) {
  std::string out;
  print_formula(f, 0, out);
  return out;
}

std::string pretty_print_term(const TermPtr& t) {
  std::string out;
  print_term(t, 0, out);
  return out;
}

namespace {

nlohmann::json term_to_json(const TermPtr& t) {
  using nlohmann::json;
  switch (t->kind) {
    case Term::Kind::Zero:
      return json{{"kind", "0"}};
    case Term::Kind::One:
      return json{{"kind", "1"}};
    case Term::Kind::Var:
      return json{{"kind", "var"}, {"name", t->name}};
    case Term::Kind::Add:
      return json{{"kind", "add"}, {"a", term_to_json(t->a)}, {"b", term_to_json(t->b)}};
    case Term::Kind::Sub:
      return json{{"kind", "sub"}, {"a", term_to_json(t->a)}, {"b", term_to_json(t->b)}};
    case Term::Kind::Mul:
      return json{{"kind", "mul"}, {"a", term_to_json(t->a)}, {"b", term_to_json(t->b)}};
  }
  return {};
}

}  // namespace

nlohmann::json formula_to_json(const FormulaPtr& f) {
  using nlohmann::json;
  switch (f->kind) {
    case Formula::Kind::Eq:
      return json{{"kind", "eq"}, {"lhs", term_to_json(f->t1)}, {"rhs", term_to_json(f->t2)}};
    case Formula::Kind::InSub:
      return json{{"kind", "insub"}, {"arg", term_to_json(f->t1)}};
    case Formula::Kind::Not:
      return json{{"kind", "not"}, {"arg", formula_to_json(f->f1)}};
    case Formula::Kind::And:
      return json{{"kind", "and"}, {"a", formula_to_json(f->f1)}, {"b", formula_to_json(f->f2)}};
    case Formula::Kind::Or:
      return json{{"kind", "or"}, {"a", formula_to_json(f->f1)}, {"b", formula_to_json(f->f2)}};
    case Formula::Kind::Implies:
      return json{{"kind", "implies"},
                  {"a", formula_to_json(f->f1)},
                  {"b", formula_to_json(f->f2)}};
    case Formula::Kind::Exists:
      return json{{"kind", "exists"}, {"var", f->var}, {"body", formula_to_json(f->f1)}};
    case Formula::Kind::Forall:
      return json{{"kind", "forall"}, {"var", f->var}, {"body", formula_to_json(f->f1)}};
  }
  return {};
}

// --- parsing -------------------------------------------------------------------

namespace {

struct FormulaParser {
  const std::string& s;
  size_t pos = 0;

  explicit FormulaParser(const std::string& text) : s(text) {}

  [[noreturn]] void err(const std::string& msg) {
    fail(errc::syntax_error, msg + " at position " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat_str(const char* w) {
    skip_ws();
    size_t n = std::strlen(w);
    if (s.compare(pos, n, w) == 0) {
      pos += n;
      return true;
    }
    return false;
  }
  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }

  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (start == pos) err("expected identifier");
    return s.substr(start, pos - start);
  }

  FormulaPtr parse() {
    FormulaPtr f = formula();
    skip_ws();
    if (pos != s.size()) err("trailing input");
    return f;
  }

  FormulaPtr formula() { return quantified(); }

  // a quantifier is 'A' or 'E' followed by a variable and '.'; the space is
  // optional, so both "A x.phi" and "Ax.phi" parse
  bool at_quantifier() {
    skip_ws();
    if (pos >= s.size() || (s[pos] != 'A' && s[pos] != 'E')) return false;
    size_t i = pos + 1;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    size_t start = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    if (i == start) return false;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    return i < s.size() && s[i] == '.';
  }

  FormulaPtr quantified() {
    if (at_quantifier()) {
      char q = s[pos];
      ++pos;
      std::string v = ident();
      if (!eat('.')) err("expected . after quantified variable");
      FormulaPtr body = quantified();
      return q == 'A' ? f_forall(v, body) : f_exists(v, body);
    }
    return implication();
  }

  FormulaPtr implication() {
    FormulaPtr l = disjunction();
    skip_ws();
    if (eat_str("->")) return f_implies(l, quantified());
    return l;
  }

  FormulaPtr disjunction() {
    FormulaPtr l = conjunction();
    while (true) {
      skip_ws();
      if (pos < s.size() && s[pos] == '|') {
        ++pos;
        l = f_or(l, conjunction());
      } else {
        return l;
      }
    }
  }

  FormulaPtr conjunction() {
    FormulaPtr l = unary();
    while (true) {
      skip_ws();
      if (pos < s.size() && s[pos] == '&') {
        ++pos;
        l = f_and(l, unary());
      } else {
        return l;
      }
    }
  }

  FormulaPtr unary() {
    skip_ws();
    if (eat('~')) return f_not(unary());
    // quantifier directly under a connective
    if (at_quantifier()) return quantified();
    return atom();
  }

  FormulaPtr atom() {
    skip_ws();
    if (eat_str("InSub")) {
      if (!eat('(')) err("expected ( after InSub");
      TermPtr t = term();
      if (!eat(')')) err("expected )");
      return f_insub(t);
    }
    if (peek('(')) {
      // could be a parenthesized formula or a parenthesized term in an
      // equation; try formula first and fall back
      size_t save = pos;
      ++pos;
      try {
        FormulaPtr f = formula_inside_parens();
        return f;
      } catch (const error&) {
        pos = save;
      }
      TermPtr l = term();
      return finish_equation(l);
    }
    TermPtr l = term();
    return finish_equation(l);
  }

  FormulaPtr formula_inside_parens() {
    FormulaPtr f = quantified();
    skip_ws();
    if (!eat(')')) err("expected )");
    // an equation like (x) = y would have parsed x as a formula? terms are
    // not formulas, so reaching here means a genuine formula
    return f;
  }

  FormulaPtr finish_equation(TermPtr l) {
    skip_ws();
    if (eat_str("!=")) return f_neq(l, term());
    if (eat('=')) return f_eq(l, term());
    err("expected = or != in atomic formula");
  }

  TermPtr term() {
    TermPtr t = eat('-') ? t_neg(prod()) : prod();
    while (true) {
      skip_ws();
      if (pos < s.size() && s[pos] == '+') {
        ++pos;
        t = t_add(t, prod());
      } else if (pos < s.size() && s[pos] == '-' &&
                 !(pos + 1 < s.size() && s[pos + 1] == '>')) {
        ++pos;
        t = t_sub(t, prod());
      } else {
        return t;
      }
    }
  }

  TermPtr prod() {
    TermPtr t = power();
    while (true) {
      skip_ws();
      if (pos < s.size() && s[pos] == '*') {
        ++pos;
        t = t_mul(t, power());
      } else {
        return t;
      }
    }
  }

  TermPtr power() {
    TermPtr t = term_atom();
    skip_ws();
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      skip_ws();
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) err("expected exponent");
      int64_t e = std::stoll(s.substr(start, pos - start));
      if (e == 0) return t_one();
      t = t_pow(t, e);
    }
    return t;
  }

  TermPtr term_atom() {
    skip_ws();
    if (pos >= s.size()) err("unexpected end of input");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      TermPtr t = term();
      if (!eat(')')) err("expected )");
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      return t_int(std::stoll(s.substr(start, pos - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return t_var(ident());
    err("unexpected character in term");
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  FormulaParser p(text);
  return p.parse();
}

// --- evaluation -------------------------------------------------------------------

namespace {

struct CompiledTerm {
  Term::Kind kind;
  int slot = -1;  // Var
  std::unique_ptr<CompiledTerm> a, b;
};

struct CompiledFormula {
  Formula::Kind kind;
  std::unique_ptr<CompiledTerm> t1, t2;
  std::unique_ptr<CompiledFormula> f1, f2;
  int slot = -1;  // quantifier slot
};

struct Compiler {
  std::vector<std::string> names;  // slot -> name (scoped stack)
  const std::map<std::string, Value>* assignment;
  int max_slots = 0;

  int lookup(const std::string& name) {
    for (int i = static_cast<int>(names.size()) - 1; i >= 0; --i)
      if (names[i] == name) return i;
    fail(errc::unbound_variable, "variable '" + name + "' is not bound or assigned");
  }

  std::unique_ptr<CompiledTerm> term(const TermPtr& t) {
    auto out = std::make_unique<CompiledTerm>();
    out->kind = t->kind;
    if (t->kind == Term::Kind::Var) {
      out->slot = lookup(t->name);
      return out;
    }
    if (t->a) out->a = term(t->a);
    if (t->b) out->b = term(t->b);
    return out;
  }

  std::unique_ptr<CompiledFormula> formula(const FormulaPtr& f) {
    auto out = std::make_unique<CompiledFormula>();
    out->kind = f->kind;
    switch (f->kind) {
      case Formula::Kind::Eq:
        out->t1 = term(f->t1);
        out->t2 = term(f->t2);
        return out;
      case Formula::Kind::InSub:
        out->t1 = term(f->t1);
        return out;
      case Formula::Kind::Not:
        out->f1 = formula(f->f1);
        return out;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies:
        out->f1 = formula(f->f1);
        out->f2 = formula(f->f2);
        return out;
      case Formula::Kind::Exists:
      case Formula::Kind::Forall:
        names.push_back(f->var);
        out->slot = static_cast<int>(names.size()) - 1;
        max_slots = std::max(max_slots, static_cast<int>(names.size()));
        out->f1 = formula(f->f1);
        names.pop_back();
        return out;
    }
    return out;
  }
};

struct Evaluator {
  const SmallField& sf;
  std::vector<int> env;
  std::vector<char> insub;  // membership table for the subfield predicate
  uint64_t visits = 0;

  int term(const CompiledTerm* t) {
    ++visits;
    switch (t->kind) {
      case Term::Kind::Zero:
        return 0;
      case Term::Kind::One:
        return 1;
      case Term::Kind::Var:
        return env[t->slot];
      case Term::Kind::Add:
        return sf.add(term(t->a.get()), term(t->b.get()));
      case Term::Kind::Sub:
        return sf.sub(term(t->a.get()), term(t->b.get()));
      case Term::Kind::Mul: {
        int l = term(t->a.get());
        // multiplication by zero short-circuits; visits stay below estimate
        if (l == 0) return 0;
        return sf.mul(l, term(t->b.get()));
      }
    }
    return 0;
  }

  bool formula(const CompiledFormula* f) {
    ++visits;
    switch (f->kind) {
      case Formula::Kind::Eq:
        return term(f->t1.get()) == term(f->t2.get());
      case Formula::Kind::InSub:
        return insub[term(f->t1.get())];
      case Formula::Kind::Not:
        return !formula(f->f1.get());
      case Formula::Kind::And:
        return formula(f->f1.get()) && formula(f->f2.get());
      case Formula::Kind::Or:
        return formula(f->f1.get()) || formula(f->f2.get());
      case Formula::Kind::Implies:
        return !formula(f->f1.get()) || formula(f->f2.get());
      case Formula::Kind::Exists: {
        for (int v = 0; v < sf.q(); ++v) {
          env[f->slot] = v;
          if (formula(f->f1.get())) return true;
        }
        return false;
      }
      case Formula::Kind::Forall: {
        for (int v = 0; v < sf.q(); ++v) {
          env[f->slot] = v;
          if (!formula(f->f1.get())) return false;
        }
        return true;
      }
    }
    return false;
  }
};

double estimate_term(const TermPtr& t) { return static_cast<double>(term_size(t)); }

double estimate(const FormulaPtr& f, double q) {
  switch (f->kind) {
    case Formula::Kind::Eq:
      return 1 + estimate_term(f->t1) + estimate_term(f->t2);
    case Formula::Kind::InSub:
      return 1 + estimate_term(f->t1);
    case Formula::Kind::Not:
      return 1 + estimate(f->f1, q);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      return 1 + estimate(f->f1, q) + estimate(f->f2, q);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      return 1 + q * estimate(f->f1, q);
  }
  return 1;
}

}  // namespace

double evaluation_cost_estimate(const FormulaPtr& f, int64_t q) {
  return estimate(f, static_cast<double>(q));
}

bool evaluate(const FormulaPtr& phi, const FieldPtr& structure,
              const std::map<std::string, Value>& assignment, const EvalOptions& opts,
              EvalStats* stats) {
  if (!structure->is_finite()) fail(errc::infinite_field, "evaluation needs a finite structure");
  SmallField sf(structure);

  double est = evaluation_cost_estimate(phi, sf.q());
  if (est > opts.budget)
    fail(errc::budget_exceeded,
         "estimated cost " + std::to_string(est) + " exceeds budget " + std::to_string(opts.budget));

  // bind the free variables as outer slots
  Compiler comp;
  std::vector<Value> bound_values;
  for (const auto& [name, v] : assignment) {
    comp.names.push_back(name);
    auto cv = coerce(v, structure);
    if (!cv) fail(errc::bad_input, "assigned value outside the structure");
    bound_values.push_back(*cv);
  }
  comp.max_slots = static_cast<int>(comp.names.size());
  auto cf = comp.formula(phi);

  Evaluator ev{sf, {}, {}, 0};
  ev.env.assign(comp.max_slots, 0);
  for (size_t i = 0; i < bound_values.size(); ++i)
    ev.env[i] = sf.from_value(bound_values[i]);

  // subfield predicate: membership in GF(p^d)
  int d = opts.subfield_degree;
  if (sf.n() % d != 0) fail(errc::bad_input, "subfield degree must divide the extension degree");
  int64_t sub_order = 1;
  for (int i = 0; i < d; ++i) sub_order *= sf.p();
  ev.insub.resize(sf.q());
  for (int x = 0; x < sf.q(); ++x) ev.insub[x] = sf.pow(x, sub_order) == x;

  bool result = ev.formula(cf.get());
  if (stats) {
    stats->visits = ev.visits;
    stats->estimate = est;
  }
  return result;
}

// --- sentence generators -------------------------------------------------------------

namespace {

// y^2 = x^5 + a x + 1 / y^2 = x^7 + a x + 1 / y^2 + y = x^5 + a x
FormulaPtr on_curve(FamilyKind kind, const TermPtr& x, const TermPtr& y, const TermPtr& a) {
  TermPtr y2 = t_mul(y, y);
  switch (kind) {
    case FamilyKind::Quintic:
      return f_eq(y2, t_add(t_add(t_pow(x, 5), t_mul(a, x)), t_one()));
    case FamilyKind::Septic:
      return f_eq(y2, t_add(t_add(t_pow(x, 7), t_mul(a, x)), t_one()));
    case FamilyKind::Char2AS:
      return f_eq(t_add(y2, y), t_add(t_pow(x, 5), t_mul(a, x)));
  }
  return nullptr;
}

}  // namespace

FormulaPtr ratio_membership_formula(FamilyKind kind) {
  TermPtr a = t_var("a"), s = t_var("s");
  TermPtr x1 = t_var("x1"), y1 = t_var("y1"), x2 = t_var("x2"), y2 = t_var("y2");
  FormulaPtr body = f_and_all({
      on_curve(kind, x1, y1, a),
      on_curve(kind, x2, y2, a),
      f_neq(x2, t_zero()),
      f_eq(t_mul(s, x2), x1),
  });
  return f_exists("x1", f_exists("y1", f_exists("x2", f_exists("y2", body))));
}

FormulaPtr ratio_membership_prime_formula(FamilyKind kind, int m) {
  if (m < 2) fail(errc::bad_input, "m must be >= 2");
  TermPtr s = t_var("s");
  std::vector<FormulaPtr> parts{ratio_membership_formula(kind)};
  for (int j = 2; j <= m; ++j) parts.push_back(f_eq(t_pow(s, j), s));
  return f_or_all(parts);
}

FormulaPtr constants_formula(FamilyKind kind, int m) {
  FormulaPtr member = ratio_membership_prime_formula(kind, m);  // free: a, s
  auto member_at = [&](const std::string& var) {
    return substitute(member, {{"s", t_var(var)}});
  };
  auto member_at_term = [&](const TermPtr& t) {
    return substitute(member, {{"s", t}});
  };
  // "the extended ratio set is a field containing a": contains a, closed
  // under subtraction and multiplication, and nonzero members have inverses
  // inside the set
  FormulaPtr contains_a = member_at("a");
  FormulaPtr closure = f_forall(
      "cu", f_forall("cv", f_implies(f_and(member_at("cu"), member_at("cv")),
                                     f_and(member_at_term(t_sub(t_var("cu"), t_var("cv"))),
                                           member_at_term(t_mul(t_var("cu"), t_var("cv")))))));
  FormulaPtr inverses = f_forall(
      "cu", f_implies(f_and(member_at("cu"), f_neq(t_var("cu"), t_zero())),
                      f_exists("cw", f_and(member_at("cw"),
                                           f_eq(t_mul(t_var("cu"), t_var("cw")), t_one())))));
  FormulaPtr field_cond = f_and_all({contains_a, closure, inverses});
  return f_forall("a", f_implies(field_cond, member_at("t")));
}

FormulaPtr coverage_sentence(FamilyKind kind, int m) {
  return f_forall("a", f_forall("s", ratio_membership_prime_formula(kind, m)));
}

namespace {

// pair-coordinate arithmetic for the ring K[sqrt(-1)]
struct PairTerm {
  TermPtr re, im;
};

PairTerm pt_one() { return {t_one(), t_zero()}; }

PairTerm pt_mul(const PairTerm& p, const PairTerm& q) {
  return {t_sub(t_mul(p.re, q.re), t_mul(p.im, q.im)),
          t_add(t_mul(p.re, q.im), t_mul(p.im, q.re))};
}

PairTerm pt_add(const PairTerm& p, const PairTerm& q) {
  return {t_add(p.re, q.re), t_add(p.im, q.im)};
}

// norm != 0 guards that the slot is a unit of the pair ring
FormulaPtr pt_unit(const PairTerm& p) {
  return f_neq(t_add(t_mul(p.re, p.re), t_mul(p.im, p.im)), t_zero());
}

FormulaPtr pt_nonzero(const PairTerm& p) {
  return f_or(f_neq(p.re, t_zero()), f_neq(p.im, t_zero()));
}

struct PfisterOverPairs {
  std::vector<std::string> slot_vars;   // 2 per slot
  std::vector<std::string> coord_vars;  // 2 per coordinate
  PairTerm value;                       // sum over masks coeff_mask * x_mask^2
  std::vector<FormulaPtr> slot_units;
  FormulaPtr nontrivial;
};

PfisterOverPairs build_pfister_pairs(int fold, const std::string& prefix) {
  PfisterOverPairs out;
  std::vector<PairTerm> slots;
  for (int i = 0; i < fold; ++i) {
    std::string ru = prefix + "a" + std::to_string(i) + "u";
    std::string rv = prefix + "a" + std::to_string(i) + "v";
    out.slot_vars.push_back(ru);
    out.slot_vars.push_back(rv);
    slots.push_back({t_var(ru), t_var(rv)});
    out.slot_units.push_back(pt_unit(slots.back()));
  }
  int dim = 1 << fold;
  PairTerm acc{t_zero(), t_zero()};
  std::vector<FormulaPtr> nz;
  for (int mask = 0; mask < dim; ++mask) {
    PairTerm coeff = pt_one();
    for (int i = 0; i < fold; ++i)
      if (mask & (1 << i)) coeff = pt_mul(coeff, slots[i]);
    std::string xu = prefix + "x" + std::to_string(mask) + "u";
    std::string xv = prefix + "x" + std::to_string(mask) + "v";
    out.coord_vars.push_back(xu);
    out.coord_vars.push_back(xv);
    PairTerm x{t_var(xu), t_var(xv)};
    nz.push_back(pt_nonzero(x));
    acc = pt_add(acc, pt_mul(coeff, pt_mul(x, x)));
  }
  out.value = acc;
  out.nontrivial = f_or_all(nz);
  return out;
}

}  // namespace

FormulaPtr trdeg_sentence(int e, int n, int fold_ceiling) {
  if (e < 0 || n < 0) fail(errc::bad_input, "e and n must be nonnegative");
  if (e + n + 1 > fold_ceiling)
    fail(errc::fold_ceiling, "fold " + std::to_string(e + n + 1) + " exceeds the ceiling " +
                                 std::to_string(fold_ceiling));

  // every (e+n+1)-fold Pfister form over K[sqrt(-1)] represents 0
  PfisterOverPairs big = build_pfister_pairs(e + n + 1, "p");
  FormulaPtr zero_exists = f_and_all({big.nontrivial, f_eq(big.value.re, t_zero()),
                                      f_eq(big.value.im, t_zero())});
  for (int i = static_cast<int>(big.coord_vars.size()) - 1; i >= 0; --i)
    zero_exists = f_exists(big.coord_vars[i], zero_exists);
  FormulaPtr all_isotropic = f_implies(f_and_all(big.slot_units), zero_exists);
  for (int i = static_cast<int>(big.slot_vars.size()) - 1; i >= 0; --i)
    all_isotropic = f_forall(big.slot_vars[i], all_isotropic);

  // some (e+n)-fold Pfister form does not represent 0
  PfisterOverPairs small = build_pfister_pairs(e + n, "q");
  FormulaPtr no_zero = f_implies(small.nontrivial, f_or(f_neq(small.value.re, t_zero()),
                                                        f_neq(small.value.im, t_zero())));
  for (int i = static_cast<int>(small.coord_vars.size()) - 1; i >= 0; --i)
    no_zero = f_forall(small.coord_vars[i], no_zero);
  FormulaPtr some_aniso = f_and_all(small.slot_units);
  some_aniso = f_and(some_aniso, no_zero);
  for (int i = static_cast<int>(small.slot_vars.size()) - 1; i >= 0; --i)
    some_aniso = f_exists(small.slot_vars[i], some_aniso);

  return f_and(all_isotropic, some_aniso);
}

}  // namespace pfl
