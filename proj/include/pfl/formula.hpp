#pragma once

// First-order formulas over the language of rings (constants 0/1, +, -, *,
// =, connectives, quantifiers) with an optional subfield predicate, plus the
// explicit sentence generators and an exhaustive evaluator over finite
// fields.
//
// Concrete syntax (ASCII): "A x." / "E x." quantifiers, & | ~ ->, = and the
// != sugar, InSub(t); terms use + - * ^ with integer literals expanding to
// 1+1+...  Example: "A x.E y.(y+x = 0)".

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "pfl/curves.hpp"
#include "pfl/field.hpp"

namespace pfl {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Zero, One, Var, Add, Sub, Mul };
  Kind kind = Kind::Zero;
  std::string name;  // Var
  TermPtr a, b;
};

TermPtr t_zero();
TermPtr t_one();
TermPtr t_var(const std::string& name);
TermPtr t_add(TermPtr a, TermPtr b);
TermPtr t_sub(TermPtr a, TermPtr b);
TermPtr t_mul(TermPtr a, TermPtr b);
TermPtr t_neg(TermPtr a);
TermPtr t_int(int64_t n);             // n >= 0, as a sum of ones
TermPtr t_pow(TermPtr a, int64_t e);  // e >= 1, as a product

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { Eq, Not, And, Or, Implies, Exists, Forall, InSub };
  Kind kind = Kind::Eq;
  TermPtr t1, t2;  // Eq; InSub uses t1
  FormulaPtr f1, f2;
  std::string var;  // quantifiers
};

FormulaPtr f_eq(TermPtr a, TermPtr b);
FormulaPtr f_neq(TermPtr a, TermPtr b);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_exists(const std::string& var, FormulaPtr f);
FormulaPtr f_forall(const std::string& var, FormulaPtr f);
FormulaPtr f_insub(TermPtr t);
FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs);  // empty -> 0 = 0
FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs);   // empty -> ~(0 = 0)

int quantifier_depth(const FormulaPtr& f);
size_t formula_size(const FormulaPtr& f);
std::vector<std::string> free_variables(const FormulaPtr& f);

// Capture-avoiding substitution of free variables by terms.
FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, TermPtr>& subst);

// Structural equality after renaming bound variables canonically.
bool formulas_equal(const FormulaPtr& a, const FormulaPtr& b);

std::string pretty_print(const FormulaPtr& f);
std::string pretty_print_term(const TermPtr& t);
FormulaPtr parse_formula(const std::string& text);  // throws syntax_error with position

// Structured export: {"kind": "...", ...} nodes mirroring the AST.
nlohmann::json formula_to_json(const FormulaPtr& f);

// --- evaluation ------------------------------------------------------------

inline constexpr double kDefaultFormulaBudget = 1e19;

struct EvalOptions {
  double budget = kDefaultFormulaBudget;  // cap on the worst-case cost estimate
  int subfield_degree = 1;                // InSub over GF(p^n) = membership in GF(p^d)
};

struct EvalStats {
  uint64_t visits = 0;   // actual node visits (early exit included)
  double estimate = 0;   // worst-case estimate checked against the budget
};

// Worst-case evaluation cost: formula size with every quantifier multiplying
// its body cost by the structure size. Actual visits never exceed it.
double evaluation_cost_estimate(const FormulaPtr& f, int64_t q);

// Exact truth value by exhaustive quantifier expansion over a finite field.
// Free variables are read from the assignment; unknown names throw
// unbound_variable, an estimate above the budget throws budget_exceeded.
bool evaluate(const FormulaPtr& phi, const FieldPtr& structure,
              const std::map<std::string, Value>& assignment, const EvalOptions& opts = {},
              EvalStats* stats = nullptr);

// --- sentence generators -----------------------------------------------------

// Free variables (a, s): s lies in the ratio set of the parameter-a curve.
// Prenex-existential with 4 quantified variables.
FormulaPtr ratio_membership_formula(FamilyKind kind);

// ratio_membership_formula extended by the roots of X^j - X, 2 <= j <= m.
FormulaPtr ratio_membership_prime_formula(FamilyKind kind, int m);

// One free variable t: for all a, if the extended ratio set is a field
// containing a then it contains t.
FormulaPtr constants_formula(FamilyKind kind, int m);

// Sentence: every (e+n+1)-fold Pfister form over the ring K[sqrt(-1)]
// (elements encoded as coordinate pairs, slots guarded to be units) is
// isotropic, and some (e+n)-fold is anisotropic. Formula size is exponential
// in the fold; folds beyond the ceiling are refused.
FormulaPtr trdeg_sentence(int e, int n, int fold_ceiling = 3);

// Sentence: the extended ratio set covers the whole field for every a.
FormulaPtr coverage_sentence(FamilyKind kind, int m);

}  // namespace pfl
