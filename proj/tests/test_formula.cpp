#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "pfl/formula.hpp"
#include "pfl/independence.hpp"

using namespace pfl;

TEST_CASE("builders and sizes") {
  FormulaPtr member = ratio_membership_formula(FamilyKind::Quintic);
  CHECK(quantifier_depth(member) == 4);
  auto fv = free_variables(member);
  CHECK(fv == std::vector<std::string>{"a", "s"});

  // size grows linearly in m: each new disjunct contributes O(j) nodes
  size_t base = formula_size(member);
  for (int m = 2; m <= 12; ++m) {
    size_t sz = formula_size(ratio_membership_prime_formula(FamilyKind::Quintic, m));
    CHECK(sz > base);
    CHECK(sz <= base + static_cast<size_t>(m) * (2 * m + 6));
    base = std::max(base, sz);
  }
  FormulaPtr m2 = ratio_membership_prime_formula(FamilyKind::Quintic, 2);
  // m = 2 adds exactly the equation s^2 = s
  FormulaPtr expected = f_or(member, f_eq(t_mul(t_var("s"), t_var("s")), t_var("s")));
  CHECK(formulas_equal(m2, expected));
}

TEST_CASE("pretty printing and parsing round trips") {
  FormulaPtr hand = parse_formula("A x.E y.(y+x = 0)");
  CHECK(quantifier_depth(hand) == 2);
  CHECK(formulas_equal(parse_formula(pretty_print(hand)), hand));
  // the space after the quantifier letter is optional
  CHECK(formulas_equal(parse_formula("Ax.Ey.(y+x = 0)"), hand));

  CHECK_THROWS_AS(parse_formula("(x+"), error);
  CHECK_THROWS_AS(parse_formula("A x."), error);

  std::vector<FormulaPtr> corpus = {
      ratio_membership_formula(FamilyKind::Quintic),
      ratio_membership_formula(FamilyKind::Char2AS),
      ratio_membership_prime_formula(FamilyKind::Septic, 4),
      constants_formula(FamilyKind::Quintic, 3),
      coverage_sentence(FamilyKind::Char2AS, 3),
      trdeg_sentence(1, 0),
      trdeg_sentence(0, 1),
      parse_formula("A x.(InSub(x) -> E y.(y*y = x | y*y = 0-x))"),
      parse_formula("x != 1 & ~(x = 0)"),
  };
  for (const auto& f : corpus) {
    std::string text = pretty_print(f);
    FormulaPtr back = parse_formula(text);
    CHECK(formulas_equal(back, f));
    CHECK(pretty_print(back) == text);  // printing is a fixed point
  }
}

TEST_CASE("substitution avoids capture") {
  // E x.(y = x), substituting y -> x must rename the bound x
  FormulaPtr f = f_exists("x", f_eq(t_var("y"), t_var("x")));
  FormulaPtr g = substitute(f, {{"y", t_var("x")}});
  // over any field: E x'.(x = x') is true for every x; the captured version
  // E x.(x = x) would also be true, so check structurally
  auto fv = free_variables(g);
  CHECK(fv == std::vector<std::string>{"x"});
  CHECK_FALSE(formulas_equal(g, f_exists("x", f_eq(t_var("x"), t_var("x")))));
}

TEST_CASE("evaluator basics") {
  FieldPtr f5 = Field::parse("GF(5)");
  CHECK(evaluate(parse_formula("A x.E y.(y+x = 0)"), f5, {}));
  CHECK(evaluate(parse_formula("E x.(x*x = 0-1)"), f5, {}));  // 2^2 = -1 mod 5
  FieldPtr f7 = Field::parse("GF(7)");
  CHECK_FALSE(evaluate(parse_formula("E x.(x*x = 0-1)"), f7, {}));

  // assignments and unbound variables
  FormulaPtr sq = parse_formula("E y.(y*y = x)");
  CHECK(evaluate(sq, f7, {{"x", f7->from_int(2)}}));
  CHECK_FALSE(evaluate(sq, f7, {{"x", f7->from_int(3)}}));
  CHECK_THROWS_AS(evaluate(sq, f7, {}), error);

  // budget gate
  EvalOptions tight;
  tight.budget = 10;
  CHECK_THROWS_AS(evaluate(parse_formula("A x.A y.A z.(x+y+z = x+y+z)"), f7, {}, tight), error);

  // InSub: prime-subfield membership over GF(9)
  FieldPtr f9 = Field::parse("GF(9)");
  CHECK(evaluate(parse_formula("InSub(1+1)"), f9, {}));
  FormulaPtr some_outside = parse_formula("E x.~InSub(x)");
  CHECK(evaluate(some_outside, f9, {}));
  CHECK_FALSE(evaluate(some_outside, Field::parse("GF(7)"), {}));

  // intermediate subfields: GF(4) inside GF(16)
  FieldPtr f16 = Field::parse("GF(16)");
  EvalOptions sub2;
  sub2.subfield_degree = 2;
  CHECK(evaluate(some_outside, f16, {}, sub2));
  CHECK(evaluate(parse_formula("A x.(InSub(x) -> InSub(x*x))"), f16, {}, sub2));
  // exactly 4 elements: distinct quadruple exists, distinct quintuple does not
  FormulaPtr five = parse_formula(
      "E a.E b.E c.E d.E e.(InSub(a) & InSub(b) & InSub(c) & InSub(d) & InSub(e)"
      " & a != b & a != c & a != d & a != e & b != c & b != d & b != e"
      " & c != d & c != e & d != e)");
  CHECK_FALSE(evaluate(five, f16, {}, sub2));
  EvalOptions sub4;
  sub4.subfield_degree = 4;
  CHECK(evaluate(five, f16, {}, sub4));
  EvalOptions sub3;
  sub3.subfield_degree = 3;
  CHECK_THROWS_AS(evaluate(five, f16, {}, sub3), error);  // 3 does not divide 4
}

TEST_CASE("visit counts stay within the estimate") {
  FieldPtr f5 = Field::parse("GF(5)");
  std::vector<FormulaPtr> corpus = {
      parse_formula("A x.E y.(y+x = 0)"),
      parse_formula("E x.(x*x = 0-1)"),
      ratio_membership_formula(FamilyKind::Quintic),
      coverage_sentence(FamilyKind::Quintic, 3),
  };
  for (const auto& f : corpus) {
    std::map<std::string, Value> asg;
    for (const auto& v : free_variables(f)) asg[v] = f5->from_int(1);
    EvalStats stats;
    evaluate(f, f5, asg, {}, &stats);
    CHECK(static_cast<double>(stats.visits) <= stats.estimate);
  }
  // the estimate grows with the structure size
  FormulaPtr f = coverage_sentence(FamilyKind::Quintic, 3);
  CHECK(evaluation_cost_estimate(f, 7) < evaluation_cost_estimate(f, 9));
}

TEST_CASE("ratio membership agrees with the census") {
  for (int64_t q : {3, 4, 5, 7, 9}) {
    FieldPtr f = Field::parse("GF(" + std::to_string(q) + ")");
    FamilyKind kind = family_for_characteristic(f->prime());
    FormulaPtr member = ratio_membership_formula(kind);
    FormulaPtr member_prime = ratio_membership_prime_formula(kind, 3);
    for (int64_t ai = 0; ai < q; ++ai) {
      CurveFamily fam = make_family(kind, f->element_at(ai));
      std::set<int64_t> sa, sa_prime;
      for (const auto& v : compute_Sa(fam, f)) sa.insert(f->index_of(v));
      for (const auto& v : compute_Sa_prime(fam, f, 3)) sa_prime.insert(f->index_of(v));
      for (int64_t si = 0; si < q; ++si) {
        std::map<std::string, Value> asg{{"a", f->element_at(ai)}, {"s", f->element_at(si)}};
        CHECK(evaluate(member, f, asg) == (sa.count(si) == 1));
        CHECK(evaluate(member_prime, f, asg) == (sa_prime.count(si) == 1));
      }
    }
  }
}

TEST_CASE("coverage sentence against the census") {
  // true over fully covered fields, false where the census records gaps
  std::vector<FamilyKind> all = {FamilyKind::Quintic, FamilyKind::Septic, FamilyKind::Char2AS};
  ScanResult scan = derive_weil_threshold(all, 16, 1);
  int m = static_cast<int>(scan.m);
  for (int64_t q : {5, 7, 8, 9, 11, 13, 16}) {
    FieldPtr f = Field::parse("GF(" + std::to_string(q) + ")");
    FamilyKind kind = family_for_characteristic(f->prime());
    bool expect = true;
    for (const auto& cell : scan.cells)
      if (cell.q == q && cell.family == family_name(kind))
        expect = expect && (cell.s_a_covers_field || q <= m);
    FormulaPtr phi = coverage_sentence(kind, m);
    CHECK(evaluate(phi, f, {}) == expect);
  }

  // with the fix capped at m = 2, fields with census gaps falsify the sentence
  FieldPtr f7 = Field::parse("GF(7)");
  CHECK_FALSE(evaluate(coverage_sentence(FamilyKind::Quintic, 2), f7, {}));
  FieldPtr f16 = Field::parse("GF(16)");
  CHECK(evaluate(coverage_sentence(FamilyKind::Char2AS, 2), f16, {}));
}

TEST_CASE("constants formula against a set-level oracle") {
  const int m = 5;
  for (int64_t q : {5, 7, 8}) {
    FieldPtr f = Field::parse("GF(" + std::to_string(q) + ")");
    FamilyKind kind = family_for_characteristic(f->prime());
    FormulaPtr phi = constants_formula(kind, m);

    // oracle: the set defined by phi is the intersection of the extended
    // ratio sets over parameters whose extended ratio set is a field
    // containing the parameter
    std::vector<char> in_intersection(q, 1);
    for (int64_t ai = 0; ai < q; ++ai) {
      CurveFamily fam = make_family(kind, f->element_at(ai));
      std::set<int64_t> sp;
      for (const auto& v : compute_Sa_prime(fam, f, m)) sp.insert(f->index_of(v));
      bool contains_a = sp.count(ai) == 1;
      bool closed = true;
      for (int64_t u : sp)
        for (int64_t v : sp) {
          Value uu = f->element_at(u), vv = f->element_at(v);
          if (!sp.count(f->index_of(uu - vv)) || !sp.count(f->index_of(uu * vv))) closed = false;
        }
      bool inverses = true;
      for (int64_t u : sp) {
        if (u == 0) continue;
        bool found = false;
        for (int64_t w : sp)
          if ((f->element_at(u) * f->element_at(w)).is_one()) found = true;
        inverses = inverses && found;
      }
      if (contains_a && closed && inverses)
        for (int64_t t = 0; t < q; ++t)
          if (!sp.count(t)) in_intersection[t] = 0;
    }
    for (int64_t t = 0; t < q; ++t) {
      std::map<std::string, Value> asg{{"t", f->element_at(t)}};
      CHECK(evaluate(phi, f, asg) == static_cast<bool>(in_intersection[t]));
    }

    // prefixing the free variable universally yields an evaluable sentence
    FormulaPtr closed = f_forall("t", phi);
    CHECK(free_variables(closed).empty());
    bool all = true;
    for (int64_t t = 0; t < q; ++t) all = all && in_intersection[t];
    CHECK(evaluate(closed, f, {}) == all);
  }
}

TEST_CASE("constants formula quantifier arithmetic") {
  // forall a over (member(a) & closure & inverses -> member(t)):
  // membership blocks contribute 4, closure 2 + 4, inverses 1 + 1 + 4
  FormulaPtr phi = constants_formula(FamilyKind::Quintic, 3);
  CHECK(quantifier_depth(phi) == 7);
  CHECK(free_variables(phi) == std::vector<std::string>{"t"});
}

TEST_CASE("trdeg sentences over GF(3)") {
  FieldPtr f3 = Field::parse("GF(3)");
  CHECK(evaluate(trdeg_sentence(1, 0), f3, {}));
  CHECK_FALSE(evaluate(trdeg_sentence(1, 1), f3, {}));
  CHECK_THROWS_AS(trdeg_sentence(1, 3), error);  // beyond the fold ceiling

  // agreement with the Pfister sweep: the sentence for (1, n) says the
  // empirical bound over the quadratic extension equals 1 + n
  FieldPtr f9 = Field::parse("GF(9)");
  CHECK(evaluate(trdeg_sentence(1, 0), f3, {}) == (empirical_e(f9, 1) == 1));
  CHECK(evaluate(trdeg_sentence(1, 1), f3, {}) == (empirical_e(f9, 2) == 2));
}
