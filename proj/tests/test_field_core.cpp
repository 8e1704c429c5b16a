#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "pfl/field.hpp"

using namespace pfl;

namespace {

// independent oracle: first irreducible monic quadratic over F_p in
// coefficient order (c1, c0), decided by root exhaustion
std::vector<int64_t> least_irreducible_quadratic(int64_t p) {
  for (int64_t c1 = 0; c1 < p; ++c1)
    for (int64_t c0 = 0; c0 < p; ++c0) {
      bool has_root = false;
      for (int64_t x = 0; x < p && !has_root; ++x)
        if ((x * x + c1 * x + c0) % p == 0) has_root = true;
      if (!has_root) return {c0, c1, 1};
    }
  return {};
}

// deterministic random element generators per field kind
struct Rng {
  std::mt19937 gen{12345};
  int64_t uniform(int64_t lo, int64_t hi) {
    return std::uniform_int_distribution<int64_t>(lo, hi)(gen);
  }
};

Value random_element(Rng& rng, const FieldPtr& f, int depth = 0) {
  switch (f->kind()) {
    case FieldKind::Prime:
    case FieldKind::Finite:
      return f->element_at(rng.uniform(0, static_cast<int64_t>(f->order()) - 1));
    case FieldKind::Rationals: {
      int64_t num = rng.uniform(-50, 50);
      int64_t den = rng.uniform(1, 20);
      return f->from_int(num) / f->from_int(den);
    }
    case FieldKind::RatFunc: {
      int nv = static_cast<int>(f->vars().size());
      MPoly num(f->base(), nv), den(f->base(), nv);
      for (int t = 0; t < 3; ++t) {
        Exps e(nv, 0);
        for (int i = 0; i < nv; ++i) e[i] = static_cast<int>(rng.uniform(0, 2));
        num.add_term(e, random_element(rng, f->base(), depth + 1));
      }
      while (den.is_zero()) {
        Exps e(nv, 0);
        for (int i = 0; i < nv; ++i) e[i] = static_cast<int>(rng.uniform(0, 1));
        den.add_term(e, random_element(rng, f->base(), depth + 1));
      }
      return make_ratfunc_value(f, num, den);
    }
    case FieldKind::Quad:
      return make_quad_value(f, random_element(rng, f->base(), depth + 1),
                             random_element(rng, f->base(), depth + 1));
  }
  return f->zero();
}

void check_field_axioms(const FieldPtr& f, int trials) {
  Rng rng;
  for (int i = 0; i < trials; ++i) {
    Value a = random_element(rng, f), b = random_element(rng, f), c = random_element(rng, f);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + f->zero() == a);
    CHECK(a * f->one() == a);
    CHECK(a - a == f->zero());
    if (!a.is_zero()) CHECK(a * a.inverse() == f->one());
  }
}

}  // namespace

TEST_CASE("canonical modulus choices") {
  // GF(9): oracle exhausts all monic quadratics over F_3
  auto oracle9 = least_irreducible_quadratic(3);
  FieldPtr f9 = Field::parse("GF(9)");
  CHECK(f9->modulus() == oracle9);
  CHECK(f9->modulus() == std::vector<int64_t>{1, 0, 1});  // u^2 + 1

  // GF(4): the unique irreducible quadratic over F_2
  FieldPtr f4 = Field::parse("GF(4)");
  CHECK(f4->modulus() == std::vector<int64_t>{1, 1, 1});  // u^2 + u + 1
  CHECK(f4->modulus() == least_irreducible_quadratic(2));
}

TEST_CASE("field construction errors") {
  CHECK_THROWS_AS(Field::prime_field(6), error);
  CHECK_THROWS_AS(Field::finite_field(2, 2, {1, 0, 1}), error);  // u^2+1=(u+1)^2 over F_2
  CHECK_THROWS_AS(Field::quadratic_extension(Field::rationals(), Field::rationals()->from_int(4)),
                  error);  // 4 is a square
  CHECK_NOTHROW(Field::parse("Q(i)"));
  CHECK_THROWS_AS(Field::parse("GF(12)"), error);
  CHECK_THROWS_AS(Field::parse("GF(3)(t,t)"), error);  // duplicate variable

  // nesting: rational functions over Q(i), and towers of variable lists
  FieldPtr qit = Field::parse("Q(i)(t)");
  CHECK(qit->kind() == FieldKind::RatFunc);
  Value z = parse_element(qit, "(t+i)*(t-i)");
  CHECK(z == parse_element(qit, "t^2+1"));
  FieldPtr tower = Field::parse("GF(3)(t1)(t2)");
  CHECK(tower->base()->kind() == FieldKind::RatFunc);
}

TEST_CASE("enumeration order and streams") {
  FieldPtr f3 = Field::parse("GF(3)");
  ElementStream s3(f3);
  std::vector<std::string> got;
  while (!s3.done()) got.push_back(s3.next().to_string());
  CHECK(got == std::vector<std::string>{"0", "1", "2"});

  FieldPtr f4 = Field::parse("GF(4)");
  ElementStream s4(f4);
  got.clear();
  while (!s4.done()) got.push_back(s4.next().to_string());
  CHECK(got == std::vector<std::string>{"0", "1", "u", "u+1"});

  CHECK_THROWS_AS(ElementStream(Field::rationals()), error);
}

TEST_CASE("squares in small fields") {
  FieldPtr f7 = Field::parse("GF(7)");
  // oracle: exhaust residues
  std::set<int64_t> squares;
  for (int64_t x = 0; x < 7; ++x) squares.insert(x * x % 7);
  CHECK(squares == std::set<int64_t>{0, 1, 2, 4});

  auto r2 = is_square(f7->from_int(2));
  CHECK(r2.is_square);
  CHECK((*r2.root) * (*r2.root) == f7->from_int(2));
  CHECK_FALSE(is_square(f7->from_int(3)).is_square);

  auto r0 = is_square(f7->zero());
  CHECK(r0.is_square);
  CHECK(r0.root->is_zero());

  // t is not a square in F_5(t): odd degree
  FieldPtr f5t = Field::parse("GF(5)(t)");
  CHECK_FALSE(is_square(parse_element(f5t, "t")).is_square);
  auto rt2 = is_square(parse_element(f5t, "t^2+2*t+1"));
  CHECK(rt2.is_square);

  // every element of GF(8) is a square (Frobenius)
  FieldPtr f8 = Field::parse("GF(8)");
  ElementStream s8(f8);
  while (!s8.done()) {
    Value x = s8.next();
    auto r = is_square(x);
    CHECK(r.is_square);
    CHECK((*r.root) * (*r.root) == x);
  }

  // multivariate rational functions
  FieldPtr f7tt = Field::parse("GF(7)(t1,t2)");
  Value g = parse_element(f7tt, "t1 + t2^2");
  auto rg = is_square(g * g);
  REQUIRE(rg.is_square);
  CHECK((*rg.root) * (*rg.root) == g * g);
  CHECK_FALSE(is_square(g * g * parse_element(f7tt, "t1")).is_square);
  auto rq = is_square((g * g) / parse_element(f7tt, "t2^2"));
  CHECK(rq.is_square);
}

TEST_CASE("rationals and Q(i)") {
  FieldPtr q = Field::rationals();
  Value half = q->from_int(1) / q->from_int(2);
  CHECK(half.to_string() == "1/2");
  CHECK((half + half) == q->one());
  auto r = is_square(q->from_int(9) / q->from_int(4));
  CHECK(r.is_square);
  CHECK(r.root->to_string() == "3/2");
  CHECK_FALSE(is_square(q->from_int(-1)).is_square);

  FieldPtr qi = Field::parse("Q(i)");
  Value i = parse_element(qi, "i");
  CHECK(i * i == qi->from_int(-1));
  CHECK((qi->one() + i) * (qi->one() - i) == qi->from_int(2));
  auto ri = is_square(qi->from_int(-1));
  CHECK(ri.is_square);  // -1 = i^2 in Q(i)
  CHECK((*ri.root) * (*ri.root) == qi->from_int(-1));
}

TEST_CASE("discriminants") {
  // x^5 + a x + 1 over Q(a): 256 a^5 + 3125
  FieldPtr qa = Field::parse("Q(a)");
  FieldPtr qax = Field::rational_functions(qa, {"x"});
  Value f = parse_element(qax, "x^5 + a*x + 1");
  Value disc = poly_discriminant(f.ratfunc_rep().num, 0);
  CHECK(disc == parse_element(qa, "256*a^5 + 3125"));

  // x^2 + b x + c -> b^2 - 4c
  FieldPtr qbc = Field::parse("Q(b,c)");
  FieldPtr qbcx = Field::rational_functions(qbc, {"x"});
  Value g = parse_element(qbcx, "x^2 + b*x + c");
  CHECK(poly_discriminant(g.ratfunc_rep().num, 0) == parse_element(qbc, "b^2 - 4*c"));

  // x^3 - 1 over Q -> -27
  FieldPtr qx = Field::parse("Q(x)");
  Value h = parse_element(qx, "x^3 - 1");
  CHECK(poly_discriminant(h.ratfunc_rep().num, 0) == qx->base()->from_int(-27));

  // derivative vanishing in characteristic p
  FieldPtr f3x = Field::parse("GF(3)(x)");
  Value s = parse_element(f3x, "x^3 - 1");
  CHECK_THROWS_AS(poly_discriminant(s.ratfunc_rep().num, 0), error);
}

namespace {

// test-only determinant by cofactor expansion, independent of the library's
// elimination code
Value cofactor_det(const std::vector<std::vector<Value>>& m, const FieldPtr& f) {
  size_t n = m.size();
  if (n == 0) return f->one();
  if (n == 1) return m[0][0];
  Value acc = f->zero();
  for (size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<Value>> sub;
    for (size_t r = 1; r < n; ++r) {
      std::vector<Value> row;
      for (size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      sub.push_back(std::move(row));
    }
    Value term = m[0][j] * cofactor_det(sub, f);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

// Sylvester-matrix resultant of univariate polynomials given by coefficient
// lists (constant term first)
Value sylvester_resultant(const std::vector<Value>& f, const std::vector<Value>& g,
                          const FieldPtr& F) {
  int m = static_cast<int>(f.size()) - 1, n = static_cast<int>(g.size()) - 1;
  std::vector<std::vector<Value>> s(m + n, std::vector<Value>(m + n, F->zero()));
  for (int r = 0; r < n; ++r)
    for (int j = 0; j <= m; ++j) s[r][r + j] = f[m - j];
  for (int r = 0; r < m; ++r)
    for (int j = 0; j <= n; ++j) s[n + r][r + j] = g[n - j];
  return cofactor_det(s, F);
}

}  // namespace

TEST_CASE("resultants against the Sylvester oracle") {
  Rng rng;
  for (const char* name : {"Q", "GF(7)"}) {
    FieldPtr F = Field::parse(name);
    for (int trial = 0; trial < 25; ++trial) {
      int dm = static_cast<int>(rng.uniform(1, 3)), dn = static_cast<int>(rng.uniform(1, 3));
      std::vector<Value> fc, gc;
      MPoly fp(F, 1), gp(F, 1);
      for (int j = 0; j <= dm; ++j) {
        Value c = j == dm ? F->one() : F->from_int(rng.uniform(-3, 3));
        fc.push_back(c);
        fp.add_term(Exps{j}, c);
      }
      for (int j = 0; j <= dn; ++j) {
        Value c = j == dn ? F->one() : F->from_int(rng.uniform(-3, 3));
        gc.push_back(c);
        gp.add_term(Exps{j}, c);
      }
      CHECK(mp_resultant(fp, gp, 0) == sylvester_resultant(fc, gc, F));
    }
  }
}

TEST_CASE("squarefree checks") {
  FieldPtr qa = Field::parse("Q(a)");
  Value d = parse_element(qa, "256*a^5 + 3125");
  CHECK(squarefree_check(d.ratfunc_rep().num, 0));
  Value sq = parse_element(qa, "(a-1)*(a-1)");
  CHECK_FALSE(squarefree_check(sq.ratfunc_rep().num, 0));
}

TEST_CASE("discriminant zero iff not squarefree (random corpus)") {
  Rng rng;
  FieldPtr qx = Field::parse("Q(x)");
  FieldPtr f7x = Field::parse("GF(7)(x)");
  for (const FieldPtr& F : {qx, f7x}) {
    for (int trial = 0; trial < 40; ++trial) {
      // random monic polynomial of degree 2..5 with small coefficients,
      // sometimes squared up
      MPoly p(F->base(), 1);
      int deg = static_cast<int>(rng.uniform(1, 2));
      p.add_term(Exps{deg}, F->base()->one());
      for (int j = 0; j < deg; ++j)
        p.add_term(Exps{j}, F->base()->from_int(rng.uniform(-4, 4)));
      MPoly q(F->base(), 1);
      int deg2 = static_cast<int>(rng.uniform(1, 2));
      q.add_term(Exps{deg2}, F->base()->one());
      for (int j = 0; j < deg2; ++j)
        q.add_term(Exps{j}, F->base()->from_int(rng.uniform(-4, 4)));
      bool square_it = rng.uniform(0, 1) == 1;
      MPoly f = square_it ? p * p * q : p * q;
      MPoly df = f.derivative(0);
      if (df.is_zero()) continue;  // inseparable cases excluded from this criterion
      Value disc = poly_discriminant(f, 0);
      CHECK(disc.is_zero() == !squarefree_check(f, 0));
    }
  }
}

TEST_CASE("field axioms on random samples") {
  // one representative per field kind, 10^4 triples each
  check_field_axioms(Field::parse("GF(7)"), 10000);
  check_field_axioms(Field::parse("GF(9)"), 10000);
  check_field_axioms(Field::rationals(), 10000);
  check_field_axioms(Field::parse("GF(5)(t)"), 10000);
  check_field_axioms(Field::parse("Q(i)"), 10000);
  // a second rational-function shape, lighter sample
  check_field_axioms(Field::parse("GF(3)(t1,t2)"), 500);
}

TEST_CASE("finite field structure") {
  for (const char* name : {"GF(9)", "GF(8)", "GF(25)"}) {
    FieldPtr f = Field::parse(name);
    BigInt q = f->order();
    ElementStream s(f);
    int64_t count = 0;
    while (!s.done()) {
      Value x = s.next();
      CHECK(x.pow(q) == x);  // x^q = x
      if (!x.is_zero()) CHECK(x.pow(q - 1) == f->one());
      ++count;
    }
    CHECK(BigInt(count) == q);
  }
}

TEST_CASE("rational function normalization") {
  FieldPtr f = Field::parse("GF(5)(t1,t2)");
  Value a = parse_element(f, "(t1^2 - t2^2)/(t1 - t2)");
  CHECK(a == parse_element(f, "t1 + t2"));
  // stored fraction is reduced
  Rng rng;
  for (int i = 0; i < 50; ++i) {
    Value x = random_element(rng, f);
    if (x.is_zero()) continue;
    const auto& rep = x.ratfunc_rep();
    CHECK(mp_gcd(rep.num, rep.den).is_constant());
    CHECK(rep.den.lead_coeff().is_one());
  }
  // canonical string of the spec's shape
  Value e = parse_element(f, "(t1^2+1)/t2");
  CHECK(e.to_string() == "(t1^2+1)/(t2)");

  // normalization is idempotent: rebuilding from the stored parts is a no-op
  Rng rng2;
  for (int i = 0; i < 30; ++i) {
    Value x = random_element(rng2, f);
    const auto& rep = x.ratfunc_rep();
    CHECK(make_ratfunc_value(f, rep.num, rep.den) == x);
  }
}

TEST_CASE("gcd consistency on random products") {
  Rng rng;
  for (const char* name : {"GF(5)(t1,t2)", "Q(x,y)"}) {
    FieldPtr F = Field::parse(name);
    const FieldPtr& k = F->base();
    auto rand_poly = [&](int terms) {
      MPoly p(k, 2);
      for (int t = 0; t < terms; ++t) {
        Exps e{static_cast<int32_t>(rng.uniform(0, 2)), static_cast<int32_t>(rng.uniform(0, 2))};
        p.add_term(e, k->from_int(rng.uniform(-3, 3)));
      }
      return p;
    };
    for (int trial = 0; trial < 25; ++trial) {
      MPoly a = rand_poly(3), b = rand_poly(3), c = rand_poly(2);
      if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
      MPoly g = mp_gcd(a * c, b * c);
      // gcd divides both and contains the common factor
      CHECK(mp_divexact(a * c, g).has_value());
      CHECK(mp_divexact(b * c, g).has_value());
      CHECK(mp_divexact(g, mp_gcd(a, b) * c.monic()).has_value());
      // cofactors are coprime
      MPoly qa = *mp_divexact(a * c, g), qb = *mp_divexact(b * c, g);
      CHECK(mp_gcd(qa, qb).is_constant());
      // fraction arithmetic sees through common factors
      Value lhs = make_ratfunc_value(F, a * c, b * c);
      Value rhs = make_ratfunc_value(F, a, b);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("general quadratic extensions") {
  FieldPtr q = Field::rationals();
  FieldPtr qr5 = Field::quadratic_extension(q, q->from_int(5));
  Value w = make_quad_value(qr5, q->zero(), q->one());  // sqrt(5)
  CHECK(w * w == qr5->from_int(5));
  Value x = qr5->from_int(9) + qr5->from_int(4) * w;  // (2 + sqrt 5)^2
  auto r = is_square(x);
  REQUIRE(r.is_square);
  CHECK((*r.root) * (*r.root) == x);
  CHECK_FALSE(is_square(w).is_square);
  CHECK((qr5->from_int(2) + w).inverse() * (qr5->from_int(2) + w) == qr5->one());
}

TEST_CASE("finite-field embeddings are homomorphisms") {
  FieldPtr f9 = Field::parse("GF(9)");
  FieldPtr f81 = Field::finite_field(3, 4);
  Rng rng;
  for (int i = 0; i < 50; ++i) {
    Value a = f9->element_at(rng.uniform(0, 8));
    Value b = f9->element_at(rng.uniform(0, 8));
    Value ia = *coerce(a, f81), ib = *coerce(b, f81);
    CHECK(*coerce(a + b, f81) == ia + ib);
    CHECK(*coerce(a * b, f81) == ia * ib);
  }
  // the prime field is fixed pointwise
  for (int64_t c = 0; c < 3; ++c) CHECK(*coerce(f9->from_int(c), f81) == f81->from_int(c));
}

TEST_CASE("element parsing round trips") {
  Rng rng;
  for (const char* name : {"GF(49)", "Q", "GF(3)(t1,t2)", "Q(i)"}) {
    FieldPtr f = Field::parse(name);
    for (int i = 0; i < 30; ++i) {
      Value x = random_element(rng, f);
      CHECK(parse_element(f, x.to_string()) == x);
    }
  }
  CHECK_THROWS_AS(parse_element(Field::rationals(), "(1+"), error);
}

TEST_CASE("coercions") {
  FieldPtr f3 = Field::parse("GF(3)");
  FieldPtr f27 = Field::parse("GF(27)");
  auto two = coerce(f3->from_int(2), f27);
  REQUIRE(two.has_value());
  CHECK(*two == f27->from_int(2));

  FieldPtr f9 = Field::parse("GF(9)");
  FieldPtr f81 = Field::finite_field(3, 4);
  auto g = coerce(f9->element_at(3), f81);  // generator u of GF(9)
  REQUIRE(g.has_value());
  CHECK((*g) * (*g) == f81->from_int(-1));  // u^2 = -1 under the canonical modulus

  // no embedding GF(9) -> GF(27)
  CHECK_FALSE(coerce(f9->element_at(3), f27).has_value());

  FieldPtr f3t = Field::parse("GF(3)(t)");
  FieldPtr f27t = Field::parse("GF(27)(t)");
  Value x = parse_element(f3t, "(t+2)/(t^2+1)");
  auto xc = coerce(x, f27t);
  REQUIRE(xc.has_value());
  CHECK(*xc == parse_element(f27t, "(t+2)/(t^2+1)"));
}
