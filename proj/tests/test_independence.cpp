#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pfl/independence.hpp"

using namespace pfl;

namespace {

Value poly_val(const FieldPtr& K, MPoly p) {
  return make_ratfunc_value(K, std::move(p),
                            MPoly::constant(K->base(), p.nvars(), K->base()->one()));
}

Value random_poly(std::mt19937& gen, const FieldPtr& K, int max_deg) {
  auto u = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); };
  int nv = static_cast<int>(K->vars().size());
  int64_t q = static_cast<int64_t>(K->base()->order());
  MPoly p(K->base(), nv);
  int terms = u(1, 4);
  for (int t = 0; t < terms; ++t) {
    Exps e(nv, 0);
    int budget = max_deg;
    for (int i = 0; i < nv; ++i) {
      e[i] = u(0, budget);
      budget -= e[i];
    }
    p.add_term(e, K->base()->element_at(u(0, static_cast<int>(q) - 1)));
  }
  return poly_val(K, std::move(p));
}

}  // namespace

TEST_CASE("vcd bookkeeping") {
  BaseFieldProfile fin = profile_finite(Field::parse("GF(5)"));
  CHECK(vcd_of_function_field(fin, 2) == 3);
  CHECK(vcd_of_function_field(fin, 0) == 1);

  BaseFieldProfile e0 = profile_surrogate_e0(Field::parse("GF(5)"));
  CHECK(vcd_of_function_field(e0, 0) == 0);

  BaseFieldProfile broken = fin;
  broken.well_behaved = false;
  CHECK_THROWS_AS(vcd_of_function_field(broken, 1), error);

  BaseFieldProfile q = profile_rationals();
  CHECK(vcd_of_function_field(q, 1) == 3);
}

TEST_CASE("empirical two-cohomology bound over small quadratic extensions") {
  CHECK(empirical_e(Field::parse("GF(9)"), 2) == 1);
  CHECK(empirical_e(Field::parse("GF(25)"), 2) == 1);
  CHECK_THROWS_AS(empirical_e(Field::parse("GF(3)"), 2), error);  // no sqrt(-1)
  CHECK_THROWS_AS(empirical_e(Field::parse("GF(4)"), 2), error);  // wrong characteristic
}

TEST_CASE("jacobian oracle") {
  FieldPtr Q2 = Field::rational_functions(Field::rationals(), {"t1", "t2"});
  Value t1 = parse_element(Q2, "t1"), t2 = parse_element(Q2, "t2");

  JacobianOutcome ind = jacobian_independent({t1 + t2, t1 * t2});
  CHECK(ind.verdict == JacobianOutcome::Verdict::Independent);
  REQUIRE(ind.minor_det.has_value());
  Value det = *ind.minor_det;
  CHECK((det == t1 - t2 || det == t2 - t1));

  JacobianOutcome dep = jacobian_independent({t1, t1 * t1});
  CHECK(dep.verdict == JacobianOutcome::Verdict::Dependent);  // characteristic 0

  FieldPtr F5t = Field::parse("GF(5)(t)");
  Value t = parse_element(F5t, "t");
  JacobianOutcome inc = jacobian_independent({t.pow(5)});
  CHECK(inc.verdict == JacobianOutcome::Verdict::Inconclusive);

  // more components than variables
  JacobianOutcome over = jacobian_independent({t1, t2, t1 + t2});
  CHECK(over.verdict == JacobianOutcome::Verdict::Dependent);
}

TEST_CASE("pfister certificates for coordinate tuples") {
  FieldPtr K = Field::parse("GF(3)(t1,t2)");
  Value t1 = parse_element(K, "t1"), t2 = parse_element(K, "t2");
  BaseFieldProfile prof = profile_finite(K->base());

  AnisotropyCertificate cert = build_pfister_certificate({t1, t2}, prof);
  CHECK(certificate_validate(cert).valid);
  // first admissible center is the origin over GF(3) itself
  CHECK(cert.center.residue_field()->equals(*K->base()));
  CHECK(cert.center.point()[0].is_zero());
  CHECK(cert.center.point()[1].is_zero());
  // seeded residue form (1, a) with -a a non-square: over GF(3) the first is a=1
  CHECK(cert.residue_form.coeffs == std::vector<Value>{K->base()->one(), K->base()->one()});

  DiagonalForm full = certified_form(cert);
  for (int D = 0; D <= 2; ++D)
    CHECK_FALSE(isotropy_bounded_search(full, D).witness.has_value());
}

TEST_CASE("pfister certificate matches the residue-rank search") {
  FieldPtr K = Field::parse("GF(5)(t1,t2)");
  Value t1 = parse_element(K, "t1"), t2 = parse_element(K, "t2");
  BaseFieldProfile prof = profile_finite(K->base());

  // Jacobian of (t1+t2, t1*t2) is singular exactly on the diagonal t1 = t2,
  // so the origin fails and the first off-diagonal point wins
  AnisotropyCertificate cert = build_pfister_certificate({t1 + t2, t1 * t2}, prof);
  CHECK(certificate_validate(cert).valid);
  CHECK(cert.center.point()[0].is_zero());
  CHECK(cert.center.point()[1] == K->base()->one());
  // c = (u1(b), u2(b)) = (1, 0): parameters u_j - c_j
  CHECK(cert.parameters[0] == t1 + t2 - K->one());
  CHECK(cert.parameters[1] == t1 * t2);

  CHECK_THROWS_AS(build_pfister_certificate({t1, t1 * t1}, prof), error);
}

TEST_CASE("independence dispatch away from characteristic 2") {
  FieldPtr K = Field::parse("GF(5)(t1,t2)");
  Value t1 = parse_element(K, "t1"), t2 = parse_element(K, "t2");
  BaseFieldProfile prof = profile_finite(K->base());

  IndependenceReport rep = independent({t1 + t2 * t2, t2}, prof);
  CHECK(rep.verdict == Verdict::Independent);
  REQUIRE(rep.methods.size() == 2);
  CHECK(rep.methods[0] == Method::Jacobian);
  CHECK(rep.methods[1] == Method::PfisterCertificate);
  CHECK(rep.certificate_check->valid);

  // dependent pair: two elements of a trdeg-1 subfield
  FieldPtr K1 = Field::parse("GF(3)(t)");
  Value t = parse_element(K1, "t");
  BaseFieldProfile prof3 = profile_finite(K1->base());
  IndependenceReport dep = independent({t, t + K1->one()}, prof3);
  CHECK(dep.verdict == Verdict::Dependent);

  // inconclusive: p-th power in characteristic p
  IndependenceReport inc = independent({t.pow(3)}, prof3);
  CHECK(inc.verdict == Verdict::Inconclusive);
}

TEST_CASE("independence dispatch in characteristic 2") {
  FieldPtr K = Field::parse("GF(4)(t)");
  Value t = parse_element(K, "t");
  BaseFieldProfile prof = profile_surrogate_e0(K->base());

  IndependenceReport rep = independent({t}, prof);
  CHECK(rep.verdict == Verdict::Independent);
  REQUIRE(rep.genform.has_value());
  CHECK(rep.genform->check.valid);
  CHECK(std::find(rep.methods.begin(), rep.methods.end(), Method::GenFormCertificate) !=
        rep.methods.end());

  FieldPtr K2 = Field::parse("GF(2)(t1,t2)");
  Value s1 = parse_element(K2, "t1"), s2 = parse_element(K2, "t2");
  IndependenceReport rep2 = independent({s1, s2 + K2->one()}, profile_surrogate_e0(K2->base()));
  CHECK(rep2.verdict == Verdict::Independent);
  CHECK(rep2.genform.has_value());

  // non-coordinate tuple with a conclusive Jacobian: verdict from the oracle
  IndependenceReport rep3 = independent({s1 * s2, s2}, profile_surrogate_e0(K2->base()));
  CHECK(rep3.verdict == Verdict::Independent);
  CHECK_FALSE(rep3.genform.has_value());

  // translated coordinates certify through the substitution step
  GenFormCertificateInfo translated =
      build_genform_certificate({s1 + K2->one(), s2}, 3);
  CHECK(translated.check.valid);
  REQUIRE(translated.center.has_value());
  CHECK(translated.center->point()[0] == K2->base()->one());
  CHECK(translated.center->point()[1].is_zero());

  // p-th powers stay inconclusive
  IndependenceReport rep4 = independent({s1 * s1, s2}, profile_surrogate_e0(K2->base()));
  CHECK(rep4.verdict == Verdict::Inconclusive);
}

TEST_CASE("verdicts agree with the oracle on random tuples") {
  FieldPtr K = Field::parse("GF(5)(t1,t2)");
  BaseFieldProfile prof = profile_finite(K->base());
  std::mt19937 gen(2024);
  int conclusive = 0;
  for (int i = 0; i < 40; ++i) {
    std::vector<Value> u{random_poly(gen, K, 3), random_poly(gen, K, 3)};
    JacobianOutcome jac = jacobian_independent(u);
    IndependenceReport rep = independent(u, prof);
    if (jac.verdict == JacobianOutcome::Verdict::Independent) {
      ++conclusive;
      CHECK(rep.verdict == Verdict::Independent);
      REQUIRE(rep.certificate.has_value());
      CHECK(rep.certificate_check->valid);
    } else if (jac.verdict == JacobianOutcome::Verdict::Dependent) {
      ++conclusive;
      CHECK(rep.verdict == Verdict::Dependent);
    }
  }
  CHECK(conclusive >= 25);
}

TEST_CASE("characteristic-zero dispatch is Jacobian-only") {
  FieldPtr K = Field::rational_functions(Field::rationals(), {"t1", "t2"});
  Value t1 = parse_element(K, "t1"), t2 = parse_element(K, "t2");
  BaseFieldProfile prof = profile_rationals();

  IndependenceReport rep = independent({t1 + t2, t1 * t2}, prof);
  CHECK(rep.verdict == Verdict::Independent);
  CHECK(rep.methods == std::vector<Method>{Method::Jacobian});
  CHECK_FALSE(rep.certificate.has_value());  // the e = 2 seed ships disabled

  IndependenceReport dep = independent({t1, t1 * t1 + K->one()}, prof);
  CHECK(dep.verdict == Verdict::Dependent);
}

TEST_CASE("dependence closure and permutation invariance") {
  FieldPtr K = Field::parse("GF(5)(t1,t2)");
  Value t1 = parse_element(K, "t1"), t2 = parse_element(K, "t2");
  BaseFieldProfile prof = profile_finite(K->base());

  // appending a rational function of the components forces dependence
  Value combo = (t1 * t1 * t2 + t1) / (t2 + K->one());
  IndependenceReport rep = independent({t1, t2, combo}, prof);
  CHECK(rep.verdict == Verdict::Dependent);

  IndependenceReport a = independent({t1 + t2, t1 * t2}, prof);
  IndependenceReport b = independent({t1 * t2, t1 + t2}, prof);
  CHECK(a.verdict == b.verdict);
}
