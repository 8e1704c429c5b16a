#include "pfl/genforms.hpp"

#include <algorithm>
#include <cmath>

#include "pfl/smallfield.hpp"

namespace pfl {

int64_t GenForm::var_count() const {
  int64_t n = 1;
  for (int j = 0; j < rank(); ++j) n *= ell;
  return n;
}

GenForm make_gen_form(FieldPtr field, int ell, std::vector<Value> generators) {
  if (ell < 2) fail(errc::bad_input, "generalized form degree must be >= 2");
  BigInt p = field->characteristic();
  if (p != 0 && BigInt(ell) % p == 0)
    fail(errc::char_divides, "degree " + std::to_string(ell) + " is divisible by the characteristic");
  for (auto& s : generators) {
    if (!s.field()->equals(*field)) {
      auto c = coerce(s, field);
      if (!c) fail(errc::bad_input, "generator outside the base field");
      s = *c;
    }
    if (s.is_zero()) fail(errc::zero_slot, "generators must be nonzero");
  }
  return GenForm{std::move(field), ell, std::move(generators)};
}

std::vector<Value> genform_coefficients(const GenForm& g) {
  int r = g.rank();
  int64_t count = g.var_count();
  std::vector<Value> coeffs;
  coeffs.reserve(count);
  for (int64_t idx = 0; idx < count; ++idx) {
    int64_t t = idx;
    std::vector<int> mi(r, 0);
    for (int j = r - 1; j >= 0; --j) {  // row-major: i_1 slowest
      mi[j] = static_cast<int>(t % g.ell);
      t /= g.ell;
    }
    Value c = g.field->one();
    for (int j = 0; j < r; ++j)
      for (int e = 0; e < mi[j]; ++e) c = c * g.generators[j];
    coeffs.push_back(c);
  }
  return coeffs;
}

Value genform_eval(const GenForm& g, const std::vector<Value>& x) {
  std::vector<Value> coeffs = genform_coefficients(g);
  if (x.size() != coeffs.size())
    fail(errc::dimension_mismatch, "vector length " + std::to_string(x.size()) + " vs " +
                                       std::to_string(coeffs.size()) + " variables");
  Value acc = g.field->zero();
  for (size_t i = 0; i < x.size(); ++i) acc = acc + coeffs[i] * x[i].pow(g.ell);
  return acc;
}

GenFormCertCheck genform_certificate(const GenForm& g, const Center& c) {
  GenFormCertCheck check;
  BigInt p = g.field->characteristic();
  if (p != 0 && BigInt(g.ell) % p == 0) fail(errc::char_divides, "degree divisible by characteristic");
  const FieldPtr& L = c.extended_ambient();
  int r = c.rank();
  if (g.rank() != r) {
    check.failures.push_back("bad_generators: generator count differs from the center rank");
    return check;
  }
  // generators must be exactly the shifted coordinates t_j - b_j
  for (int j = 0; j < r; ++j) {
    auto gj = coerce(g.generators[j], L);
    Value tj = parse_element(L, L->vars()[j]);
    auto bj = coerce(c.point()[j], L);
    if (!gj || !bj || !(*gj == tj - *bj)) {
      check.failures.push_back("bad_generators: generator " + std::to_string(j) +
                               " is not the shifted coordinate");
      return check;
    }
  }
  // coefficient valuations, computed mechanically through the valuation
  GenForm gl = make_gen_form(L, g.ell, [&] {
    std::vector<Value> gens;
    for (const auto& s : g.generators) gens.push_back(*coerce(s, L));
    return gens;
  }());
  for (const auto& coeff : genform_coefficients(gl))
    check.coefficient_values.push_back(lex_val(coeff, c));
  if (!vals_distinct_mod(check.coefficient_values, g.ell))
    check.failures.push_back("coefficient valuations collide mod ell");
  check.valid = check.failures.empty();
  return check;
}

BoundedSearchOutcome genform_bounded_search(const GenForm& g, int degree_bound, uint64_t budget) {
  return bounded_zero_search(g.field, genform_coefficients(g), g.ell, degree_bound, budget);
}

HomogeneousForm make_homogeneous_form(MPoly form) {
  if (form.is_zero()) fail(errc::bad_input, "homogeneous form must be nonzero");
  int d = form.total_degree();
  for (const auto& [e, cf] : form.terms()) {
    int t = 0;
    for (auto x : e) t += x;
    if (t != d) fail(errc::bad_input, "form is not homogeneous");
  }
  return HomogeneousForm{std::move(form), d};
}

CiCheckResult ci_degree_check(const std::vector<HomogeneousForm>& forms, int i, int64_t p) {
  if (forms.empty()) fail(errc::bad_input, "no forms given");
  CiCheckResult out;
  const FieldPtr& k = forms[0].form.coeff_field();
  out.vars = forms[0].form.nvars();
  int64_t sum = 0;
  bool coprime = true;
  for (const auto& f : forms) {
    if (f.form.nvars() != out.vars) fail(errc::bad_input, "forms must share a variable space");
    int64_t dp = 1;
    for (int j = 0; j < i; ++j) dp *= f.degree;
    sum += dp;
    if (p != 0 && f.degree % p == 0) coprime = false;
  }
  out.degree_power_sum = sum;
  out.hypothesis_holds = coprime && out.vars > sum;

  if (out.hypothesis_holds && i == 1 && k->is_finite()) {
    // Chevalley-Warning regime: a nontrivial common zero must exist
    SmallField sf(k);
    int64_t q = sf.q();
    int n = static_cast<int>(out.vars);
    double space = std::pow(static_cast<double>(q), n);
    if (space > 5e7)
      fail(errc::bad_input, "common-zero scan over " + std::to_string(space) +
                                " vectors exceeds the desk-scale guard");
    std::vector<int> x(n, 0);
    std::vector<Value> point(n, k->zero());
    out.searched = true;
    // odometer over nonzero vectors
    while (true) {
      int t = n - 1;
      while (t >= 0 && x[t] == q - 1) {
        x[t] = 0;
        --t;
      }
      if (t < 0) break;
      ++x[t];
      for (int j = 0; j < n; ++j) point[j] = sf.to_value(x[j]);
      bool all_zero_val = true;
      for (const auto& f : forms)
        if (!f.form.eval(point).is_zero()) {
          all_zero_val = false;
          break;
        }
      if (all_zero_val) {
        out.common_zero = point;
        return out;
      }
    }
    fail(errc::internal_disagreement,
         "degree-count hypothesis holds but the exhaustive scan found no common zero");
  }
  return out;
}

}  // namespace pfl
