#pragma once

// Degree-ell generalized forms sum_i s^i X_i^ell in ell^r variables, their
// valuation-based nonrepresentation certificate, and the C-field style
// degree-count checks over finite fields.

#include <optional>
#include <string>
#include <vector>

#include "pfl/qforms.hpp"
#include "pfl/valuation.hpp"

namespace pfl {

struct GenForm {
  FieldPtr field;
  int ell = 2;                     // coprime to the characteristic
  std::vector<Value> generators;   // s_1..s_r, nonzero

  int rank() const { return static_cast<int>(generators.size()); }
  int64_t var_count() const;       // ell^r
};

GenForm make_gen_form(FieldPtr field, int ell, std::vector<Value> generators);

// Coefficients in row-major multi-index order (i_1 slowest):
// coefficient[idx] = prod_j s_j^{i_j} for idx = sum i_j * ell^{r-1-j}.
std::vector<Value> genform_coefficients(const GenForm& g);

Value genform_eval(const GenForm& g, const std::vector<Value>& x);

struct GenFormCertCheck {
  bool valid = false;
  std::vector<std::string> failures;
  std::vector<LexValue> coefficient_values;  // lex valuations of all coefficients
};

// For generators that are exactly the shifted coordinates t_j - b_j of the
// center: checks that the coefficient valuations are pairwise distinct
// mod ell (they then form a system of representatives of (Z/ell)^r), which
// witnesses that the form represents 0 over l(t1..tr) only trivially.
GenFormCertCheck genform_certificate(const GenForm& g, const Center& c);

// Falsifier: bounded search for a nontrivial polynomial zero (degree <= D),
// sharing the engine and budget semantics of isotropy_bounded_search.
BoundedSearchOutcome genform_bounded_search(const GenForm& g, int degree_bound,
                                            uint64_t budget = kDefaultSearchBudget);

struct HomogeneousForm {
  MPoly form;
  int degree = 0;  // every term has this total degree
};

HomogeneousForm make_homogeneous_form(MPoly form);

struct CiCheckResult {
  bool hypothesis_holds = false;
  int64_t vars = 0;
  int64_t degree_power_sum = 0;
  bool searched = false;
  std::optional<std::vector<Value>> common_zero;
};

// Hypothesis of the i-th degree-count condition: n > sum_rho d_rho^i with
// every degree prime to p. When the coefficient field is finite and the
// hypothesis holds with i = 1, an exhaustive common-zero search is run (and
// must succeed, by Chevalley-Warning).
CiCheckResult ci_degree_check(const std::vector<HomogeneousForm>& forms, int i, int64_t p);

}  // namespace pfl
