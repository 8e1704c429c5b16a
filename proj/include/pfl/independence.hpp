#pragma once

// Algebraic-independence testing for tuples of rational functions: Jacobian
// oracle, Pfister-form certificates away from characteristic 2, and
// generalized-form certificates in characteristic 2.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pfl/genforms.hpp"
#include "pfl/qforms.hpp"

namespace pfl {

struct BaseFieldProfile {
  FieldPtr k;
  int e = 0;               // behaves as vcd_2(k)
  bool well_behaved = false;
  bool seed_available = false;
  std::string name;
  // slots of an e-fold Pfister form anisotropic over the given extension l
  std::function<std::vector<Value>(const FieldPtr& l)> seed_slots;
};

// Finite base field of odd characteristic: e = 1, seed <<a>> with the first
// a (in enumeration order) making (1, a) anisotropic over l.
BaseFieldProfile profile_finite(FieldPtr k);
// e = 0 profile (stands in for separably/real closed constants): empty seed.
BaseFieldProfile profile_surrogate_e0(FieldPtr k);
// Rationals: e = 2 but the anisotropic 2-fold seed over Q(i) ships disabled;
// only the Jacobian route and the vcd bookkeeping are available.
BaseFieldProfile profile_rationals();

// e + d for well-behaved profiles; throws not_well_behaved otherwise.
int vcd_of_function_field(const BaseFieldProfile& profile, int trdeg);

// Largest n <= max_fold such that some n-fold Pfister form with slots drawn
// from square-class representatives is anisotropic over the field. Requires
// a finite field of odd characteristic containing sqrt(-1).
int empirical_e(const FieldPtr& field, int max_fold);

struct JacobianOutcome {
  enum class Verdict { Independent, Dependent, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  int rank = 0;
  std::vector<int> minor_cols;  // witness columns when independent
  std::optional<Value> minor_det;
  std::string note;
};

// Symbolic Jacobian criterion. Full rank proves independence in every
// characteristic; deficient rank proves dependence in characteristic 0 and is
// Inconclusive in characteristic p (it may reflect inseparability); more
// components than variables is Dependent outright.
JacobianOutcome jacobian_independent(const std::vector<Value>& u);

struct SearchLimits {
  int max_degree = 4;  // residue-field extensions of degree 1..max_degree are scanned
};

// Searches for a center where every component is regular and the residue
// Jacobian has full rank, then assembles the certificate with the profile
// seed as residue form and parameters u_j - u_j(b). The result always passes
// certificate_validate.
AnisotropyCertificate build_pfister_certificate(const std::vector<Value>& u,
                                                const BaseFieldProfile& profile,
                                                const SearchLimits& limits = {});

struct GenFormCertificateInfo {
  GenForm form;
  std::optional<Center> center;
  GenFormCertCheck check;
};

// Characteristic-2 route (any characteristic coprime to ell works): certifies
// coordinate tuples, possibly translated by constants; anything else reports
// partial_support.
GenFormCertificateInfo build_genform_certificate(const std::vector<Value>& u, int ell,
                                                 const SearchLimits& limits = {});

enum class Verdict { Independent, Dependent, Inconclusive };
enum class Method { Jacobian, PfisterCertificate, GenFormCertificate };

const char* verdict_name(Verdict v);
const char* method_name(Method m);

struct IndependenceReport {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<Method> methods;
  JacobianOutcome jacobian;
  std::optional<AnisotropyCertificate> certificate;
  std::optional<CertificateCheck> certificate_check;
  std::optional<GenFormCertificateInfo> genform;
  std::string note;
};

struct IndependentOptions {
  int char2_ell = 3;
  SearchLimits limits;
};

// Dispatch: away from characteristic 2 the Jacobian oracle is cross-checked
// with a Pfister certificate; in characteristic 2 with a generalized-form
// certificate. Conclusive methods must agree, else internal_disagreement.
IndependenceReport independent(const std::vector<Value>& u, const BaseFieldProfile& profile,
                               const IndependentOptions& opts = {});

}  // namespace pfl
