#include "pfl/independence.hpp"

#include <algorithm>

#include "pfl/smallfield.hpp"

namespace pfl {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Independent: return "Independent";
    case Verdict::Dependent: return "Dependent";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Jacobian: return "Jacobian";
    case Method::PfisterCertificate: return "PfisterCertificate";
    case Method::GenFormCertificate: return "GenFormCertificate";
  }
  return "?";
}

BaseFieldProfile profile_finite(FieldPtr k) {
  if (!k->is_finite()) fail(errc::bad_input, "profile_finite needs a finite field");
  if (k->prime() == 2) fail(errc::bad_input, "profile_finite needs odd characteristic");
  BaseFieldProfile p;
  p.k = std::move(k);
  p.e = 1;
  p.well_behaved = true;
  p.seed_available = true;
  p.name = "finite";
  p.seed_slots = [](const FieldPtr& l) {
    // first a with (1, a) anisotropic: -a must be a non-square
    int64_t q = static_cast<int64_t>(l->order());
    for (int64_t i = 1; i < q; ++i) {
      Value a = l->element_at(i);
      if (!is_square(-a).is_square) return std::vector<Value>{a};
    }
    fail(errc::internal_disagreement, "no anisotropic binary form over " + l->to_string());
  };
  return p;
}

BaseFieldProfile profile_surrogate_e0(FieldPtr k) {
  BaseFieldProfile p;
  p.k = std::move(k);
  p.e = 0;
  p.well_behaved = true;
  p.seed_available = true;
  p.name = "surrogate_e0";
  p.seed_slots = [](const FieldPtr&) { return std::vector<Value>{}; };
  return p;
}

BaseFieldProfile profile_rationals() {
  BaseFieldProfile p;
  p.k = Field::rationals();
  p.e = 2;
  p.well_behaved = true;
  p.seed_available = false;  // deriving the 2-fold seed over Q(i) is out of scope
  p.name = "rationals";
  return p;
}

int vcd_of_function_field(const BaseFieldProfile& profile, int trdeg) {
  if (!profile.well_behaved) fail(errc::not_well_behaved, "profile " + profile.name);
  if (trdeg < 0) fail(errc::bad_input, "negative transcendence degree");
  return profile.e + trdeg;
}

int empirical_e(const FieldPtr& field, int max_fold) {
  if (!field->is_finite() || field->prime() == 2)
    fail(errc::bad_input, "empirical_e needs a finite field of odd characteristic");
  if (!is_square(field->from_int(-1)).is_square)
    fail(errc::bad_input, "empirical_e needs sqrt(-1) in the field");
  // square-class representatives: 1 and the first non-square
  Value ns;
  {
    int64_t q = static_cast<int64_t>(field->order());
    for (int64_t i = 1; i < q; ++i) {
      Value a = field->element_at(i);
      if (!is_square(a).is_square) {
        ns = a;
        break;
      }
    }
  }
  int best = 0;
  for (int n = 1; n <= max_fold; ++n) {
    bool any_aniso = false;
    for (uint32_t mask = 0; mask < (1u << n) && !any_aniso; ++mask) {
      std::vector<Value> slots;
      for (int i = 0; i < n; ++i) slots.push_back((mask >> i) & 1 ? ns : field->one());
      DiagonalForm f = pfister_expand(PfisterSpec{field, slots});
      if (!isotropy_finite(f).isotropic) any_aniso = true;
    }
    if (any_aniso) best = n;
  }
  return best;
}

// --- Jacobian oracle ---------------------------------------------------------------

JacobianOutcome jacobian_independent(const std::vector<Value>& u) {
  if (u.empty()) fail(errc::bad_input, "empty tuple");
  const FieldPtr& K = u[0].field();
  if (K->kind() != FieldKind::RatFunc)
    fail(errc::bad_input, "components must be rational functions");
  for (const auto& f : u)
    if (!f.field()->equals(*K)) fail(errc::bad_input, "components of different fields");
  int s = static_cast<int>(u.size());
  int r = static_cast<int>(K->vars().size());
  JacobianOutcome out;
  if (s > r) {
    out.verdict = JacobianOutcome::Verdict::Dependent;
    out.note = "more components than the ambient transcendence degree";
    return out;
  }
  std::vector<std::vector<Value>> J(s, std::vector<Value>(r, K->zero()));
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < r; ++i) J[j][i] = ratfunc_derivative(u[j], i);
  out.rank = matrix_rank(J);
  if (out.rank == s) {
    out.verdict = JacobianOutcome::Verdict::Independent;
    // witness minor: first column subset with a nonzero determinant
    std::vector<int> cols;
    for (int i = 0; i < r && static_cast<int>(cols.size()) < s; ++i) {
      cols.push_back(i);
      std::vector<std::vector<Value>> sub(s);
      for (int j = 0; j < s; ++j)
        for (int cc : cols) sub[j].push_back(J[j][cc]);
      if (matrix_rank(sub) < static_cast<int>(cols.size())) cols.pop_back();
    }
    std::vector<std::vector<Value>> sub(s);
    for (int j = 0; j < s; ++j)
      for (int cc : cols) sub[j].push_back(J[j][cc]);
    out.minor_cols = cols;
    out.minor_det = matrix_det(sub, K);
    return out;
  }
  if (K->characteristic() == 0) {
    out.verdict = JacobianOutcome::Verdict::Dependent;
    out.note = "symbolic Jacobian rank " + std::to_string(out.rank) + " < " + std::to_string(s);
    return out;
  }
  out.verdict = JacobianOutcome::Verdict::Inconclusive;
  out.note = "rank-deficient Jacobian in characteristic p: dependence or inseparability";
  return out;
}

// --- certificate construction -------------------------------------------------------

namespace {

MPoly coerce_poly(const MPoly& f, const FieldPtr& target_coeff) {
  MPoly out(target_coeff, f.nvars());
  for (const auto& [e, c] : f.terms()) {
    auto cc = coerce(c, target_coeff);
    if (!cc) fail(errc::bad_input, "coefficient does not embed");
    out.add_term(e, *cc);
  }
  return out;
}

struct RatParts {
  MPoly num, den;  // over l
};

RatParts parts_over(const Value& f, const FieldPtr& l) {
  const auto& rep = f.ratfunc_rep();
  return {coerce_poly(rep.num, l), coerce_poly(rep.den, l)};
}

}  // namespace

AnisotropyCertificate build_pfister_certificate(const std::vector<Value>& u,
                                                const BaseFieldProfile& profile,
                                                const SearchLimits& limits) {
  if (u.empty()) fail(errc::bad_input, "empty tuple");
  const FieldPtr& K = u[0].field();
  if (K->kind() != FieldKind::RatFunc || !K->base()->equals(*profile.k))
    fail(errc::bad_input, "tuple does not live over the profile base field");
  if (!profile.k->is_finite())
    fail(errc::unsupported_field, "certificate search needs a finite constant field");
  if (!profile.seed_available) fail(errc::not_well_behaved, "profile has no seed form");
  if (profile.k->characteristic() == 2 && profile.e > 0)
    fail(errc::char_divides, "Pfister certificates need characteristic != 2");

  JacobianOutcome jac = jacobian_independent(u);
  if (jac.verdict != JacobianOutcome::Verdict::Independent)
    fail(errc::not_independent, "tuple does not pass the Jacobian oracle: " + jac.note);

  int s = static_cast<int>(u.size());
  int r = static_cast<int>(K->vars().size());
  const FieldPtr& k = K->base();

  // symbolic derivative matrix, reused at every candidate center
  std::vector<std::vector<Value>> J(s, std::vector<Value>(r, K->zero()));
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < r; ++i) J[j][i] = ratfunc_derivative(u[j], i);

  for (int d = 1; d <= limits.max_degree; ++d) {
    FieldPtr l =
        d == 1 ? k : Field::finite_field(k->prime(), k->ext_degree() * d);
    // component and derivative numerators/denominators over l, shifted lazily
    std::vector<RatParts> comp, deriv;
    for (int j = 0; j < s; ++j) comp.push_back(parts_over(u[j], l));
    for (int j = 0; j < s; ++j)
      for (int i = 0; i < r; ++i) deriv.push_back(parts_over(J[j][i], l));

    int64_t ql = static_cast<int64_t>(l->order());
    BigInt total = 1;
    for (int i = 0; i < r; ++i) total *= ql;
    for (BigInt bi = 0; bi < total; ++bi) {
      BigInt t = bi;
      std::vector<Value> b(r);
      for (int i = r - 1; i >= 0; --i) {  // last coordinate fastest
        b[i] = l->element_at(static_cast<int64_t>(t % ql));
        t /= ql;
      }
      // every component regular at b
      bool ok = true;
      std::vector<Value> c(s);
      for (int j = 0; j < s && ok; ++j) {
        Value den_b = comp[j].den.eval(b);
        if (den_b.is_zero()) {
          ok = false;
          break;
        }
        c[j] = comp[j].num.eval(b) / den_b;
      }
      if (!ok) continue;
      // residue Jacobian rank s
      std::vector<std::vector<Value>> Jb(s, std::vector<Value>(r, l->zero()));
      for (int j = 0; j < s && ok; ++j)
        for (int i = 0; i < r; ++i) {
          const RatParts& pr = deriv[j * r + i];
          Value den_b = pr.den.eval(b);
          if (den_b.is_zero()) {
            ok = false;
            break;
          }
          Jb[j][i] = pr.num.eval(b) / den_b;
        }
      if (!ok || matrix_rank(Jb) != s) continue;

      // assemble: center at b over l, seed residue form, parameters u_j - c_j
      Center center(K, l, b);
      std::vector<Value> slots = profile.seed_slots(l);
      DiagonalForm q0 = pfister_expand(PfisterSpec{l, slots});
      const FieldPtr& L = center.extended_ambient();
      std::vector<Value> params;
      for (int j = 0; j < s; ++j) {
        Value uj = *coerce(u[j], L);
        Value cj = *coerce(c[j], L);
        params.push_back(uj - cj);
      }
      AnisotropyCertificate cert{center, q0, params, Jb};
      CertificateCheck check = certificate_validate(cert);
      if (!check.valid) {
        std::string msg = "constructed certificate failed validation:";
        for (const auto& f : check.failures) msg += " " + f;
        fail(errc::internal_disagreement, msg);
      }
      return cert;
    }
  }
  fail(errc::no_etale_point_found,
       "no admissible center up to extension degree " + std::to_string(limits.max_degree));
}

GenFormCertificateInfo build_genform_certificate(const std::vector<Value>& u, int ell,
                                                 const SearchLimits&) {
  if (u.empty()) fail(errc::bad_input, "empty tuple");
  const FieldPtr& K = u[0].field();
  if (K->kind() != FieldKind::RatFunc) fail(errc::bad_input, "components must be rational functions");
  const FieldPtr& k = K->base();
  if (!k->is_finite()) fail(errc::unsupported_field, "needs a finite constant field");
  BigInt p = K->characteristic();
  if (p != 0 && BigInt(ell) % p == 0) fail(errc::char_divides, "ell divisible by the characteristic");

  int r = static_cast<int>(K->vars().size());
  int s = static_cast<int>(u.size());

  // substitution step: accept u_j = t_j + const only (identity coordinate
  // order); anything else is outside the certified shape
  if (s != r) fail(errc::partial_support, "tuple is not a full coordinate tuple");
  std::vector<Value> b(r, k->zero());
  for (int j = 0; j < r; ++j) {
    Value tj = parse_element(K, K->vars()[j]);
    Value diff = u[j] - tj;  // must be a constant of k
    const auto& rep = diff.ratfunc_rep();
    if (!rep.num.is_constant() || !rep.den.is_constant())
      fail(errc::partial_support, "component " + std::to_string(j) +
                                      " is not a translated coordinate; only the coordinate case is certified");
    b[j] = -(rep.num.constant_value() / rep.den.constant_value());
  }
  // generators t_j - b_j equal u_j - u_j(b); center at b over k
  Center center(K, k, b);
  std::vector<Value> gens;
  for (int j = 0; j < r; ++j) gens.push_back(u[j] - *coerce(u[j].ratfunc_rep().num.eval(b) /
                                                                u[j].ratfunc_rep().den.eval(b),
                                                            K));
  GenForm g = make_gen_form(K, ell, gens);
  GenFormCertCheck check = genform_certificate(g, center);
  GenFormCertificateInfo info{g, center, check};
  if (!check.valid) {
    std::string msg = "generalized-form certificate failed:";
    for (const auto& f : check.failures) msg += " " + f;
    fail(errc::internal_disagreement, msg);
  }
  return info;
}

// --- dispatch ------------------------------------------------------------------------

IndependenceReport independent(const std::vector<Value>& u, const BaseFieldProfile& profile,
                               const IndependentOptions& opts) {
  IndependenceReport rep;
  rep.jacobian = jacobian_independent(u);
  const FieldPtr& K = u[0].field();
  BigInt p = K->characteristic();

  if (rep.jacobian.verdict == JacobianOutcome::Verdict::Dependent) {
    rep.verdict = Verdict::Dependent;
    rep.methods.push_back(Method::Jacobian);
    rep.note = rep.jacobian.note;
    return rep;
  }

  if (p != 2) {
    if (rep.jacobian.verdict == JacobianOutcome::Verdict::Inconclusive) {
      rep.verdict = Verdict::Inconclusive;
      rep.note = rep.jacobian.note;
      return rep;
    }
    rep.methods.push_back(Method::Jacobian);
    if (profile.seed_available && profile.k->is_finite()) {
      rep.certificate = build_pfister_certificate(u, profile, opts.limits);
      rep.certificate_check = certificate_validate(*rep.certificate);
      if (!rep.certificate_check->valid)
        fail(errc::internal_disagreement, "certificate invalid after construction");
      rep.methods.push_back(Method::PfisterCertificate);
    } else {
      rep.note = "certificate route unavailable for this profile; Jacobian verdict only";
    }
    rep.verdict = Verdict::Independent;
    return rep;
  }

  // characteristic 2
  bool jac_conclusive = rep.jacobian.verdict == JacobianOutcome::Verdict::Independent;
  if (jac_conclusive) rep.methods.push_back(Method::Jacobian);
  try {
    rep.genform = build_genform_certificate(u, opts.char2_ell, opts.limits);
    rep.methods.push_back(Method::GenFormCertificate);
    rep.verdict = Verdict::Independent;
    return rep;
  } catch (const error& e) {
    if (e.code() != errc::partial_support) throw;
    rep.note = "generalized-form certificate covers only translated coordinate tuples here";
  }
  if (jac_conclusive) {
    rep.verdict = Verdict::Independent;
    return rep;
  }
  rep.verdict = Verdict::Inconclusive;
  return rep;
}

}  // namespace pfl
