#include "pfl/qforms.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "pfl/smallfield.hpp"

namespace pfl {

DiagonalForm make_diagonalform_impl(FieldPtr field, std::vector<Value> coeffs) {
  if (coeffs.empty()) fail(errc::bad_input, "diagonal form needs dimension >= 1");
  for (auto& c : coeffs) {
    if (!c.field()->equals(*field)) {
      auto cc = coerce(c, field);
      if (!cc) fail(errc::bad_input, "form coefficient outside the base field");
      c = *cc;
    }
    if (c.is_zero()) fail(errc::bad_input, "diagonal form coefficients must be nonzero");
  }
  return DiagonalForm{std::move(field), std::move(coeffs)};
}

DiagonalForm make_diagonal_form(FieldPtr field, std::vector<Value> coeffs) {
  return make_diagonalform_impl(std::move(field), std::move(coeffs));
}

DiagonalForm parse_diagonal_form(const FieldPtr& field, const std::string& comma_list) {
  std::vector<Value> coeffs;
  std::string cur;
  int depth = 0;
  for (char ch : comma_list) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      coeffs.push_back(parse_element(field, cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) coeffs.push_back(parse_element(field, cur));
  return make_diagonal_form(field, std::move(coeffs));
}

DiagonalForm pfister_expand(const PfisterSpec& spec) {
  for (const auto& s : spec.slots)
    if (s.is_zero()) fail(errc::zero_slot, "Pfister slot must be nonzero");
  size_t n = spec.slots.size();
  std::vector<Value> entries;
  entries.reserve(size_t{1} << n);
  for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
    Value e = spec.field->one();
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t{1} << i)) e = e * spec.slots[i];
    entries.push_back(e);
  }
  return DiagonalForm{spec.field, std::move(entries)};
}

Value form_eval(const DiagonalForm& q, const std::vector<Value>& x) {
  if (x.size() != q.coeffs.size())
    fail(errc::dimension_mismatch, "vector length " + std::to_string(x.size()) + " vs form dim " +
                                       std::to_string(q.coeffs.size()));
  Value acc = q.field->zero();
  for (size_t i = 0; i < x.size(); ++i) acc = acc + q.coeffs[i] * x[i] * x[i];
  return acc;
}

// --- exhaustive isotropy over finite fields -------------------------------------

namespace {

// enumerates normalized vectors (first nonzero coordinate = 1) in lex order:
// position j of the leading 1 runs from n-1 down to 0, the free suffix counts
// up. Calls fn(x) and stops when it returns true.
template <typename Fn>
uint64_t for_each_projective(int n, int64_t q, Fn&& fn) {
  std::vector<int> x(n, 0);
  uint64_t tried = 0;
  for (int j = n - 1; j >= 0; --j) {
    std::fill(x.begin(), x.end(), 0);
    x[j] = 1;
    while (true) {
      ++tried;
      if (fn(x)) return tried;
      int k = n - 1;
      while (k > j && x[k] == q - 1) {
        x[k] = 0;
        --k;
      }
      if (k == j) break;
      ++x[k];
    }
  }
  return tried;
}

}  // namespace

namespace {

// quadratic-form theory here excludes characteristic 2 throughout; the
// characteristic-2 routes go through the generalized degree-ell forms
void reject_char2(const FieldPtr& f, const char* op) {
  if (f->characteristic() == 2)
    fail(errc::unsupported_field, std::string(op) + " is not defined in characteristic 2");
}

}  // namespace

FiniteIsotropy isotropy_finite(const DiagonalForm& q) {
  if (!q.field->is_finite()) fail(errc::infinite_field, "isotropy_finite needs a finite base field");
  reject_char2(q.field, "isotropy_finite");
  SmallField sf(q.field);
  int n = q.dim();
  std::vector<int> d(n);
  for (int i = 0; i < n; ++i) d[i] = sf.from_value(q.coeffs[i]);

  FiniteIsotropy out;
  std::vector<int> hit;
  out.tried = for_each_projective(n, sf.q(), [&](const std::vector<int>& x) {
    int acc = 0;
    for (int i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      acc = sf.add(acc, sf.mul(d[i], sf.mul(x[i], x[i])));
    }
    if (acc == 0) {
      hit = x;
      return true;
    }
    return false;
  });
  if (!hit.empty()) {
    out.isotropic = true;
    for (int c : hit) out.witness.push_back(sf.to_value(c));
  }
  return out;
}

// --- bounded polynomial zero search ----------------------------------------------

namespace {

// ordered by total degree, ties by the leftmost exponent descending
std::vector<Exps> monomials_up_to(int r, int D) {
  std::vector<Exps> out;
  Exps cur(r, 0);
  std::function<void(int, int)> fill = [&](int pos, int left) {
    if (pos == r - 1) {
      cur[pos] = left;
      out.push_back(cur);
      cur[pos] = 0;
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[pos] = e;
      fill(pos + 1, left - e);
      cur[pos] = 0;
    }
  };
  for (int total = 0; total <= D; ++total) {
    if (r == 0) {
      if (total == 0) out.push_back(cur);
    } else {
      fill(0, total);
    }
  }
  return out;
}

struct SparseTermInt {
  int res_idx;
  int coeff;  // field index
};

// One summand coeff * x_i^ell, preprocessed so a candidate's contribution can
// be accumulated with table lookups only.
struct ComponentProgram {
  // for ell = 2: entries (m1, m2, res_idx, scale) over m1 <= m2
  // for ell = 3: entries (m1, m2, m3, res_idx, scale) over m1 <= m2 <= m3
  struct Entry {
    int m1, m2, m3;
    int res_idx;
    int scale;  // field index of multinomial * coeff term
  };
  std::vector<Entry> entries;
};

struct SearchContext {
  const SmallField& sf;
  int ell;
  int n;                 // number of components
  int M;                 // candidate monomials per component
  int res_size;
  std::vector<ComponentProgram> progs;
  std::vector<int> acc;       // result accumulator (field indices)
  std::vector<int> touched;   // dirty accumulator slots

  SearchContext(const SmallField& f) : sf(f) {}

  // candidate: flat coefficient array, component-major (c[i*M + m])
  bool is_zero_vector_of_form(const std::vector<int>& c) {
    touched.clear();
    for (int i = 0; i < n; ++i) {
      const auto& prog = progs[i];
      const int* ci = c.data() + i * M;
      for (const auto& e : prog.entries) {
        int prod = sf.mul(ci[e.m1], ci[e.m2]);
        if (ell == 3) prod = sf.mul(prod, ci[e.m3]);
        if (prod == 0) continue;
        int contrib = sf.mul(e.scale, prod);
        if (contrib == 0) continue;
        if (acc[e.res_idx] == 0) touched.push_back(e.res_idx);
        acc[e.res_idx] = sf.add(acc[e.res_idx], contrib);
      }
    }
    bool zero = true;
    for (int idx : touched) {
      if (acc[idx] != 0) zero = false;
      acc[idx] = 0;
    }
    return zero;
  }
};

int64_t multinomial(int ell, int m1, int m2, int m3) {
  if (ell == 2) return m1 == m2 ? 1 : 2;
  // ell == 3
  if (m1 == m2 && m2 == m3) return 1;
  if (m1 == m2 || m2 == m3 || m1 == m3) return 3;
  return 6;
}

}  // namespace

BoundedSearchOutcome bounded_zero_search(const FieldPtr& K, const std::vector<Value>& coeffs,
                                         int ell, int degree_bound, uint64_t budget) {
  if (ell != 2 && ell != 3) fail(errc::bad_input, "bounded search supports exponents 2 and 3");
  BoundedSearchOutcome out;
  out.bound = degree_bound;

  // plain finite field: degree bound is irrelevant, run the projective scan
  if (K->is_finite()) {
    SmallField sf(K);
    int n = static_cast<int>(coeffs.size());
    std::vector<int> d(n);
    for (int i = 0; i < n; ++i) d[i] = sf.from_value(coeffs[i]);
    std::vector<int> hit;
    out.tried = for_each_projective(n, sf.q(), [&](const std::vector<int>& x) {
      int acc = 0;
      for (int i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        acc = sf.add(acc, sf.mul(d[i], sf.pow(x[i], ell)));
      }
      if (acc == 0) {
        hit = x;
        return true;
      }
      return false;
    });
    out.exhaustive = true;
    out.strategy = "projective scan";
    if (!hit.empty()) {
      std::vector<Value> w;
      for (int c : hit) w.push_back(sf.to_value(c));
      out.witness = std::move(w);
    }
    return out;
  }

  if (K->kind() != FieldKind::RatFunc || !K->base()->is_finite())
    fail(errc::bad_input, "bounded search needs a rational function field over a finite field");
  const FieldPtr& k = K->base();
  int r = static_cast<int>(K->vars().size());
  int n = static_cast<int>(coeffs.size());

  // clear denominators; scaling the form by a nonzero element keeps its zeros
  Value common = K->one();
  for (const auto& c : coeffs) {
    MPoly den = c.ratfunc_rep().den;
    common = common * make_ratfunc_value(K, den, MPoly::constant(k, r, k->one()));
  }
  std::vector<MPoly> d_poly;
  d_poly.reserve(n);
  int max_coeff_deg = 0;
  for (const auto& c : coeffs) {
    Value cleared = c * common;
    const auto& rep = cleared.ratfunc_rep();
    if (!(rep.den.is_constant() && rep.den.constant_value().is_one()))
      fail(errc::bad_input, "internal: denominator clearing failed");
    d_poly.push_back(rep.num);
    max_coeff_deg = std::max(max_coeff_deg, rep.num.total_degree());
  }

  SmallField sf(k);
  int64_t q = sf.q();
  int D = degree_bound;
  std::vector<Exps> cand = monomials_up_to(r, D);
  int M = static_cast<int>(cand.size());
  int W = ell * D + max_coeff_deg;
  std::vector<Exps> res = monomials_up_to(r, W);
  std::map<Exps, int> res_index;
  for (size_t i = 0; i < res.size(); ++i) res_index[res[i]] = static_cast<int>(i);

  SearchContext ctx(sf);
  ctx.ell = ell;
  ctx.n = n;
  ctx.M = M;
  ctx.res_size = static_cast<int>(res.size());
  ctx.acc.assign(res.size(), 0);
  ctx.progs.resize(n);
  for (int i = 0; i < n; ++i) {
    for (const auto& [te, tc] : d_poly[i].terms()) {
      int tci = sf.from_value(tc);
      auto add_entry = [&](int m1, int m2, int m3) {
        Exps sum(r, 0);
        for (int v = 0; v < r; ++v) {
          sum[v] = te[v] + cand[m1][v] + cand[m2][v];
          if (ell == 3) sum[v] += cand[m3][v];
        }
        int64_t mult = multinomial(ell, m1, m2, m3) % sf.p();
        if (mult == 0) return;  // multinomial vanishes in this characteristic
        int scale = sf.mul(tci, sf.from_value(k->from_int(mult)));
        ctx.progs[i].entries.push_back({m1, m2, m3, res_index.at(sum), scale});
      };
      for (int m1 = 0; m1 < M; ++m1)
        for (int m2 = m1; m2 < M; ++m2) {
          if (ell == 2)
            add_entry(m1, m2, m2);
          else
            for (int m3 = m2; m3 < M; ++m3) add_entry(m1, m2, m3);
        }
    }
  }

  auto to_witness = [&](const std::vector<int>& c) {
    std::vector<Value> w;
    for (int i = 0; i < n; ++i) {
      MPoly poly(k, r);
      for (int m = 0; m < M; ++m)
        if (c[i * M + m] != 0) poly.add_term(cand[m], sf.to_value(c[i * M + m]));
      w.push_back(make_ratfunc_value(K, poly, MPoly::constant(k, r, k->one())));
    }
    return w;
  };

  int N = n * M;
  // projective candidate count (q^N - 1)/(q - 1)
  BigInt proj = 0, pw = 1;
  for (int i = 0; i < N; ++i) {
    proj += pw;
    pw *= q;
  }

  std::vector<int> c(N, 0);
  uint64_t tried = 0;
  std::vector<int> hit;

  auto try_candidate = [&](const std::vector<int>& cc) {
    ++tried;
    if (ctx.is_zero_vector_of_form(cc)) {
      hit = cc;
      return true;
    }
    return false;
  };

  if (proj <= budget) {
    // complete enumeration, leading slot normalized to 1
    bool found = false;
    for (int j = N - 1; j >= 0 && !found; --j) {
      std::fill(c.begin(), c.end(), 0);
      c[j] = 1;
      while (true) {
        if (try_candidate(c)) {
          found = true;
          break;
        }
        int t = N - 1;
        while (t > j && c[t] == q - 1) {
          c[t] = 0;
          --t;
        }
        if (t == j) break;
        ++c[t];
      }
    }
    out.exhaustive = true;
    out.strategy = "complete degree-" + std::to_string(D) + " enumeration";
  } else {
    // layered incomplete strategy
    std::string strat = "layered(";
    // (a) complete enumeration at the largest feasible smaller bound
    int Dsub = -1;
    for (int d2 = D - 1; d2 >= 0; --d2) {
      int M2 = static_cast<int>(monomials_up_to(r, d2).size());
      BigInt pr = 0, pq = 1;
      for (int i = 0; i < n * M2; ++i) {
        pr += pq;
        pq *= q;
      }
      if (pr <= budget / 2) {
        Dsub = d2;
        break;
      }
    }
    if (Dsub >= 0) {
      BoundedSearchOutcome sub = bounded_zero_search(K, coeffs, ell, Dsub, budget / 2);
      tried += sub.tried;
      if (sub.witness) {
        out.witness = sub.witness;
        out.tried = tried;
        out.exhaustive = false;
        out.strategy = "layered(complete up to " + std::to_string(Dsub) + ")";
        return out;
      }
      strat += "complete<=" + std::to_string(Dsub) + ",";
    }
    // (b) all candidates of support size s at the full bound, s growing while
    // the budget lasts; leading chosen slot is normalized to 1
    bool found = false;
    uint64_t remaining = budget > tried ? budget - tried : 0;
    int s_max_reached = 0;
    for (int s = 1; s <= N && !found; ++s) {
      // count = C(N, s) * (q-1)^{s-1}
      long double cnt = 1;
      for (int i = 0; i < s; ++i) cnt = cnt * (N - i) / (i + 1);
      for (int i = 0; i < s - 1; ++i) cnt *= (q - 1);
      if (cnt > static_cast<long double>(remaining)) break;
      s_max_reached = s;
      std::vector<int> slots(s);
      for (int i = 0; i < s; ++i) slots[i] = i;
      std::vector<int> vals(s, 1);
      while (true) {
        // enumerate coefficient choices: slots[0] fixed to 1
        std::fill(vals.begin(), vals.end(), 1);
        while (true) {
          std::fill(c.begin(), c.end(), 0);
          for (int i = 0; i < s; ++i) c[slots[i]] = vals[i];
          if (try_candidate(c)) {
            found = true;
            break;
          }
          int t = s - 1;
          while (t >= 1 && vals[t] == q - 1) {
            vals[t] = 1;
            --t;
          }
          if (t < 1) break;
          ++vals[t];
        }
        if (found) break;
        // next slot combination
        int t = s - 1;
        while (t >= 0 && slots[t] == N - s + t) --t;
        if (t < 0) break;
        ++slots[t];
        for (int i = t + 1; i < s; ++i) slots[i] = slots[i - 1] + 1;
      }
      remaining = budget > tried ? budget - tried : 0;
    }
    strat += "support<=" + std::to_string(s_max_reached) + ")";
    out.exhaustive = false;
    out.strategy = strat;
  }
  out.tried = tried;
  if (!hit.empty()) out.witness = to_witness(hit);
  return out;
}

BoundedSearchOutcome isotropy_bounded_search(const DiagonalForm& q, int degree_bound,
                                             uint64_t budget) {
  reject_char2(q.field, "isotropy_bounded_search");
  return bounded_zero_search(q.field, q.coeffs, 2, degree_bound, budget);
}

// --- Springer descent -------------------------------------------------------------

SpringerReport springer_descend(const DiagonalForm& q, const FieldPtr& L,
                                const std::vector<Value>& witness_over_L) {
  SpringerReport rep;
  const FieldPtr& K = q.field;
  reject_char2(K, "springer_descend");
  int deg = 0;
  if (K->is_finite() && L->is_finite()) {
    if (L->prime() != K->prime() || L->ext_degree() % K->ext_degree() != 0)
      fail(errc::bad_input, "L is not an extension of the base field");
    deg = L->ext_degree() / K->ext_degree();
  } else if (L->kind() == FieldKind::Quad && L->base()->equals(*K)) {
    deg = 2;
  } else {
    fail(errc::bad_input, "unsupported extension for descent");
  }
  if (deg % 2 == 0) fail(errc::even_degree, "[L:K] = " + std::to_string(deg) + " is even");
  rep.extension_degree = deg;

  // verify the witness is a nontrivial zero of q over L
  std::vector<Value> dL;
  for (const auto& c : q.coeffs) {
    auto cc = coerce(c, L);
    if (!cc) fail(errc::bad_input, "form does not extend to L");
    dL.push_back(*cc);
  }
  if (witness_over_L.size() != q.coeffs.size())
    fail(errc::dimension_mismatch, "witness length mismatch");
  bool nontrivial = false;
  Value acc = L->zero();
  for (size_t i = 0; i < dL.size(); ++i) {
    Value xi = witness_over_L[i];
    if (!xi.field()->equals(*L)) {
      auto cc = coerce(xi, L);
      if (!cc) fail(errc::bad_input, "witness coordinate outside L");
      xi = *cc;
    }
    if (!xi.is_zero()) nontrivial = true;
    acc = acc + dL[i] * xi * xi;
  }
  if (!nontrivial || !acc.is_zero())
    fail(errc::not_a_zero, "witness is not a nontrivial zero over L");

  rep.isotropy_descends = true;
  rep.note = "odd-degree descent: isotropy over L implies isotropy over the base";
  if (K->is_finite()) {
    FiniteIsotropy fi = isotropy_finite(q);
    if (!fi.isotropic)
      fail(errc::internal_disagreement,
           "descent promised a base zero but the exhaustive scan found none");
    rep.base_witness = fi.witness;
  }
  return rep;
}

// --- anisotropy certificates --------------------------------------------------------

CertificateCheck certificate_validate(const AnisotropyCertificate& cert) {
  CertificateCheck check;
  const Center& c = cert.center;
  reject_char2(c.ambient(), "certificate_validate");
  const FieldPtr& l = c.residue_field();
  if (!l->is_finite()) {
    check.failures.push_back("residue field must be finite for decidable validation");
    return check;
  }
  // (i) residue form anisotropic over l
  bool residue_ok = true;
  for (const auto& d : cert.residue_form.coeffs)
    if (!d.field()->equals(*l)) residue_ok = false;
  if (!residue_ok) {
    check.failures.push_back("residue form not defined over the residue field");
  } else {
    FiniteIsotropy fi = isotropy_finite(cert.residue_form);
    if (fi.isotropic) check.failures.push_back("residue_isotropic");
  }

  // (ii) parameters vanish at the center and are regular there
  const FieldPtr& L = c.extended_ambient();
  int r = c.rank();
  size_t m = cert.parameters.size();
  std::vector<std::vector<Value>> jac;
  bool params_ok = true;
  for (size_t j = 0; j < m; ++j) {
    auto gv = coerce(cert.parameters[j], L);
    if (!gv) {
      check.failures.push_back("parameter " + std::to_string(j) + " outside the ambient field");
      params_ok = false;
      continue;
    }
    if (gv->is_zero()) {
      check.failures.push_back("parameter " + std::to_string(j) + " is zero");
      params_ok = false;
      continue;
    }
    const auto& rep = gv->ratfunc_rep();
    MPoly num = rep.num, den = rep.den;
    for (int i = 0; i < r; ++i) {
      num = num.shifted(i, c.point()[i]);
      den = den.shifted(i, c.point()[i]);
    }
    Value den0 = den.coeff(Exps(r, 0));
    Value num0 = num.coeff(Exps(r, 0));
    if (den0.is_zero() || !num0.is_zero()) {
      check.failures.push_back("not_vanishing: parameter " + std::to_string(j));
      params_ok = false;
      continue;
    }
    // first-order coefficients of the shifted expansion
    std::vector<Value> row;
    Value den0_inv = den0.inverse();
    for (int i = 0; i < r; ++i) {
      Exps e(r, 0);
      e[i] = 1;
      row.push_back(num.coeff(e) * den0_inv);
    }
    jac.push_back(std::move(row));
  }

  // (iii) full rank m over l, so the parameters extend to local parameters
  if (params_ok) {
    if (m == 0 || matrix_rank(jac) != static_cast<int>(m))
      check.failures.push_back("rank_deficient");
  }
  check.valid = check.failures.empty();
  return check;
}

DiagonalForm certified_form(const AnisotropyCertificate& cert) {
  const FieldPtr& L = cert.center.extended_ambient();
  std::vector<Value> slots;
  for (const auto& g : cert.parameters) {
    auto gv = coerce(g, L);
    if (!gv) fail(errc::bad_input, "certificate parameter outside the ambient field");
    slots.push_back(*gv);
  }
  PfisterSpec spec{L, slots};
  DiagonalForm pf = pfister_expand(spec);
  std::vector<Value> entries;
  for (const auto& pc : pf.coeffs)
    for (const auto& qc : cert.residue_form.coeffs) {
      auto qq = coerce(qc, L);
      entries.push_back(*qq * pc);
    }
  return DiagonalForm{L, std::move(entries)};
}

}  // namespace pfl
