#include "pfl/curves.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "pfl/detail/fp_poly.hpp"
#include "pfl/report.hpp"

namespace pfl {

FamilyKind family_for_characteristic(int64_t p) {
  if (p == 2) return FamilyKind::Char2AS;
  if (p == 5) return FamilyKind::Septic;
  return FamilyKind::Quintic;
}

std::optional<FamilyKind> family_by_name(const std::string& name) {
  if (name == "quintic") return FamilyKind::Quintic;
  if (name == "septic") return FamilyKind::Septic;
  if (name == "char2" || name == "artin-schreier") return FamilyKind::Char2AS;
  return std::nullopt;
}

const char* family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Quintic: return "quintic";
    case FamilyKind::Septic: return "septic";
    case FamilyKind::Char2AS: return "char2";
  }
  return "?";
}

int family_genus(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Quintic: return 2;
    case FamilyKind::Septic: return 3;
    case FamilyKind::Char2AS: return 2;
  }
  return 0;
}

bool family_matches_characteristic(FamilyKind kind, int64_t p) {
  switch (kind) {
    case FamilyKind::Quintic: return p != 2 && p != 5;
    case FamilyKind::Septic: return p == 5;
    case FamilyKind::Char2AS: return p == 2;
  }
  return false;
}

CurveFamily make_family(FamilyKind kind, Value a) {
  BigInt p = a.field()->characteristic();
  int64_t pc = p == 0 ? 0 : static_cast<int64_t>(p);
  bool ok = (pc == 0) ? (kind == FamilyKind::Quintic) : family_matches_characteristic(kind, pc);
  if (!ok)
    fail(errc::char_mismatch, std::string(family_name(kind)) + " family does not live in characteristic " +
                                  p.str());
  return CurveFamily{kind, std::move(a)};
}

namespace {

// index-level right-hand side f(x) of the family equation
int rhs_at(FamilyKind kind, const SmallField& sf, int a, int x) {
  switch (kind) {
    case FamilyKind::Quintic: {
      int x5 = sf.mul(sf.mul(sf.mul(sf.mul(x, x), x), x), x);
      return sf.add(sf.add(x5, sf.mul(a, x)), 1);
    }
    case FamilyKind::Septic: {
      int x2 = sf.mul(x, x);
      int x7 = sf.mul(sf.mul(sf.mul(x2, x2), x2), x);
      return sf.add(sf.add(x7, sf.mul(a, x)), 1);
    }
    case FamilyKind::Char2AS: {
      int x5 = sf.mul(sf.mul(sf.mul(sf.mul(x, x), x), x), x);
      return sf.add(x5, sf.mul(a, x));
    }
  }
  return 0;
}

// derivative of the right-hand side, for smoothness flags
int rhs_deriv_at(FamilyKind kind, const SmallField& sf, int a, int x) {
  switch (kind) {
    case FamilyKind::Quintic: {
      int x4 = sf.mul(sf.mul(x, x), sf.mul(x, x));
      int five = static_cast<int>(5 % sf.p());
      return sf.add(sf.mul(five, x4), a);
    }
    case FamilyKind::Septic: {
      // char 5: 7 x^6 + a = 2 x^6 + a
      int x2 = sf.mul(x, x);
      int x6 = sf.mul(sf.mul(x2, x2), x2);
      return sf.add(sf.mul(2, x6), a);
    }
    case FamilyKind::Char2AS:
      return 0;  // unused: every affine point is smooth (d/dy = 1)
  }
  return 0;
}

// y-solutions of the family equation at x, as element indices
void y_solutions(FamilyKind kind, const SmallField& sf, int a, int x, std::vector<int>& out) {
  out.clear();
  int rhs = rhs_at(kind, sf, a, x);
  if (kind == FamilyKind::Char2AS) {
    // y^2 + y = rhs: solvable iff the absolute trace vanishes; q <= table
    // sizes here, a direct scan keeps this simple
    for (int y = 0; y < sf.q(); ++y)
      if (sf.add(sf.mul(y, y), y) == rhs) out.push_back(y);
    return;
  }
  if (rhs == 0) {
    out.push_back(0);
    return;
  }
  int y0 = sf.sqrt_of(rhs);
  if (y0 < 0) return;
  out.push_back(y0);
  int y1 = sf.neg(y0);
  if (y1 != y0) out.push_back(y1);
}

SmallField small_field_checked(const CurveFamily& fam, const FieldPtr& field) {
  if (!field->is_finite()) fail(errc::infinite_field, "point enumeration needs a finite field");
  if (!family_matches_characteristic(fam.kind, field->prime()))
    fail(errc::char_mismatch, std::string(family_name(fam.kind)) + " over characteristic " +
                                  std::to_string(field->prime()));
  return SmallField(field);
}

int param_index(const CurveFamily& fam, const SmallField& sf) {
  auto av = coerce(fam.a, sf.field());
  if (!av) fail(errc::bad_input, "parameter does not embed into the field");
  return sf.from_value(*av);
}

}  // namespace

PointSet enumerate_points(const CurveFamily& fam, const FieldPtr& field) {
  SmallField sf = small_field_checked(fam, field);
  int a = param_index(fam, sf);
  PointSet ps;
  ps.field = field;
  std::vector<int> ys;
  for (int x = 0; x < sf.q(); ++x) {
    y_solutions(fam.kind, sf, a, x, ys);
    for (int y : ys) {
      bool smooth = true;
      if (fam.kind != FamilyKind::Char2AS && y == 0 && rhs_deriv_at(fam.kind, sf, a, x) == 0)
        smooth = false;
      ps.points.push_back({sf.to_value(x), sf.to_value(y), smooth});
    }
  }
  return ps;
}

namespace {

// bitmap of the ratio set, at index level
std::vector<char> ratio_set_bitmap(FamilyKind kind, const SmallField& sf, int a,
                                   int64_t* n_points_out) {
  int64_t q = sf.q();
  std::vector<char> has_x(q, 0);
  int64_t n_points = 0;
  std::vector<int> ys;
  for (int x = 0; x < q; ++x) {
    y_solutions(kind, sf, a, x, ys);
    if (!ys.empty()) has_x[x] = 1;
    n_points += static_cast<int64_t>(ys.size());
  }
  std::vector<char> in_set(q, 0);
  for (int x2 = 1; x2 < q; ++x2) {
    if (!has_x[x2]) continue;
    int inv2 = sf.inv(x2);
    for (int x1 = 0; x1 < q; ++x1)
      if (has_x[x1]) in_set[sf.mul(x1, inv2)] = 1;
  }
  if (n_points_out) *n_points_out = n_points;
  return in_set;
}

}  // namespace

std::vector<Value> compute_Sa(const CurveFamily& fam, const FieldPtr& field) {
  SmallField sf = small_field_checked(fam, field);
  int a = param_index(fam, sf);
  std::vector<char> in_set = ratio_set_bitmap(fam.kind, sf, a, nullptr);
  std::vector<Value> out;
  for (int i = 0; i < sf.q(); ++i)
    if (in_set[i]) out.push_back(sf.to_value(i));
  return out;
}

std::vector<Value> compute_Sa_prime(const CurveFamily& fam, const FieldPtr& field, int m) {
  if (m < 2) fail(errc::bad_input, "m must be >= 2");
  SmallField sf = small_field_checked(fam, field);
  int a = param_index(fam, sf);
  std::vector<char> in_set = ratio_set_bitmap(fam.kind, sf, a, nullptr);
  // roots of X^j - X for 2 <= j <= m
  for (int x = 0; x < sf.q(); ++x) {
    if (in_set[x]) continue;
    for (int j = 2; j <= m; ++j)
      if (sf.pow(x, j) == x) {
        in_set[x] = 1;
        break;
      }
  }
  std::vector<Value> out;
  for (int i = 0; i < sf.q(); ++i)
    if (in_set[i]) out.push_back(sf.to_value(i));
  return out;
}

FiberReport fiber_variety_count(const CurveFamily& fam, const FieldPtr& field, const Value& c) {
  SmallField sf = small_field_checked(fam, field);
  int a = param_index(fam, sf);
  auto cv = coerce(c, field);
  if (!cv) fail(errc::bad_input, "line parameter outside the field");
  int ci = sf.from_value(*cv);

  // base point (0, y0, 0, y0) with y0 = 1 (y0 = 0 in characteristic 2)
  int y_base = fam.kind == FamilyKind::Char2AS ? 0 : 1;
  {
    std::vector<int> ys;
    y_solutions(fam.kind, sf, a, 0, ys);
    if (std::find(ys.begin(), ys.end(), y_base) == ys.end())
      fail(errc::base_point_missing, "base point is not on the curve");
  }

  FiberReport rep;
  rep.base_point = {sf.to_value(0), sf.to_value(y_base), sf.to_value(0), sf.to_value(y_base)};

  // count pairs of affine points with x1 = c*x2
  std::vector<int> fiber_size(sf.q(), 0);
  std::vector<int> ys;
  for (int x = 0; x < sf.q(); ++x) {
    y_solutions(fam.kind, sf, a, x, ys);
    fiber_size[x] = static_cast<int>(ys.size());
  }
  int64_t count = 0;
  for (int x2 = 0; x2 < sf.q(); ++x2) {
    int x1 = sf.mul(ci, x2);
    count += static_cast<int64_t>(fiber_size[x1]) * fiber_size[x2];
  }
  rep.count = count;

  // smoothness of the base point: rank of the 3x4 Jacobian of
  // (y1^2 - f(x1) [+ y1], y2^2 - f(x2) [+ y2], x1 - c x2)
  const FieldPtr& F = sf.field();
  Value fprime0 = sf.to_value(rhs_deriv_at(fam.kind, sf, a, 0));
  Value dy = fam.kind == FamilyKind::Char2AS
                 ? F->one()  // d/dy (y^2 + y) = 1
                 : F->from_int(2) * sf.to_value(y_base);
  std::vector<std::vector<Value>> jac = {
      {-fprime0, dy, F->zero(), F->zero()},
      {F->zero(), F->zero(), -fprime0, dy},
      {F->one(), F->zero(), -*cv, F->zero()},
  };
  if (fam.kind == FamilyKind::Char2AS) {
    // d/dx (x^5 + a x) = x^4 + a in characteristic 2; sign is immaterial
    jac[0][0] = sf.to_value(sf.add(0, a));
    jac[1][2] = jac[0][0];
  }
  rep.base_point_smooth = matrix_rank(jac) == 3;
  return rep;
}

CensusCell census_cell(FamilyKind kind, const SmallField& sf, int64_t a_index) {
  CensusCell cell;
  cell.family = family_name(kind);
  cell.q = sf.q();
  cell.a_index = a_index;
  std::vector<char> in_set = ratio_set_bitmap(kind, sf, static_cast<int>(a_index), &cell.n_points);
  cell.s_a_size = std::count(in_set.begin(), in_set.end(), char(1));
  cell.s_a_covers_field = cell.s_a_size == sf.q();
  return cell;
}

std::vector<int64_t> prime_powers_up_to(int64_t q_max) {
  std::vector<int64_t> out;
  for (int64_t q = 2; q <= q_max; ++q) {
    int64_t t = q, p = 0;
    for (int64_t d = 2; d * d <= q; ++d)
      if (q % d == 0) {
        p = d;
        break;
      }
    if (p == 0) {
      out.push_back(q);
      continue;
    }
    while (t % p == 0) t /= p;
    if (t == 1) out.push_back(q);
  }
  return out;
}

ScanResult derive_weil_threshold(const std::vector<FamilyKind>& kinds, int64_t q_ceiling,
                                 int jobs, CensusStore* store) {
  ScanResult result;
  result.q_ceiling = q_ceiling;
  struct Task {
    FamilyKind kind;
    int64_t q;
  };
  std::vector<Task> tasks;
  for (int64_t q : prime_powers_up_to(q_ceiling)) {
    int64_t p = q;
    for (int64_t d = 2; d * d <= q; ++d)
      if (q % d == 0) {
        p = d;
        break;
      }
    for (FamilyKind kind : kinds)
      if (family_matches_characteristic(kind, p)) tasks.push_back({kind, q});
  }
  if (tasks.empty()) fail(errc::scan_ceiling_exceeded, "no prime power to scan below the ceiling");

  std::vector<std::vector<CensusCell>> per_task(tasks.size());
  std::atomic<size_t> next{0};
  std::atomic<int64_t> cache_hits{0};
  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      FieldPtr f = Field::parse("GF(" + std::to_string(t.q) + ")");
      SmallField sf(f);
      std::vector<CensusCell> cells;
      cells.reserve(t.q);
      for (int64_t a = 0; a < t.q; ++a) {
        if (store) {
          const CensusCell* cached = store->get(family_name(t.kind), t.q, a);
          if (cached) {
            cells.push_back(*cached);
            cache_hits.fetch_add(1);
            continue;
          }
        }
        cells.push_back(census_cell(t.kind, sf, a));
      }
      per_task[i] = std::move(cells);
    }
  };
  int nthreads = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  result.cache_hits = cache_hits.load();
  for (auto& cells : per_task)
    for (auto& cell : cells) {
      if (!cell.s_a_covers_field) {
        result.failures.emplace_back(cell.q, cell.a_index);
        result.m = std::max(result.m, cell.q);
      }
      result.cells.push_back(std::move(cell));
    }
  if (store)
    for (const auto& cell : result.cells)
      if (!store->get(cell.family, cell.q, cell.a_index)) store->append(cell);

  int64_t top_q = 0;
  for (const auto& t : tasks) top_q = std::max(top_q, t.q);
  if (result.m >= top_q)
    fail(errc::scan_ceiling_exceeded,
         "coverage still fails at the largest scanned prime power " + std::to_string(top_q));
  return result;
}

SupersingularResult find_supersingular(int64_t p, int64_t p_bound) {
  if (p < 3 || p > p_bound || !is_prime_int(p))
    fail(errc::bad_input, "need an odd prime p <= " + std::to_string(p_bound));
  FieldPtr fp = Field::prime_field(p);
  SmallField sf(fp);
  for (int64_t a = 0; a < p; ++a)
    for (int64_t b = 0; b < p; ++b) {
      // discriminant of x^3 + a x + b: -(4a^3 + 27b^2), must be nonzero
      int64_t disc = detail::mod_p(4 * detail::mod_p(a * a % p * a, p) + 27 * (b * b % p), p);
      if (disc == 0) continue;
      int64_t affine = 0;
      for (int64_t x = 0; x < p; ++x) {
        int rhs = sf.add(sf.add(sf.mul(sf.mul((int)x, (int)x), (int)x), sf.mul((int)a, (int)x)), (int)b);
        if (rhs == 0)
          affine += 1;
        else if (sf.square(rhs))
          affine += 2;
      }
      int64_t proj = affine + 1;
      if (proj != p + 1) continue;
      SupersingularResult res;
      res.p = p;
      res.a = a;
      res.b = b;
      res.n_projective = proj;
      // the cubic must split into linear factors over GF(p^2)
      FieldPtr fq = Field::finite_field(p, 2);
      SmallField sq(fq);
      int ai = static_cast<int>(a % p), bi = static_cast<int>(b % p);
      for (int x = 0; x < sq.q(); ++x) {
        int v = sq.add(sq.add(sq.mul(sq.mul(x, x), x), sq.mul(ai, x)), bi);
        if (v == 0) res.cubic_roots.push_back(sq.to_value(x));
      }
      res.two_torsion_splits = res.cubic_roots.size() == 3;
      if (!res.two_torsion_splits)
        fail(errc::internal_disagreement,
             "curve with p+1 points whose 2-torsion does not split over GF(p^2)");
      return res;
    }
  fail(errc::bad_input, "no curve with p+1 points found (internal)");
}

NonIsotrivialityEvidence family_nonisotriviality_evidence(FamilyKind kind,
                                                          const FieldPtr& coefficient_field) {
  NonIsotrivialityEvidence ev;
  if (kind == FamilyKind::Char2AS) {
    ev.applicable = false;
    ev.note = "no discriminant criterion for the Artin-Schreier family; not automated";
    return ev;
  }
  BigInt p = coefficient_field->characteristic();
  int64_t pc = p == 0 ? 0 : static_cast<int64_t>(p);
  if (!((pc == 0 && kind == FamilyKind::Quintic) || family_matches_characteristic(kind, pc)))
    fail(errc::char_mismatch, "family/characteristic mismatch");
  ev.applicable = true;

  // discriminant of the defining polynomial in x, over k(a)
  FieldPtr ka = Field::rational_functions(coefficient_field, {"a"});
  FieldPtr kax = Field::rational_functions(ka, {"x"});
  int deg = kind == FamilyKind::Quintic ? 5 : 7;
  Value x = parse_element(kax, "x");
  Value a = parse_element(kax, "a");
  Value fx = x.pow(deg) + a * x + kax->one();
  const auto& rep = fx.ratfunc_rep();  // polynomial in x over k(a)
  ev.discriminant = poly_discriminant(rep.num, 0);
  const auto& drep = ev.discriminant.ratfunc_rep();  // element of k(a)
  ev.discriminant_nonconstant = !drep.num.is_constant();
  ev.discriminant_squarefree = squarefree_check(drep.num, 0);

  // singular parameter values
  if (coefficient_field->is_finite()) {
    SmallField sf(coefficient_field);
    for (int i = 0; i < sf.q(); ++i) {
      Value av = sf.to_value(i);
      if (drep.num.eval({av}).is_zero()) ev.singular_parameters.push_back(av);
    }
  } else {
    // rational root scan of the numerator via the rational root test
    const MPoly& num = drep.num;
    int d = num.degree(0);
    Value lead = num.coeff(Exps{d});
    Value cst = num.coeff(Exps{0});
    if (!cst.is_zero()) {
      BigInt lead_n = numerator(lead.rat_rep()) * denominator(cst.rat_rep());
      BigInt cst_n = numerator(cst.rat_rep()) * denominator(lead.rat_rep());
      auto divisors = [](BigInt n) {
        if (n < 0) n = -n;
        std::vector<BigInt> out;
        for (BigInt i = 1; i * i <= n; ++i)
          if (n % i == 0) {
            out.push_back(i);
            out.push_back(n / i);
          }
        return out;
      };
      for (const BigInt& r : divisors(cst_n))
        for (const BigInt& s : divisors(lead_n))
          for (int sign = -1; sign <= 1; sign += 2) {
            Value cand = coefficient_field->from_bigint(sign * r) / coefficient_field->from_bigint(s);
            if (num.eval({cand}).is_zero() &&
                std::find(ev.singular_parameters.begin(), ev.singular_parameters.end(), cand) ==
                    ev.singular_parameters.end())
              ev.singular_parameters.push_back(cand);
          }
    } else {
      ev.singular_parameters.push_back(coefficient_field->zero());
    }
  }
  ev.note = "fibers at the listed parameters are singular; all others smooth";
  return ev;
}

}  // namespace pfl
