#include <algorithm>
#include <cassert>

#include "pfl/field.hpp"

namespace pfl {

bool GrlexGreater::operator()(const Exps& a, const Exps& b) const {
  int ta = 0, tb = 0;
  for (auto e : a) ta += e;
  for (auto e : b) tb += e;
  if (ta != tb) return ta > tb;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

MPoly::MPoly(FieldPtr k, int nvars) : k_(std::move(k)), nvars_(nvars) {}

MPoly MPoly::constant(const FieldPtr& k, int nvars, const Value& c) {
  MPoly f(k, nvars);
  if (!c.is_zero()) f.terms_.emplace(Exps(nvars, 0), c);
  return f;
}

MPoly MPoly::variable(const FieldPtr& k, int nvars, int index) {
  MPoly f(k, nvars);
  Exps e(nvars, 0);
  e[index] = 1;
  f.terms_.emplace(std::move(e), k->one());
  return f;
}

MPoly MPoly::monomial(const FieldPtr& k, Exps e, const Value& c) {
  MPoly f(k, static_cast<int>(e.size()));
  if (!c.is_zero()) f.terms_.emplace(std::move(e), c);
  return f;
}

bool MPoly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && total_degree() == 0;
}

Value MPoly::constant_value() const {
  if (terms_.empty()) return k_->zero();
  assert(is_constant());
  return terms_.begin()->second;
}

int MPoly::degree(int var) const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
  return d;
}

int MPoly::total_degree() const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int t = 0;
    for (auto x : e) t += x;
    d = std::max(d, t);
  }
  return d;
}

Value MPoly::coeff(const Exps& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? k_->zero() : it->second;
}

void MPoly::add_term(const Exps& e, const Value& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    Value s = it->second + c;
    if (s.is_zero())
      terms_.erase(it);
    else
      it->second = s;
  }
}

MPoly MPoly::operator+(const MPoly& o) const {
  MPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

MPoly MPoly::operator-(const MPoly& o) const {
  MPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

MPoly MPoly::operator-() const {
  MPoly r(k_, nvars_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

MPoly MPoly::operator*(const MPoly& o) const {
  MPoly r(k_, nvars_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exps e(nvars_);
      for (int i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
      r.add_term(e, c1 * c2);
    }
  return r;
}

MPoly MPoly::scaled(const Value& c) const {
  MPoly r(k_, nvars_);
  if (c.is_zero()) return r;
  for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
  return r;
}

bool MPoly::operator==(const MPoly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  auto it = terms_.begin(), jt = o.terms_.begin();
  for (; it != terms_.end(); ++it, ++jt)
    if (it->first != jt->first || !(it->second == jt->second)) return false;
  return true;
}

const Exps& MPoly::lead_exps() const {
  assert(!terms_.empty());
  return terms_.begin()->first;
}

const Value& MPoly::lead_coeff() const {
  assert(!terms_.empty());
  return terms_.begin()->second;
}

MPoly MPoly::monic() const {
  if (terms_.empty()) return *this;
  return scaled(lead_coeff().inverse());
}

MPoly MPoly::derivative(int var) const {
  MPoly r(k_, nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exps d = e;
    d[var] -= 1;
    r.add_term(d, c * k_->from_int(e[var]));
  }
  return r;
}

MPoly MPoly::coeff_of(int var, int k) const {
  MPoly r(k_, nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] != k) continue;
    Exps d = e;
    d[var] = 0;
    r.add_term(d, c);
  }
  return r;
}

MPoly MPoly::shifted(int var, const Value& b) const {
  if (b.is_zero()) return *this;
  // substitute var -> var + b via binomial expansion, term by term
  int dmax = degree(var);
  if (dmax <= 0) return *this;
  // Pascal rows of field values up to dmax
  std::vector<std::vector<Value>> binom(dmax + 1);
  for (int n = 0; n <= dmax; ++n) {
    binom[n].resize(n + 1, k_->one());
    for (int r = 1; r < n; ++r) binom[n][r] = binom[n - 1][r - 1] + binom[n - 1][r];
  }
  std::vector<Value> bpow(dmax + 1, k_->one());
  for (int i = 1; i <= dmax; ++i) bpow[i] = bpow[i - 1] * b;
  MPoly out(k_, nvars_);
  for (const auto& [e, c] : terms_) {
    int n = e[var];
    for (int j = 0; j <= n; ++j) {
      Exps d = e;
      d[var] = j;
      out.add_term(d, c * binom[n][j] * bpow[n - j]);
    }
  }
  return out;
}

Value MPoly::eval(const std::vector<Value>& point) const {
  assert(static_cast<int>(point.size()) == nvars_);
  Value acc = k_->zero();
  for (const auto& [e, c] : terms_) {
    Value t = c;
    for (int i = 0; i < nvars_; ++i)
      for (int j = 0; j < e[i]; ++j) t = t * point[i];
    acc = acc + t;
  }
  return acc;
}

std::string MPoly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::string cs = c.to_string();
    bool neg = !cs.empty() && cs[0] == '-';
    std::string mag = neg ? cs.substr(1) : cs;
    std::string mono;
    for (int i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    std::string piece;
    if (mono.empty()) {
      piece = mag;
    } else if (mag == "1") {
      piece = mono;
    } else {
      bool needs_parens = mag.find_first_of("+-*/") != std::string::npos;
      piece = (needs_parens ? "(" + mag + ")" : mag) + "*" + mono;
    }
    if (first) {
      out = (neg ? "-" : "") + piece;
      first = false;
    } else {
      out += (neg ? "-" : "+") + piece;
    }
  }
  return out;
}

// --- division / gcd ----------------------------------------------------------

std::optional<MPoly> mp_divexact(const MPoly& a, const MPoly& b) {
  if (b.is_zero()) return std::nullopt;
  MPoly rem = a;
  MPoly q(a.coeff_field(), a.nvars());
  const Exps& lb = b.lead_exps();
  while (!rem.is_zero()) {
    const Exps& la = rem.lead_exps();
    Exps d(la.size());
    for (size_t i = 0; i < la.size(); ++i) {
      d[i] = la[i] - lb[i];
      if (d[i] < 0) return std::nullopt;
    }
    Value c = rem.lead_coeff() / b.lead_coeff();
    MPoly t = MPoly::monomial(a.coeff_field(), d, c);
    q = q + t;
    rem = rem - t * b;
  }
  return q;
}

namespace {

// variables with positive degree
std::vector<int> active_vars(const MPoly& f) {
  std::vector<int> v;
  for (int i = 0; i < f.nvars(); ++i)
    if (f.degree(i) > 0) v.push_back(i);
  return v;
}

// univariate list of coefficients of f in var (constant term first)
std::vector<MPoly> coeff_list(const MPoly& f, int var) {
  int d = std::max(f.degree(var), 0);
  std::vector<MPoly> cs;
  cs.reserve(d + 1);
  for (int i = 0; i <= d; ++i) cs.push_back(f.coeff_of(var, i));
  return cs;
}

// gcd of all coefficients of f viewed in var
MPoly content_wrt(const MPoly& f, int var) {
  MPoly g(f.coeff_field(), f.nvars());
  for (const auto& c : coeff_list(f, var)) {
    if (c.is_zero()) continue;
    g = mp_gcd(g, c);
    if (g.is_constant() && !g.is_zero()) return g;  // already a unit
  }
  return g;
}

// pseudo-remainder of f by g with respect to var: lc(g)^{df-dg+1} f mod g
MPoly prem(MPoly f, const MPoly& g, int var) {
  int dg = g.degree(var);
  MPoly lcg = g.coeff_of(var, dg);
  while (!f.is_zero() && f.degree(var) >= dg) {
    int df = f.degree(var);
    MPoly lcf = f.coeff_of(var, df);
    Exps sh(static_cast<size_t>(f.nvars()), 0);
    sh[var] = df - dg;
    MPoly shift_mono = MPoly::monomial(f.coeff_field(), sh, f.coeff_field()->one());
    f = f * lcg - g * (lcf * shift_mono);
  }
  return f;
}

// monic Euclidean gcd for univariate-over-field polynomials in var
MPoly euclid_gcd_uni(MPoly a, MPoly b, int var) {
  while (!b.is_zero()) {
    // reduce a mod b (b made monic in var)
    int db = b.degree(var);
    Value lcb = b.coeff_of(var, db).constant_value();
    MPoly bm = b.scaled(lcb.inverse());
    MPoly r = a;
    while (!r.is_zero() && r.degree(var) >= db) {
      int dr = r.degree(var);
      MPoly lcr = r.coeff_of(var, dr);
      Exps sh(static_cast<size_t>(r.nvars()), 0);
      sh[var] = dr - db;
      r = r - bm * (lcr * MPoly::monomial(r.coeff_field(), sh, r.coeff_field()->one()));
    }
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

MPoly mp_gcd(const MPoly& a, const MPoly& b) {
  const FieldPtr& k = a.is_zero() && !b.is_zero() ? b.coeff_field() : a.coeff_field();
  if (a.is_zero()) return b.is_zero() ? b : b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant())
    return MPoly::constant(k, a.nvars(), k->one());

  std::vector<int> va = active_vars(a), vb = active_vars(b);
  // main variable: first variable active in both; if none, the gcd has degree
  // zero in every variable of either, so recurse through contents
  int main_var = -1;
  for (int v : va)
    if (std::find(vb.begin(), vb.end(), v) != vb.end()) {
      main_var = v;
      break;
    }
  if (main_var == -1) {
    // gcd(a, b) = gcd(content of a wrt its first active var, b)
    return mp_gcd(content_wrt(a, va[0]), b);
  }

  // univariate-over-field fast path
  if (va.size() == 1 && vb.size() == 1 && va[0] == main_var && vb[0] == main_var)
    return euclid_gcd_uni(a, b, main_var).monic();

  MPoly ca = content_wrt(a, main_var);
  MPoly cb = content_wrt(b, main_var);
  MPoly pa = *mp_divexact(a, ca);
  MPoly pb = *mp_divexact(b, cb);
  MPoly c = mp_gcd(ca, cb);

  if (pa.degree(main_var) < pb.degree(main_var)) std::swap(pa, pb);
  while (!pb.is_zero()) {
    MPoly r = prem(pa, pb, main_var);
    pa = pb;
    if (r.is_zero()) {
      pb = r;
    } else {
      MPoly cr = content_wrt(r, main_var);
      pb = *mp_divexact(r, cr);
    }
  }
  MPoly cpa = content_wrt(pa, main_var);
  MPoly g = *mp_divexact(pa, cpa);
  return (c * g).monic();
}

// --- resultant / discriminant -------------------------------------------------

Value mp_resultant(const MPoly& f, const MPoly& g, int var) {
  const FieldPtr& k = f.coeff_field();
  // validate univariate-in-var with inert other variables rarely matters here;
  // coefficients may involve other variables only through the base field
  for (int i = 0; i < f.nvars(); ++i) {
    if (i == var) continue;
    if (f.degree(i) > 0 || g.degree(i) > 0)
      fail(errc::bad_input, "resultant requires univariate input in the chosen variable");
  }
  auto deg = [&](const MPoly& h) { return h.degree(var); };
  auto lc = [&](const MPoly& h) { return h.coeff_of(var, deg(h)).constant_value(); };

  MPoly a = f, b = g;
  if (a.is_zero() || b.is_zero()) {
    if (a.is_zero() && deg(b) == 0 && !b.is_zero()) return k->one();
    if (b.is_zero() && deg(a) == 0 && !a.is_zero()) return k->one();
    return k->zero();
  }
  Value res = k->one();
  while (true) {
    int m = deg(a), n = deg(b);
    if (n == 0) {
      res = res * b.constant_value().pow(m);
      return res;
    }
    if (m < n) {
      if (((m & 1) != 0) && ((n & 1) != 0)) res = -res;
      std::swap(a, b);
      continue;
    }
    // r = a mod b over the field
    Value lb = lc(b);
    MPoly bm = b.scaled(lb.inverse());
    MPoly r = a;
    while (!r.is_zero() && deg(r) >= n) {
      int dr = deg(r);
      MPoly lcr = r.coeff_of(var, dr);
      Exps sh(static_cast<size_t>(r.nvars()), 0);
      sh[var] = dr - n;
      r = r - bm * (lcr * MPoly::monomial(k, sh, k->one()));
    }
    int d = r.is_zero() ? -1 : deg(r);
    if (r.is_zero()) return k->zero();
    if (((m & 1) != 0) && ((n & 1) != 0)) res = -res;
    res = res * lb.pow(m - d);
    a = b;
    b = r;
  }
}

Value poly_discriminant(const MPoly& f, int var) {
  int m = f.degree(var);
  if (m <= 0) fail(errc::bad_input, "discriminant needs positive degree");
  MPoly df = f.derivative(var);
  if (df.is_zero())
    fail(errc::zero_derivative, "derivative vanishes identically (characteristic divides exponents)");
  Value res = mp_resultant(f, df, var);
  Value lc = f.coeff_of(var, m).constant_value();
  Value d = res / lc;
  if (((m * (m - 1) / 2) & 1) != 0) d = -d;
  return d;
}

bool squarefree_check(const MPoly& f, int var) {
  if (f.is_zero()) fail(errc::bad_input, "squarefree_check needs a nonzero polynomial");
  MPoly df = f.derivative(var);
  MPoly g = mp_gcd(f, df);
  return g.is_constant();
}

// --- square roots --------------------------------------------------------------

std::optional<MPoly> mp_sqrt(const MPoly& f) {
  const FieldPtr& k = f.coeff_field();
  if (f.is_zero()) return f;
  if (k->characteristic() == 2) {
    // squaring is the Frobenius: every exponent even, every coefficient square
    MPoly r(k, f.nvars());
    for (const auto& [e, c] : f.terms()) {
      Exps h = e;
      for (auto& x : h) {
        if (x % 2 != 0) return std::nullopt;
        x /= 2;
      }
      SquareResult s = is_square(c);
      if (!s.is_square) return std::nullopt;
      r.add_term(h, *s.root);
    }
    return r;
  }
  if (f.is_constant()) {
    SquareResult s = is_square(f.constant_value());
    if (!s.is_square) return std::nullopt;
    return MPoly::constant(k, f.nvars(), *s.root);
  }
  std::vector<int> av = active_vars(f);
  int v = av[0];
  int d = f.degree(v);
  if (d % 2 != 0) return std::nullopt;
  int m = d / 2;
  auto lead = f.coeff_of(v, d);
  auto cm = mp_sqrt(lead);
  if (!cm) return std::nullopt;
  MPoly g = *cm;
  {
    Exps e(static_cast<size_t>(f.nvars()), 0);
    e[v] = m;
    g = g * MPoly::monomial(k, e, k->one());
  }
  MPoly two_cm = cm->scaled(k->from_int(2));
  for (int j = m - 1; j >= 0; --j) {
    MPoly rem = f - g * g;
    MPoly t = rem.coeff_of(v, m + j);
    if (t.is_zero()) continue;
    auto cj = mp_divexact(t, two_cm);
    if (!cj) return std::nullopt;
    Exps e(static_cast<size_t>(f.nvars()), 0);
    e[v] = j;
    g = g + *cj * MPoly::monomial(k, e, k->one());
  }
  if (f == g * g) return g;
  return std::nullopt;
}

}  // namespace pfl
