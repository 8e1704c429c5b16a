#include "pfl/field.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "pfl/detail/fp_poly.hpp"

namespace pfl {

const char* errc_name(errc c) {
  switch (c) {
    case errc::not_prime: return "NotPrime";
    case errc::reducible_modulus: return "ReducibleModulus";
    case errc::square_adjunction: return "SquareAdjunction";
    case errc::unsupported_field: return "UnsupportedField";
    case errc::infinite_field: return "InfiniteField";
    case errc::zero_derivative: return "ZeroDerivative";
    case errc::zero_input: return "ZeroInput";
    case errc::not_a_unit: return "NotAUnit";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::zero_slot: return "ZeroSlot";
    case errc::even_degree: return "EvenDegree";
    case errc::not_a_zero: return "NotAZero";
    case errc::residue_isotropic: return "ResidueIsotropic";
    case errc::not_vanishing: return "NotVanishing";
    case errc::rank_deficient: return "RankDeficient";
    case errc::bad_generators: return "BadGenerators";
    case errc::char_divides: return "CharDivides";
    case errc::not_well_behaved: return "NotWellBehaved";
    case errc::no_etale_point_found: return "NoEtalePointFound";
    case errc::not_independent: return "NotIndependent";
    case errc::no_center_found: return "NoCenterFound";
    case errc::partial_support: return "PartialSupport";
    case errc::internal_disagreement: return "InternalDisagreement";
    case errc::inconclusive: return "Inconclusive";
    case errc::char_mismatch: return "CharMismatch";
    case errc::base_point_missing: return "BasePointMissing";
    case errc::scan_ceiling_exceeded: return "ScanCeilingExceeded";
    case errc::fold_ceiling: return "FoldCeiling";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::unbound_variable: return "UnboundVariable";
    case errc::syntax_error: return "SyntaxError";
    case errc::bad_input: return "BadInput";
  }
  return "Error";
}

bool is_prime_int(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

using detail::FpPoly;
using detail::fp_gcd;
using detail::fp_mod;
using detail::fp_mul;
using detail::fp_powmod;
using detail::fp_trim;
using detail::mod_p;

// f monic of degree n over F_p is irreducible iff x^{p^n} = x (mod f) and
// gcd(x^{p^d} - x, f) = 1 for every prime divisor d of n.
bool fp_irreducible(const FpPoly& f, int64_t p) {
  int n = static_cast<int>(f.size()) - 1;
  if (n <= 0) return false;
  if (n == 1) return true;
  FpPoly x{0, 1};
  BigInt pn = 1;
  for (int i = 0; i < n; ++i) pn *= p;
  FpPoly xq = fp_powmod(x, pn, f, p);
  // x^{p^n} - x must be 0 mod f
  FpPoly diff = xq;
  if (diff.size() < 2) diff.resize(2, 0);
  diff[1] = mod_p(diff[1] - 1, p);
  fp_trim(diff);
  if (!diff.empty()) return false;
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool d_is_max_proper = (n / d >= 2) && is_prime_int(n / d);
    if (!d_is_max_proper) continue;
    BigInt pd = 1;
    for (int i = 0; i < d; ++i) pd *= p;
    FpPoly xd = fp_powmod(x, pd, f, p);
    FpPoly g = xd;
    if (g.size() < 2) g.resize(2, 0);
    g[1] = mod_p(g[1] - 1, p);
    fp_trim(g);
    FpPoly h = fp_gcd(g, f, p);
    if (h.size() != 1) return false;
  }
  return true;
}

}  // namespace

std::vector<int64_t> Field::canonical_modulus(int64_t p, int n) {
  // Enumerate monic degree-n polynomials ordered by the coefficient tuple
  // (c_{n-1}, ..., c_0) ascending; first irreducible wins.
  BigInt total = 1;
  for (int i = 0; i < n; ++i) total *= p;
  for (BigInt idx = 0; idx < total; ++idx) {
    BigInt t = idx;
    std::vector<int64_t> coeffs(n + 1, 0);
    coeffs[n] = 1;
    for (int j = 0; j < n; ++j) {  // least significant tuple digit = c_0
      coeffs[j] = static_cast<int64_t>(t % p);
      t /= p;
    }
    FpPoly f(coeffs.begin(), coeffs.end());
    if (fp_irreducible(f, p)) return coeffs;
  }
  fail(errc::reducible_modulus, "no irreducible polynomial found (internal)");
}

FieldPtr Field::rationals() {
  auto f = std::shared_ptr<Field>(new Field());
  f->kind_ = FieldKind::Rationals;
  return f;
}

FieldPtr Field::prime_field(int64_t p) {
  if (!is_prime_int(p)) fail(errc::not_prime, std::to_string(p) + " is not prime");
  auto f = std::shared_ptr<Field>(new Field());
  f->kind_ = FieldKind::Prime;
  f->p_ = p;
  f->deg_ = 1;
  return f;
}

FieldPtr Field::finite_field(int64_t p, int n) {
  if (!is_prime_int(p)) fail(errc::not_prime, std::to_string(p) + " is not prime");
  if (n == 1) return prime_field(p);
  return finite_field(p, n, canonical_modulus(p, n));
}

FieldPtr Field::finite_field(int64_t p, int n, std::vector<int64_t> modulus) {
  if (!is_prime_int(p)) fail(errc::not_prime, std::to_string(p) + " is not prime");
  if (n < 2) fail(errc::bad_input, "extension degree must be >= 2");
  if (static_cast<int>(modulus.size()) != n + 1 || modulus[n] != 1)
    fail(errc::bad_input, "modulus must be monic of degree n");
  for (auto& c : modulus) c = mod_p(c, p);
  FpPoly m(modulus.begin(), modulus.end());
  if (!fp_irreducible(m, p))
    fail(errc::reducible_modulus, "modulus polynomial is reducible over F_" + std::to_string(p));
  auto f = std::shared_ptr<Field>(new Field());
  f->kind_ = FieldKind::Finite;
  f->p_ = p;
  f->deg_ = n;
  f->modulus_ = std::move(modulus);
  return f;
}

FieldPtr Field::rational_functions(FieldPtr base, std::vector<std::string> vars) {
  if (!base) fail(errc::bad_input, "null base field");
  if (vars.empty()) fail(errc::bad_input, "rational function field needs at least one variable");
  for (size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].empty()) fail(errc::bad_input, "empty variable name");
    for (size_t j = i + 1; j < vars.size(); ++j)
      if (vars[i] == vars[j]) fail(errc::bad_input, "duplicate variable name " + vars[i]);
  }
  auto f = std::shared_ptr<Field>(new Field());
  f->kind_ = FieldKind::RatFunc;
  f->base_ = std::move(base);
  f->vars_ = std::move(vars);
  return f;
}

FieldPtr Field::quadratic_extension(FieldPtr base, const Value& d) {
  if (!base) fail(errc::bad_input, "null base field");
  if (!d.field() || !d.field()->equals(*base)) fail(errc::bad_input, "d must lie in the base field");
  if (base->characteristic() == 2)
    fail(errc::unsupported_field, "quadratic extension in characteristic 2");
  if (d.is_zero()) fail(errc::square_adjunction, "cannot adjoin sqrt(0)");
  if (is_square(d).is_square)
    fail(errc::square_adjunction, "d is already a square in the base field");
  auto f = std::shared_ptr<Field>(new Field());
  f->kind_ = FieldKind::Quad;
  f->base_ = std::move(base);
  f->quad_d_ = d;
  return f;
}

BigInt Field::characteristic() const {
  switch (kind_) {
    case FieldKind::Prime:
    case FieldKind::Finite:
      return p_;
    case FieldKind::Rationals:
      return 0;
    case FieldKind::RatFunc:
    case FieldKind::Quad:
      return base_->characteristic();
  }
  return 0;
}

BigInt Field::order() const {
  if (!is_finite()) fail(errc::infinite_field, to_string() + " is infinite");
  BigInt q = 1;
  for (int i = 0; i < deg_; ++i) q *= p_;
  return q;
}

bool Field::equals(const Field& o) const {
  if (this == &o) return true;
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case FieldKind::Prime:
      return p_ == o.p_;
    case FieldKind::Finite:
      return p_ == o.p_ && deg_ == o.deg_ && modulus_ == o.modulus_;
    case FieldKind::Rationals:
      return true;
    case FieldKind::RatFunc:
      return vars_ == o.vars_ && base_->equals(*o.base_);
    case FieldKind::Quad:
      return base_->equals(*o.base_) && quad_d_ == o.quad_d_;
  }
  return false;
}

std::string Field::to_string() const {
  switch (kind_) {
    case FieldKind::Prime:
      return "GF(" + std::to_string(p_) + ")";
    case FieldKind::Finite: {
      BigInt q = order();
      return "GF(" + q.str() + ")";
    }
    case FieldKind::Rationals:
      return "Q";
    case FieldKind::RatFunc: {
      std::string s = base_->to_string() + "(";
      for (size_t i = 0; i < vars_.size(); ++i) {
        if (i) s += ",";
        s += vars_[i];
      }
      return s + ")";
    }
    case FieldKind::Quad: {
      if (base_->kind() == FieldKind::Rationals && quad_d_ == base_->from_int(-1)) return "Q(i)";
      return base_->to_string() + "[sqrt(" + quad_d_.to_string() + ")]";
    }
  }
  return "?";
}

Value Field::zero() const { return from_int(0); }
Value Field::one() const { return from_int(1); }

Value Field::from_int(int64_t n) const { return from_bigint(BigInt(n)); }

Value Field::from_bigint(const BigInt& n) const {
  Value v;
  v.field_ = shared_from_this();
  switch (kind_) {
    case FieldKind::Prime: {
      BigInt r = n % p_;
      if (r < 0) r += p_;
      v.rep_ = static_cast<int64_t>(r);
      return v;
    }
    case FieldKind::Finite: {
      BigInt r = n % p_;
      if (r < 0) r += p_;
      std::vector<int64_t> coords(deg_, 0);
      coords[0] = static_cast<int64_t>(r);
      v.rep_ = std::move(coords);
      return v;
    }
    case FieldKind::Rationals:
      v.rep_ = BigRat(n);
      return v;
    case FieldKind::RatFunc: {
      MPoly num = MPoly::constant(base_, static_cast<int>(vars_.size()), base_->from_bigint(n));
      MPoly den = MPoly::constant(base_, static_cast<int>(vars_.size()), base_->one());
      return make_ratfunc_value(shared_from_this(), std::move(num), std::move(den));
    }
    case FieldKind::Quad:
      return make_quad_value(shared_from_this(), base_->from_bigint(n), base_->zero());
  }
  return v;
}

Value Field::element_at(int64_t index) const {
  if (!is_finite()) fail(errc::infinite_field, "element_at needs a finite field");
  if (kind_ == FieldKind::Prime) {
    if (index < 0 || index >= p_) fail(errc::bad_input, "element index out of range");
    Value v;
    v.field_ = shared_from_this();
    v.rep_ = index;
    return v;
  }
  std::vector<int64_t> coords(deg_, 0);
  int64_t t = index;
  for (int j = 0; j < deg_; ++j) {
    coords[j] = t % p_;
    t /= p_;
  }
  if (t != 0 || index < 0) fail(errc::bad_input, "element index out of range");
  Value v;
  v.field_ = shared_from_this();
  v.rep_ = std::move(coords);
  return v;
}

int64_t Field::index_of(const Value& x) const {
  if (kind_ == FieldKind::Prime) return x.prime_rep();
  if (kind_ == FieldKind::Finite) {
    const auto& c = x.finite_rep();
    int64_t idx = 0;
    for (int j = deg_ - 1; j >= 0; --j) idx = idx * p_ + c[j];
    return idx;
  }
  fail(errc::infinite_field, "index_of needs a finite field");
}

ElementStream::ElementStream(FieldPtr f) : f_(std::move(f)) {
  if (!f_->is_finite()) fail(errc::infinite_field, f_->to_string() + " is not enumerable");
  count_ = static_cast<int64_t>(f_->order());
}

Value ElementStream::next() { return f_->element_at(idx_++); }

// --- descriptor parsing ------------------------------------------------------

namespace {

struct DescParser {
  const std::string& s;
  size_t pos = 0;

  explicit DescParser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool peek_is(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }

  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (start == pos) fail(errc::syntax_error, "expected identifier at position " + std::to_string(pos));
    return s.substr(start, pos - start);
  }

  int64_t number() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail(errc::syntax_error, "expected number at position " + std::to_string(pos));
    return std::stoll(s.substr(start, pos - start));
  }

  FieldPtr parse() {
    skip_ws();
    FieldPtr f;
    if (s.compare(pos, 2, "GF") == 0) {
      pos += 2;
      if (!eat('(')) fail(errc::syntax_error, "expected ( after GF");
      int64_t q = number();
      if (!eat(')')) fail(errc::syntax_error, "expected ) after field order");
      f = finite_of_order(q);
    } else if (pos < s.size() && s[pos] == 'Q') {
      ++pos;
      f = Field::rationals();
      if (peek_is('(')) {
        // Q(i) only; other parenthesized suffixes are variable lists
        size_t save = pos;
        ++pos;
        skip_ws();
        if (pos < s.size() && s[pos] == 'i') {
          size_t save_i = pos;
          ++pos;
          skip_ws();
          if (pos < s.size() && s[pos] == ')') {
            ++pos;
            f = Field::quadratic_extension(f, f->from_int(-1));
          } else {
            pos = save_i;
            pos = save;  // fall through to variable-list handling
          }
        } else {
          pos = save;
        }
      }
    } else {
      fail(errc::syntax_error, "unknown field descriptor: " + s);
    }
    // variable-list suffixes, possibly nested: base(v1,v2)(w)
    while (peek_is('(')) {
      eat('(');
      std::vector<std::string> vars;
      vars.push_back(ident());
      while (eat(',')) vars.push_back(ident());
      if (!eat(')')) fail(errc::syntax_error, "expected ) after variable list");
      f = Field::rational_functions(f, std::move(vars));
    }
    skip_ws();
    if (pos != s.size()) fail(errc::syntax_error, "trailing input in field descriptor: " + s);
    return f;
  }

  static FieldPtr finite_of_order(int64_t q) {
    if (q < 2) fail(errc::bad_input, "field order must be >= 2");
    int64_t p = 0;
    for (int64_t d = 2; d * d <= q; ++d)
      if (q % d == 0) {
        p = d;
        break;
      }
    if (p == 0) return Field::prime_field(q);
    int n = 0;
    int64_t t = q;
    while (t % p == 0) {
      t /= p;
      ++n;
    }
    if (t != 1) fail(errc::not_prime, std::to_string(q) + " is not a prime power");
    return Field::finite_field(p, n);
  }
};

}  // namespace

FieldPtr Field::parse(const std::string& descriptor) {
  DescParser p(descriptor);
  return p.parse();
}

}  // namespace pfl
