#include "pfl/valuation.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace pfl {

bool LexValue::operator<(const LexValue& o) const {
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] != o.v[i]) return v[i] < o.v[i];
  return false;
}

bool LexValue::is_zero() const {
  return std::all_of(v.begin(), v.end(), [](int64_t x) { return x == 0; });
}

LexValue LexValue::operator+(const LexValue& o) const {
  LexValue r = *this;
  for (size_t i = 0; i < v.size(); ++i) r.v[i] += o.v[i];
  return r;
}

LexValue LexValue::operator-(const LexValue& o) const {
  LexValue r = *this;
  for (size_t i = 0; i < v.size(); ++i) r.v[i] -= o.v[i];
  return r;
}

std::string LexValue::to_string() const {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

namespace {

// multiplicative order of the Frobenius on x, i.e. [k(x):k] for finite fields
int frobenius_degree(const Value& x, const BigInt& k_order) {
  Value y = x.pow(k_order);
  int d = 1;
  while (!(y == x)) {
    y = y.pow(k_order);
    ++d;
  }
  return d;
}

}  // namespace

Center::Center(FieldPtr K, FieldPtr l, std::vector<Value> point)
    : K_(std::move(K)), l_(std::move(l)), b_(std::move(point)) {
  if (K_->kind() != FieldKind::RatFunc)
    fail(errc::bad_input, "center needs a rational function field ambient");
  const FieldPtr& k = K_->base();
  for (const auto& bi : b_)
    if (!bi.field()->equals(*l_)) fail(errc::bad_input, "center coordinate outside the residue field");
  // l must be generated over k by the coordinates
  if (l_->equals(*k)) {
    // trivial extension: always generated
  } else if (k->is_finite() && l_->is_finite()) {
    if (l_->prime() != k->prime() || l_->ext_degree() % k->ext_degree() != 0)
      fail(errc::bad_input, "residue field is not an extension of the constant field");
    BigInt korder = k->order();
    int target = l_->ext_degree() / k->ext_degree();
    int64_t g = 1;
    for (const auto& bi : b_) {
      int d = frobenius_degree(bi, korder);
      g = std::lcm<int64_t>(g, d);
    }
    if (g != target)
      fail(errc::bad_input, "residue field is not generated by the center coordinates");
  } else if (l_->kind() == FieldKind::Quad && l_->base()->equals(*k)) {
    bool proper = false;
    for (const auto& bi : b_)
      if (!bi.quad_rep().v.is_zero()) proper = true;
    if (!proper) fail(errc::bad_input, "residue field is not generated by the center coordinates");
  } else {
    fail(errc::unsupported_field, "unsupported residue field extension for centers");
  }
  L_ = l_->equals(*k) ? K_ : Field::rational_functions(l_, K_->vars());
}

namespace {

// shift every variable by the center point: g(t) -> g(t + b)
MPoly shift_to_center(const MPoly& g, const Center& c) {
  MPoly out = g;
  for (int i = 0; i < g.nvars(); ++i) out = out.shifted(i, c.point()[i]);
  return out;
}

// lex-min exponent vector of the support, coordinate 1 most significant
LexValue poly_min_val(const MPoly& g) {
  LexValue best;
  bool first = true;
  for (const auto& [e, cf] : g.terms()) {
    LexValue cand;
    cand.v.assign(e.begin(), e.end());
    if (first || cand < best) {
      best = cand;
      first = false;
    }
  }
  return best;
}

struct ShiftedParts {
  MPoly num, den;
};

ShiftedParts shifted_parts(const Value& f, const Center& c) {
  auto fv = coerce(f, c.extended_ambient());
  if (!fv) fail(errc::bad_input, "element does not embed into the valuation's ambient field");
  const auto& rep = fv->ratfunc_rep();
  return {shift_to_center(rep.num, c), shift_to_center(rep.den, c)};
}

}  // namespace

LexValue lex_val(const Value& f, const Center& c) {
  if (f.is_zero()) fail(errc::zero_input, "lex_val of zero");
  ShiftedParts parts = shifted_parts(f, c);
  return poly_min_val(parts.num) - poly_min_val(parts.den);
}

Value residue(const Value& f, const Center& c) {
  if (f.is_zero()) fail(errc::zero_input, "residue of zero");
  ShiftedParts parts = shifted_parts(f, c);
  LexValue vn = poly_min_val(parts.num);
  LexValue vd = poly_min_val(parts.den);
  if (!(vn == vd)) fail(errc::not_a_unit, "element has nonzero valuation " + (vn - vd).to_string());
  Exps e(vn.v.begin(), vn.v.end());
  return parts.num.coeff(e) / parts.den.coeff(e);
}

bool vals_distinct_mod(const std::vector<LexValue>& values, int64_t ell) {
  if (ell < 2) fail(errc::bad_input, "modulus must be >= 2");
  std::set<std::vector<int64_t>> seen;
  for (const auto& lv : values) {
    std::vector<int64_t> red(lv.v.size());
    for (size_t i = 0; i < lv.v.size(); ++i) {
      int64_t r = lv.v[i] % ell;
      red[i] = r < 0 ? r + ell : r;
    }
    if (!seen.insert(red).second) return false;
  }
  return true;
}

}  // namespace pfl
