#include <algorithm>
#include <cassert>
#include <cctype>

#include "pfl/detail/fp_poly.hpp"
#include "pfl/field.hpp"

namespace pfl {

namespace {

void check_same_field(const Value& a, const Value& b) {
  if (!a.field() || !b.field() || !a.field()->equals(*b.field()))
    fail(errc::bad_input, "elements of different fields");
}

}  // namespace

Value make_ratfunc_value(const FieldPtr& f, MPoly num, MPoly den) {
  if (den.is_zero()) fail(errc::bad_input, "division by zero rational function");
  if (num.is_zero()) {
    den = MPoly::constant(num.coeff_field(), num.nvars(), num.coeff_field()->one());
  } else {
    MPoly g = mp_gcd(num, den);
    if (!g.is_constant()) {
      num = *mp_divexact(num, g);
      den = *mp_divexact(den, g);
    }
    Value lc = den.lead_coeff();
    if (!lc.is_one()) {
      Value inv = lc.inverse();
      num = num.scaled(inv);
      den = den.scaled(inv);
    }
  }
  Value v;
  v.field_ = f;
  auto rep = std::make_shared<RatRep>();
  rep->num = std::move(num);
  rep->den = std::move(den);
  v.rep_ = std::shared_ptr<const RatRep>(std::move(rep));
  return v;
}

Value make_quad_value(const FieldPtr& f, Value u, Value v) {
  Value out;
  out.field_ = f;
  auto rep = std::make_shared<QuadRep>();
  rep->u = std::move(u);
  rep->v = std::move(v);
  out.rep_ = std::shared_ptr<const QuadRep>(std::move(rep));
  return out;
}

int64_t Value::prime_rep() const { return std::get<int64_t>(rep_); }
const std::vector<int64_t>& Value::finite_rep() const { return std::get<std::vector<int64_t>>(rep_); }
const BigRat& Value::rat_rep() const { return std::get<BigRat>(rep_); }
const RatRep& Value::ratfunc_rep() const { return *std::get<std::shared_ptr<const RatRep>>(rep_); }
const QuadRep& Value::quad_rep() const { return *std::get<std::shared_ptr<const QuadRep>>(rep_); }

bool Value::is_zero() const {
  switch (field_->kind()) {
    case FieldKind::Prime:
      return prime_rep() == 0;
    case FieldKind::Finite: {
      for (auto c : finite_rep())
        if (c != 0) return false;
      return true;
    }
    case FieldKind::Rationals:
      return rat_rep() == 0;
    case FieldKind::RatFunc:
      return ratfunc_rep().num.is_zero();
    case FieldKind::Quad:
      return quad_rep().u.is_zero() && quad_rep().v.is_zero();
  }
  return false;
}

bool Value::is_one() const { return *this == field_->one(); }

Value Value::operator+(const Value& o) const {
  check_same_field(*this, o);
  Value r;
  r.field_ = field_;
  switch (field_->kind()) {
    case FieldKind::Prime:
      r.rep_ = detail::mod_p(prime_rep() + o.prime_rep(), field_->prime());
      return r;
    case FieldKind::Finite: {
      auto a = finite_rep();
      const auto& b = o.finite_rep();
      for (size_t i = 0; i < a.size(); ++i) a[i] = detail::mod_p(a[i] + b[i], field_->prime());
      r.rep_ = std::move(a);
      return r;
    }
    case FieldKind::Rationals:
      r.rep_ = BigRat(rat_rep() + o.rat_rep());
      return r;
    case FieldKind::RatFunc: {
      const auto& x = ratfunc_rep();
      const auto& y = o.ratfunc_rep();
      return make_ratfunc_value(field_, x.num * y.den + y.num * x.den, x.den * y.den);
    }
    case FieldKind::Quad:
      return make_quad_value(field_, quad_rep().u + o.quad_rep().u, quad_rep().v + o.quad_rep().v);
  }
  return r;
}

Value Value::operator-() const {
  Value r;
  r.field_ = field_;
  switch (field_->kind()) {
    case FieldKind::Prime:
      r.rep_ = detail::mod_p(-prime_rep(), field_->prime());
      return r;
    case FieldKind::Finite: {
      auto a = finite_rep();
      for (auto& c : a) c = detail::mod_p(-c, field_->prime());
      r.rep_ = std::move(a);
      return r;
    }
    case FieldKind::Rationals:
      r.rep_ = BigRat(-rat_rep());
      return r;
    case FieldKind::RatFunc: {
      const auto& x = ratfunc_rep();
      return make_ratfunc_value(field_, -x.num, x.den);
    }
    case FieldKind::Quad:
      return make_quad_value(field_, -quad_rep().u, -quad_rep().v);
  }
  return r;
}

Value Value::operator-(const Value& o) const { return *this + (-o); }

Value Value::operator*(const Value& o) const {
  check_same_field(*this, o);
  Value r;
  r.field_ = field_;
  switch (field_->kind()) {
    case FieldKind::Prime:
      r.rep_ = detail::mod_p(prime_rep() * o.prime_rep(), field_->prime());
      return r;
    case FieldKind::Finite: {
      detail::FpPoly a(finite_rep().begin(), finite_rep().end());
      detail::FpPoly b(o.finite_rep().begin(), o.finite_rep().end());
      detail::FpPoly m(field_->modulus().begin(), field_->modulus().end());
      detail::FpPoly c = detail::fp_mod(detail::fp_mul(a, b, field_->prime()), m, field_->prime());
      c.resize(field_->ext_degree(), 0);
      r.rep_ = std::vector<int64_t>(c.begin(), c.end());
      return r;
    }
    case FieldKind::Rationals:
      r.rep_ = BigRat(rat_rep() * o.rat_rep());
      return r;
    case FieldKind::RatFunc: {
      const auto& x = ratfunc_rep();
      const auto& y = o.ratfunc_rep();
      return make_ratfunc_value(field_, x.num * y.num, x.den * y.den);
    }
    case FieldKind::Quad: {
      const auto& x = quad_rep();
      const auto& y = o.quad_rep();
      const Value& d = field_->quad_d();
      return make_quad_value(field_, x.u * y.u + d * (x.v * y.v), x.u * y.v + x.v * y.u);
    }
  }
  return r;
}

Value Value::inverse() const {
  if (is_zero()) fail(errc::bad_input, "inverse of zero");
  Value r;
  r.field_ = field_;
  switch (field_->kind()) {
    case FieldKind::Prime:
      r.rep_ = detail::fp_inv_scalar(prime_rep(), field_->prime());
      return r;
    case FieldKind::Finite: {
      detail::FpPoly a(finite_rep().begin(), finite_rep().end());
      detail::FpPoly m(field_->modulus().begin(), field_->modulus().end());
      detail::FpPoly g, s;
      detail::fp_ext_gcd(a, m, field_->prime(), g, s);
      // g is a nonzero constant; scale s by its inverse
      assert(g.size() == 1);
      int64_t gi = detail::fp_inv_scalar(g[0], field_->prime());
      for (auto& c : s) c = detail::mod_p(c * gi, field_->prime());
      s = detail::fp_mod(std::move(s), m, field_->prime());
      s.resize(field_->ext_degree(), 0);
      r.rep_ = std::vector<int64_t>(s.begin(), s.end());
      return r;
    }
    case FieldKind::Rationals:
      r.rep_ = BigRat(1 / rat_rep());
      return r;
    case FieldKind::RatFunc: {
      const auto& x = ratfunc_rep();
      return make_ratfunc_value(field_, x.den, x.num);
    }
    case FieldKind::Quad: {
      const auto& x = quad_rep();
      const Value& d = field_->quad_d();
      Value n = x.u * x.u - d * (x.v * x.v);  // norm; nonzero since d is a non-square
      Value ni = n.inverse();
      return make_quad_value(field_, x.u * ni, -(x.v * ni));
    }
  }
  return r;
}

Value Value::operator/(const Value& o) const { return *this * o.inverse(); }

Value Value::pow(int64_t e) const { return pow(BigInt(e)); }

Value Value::pow(const BigInt& e) const {
  if (e < 0) return inverse().pow(-e);
  Value r = field_->one();
  Value b = *this;
  BigInt k = e;
  while (k > 0) {
    if ((k & 1) != 0) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

bool Value::operator==(const Value& o) const {
  check_same_field(*this, o);
  switch (field_->kind()) {
    case FieldKind::Prime:
      return prime_rep() == o.prime_rep();
    case FieldKind::Finite:
      return finite_rep() == o.finite_rep();
    case FieldKind::Rationals:
      return rat_rep() == o.rat_rep();
    case FieldKind::RatFunc:
      return ratfunc_rep().num == o.ratfunc_rep().num && ratfunc_rep().den == o.ratfunc_rep().den;
    case FieldKind::Quad:
      return quad_rep().u == o.quad_rep().u && quad_rep().v == o.quad_rep().v;
  }
  return false;
}

namespace {

int compare_mpoly(const MPoly& a, const MPoly& b) {
  if (a.terms().size() != b.terms().size()) return a.terms().size() < b.terms().size() ? -1 : 1;
  auto it = a.terms().begin(), jt = b.terms().begin();
  for (; it != a.terms().end(); ++it, ++jt) {
    if (it->first != jt->first) return it->first < jt->first ? -1 : 1;
    int c = Value::compare(it->second, jt->second);
    if (c != 0) return c;
  }
  return 0;
}

}  // namespace

int Value::compare(const Value& a, const Value& b) {
  check_same_field(a, b);
  switch (a.field()->kind()) {
    case FieldKind::Prime:
      return a.prime_rep() < b.prime_rep() ? -1 : (a.prime_rep() > b.prime_rep() ? 1 : 0);
    case FieldKind::Finite: {
      int64_t ia = a.field()->index_of(a), ib = b.field()->index_of(b);
      return ia < ib ? -1 : (ia > ib ? 1 : 0);
    }
    case FieldKind::Rationals:
      return a.rat_rep() < b.rat_rep() ? -1 : (a.rat_rep() > b.rat_rep() ? 1 : 0);
    case FieldKind::RatFunc: {
      int c = compare_mpoly(a.ratfunc_rep().num, b.ratfunc_rep().num);
      if (c != 0) return c;
      return compare_mpoly(a.ratfunc_rep().den, b.ratfunc_rep().den);
    }
    case FieldKind::Quad: {
      int c = compare(a.quad_rep().u, b.quad_rep().u);
      if (c != 0) return c;
      return compare(a.quad_rep().v, b.quad_rep().v);
    }
  }
  return 0;
}

// --- printing -----------------------------------------------------------------

std::string Value::to_string() const {
  switch (field_->kind()) {
    case FieldKind::Prime:
      return std::to_string(prime_rep());
    case FieldKind::Finite: {
      const auto& c = finite_rep();
      std::string out;
      for (int i = field_->ext_degree() - 1; i >= 0; --i) {
        if (c[i] == 0) continue;
        std::string piece;
        if (i == 0) {
          piece = std::to_string(c[i]);
        } else {
          piece = (c[i] == 1 ? "" : std::to_string(c[i]) + "*");
          piece += "u";
          if (i > 1) piece += "^" + std::to_string(i);
        }
        out += (out.empty() ? "" : "+") + piece;
      }
      return out.empty() ? "0" : out;
    }
    case FieldKind::Rationals: {
      const BigRat& q = rat_rep();
      if (denominator(q) == 1) return numerator(q).str();
      return numerator(q).str() + "/" + denominator(q).str();
    }
    case FieldKind::RatFunc: {
      const auto& x = ratfunc_rep();
      std::string num = x.num.to_string(field_->vars());
      if (x.den.is_constant() && x.den.constant_value().is_one()) return num;
      std::string den = x.den.to_string(field_->vars());
      return "(" + num + ")/(" + den + ")";
    }
    case FieldKind::Quad: {
      const auto& x = quad_rep();
      std::string gen =
          (field_->base()->kind() == FieldKind::Rationals && field_->quad_d() == field_->base()->from_int(-1))
              ? "i"
              : "w";
      if (x.v.is_zero()) return x.u.to_string();
      std::string vs = x.v.to_string();
      std::string vpart = (vs == "1") ? gen
                          : (vs.find_first_of("+-*/") != std::string::npos && vs[0] != '-')
                              ? "(" + vs + ")*" + gen
                              : vs + "*" + gen;
      if (x.u.is_zero()) return vpart;
      std::string us = x.u.to_string();
      if (!vpart.empty() && vpart[0] == '-') return us + vpart;
      return us + "+" + vpart;
    }
  }
  return "?";
}

// --- squares ------------------------------------------------------------------

SquareResult is_square(const Value& x) {
  const FieldPtr& f = x.field();
  SquareResult res;
  if (x.is_zero()) {
    res.is_square = true;
    res.root = f->zero();
    return res;
  }
  switch (f->kind()) {
    case FieldKind::Prime:
    case FieldKind::Finite: {
      BigInt q = f->order();
      if (f->prime() == 2) {
        // Frobenius is bijective: root = x^(q/2)
        res.is_square = true;
        res.root = x.pow(q / 2);
        return res;
      }
      Value e = x.pow((q - 1) / 2);
      if (!(e == f->one())) return res;
      res.is_square = true;
      // deterministic witness: least element index whose square is x
      int64_t n = static_cast<int64_t>(q);
      for (int64_t i = 0; i < n; ++i) {
        Value c = f->element_at(i);
        if (c * c == x) {
          res.root = c;
          break;
        }
      }
      return res;
    }
    case FieldKind::Rationals: {
      const BigRat& r = x.rat_rep();
      if (r < 0) return res;
      BigInt n = numerator(r), d = denominator(r);
      BigInt sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
      if (sn * sn != n || sd * sd != d) return res;
      Value root;
      root = f->from_bigint(sn) / f->from_bigint(sd);
      res.is_square = true;
      res.root = root;
      return res;
    }
    case FieldKind::RatFunc: {
      const auto& rep = x.ratfunc_rep();
      auto sn = mp_sqrt(rep.num);
      if (!sn) return res;
      auto sd = mp_sqrt(rep.den);
      if (!sd) return res;
      res.is_square = true;
      res.root = make_ratfunc_value(f, *sn, *sd);
      return res;
    }
    case FieldKind::Quad: {
      const auto& rep = x.quad_rep();
      const Value& d = f->quad_d();
      const FieldPtr& B = f->base();
      if (rep.v.is_zero()) {
        SquareResult s = is_square(rep.u);
        if (s.is_square) {
          res.is_square = true;
          res.root = make_quad_value(f, *s.root, B->zero());
          return res;
        }
        SquareResult s2 = is_square(rep.u / d);
        if (s2.is_square) {
          res.is_square = true;
          res.root = make_quad_value(f, B->zero(), *s2.root);
          return res;
        }
        return res;
      }
      // solve (a + b sqrt(d))^2 = u + v sqrt(d): a^2 = (u +- sqrt(u^2 - d v^2))/2
      Value norm = rep.u * rep.u - d * (rep.v * rep.v);
      SquareResult sn = is_square(norm);
      if (!sn.is_square) return res;
      Value two = B->from_int(2);
      for (int sign = 0; sign < 2; ++sign) {
        Value t = (sign == 0) ? (rep.u + *sn.root) / two : (rep.u - *sn.root) / two;
        SquareResult sa = is_square(t);
        if (sa.is_square && !sa.root->is_zero()) {
          Value a = *sa.root;
          Value b = rep.v / (two * a);
          Value cand = make_quad_value(f, a, b);
          if (cand * cand == x) {
            res.is_square = true;
            res.root = cand;
            return res;
          }
        }
      }
      return res;
    }
  }
  return res;
}

// --- coercion ------------------------------------------------------------------

std::optional<Value> coerce(const Value& x, const FieldPtr& target) {
  const FieldPtr& src = x.field();
  if (src->equals(*target)) return x;
  switch (target->kind()) {
    case FieldKind::RatFunc: {
      if (src->kind() == FieldKind::RatFunc && src->vars() == target->vars()) {
        // map coefficients of num/den into the target base field
        const auto& rep = x.ratfunc_rep();
        MPoly num(target->base(), rep.num.nvars());
        MPoly den(target->base(), rep.den.nvars());
        for (const auto& [e, c] : rep.num.terms()) {
          auto cc = coerce(c, target->base());
          if (!cc) return std::nullopt;
          num.add_term(e, *cc);
        }
        for (const auto& [e, c] : rep.den.terms()) {
          auto cc = coerce(c, target->base());
          if (!cc) return std::nullopt;
          den.add_term(e, *cc);
        }
        return make_ratfunc_value(target, std::move(num), std::move(den));
      }
      auto cb = coerce(x, target->base());
      if (!cb) return std::nullopt;
      int nv = static_cast<int>(target->vars().size());
      return make_ratfunc_value(target, MPoly::constant(target->base(), nv, *cb),
                                MPoly::constant(target->base(), nv, target->base()->one()));
    }
    case FieldKind::Quad: {
      auto cb = coerce(x, target->base());
      if (!cb) return std::nullopt;
      return make_quad_value(target, *cb, target->base()->zero());
    }
    case FieldKind::Finite: {
      if (src->kind() == FieldKind::Prime && src->prime() == target->prime())
        return target->from_int(x.prime_rep());
      if (src->kind() == FieldKind::Finite && src->prime() == target->prime() &&
          target->ext_degree() % src->ext_degree() == 0) {
        // embed through the first root of the source modulus in the target
        int64_t q = static_cast<int64_t>(target->order());
        Value root;
        bool found = false;
        for (int64_t i = 0; i < q && !found; ++i) {
          Value cand = target->element_at(i);
          Value acc = target->zero();
          Value pw = target->one();
          for (int64_t mc : src->modulus()) {
            acc = acc + target->from_int(mc) * pw;
            pw = pw * cand;
          }
          if (acc.is_zero()) {
            root = cand;
            found = true;
          }
        }
        if (!found) return std::nullopt;
        const auto& c = x.finite_rep();
        Value acc = target->zero();
        Value pw = target->one();
        for (auto ci : c) {
          acc = acc + target->from_int(ci) * pw;
          pw = pw * root;
        }
        return acc;
      }
      return std::nullopt;
    }
    case FieldKind::Prime:
      if (src->kind() == FieldKind::Finite && src->prime() == target->prime()) {
        // only constants descend
        const auto& c = x.finite_rep();
        for (size_t i = 1; i < c.size(); ++i)
          if (c[i] != 0) return std::nullopt;
        return target->from_int(c[0]);
      }
      return std::nullopt;
    case FieldKind::Rationals:
      return std::nullopt;
  }
  return std::nullopt;
}

// --- element expression parsing --------------------------------------------------

namespace {

// resolves a name (variable of some rational-function layer, extension
// generator "u", quadratic generator "i"/"w") into the tower field f
std::optional<Value> resolve_name(const FieldPtr& f, const std::string& name) {
  switch (f->kind()) {
    case FieldKind::RatFunc: {
      const auto& vars = f->vars();
      for (size_t i = 0; i < vars.size(); ++i) {
        if (vars[i] == name) {
          int nv = static_cast<int>(vars.size());
          return make_ratfunc_value(f, MPoly::variable(f->base(), nv, static_cast<int>(i)),
                                    MPoly::constant(f->base(), nv, f->base()->one()));
        }
      }
      auto b = resolve_name(f->base(), name);
      if (!b) return std::nullopt;
      return coerce(*b, f);
    }
    case FieldKind::Finite:
      // the generator u has coordinate vector (0,1,0,...), i.e. index p
      if (name == "u") return f->element_at(f->prime());
      return std::nullopt;
    case FieldKind::Quad: {
      bool is_i = f->base()->kind() == FieldKind::Rationals && f->quad_d() == f->base()->from_int(-1);
      if ((is_i && name == "i") || (!is_i && name == "w"))
        return make_quad_value(f, f->base()->zero(), f->base()->one());
      auto b = resolve_name(f->base(), name);
      if (!b) return std::nullopt;
      return coerce(*b, f);
    }
    default:
      return std::nullopt;
  }
}

struct ElemParser {
  const FieldPtr& f;
  const std::string& s;
  size_t pos = 0;

  ElemParser(const FieldPtr& field, const std::string& text) : f(field), s(text) {}

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

  Value parse() {
    Value v = expr();
    skip_ws();
    if (pos != s.size())
      fail(errc::syntax_error, "trailing input at position " + std::to_string(pos) + " in element");
    return v;
  }

  Value expr() {
    Value v = eat('-') ? -term() : term();
    while (true) {
      if (eat('+'))
        v = v + term();
      else if (eat('-'))
        v = v - term();
      else
        return v;
    }
  }

  Value term() {
    Value v = factor();
    while (true) {
      if (eat('*'))
        v = v * factor();
      else if (eat('/'))
        v = v / factor();
      else
        return v;
    }
  }

  Value factor() {
    Value v = atom();
    skip_ws();
    if (eat('^')) {
      skip_ws();
      bool neg = eat('-');
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) fail(errc::syntax_error, "expected exponent at position " + std::to_string(pos));
      int64_t e = std::stoll(s.substr(start, pos - start));
      v = v.pow(neg ? -e : e);
    }
    return v;
  }

  Value atom() {
    skip_ws();
    if (pos >= s.size()) fail(errc::syntax_error, "unexpected end of element expression");
    if (eat('(')) {
      Value v = expr();
      if (!eat(')')) fail(errc::syntax_error, "expected ) at position " + std::to_string(pos));
      return v;
    }
    if (eat('-')) return -atom();
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      return f->from_bigint(BigInt(s.substr(start, pos - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
        ++pos;
      std::string name = s.substr(start, pos - start);
      auto v = resolve_name(f, name);
      if (!v) fail(errc::syntax_error, "unknown name '" + name + "' in " + f->to_string());
      return *v;
    }
    fail(errc::syntax_error, std::string("unexpected character '") + c + "' in element expression");
  }
};

}  // namespace

Value parse_element(const FieldPtr& f, const std::string& text) {
  ElemParser p(f, text);
  return p.parse();
}

Value ratfunc_derivative(const Value& f, int var) {
  if (f.field()->kind() != FieldKind::RatFunc)
    fail(errc::bad_input, "derivative needs a rational function");
  const auto& rep = f.ratfunc_rep();
  MPoly dn = rep.num.derivative(var);
  MPoly dd = rep.den.derivative(var);
  return make_ratfunc_value(f.field(), dn * rep.den - rep.num * dd, rep.den * rep.den);
}

}  // namespace pfl
