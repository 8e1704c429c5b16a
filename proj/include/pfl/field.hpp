#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pfl/errors.hpp"

namespace pfl {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

class Field;
class Value;
class MPoly;
using FieldPtr = std::shared_ptr<const Field>;

enum class FieldKind { Prime, Finite, Rationals, RatFunc, Quad };

// Exponent vector of a monomial; length = number of variables of the ring.
using Exps = std::vector<int32_t>;

// Graded lexicographic order, higher term first. Ties on total degree are
// broken by the leftmost differing exponent, larger exponent first.
struct GrlexGreater {
  bool operator()(const Exps& a, const Exps& b) const;
};

struct RatRep;   // reduced fraction of multivariate polynomials
struct QuadRep;  // u + v*sqrt(d) over the base field

// Immutable element of a concrete field. Copies are cheap (shared reps).
class Value {
 public:
  Value() = default;

  const FieldPtr& field() const { return field_; }
  bool valid() const { return field_ != nullptr; }
  bool is_zero() const;
  bool is_one() const;

  Value operator+(const Value& o) const;
  Value operator-(const Value& o) const;
  Value operator*(const Value& o) const;
  Value operator/(const Value& o) const;
  Value operator-() const;
  Value inverse() const;
  Value pow(int64_t e) const;
  Value pow(const BigInt& e) const;

  bool operator==(const Value& o) const;
  bool operator!=(const Value& o) const { return !(*this == o); }

  // Deterministic total order on elements of one field (used for canonical
  // sets and reproducible reports, not for any field semantics).
  static int compare(const Value& a, const Value& b);
  bool operator<(const Value& o) const { return compare(*this, o) < 0; }

  std::string to_string() const;

  // Representation accessors; each asserts the matching field kind.
  int64_t prime_rep() const;
  const std::vector<int64_t>& finite_rep() const;
  const BigRat& rat_rep() const;
  const RatRep& ratfunc_rep() const;
  const QuadRep& quad_rep() const;

  friend class Field;
  friend Value make_ratfunc_value(const FieldPtr& f, MPoly num, MPoly den);
  friend Value make_quad_value(const FieldPtr& f, Value u, Value v);

 private:
  FieldPtr field_;
  std::variant<std::monostate,
               int64_t,                         // Prime
               std::vector<int64_t>,            // Finite (coords, length n)
               BigRat,                          // Rationals
               std::shared_ptr<const RatRep>,   // RatFunc
               std::shared_ptr<const QuadRep>>  // Quad
      rep_;
};

// Sparse multivariate polynomial over a coefficient field. Terms are kept in
// graded-lex descending order; no zero coefficients are stored.
class MPoly {
 public:
  MPoly() = default;
  MPoly(FieldPtr k, int nvars);  // zero polynomial

  static MPoly constant(const FieldPtr& k, int nvars, const Value& c);
  static MPoly variable(const FieldPtr& k, int nvars, int index);
  static MPoly monomial(const FieldPtr& k, Exps e, const Value& c);

  const FieldPtr& coeff_field() const { return k_; }
  int nvars() const { return nvars_; }
  const std::map<Exps, Value, GrlexGreater>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Value constant_value() const;  // value of a constant polynomial (0 if zero)

  int degree(int var) const;   // -1 for the zero polynomial
  int total_degree() const;    // -1 for the zero polynomial
  Value coeff(const Exps& e) const;

  MPoly operator+(const MPoly& o) const;
  MPoly operator-(const MPoly& o) const;
  MPoly operator*(const MPoly& o) const;
  MPoly operator-() const;
  MPoly scaled(const Value& c) const;
  bool operator==(const MPoly& o) const;

  // Leading term under grlex.
  const Exps& lead_exps() const;
  const Value& lead_coeff() const;
  MPoly monic() const;  // scaled so the grlex-leading coefficient is 1

  MPoly derivative(int var) const;
  // Coefficient of var^k, as a polynomial in the same variable space.
  MPoly coeff_of(int var, int k) const;
  // Substitute var -> var + b (exact Taylor shift).
  MPoly shifted(int var, const Value& b) const;
  // Full evaluation; point values must live in the coefficient field.
  Value eval(const std::vector<Value>& point) const;

  void add_term(const Exps& e, const Value& c);  // accumulating insert

  std::string to_string(const std::vector<std::string>& names) const;

 private:
  FieldPtr k_;
  int nvars_ = 0;
  std::map<Exps, Value, GrlexGreater> terms_;
};

struct RatRep {
  MPoly num;
  MPoly den;  // monic under grlex; gcd(num, den) = 1
};

struct QuadRep {
  Value u;
  Value v;  // element is u + v*sqrt(d)
};

// Description of a concrete computable field. Construct through the static
// factories, which validate invariants (primality, irreducibility of the
// modulus, non-squareness of adjoined d).
class Field : public std::enable_shared_from_this<Field> {
 public:
  FieldKind kind() const { return kind_; }
  BigInt characteristic() const;
  bool is_finite() const { return kind_ == FieldKind::Prime || kind_ == FieldKind::Finite; }
  BigInt order() const;  // finite fields only

  int64_t prime() const { return p_; }           // Prime/Finite
  int ext_degree() const { return deg_; }        // Finite (1 for Prime)
  const std::vector<int64_t>& modulus() const { return modulus_; }

  const FieldPtr& base() const { return base_; }               // RatFunc/Quad
  const std::vector<std::string>& vars() const { return vars_; }  // RatFunc
  const Value& quad_d() const { return quad_d_; }              // Quad

  bool equals(const Field& o) const;
  std::string to_string() const;

  Value zero() const;
  Value one() const;
  Value from_int(int64_t n) const;
  Value from_bigint(const BigInt& n) const;

  // Elements of finite fields carry a dense index in [0, order); the index
  // digits in base p are the coordinates, constant digit first.
  Value element_at(int64_t index) const;
  int64_t index_of(const Value& x) const;

  static FieldPtr rationals();
  static FieldPtr prime_field(int64_t p);
  static FieldPtr finite_field(int64_t p, int n);  // canonical modulus
  static FieldPtr finite_field(int64_t p, int n, std::vector<int64_t> modulus);
  static FieldPtr rational_functions(FieldPtr base, std::vector<std::string> vars);
  static FieldPtr quadratic_extension(FieldPtr base, const Value& d);
  // Descriptor grammar: Q | Q(i) | GF(q) | <base>(v1,...,vr)
  static FieldPtr parse(const std::string& descriptor);

  // Lexicographically least monic irreducible of degree n over F_p
  // (coefficient of u^{n-1} most significant).
  static std::vector<int64_t> canonical_modulus(int64_t p, int n);

 private:
  Field() = default;
  friend class Value;

  FieldKind kind_ = FieldKind::Rationals;
  int64_t p_ = 0;
  int deg_ = 1;
  std::vector<int64_t> modulus_;  // monic, length deg_+1, coeffs in [0,p)
  FieldPtr base_;
  std::vector<std::string> vars_;
  Value quad_d_;
};

// Streams every element of a finite field exactly once in index order.
// Throws infinite_field otherwise.
class ElementStream {
 public:
  explicit ElementStream(FieldPtr f);
  bool done() const { return idx_ >= count_; }
  Value next();
  void reset() { idx_ = 0; }
  int64_t size() const { return count_; }

 private:
  FieldPtr f_;
  int64_t idx_ = 0;
  int64_t count_ = 0;
};

struct SquareResult {
  bool is_square = false;
  std::optional<Value> root;
};

// Decides squareness with a witness root. Supported for every shipped field
// kind; throws unsupported_field where no decision procedure exists.
SquareResult is_square(const Value& x);

// Embeds x into target if a canonical embedding exists (identity, prime into
// extension, subfield into extension field, base into rational-function or
// quadratic extension, and compositions thereof).
std::optional<Value> coerce(const Value& x, const FieldPtr& target);

// Parses an element expression over f: +, -, *, /, ^, integers, variable
// names, "u" (extension generator), "i" (sqrt(-1) of Q(i)).
Value parse_element(const FieldPtr& f, const std::string& text);

Value make_ratfunc_value(const FieldPtr& f, MPoly num, MPoly den);
Value make_quad_value(const FieldPtr& f, Value u, Value v);

// Partial derivative of a rational function with respect to variable index.
Value ratfunc_derivative(const Value& f, int var);

// --- polynomial toolkit -----------------------------------------------------

MPoly mp_gcd(const MPoly& a, const MPoly& b);
// Exact division; nullopt when b does not divide a.
std::optional<MPoly> mp_divexact(const MPoly& a, const MPoly& b);
// Exact square root, when one exists.
std::optional<MPoly> mp_sqrt(const MPoly& f);

// Resultant of two univariate polynomials in `var` whose other variables are
// inert (coefficients in the field k_).
Value mp_resultant(const MPoly& f, const MPoly& g, int var);

// Discriminant with the standard normalization
// (-1)^{m(m-1)/2} Res(f, f')/lc(f). Throws zero_derivative when f' = 0.
Value poly_discriminant(const MPoly& f, int var);

// True iff gcd(f, df/dvar) is constant.
bool squarefree_check(const MPoly& f, int var);

bool is_prime_int(int64_t n);

}  // namespace pfl
