#pragma once

// Index-based arithmetic for a finite field, used by the enumeration-heavy
// paths (curve census, exhaustive isotropy search, formula evaluation).
// Element index i has base-p digits equal to the coordinates of the element,
// constant digit first, matching Field::element_at.

#include <cstdint>
#include <vector>

#include "pfl/field.hpp"

namespace pfl {

class SmallField {
 public:
  explicit SmallField(FieldPtr f);

  const FieldPtr& field() const { return f_; }
  int64_t q() const { return q_; }
  int64_t p() const { return p_; }
  int n() const { return n_; }

  int add(int a, int b) const { return add_t_.empty() ? add_slow(a, b) : add_t_[a * q_ + b]; }
  int mul(int a, int b) const { return mul_t_.empty() ? mul_slow(a, b) : mul_t_[a * q_ + b]; }
  int neg(int a) const { return neg_t_[a]; }
  int sub(int a, int b) const { return add(a, neg(b)); }
  int inv(int a) const;  // a != 0
  int div(int a, int b) const { return mul(a, inv(b)); }
  int pow(int a, int64_t e) const;

  bool square(int a) const { return sqrt_t_[a] >= 0; }
  int sqrt_of(int a) const { return sqrt_t_[a]; }  // -1 when none; least root otherwise

  Value to_value(int a) const { return f_->element_at(a); }
  int from_value(const Value& v) const { return static_cast<int>(f_->index_of(v)); }

 private:
  int add_slow(int a, int b) const;
  int mul_slow(int a, int b) const;

  FieldPtr f_;
  int64_t q_ = 0, p_ = 0;
  int n_ = 1;
  std::vector<int64_t> modulus_;
  std::vector<int> add_t_, mul_t_;  // built when q <= table_limit
  std::vector<int> neg_t_, sqrt_t_;

  static constexpr int64_t kTableLimit = 1024;
};

// Dense matrix rank over an arbitrary field, by Gaussian elimination.
int matrix_rank(std::vector<std::vector<Value>> m);

// Determinant of a square matrix over a field.
Value matrix_det(std::vector<std::vector<Value>> m, const FieldPtr& f);

}  // namespace pfl
