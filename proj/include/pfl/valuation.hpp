#pragma once

// The Z^r lexicographically ordered valuation on k(t_1..t_r) centered at a
// point b with coordinates in a finite extension l of k. Coordinate 1 is the
// most significant, matching the nesting l((t_r-b_r))...((t_1-b_1)).

#include <cstdint>
#include <vector>

#include "pfl/field.hpp"

namespace pfl {

struct LexValue {
  std::vector<int64_t> v;

  bool operator==(const LexValue& o) const { return v == o.v; }
  bool operator<(const LexValue& o) const;  // coordinate 1 most significant
  bool is_zero() const;
  LexValue operator+(const LexValue& o) const;
  LexValue operator-(const LexValue& o) const;
  std::string to_string() const;
};

class Center {
 public:
  // K = k(t1..tr); point coordinates in l, a finite extension of k reachable
  // by coerce(). Verifies that l is generated over k by the coordinates.
  Center(FieldPtr K, FieldPtr l, std::vector<Value> point);

  const FieldPtr& ambient() const { return K_; }          // k(t1..tr)
  const FieldPtr& extended_ambient() const { return L_; } // l(t1..tr)
  const FieldPtr& residue_field() const { return l_; }
  const std::vector<Value>& point() const { return b_; }
  int rank() const { return static_cast<int>(b_.size()); }

 private:
  FieldPtr K_, L_, l_;
  std::vector<Value> b_;
};

// v(f) for nonzero f in the ambient (or extended ambient) field.
LexValue lex_val(const Value& f, const Center& c);

// Residue of a unit (v(f) = 0) in l; throws not_a_unit otherwise.
Value residue(const Value& f, const Center& c);

// True iff the images of the vectors in (Z/l)^r are pairwise distinct.
bool vals_distinct_mod(const std::vector<LexValue>& values, int64_t ell);

}  // namespace pfl
