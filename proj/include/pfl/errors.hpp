#pragma once

#include <stdexcept>
#include <string>

namespace pfl {

// Error codes for every failure mode the library reports. CLI maps these to
// exit status 1 (input) or 2 (undecided/budget).
enum class errc {
  not_prime,
  reducible_modulus,
  square_adjunction,
  unsupported_field,
  infinite_field,
  zero_derivative,
  zero_input,
  not_a_unit,
  dimension_mismatch,
  zero_slot,
  even_degree,
  not_a_zero,
  residue_isotropic,
  not_vanishing,
  rank_deficient,
  bad_generators,
  char_divides,
  not_well_behaved,
  no_etale_point_found,
  not_independent,
  no_center_found,
  partial_support,
  internal_disagreement,
  inconclusive,
  char_mismatch,
  base_point_missing,
  scan_ceiling_exceeded,
  fold_ceiling,
  budget_exceeded,
  unbound_variable,
  syntax_error,
  bad_input,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw error(code, msg); }

}  // namespace pfl
