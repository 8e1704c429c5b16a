#pragma once

// The three curve families used for the definability machinery, exhaustive
// point enumeration over finite fields, the ratio sets S_a and S_a', fiber
// counts over the line x1 = c*x2, the empirical coverage threshold, and the
// supersingular-curve search.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pfl/field.hpp"
#include "pfl/smallfield.hpp"

namespace pfl {

class CensusStore;

// Quintic: y^2 = x^5 + a x + 1 (char not in {2,5}, genus 2)
// Septic:  y^2 = x^7 + a x + 1 (char 5, genus 3)
// Char2AS: y^2 + y = x^5 + a x (char 2, genus 2)
enum class FamilyKind { Quintic, Septic, Char2AS };

FamilyKind family_for_characteristic(int64_t p);
std::optional<FamilyKind> family_by_name(const std::string& name);
const char* family_name(FamilyKind kind);
int family_genus(FamilyKind kind);
bool family_matches_characteristic(FamilyKind kind, int64_t p);

struct CurveFamily {
  FamilyKind kind;
  Value a;  // parameter
};

// Validates that the template matches the characteristic of a's field.
CurveFamily make_family(FamilyKind kind, Value a);

struct CurvePoint {
  Value x, y;
  bool smooth;
};

struct PointSet {
  FieldPtr field;
  std::vector<CurvePoint> points;
};

// Exhaustive affine point list with smoothness flags. The parameter is
// coerced into the given finite field.
PointSet enumerate_points(const CurveFamily& fam, const FieldPtr& field);

// { x1/x2 : (x1,y1), (x2,y2) affine points, x2 != 0 }, sorted by element index.
std::vector<Value> compute_Sa(const CurveFamily& fam, const FieldPtr& field);

// compute_Sa united with the roots of X^j - X for 2 <= j <= m.
std::vector<Value> compute_Sa_prime(const CurveFamily& fam, const FieldPtr& field, int m);

struct FiberReport {
  int64_t count = 0;          // affine points of Y: pairs of curve points with x1 = c*x2
  bool base_point_smooth = false;
  std::vector<Value> base_point;  // (0,1,0,1), or (0,0,0,0) in characteristic 2
};

FiberReport fiber_variety_count(const CurveFamily& fam, const FieldPtr& field, const Value& c);

// One census cell, the unit of caching: everything stored is independent of
// the derived threshold m.
struct CensusCell {
  std::string family;
  int64_t q = 0;
  int64_t a_index = 0;   // element index of the parameter in GF(q)
  int64_t n_points = 0;  // affine points
  int64_t s_a_size = 0;
  bool s_a_covers_field = false;
};

CensusCell census_cell(FamilyKind kind, const SmallField& sf, int64_t a_index);

struct ScanResult {
  int64_t m = 0;  // largest q with a coverage failure (0 when none)
  int64_t q_ceiling = 0;
  std::vector<CensusCell> cells;  // ordered by (q, a)
  std::vector<std::pair<int64_t, int64_t>> failures;  // (q, a_index)
  int64_t cache_hits = 0;
};

std::vector<int64_t> prime_powers_up_to(int64_t q_max);

// Scans every prime power q <= q_ceiling whose characteristic matches one of
// the kinds, every parameter a in GF(q). A cell fails when S_a does not
// cover GF(q); m is the largest failing q, so S_a' built with this m covers
// every scanned field. Throws scan_ceiling_exceeded when the top scanned q
// still fails. Cells already present in the store are reused.
ScanResult derive_weil_threshold(const std::vector<FamilyKind>& kinds, int64_t q_ceiling,
                                 int jobs = 1, CensusStore* store = nullptr);

struct SupersingularResult {
  int64_t p = 0;
  int64_t a = 0, b = 0;  // y^2 = x^3 + a x + b, first hit in (a, b) lex order
  int64_t n_projective = 0;
  bool two_torsion_splits = false;  // the cubic splits over GF(p^2)
  std::vector<Value> cubic_roots;   // in GF(p^2)
};

// First short Weierstrass curve over GF(p) with exactly p+1 projective
// points, plus the verification that its 2-torsion is rational over GF(p^2).
SupersingularResult find_supersingular(int64_t p, int64_t p_bound = 200);

struct NonIsotrivialityEvidence {
  bool applicable = false;  // false for the characteristic-2 family
  bool discriminant_nonconstant = false;
  bool discriminant_squarefree = false;
  Value discriminant;                    // in k(a)
  std::vector<Value> singular_parameters;  // parameter values with singular fiber
  std::string note;
};

// Discriminant-in-a evidence that the family has both smooth and singular
// members. For finite coefficient fields the singular parameters are found
// by scanning; over Q rational roots are scanned via the rational root test.
NonIsotrivialityEvidence family_nonisotriviality_evidence(FamilyKind kind,
                                                          const FieldPtr& coefficient_field);

}  // namespace pfl
