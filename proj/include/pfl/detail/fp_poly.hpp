#pragma once

// Dense univariate arithmetic over F_p, little endian coefficients.
// Internal helper shared by field construction and finite-field elements.

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pfl::detail {

using FpPoly = std::vector<int64_t>;
using boost::multiprecision::cpp_int;

inline int64_t mod_p(int64_t a, int64_t p) {
  int64_t r = a % p;
  return r < 0 ? r + p : r;
}

inline int64_t fp_inv_scalar(int64_t a, int64_t p) {
  int64_t t = 1, x = mod_p(a, p), e = p - 2;
  while (e > 0) {
    if (e & 1) t = mod_p(t * x, p);
    x = mod_p(x * x, p);
    e >>= 1;
  }
  return t;
}

inline void fp_trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, int64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = mod_p(c[i + j] + a[i] * b[j], p);
  fp_trim(c);
  return c;
}

// reduce modulo a monic m
inline FpPoly fp_mod(FpPoly a, const FpPoly& m, int64_t p) {
  fp_trim(a);
  while (a.size() >= m.size()) {
    int64_t c = a.back();
    size_t shift = a.size() - m.size();
    for (size_t i = 0; i < m.size(); ++i) a[i + shift] = mod_p(a[i + shift] - c * m[i], p);
    fp_trim(a);
  }
  return a;
}

inline FpPoly fp_powmod(FpPoly base, cpp_int e, const FpPoly& m, int64_t p) {
  FpPoly r{1};
  base = fp_mod(std::move(base), m, p);
  while (e > 0) {
    if ((e & 1) != 0) r = fp_mod(fp_mul(r, base, p), m, p);
    base = fp_mod(fp_mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b, int64_t p) {
  fp_trim(a);
  fp_trim(b);
  while (!b.empty()) {
    int64_t inv = fp_inv_scalar(b.back(), p);
    FpPoly bm = b;
    for (auto& c : bm) c = mod_p(c * inv, p);
    a = fp_mod(std::move(a), bm, p);
    std::swap(a, b);
  }
  return a;
}

// extended euclid: returns gcd g and s with s*a = g mod m (m monic)
inline void fp_ext_gcd(const FpPoly& a, const FpPoly& m, int64_t p, FpPoly& g, FpPoly& s) {
  FpPoly r0 = m, r1 = a;
  fp_trim(r1);
  FpPoly s0 = {}, s1 = {1};
  while (!r1.empty()) {
    // divide r0 by r1
    FpPoly q;
    FpPoly rem = r0;
    fp_trim(rem);
    int64_t inv = fp_inv_scalar(r1.back(), p);
    while (rem.size() >= r1.size() && !rem.empty()) {
      size_t shift = rem.size() - r1.size();
      int64_t c = mod_p(rem.back() * inv, p);
      if (q.size() < shift + 1) q.resize(shift + 1, 0);
      q[shift] = mod_p(q[shift] + c, p);
      for (size_t i = 0; i < r1.size(); ++i)
        rem[i + shift] = mod_p(rem[i + shift] - c * r1[i], p);
      fp_trim(rem);
    }
    FpPoly qs = fp_mul(q, s1, p);
    FpPoly s2 = s0;
    if (s2.size() < qs.size()) s2.resize(qs.size(), 0);
    for (size_t i = 0; i < qs.size(); ++i) s2[i] = mod_p(s2[i] - qs[i], p);
    fp_trim(s2);
    r0 = r1;
    r1 = rem;
    s0 = s1;
    s1 = s2;
  }
  g = r0;
  s = s0;
}

}  // namespace pfl::detail
