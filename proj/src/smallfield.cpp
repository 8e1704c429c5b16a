#include "pfl/smallfield.hpp"

#include "pfl/detail/fp_poly.hpp"

namespace pfl {

SmallField::SmallField(FieldPtr f) : f_(std::move(f)) {
  if (!f_->is_finite()) fail(errc::infinite_field, "SmallField needs a finite field");
  q_ = static_cast<int64_t>(f_->order());
  p_ = f_->prime();
  n_ = f_->ext_degree();
  if (n_ > 1) modulus_ = f_->modulus();

  neg_t_.resize(q_);
  for (int64_t a = 0; a < q_; ++a) {
    int64_t idx = 0, t = a;
    std::vector<int64_t> digits(n_);
    for (int j = 0; j < n_; ++j) {
      digits[j] = t % p_;
      t /= p_;
    }
    for (int j = n_ - 1; j >= 0; --j) idx = idx * p_ + detail::mod_p(-digits[j], p_);
    neg_t_[a] = static_cast<int>(idx);
  }

  if (q_ <= kTableLimit) {
    add_t_.resize(q_ * q_);
    mul_t_.resize(q_ * q_);
    for (int a = 0; a < q_; ++a)
      for (int b = 0; b <= a; ++b) {
        int s = add_slow(a, b), m = mul_slow(a, b);
        add_t_[a * q_ + b] = add_t_[b * q_ + a] = s;
        mul_t_[a * q_ + b] = mul_t_[b * q_ + a] = m;
      }
  }

  sqrt_t_.assign(q_, -1);
  for (int a = static_cast<int>(q_) - 1; a >= 0; --a) {
    int sq = mul(a, a);
    sqrt_t_[sq] = a;  // descending loop leaves the least root
  }
}

int SmallField::add_slow(int a, int b) const {
  if (n_ == 1) return static_cast<int>(detail::mod_p(a + b, p_));
  int64_t idx = 0;
  int64_t ta = a, tb = b;
  std::vector<int64_t> d(n_);
  for (int j = 0; j < n_; ++j) {
    d[j] = detail::mod_p(ta % p_ + tb % p_, p_);
    ta /= p_;
    tb /= p_;
  }
  for (int j = n_ - 1; j >= 0; --j) idx = idx * p_ + d[j];
  return static_cast<int>(idx);
}

int SmallField::mul_slow(int a, int b) const {
  if (n_ == 1) return static_cast<int>(detail::mod_p(static_cast<int64_t>(a) * b, p_));
  detail::FpPoly pa(n_), pb(n_);
  int64_t ta = a, tb = b;
  for (int j = 0; j < n_; ++j) {
    pa[j] = ta % p_;
    pb[j] = tb % p_;
    ta /= p_;
    tb /= p_;
  }
  detail::FpPoly m(modulus_.begin(), modulus_.end());
  detail::FpPoly c = detail::fp_mod(detail::fp_mul(pa, pb, p_), m, p_);
  c.resize(n_, 0);
  int64_t idx = 0;
  for (int j = n_ - 1; j >= 0; --j) idx = idx * p_ + c[j];
  return static_cast<int>(idx);
}

int SmallField::inv(int a) const { return pow(a, q_ - 2); }

int SmallField::pow(int a, int64_t e) const {
  if (e < 0) return pow(inv(a), -e);
  int r = 1, b = a;
  while (e > 0) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

int matrix_rank(std::vector<std::vector<Value>> m) {
  if (m.empty()) return 0;
  size_t rows = m.size(), cols = m[0].size();
  size_t rank = 0;
  for (size_t c = 0; c < cols && rank < rows; ++c) {
    size_t pivot = rank;
    while (pivot < rows && m[pivot][c].is_zero()) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[rank], m[pivot]);
    Value inv = m[rank][c].inverse();
    for (size_t j = c; j < cols; ++j) m[rank][j] = m[rank][j] * inv;
    for (size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][c].is_zero()) continue;
      Value f = m[r][c];
      for (size_t j = c; j < cols; ++j) m[r][j] = m[r][j] - f * m[rank][j];
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

Value matrix_det(std::vector<std::vector<Value>> m, const FieldPtr& f) {
  size_t n = m.size();
  Value det = f->one();
  for (size_t c = 0; c < n; ++c) {
    size_t pivot = c;
    while (pivot < n && m[pivot][c].is_zero()) ++pivot;
    if (pivot == n) return f->zero();
    if (pivot != c) {
      std::swap(m[c], m[pivot]);
      det = -det;
    }
    det = det * m[c][c];
    Value inv = m[c][c].inverse();
    for (size_t r = c + 1; r < n; ++r) {
      if (m[r][c].is_zero()) continue;
      Value factor = m[r][c] * inv;
      for (size_t j = c; j < n; ++j) m[r][j] = m[r][j] - factor * m[c][j];
    }
  }
  return det;
}

}  // namespace pfl
