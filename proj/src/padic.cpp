#include "stdgrp/padic.hpp"

#include <sstream>

namespace stdgrp {

BigInt pow_bigint(const BigInt& base, int exp) {
  BigInt r = 1, b = base;
  while (exp > 0) {
    if (exp & 1) r *= b;
    b *= b;
    exp >>= 1;
  }
  return r;
}

int valuation_of(const BigInt& n, long long p, int cap) {
  if (n == 0) return cap;
  BigInt m = n;
  int v = 0;
  while (v < cap && m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

namespace {

BigInt mod_reduce(BigInt value, const BigInt& modulus) {
  value %= modulus;
  if (value < 0) value += modulus;
  return value;
}

// Extended gcd on (a, m) with m = p^k; returns x with a*x = 1 mod m.
BigInt mod_inverse(const BigInt& a, const BigInt& m) {
  BigInt r0 = m, r1 = mod_reduce(a, m);
  BigInt s0 = 0, s1 = 1;
  while (r1 != 0) {
    BigInt q = r0 / r1;
    BigInt r2 = r0 - q * r1;
    BigInt s2 = s0 - q * s1;
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
  }
  // r0 = gcd(a, m); caller guarantees it is 1
  return mod_reduce(s0, m);
}

void require_same_prime(const PadicScalar& a, const PadicScalar& b) {
  if (a.prime() != b.prime())
    throw ModulusMismatch("scalars over Z/" + std::to_string(a.prime()) +
                          "^k and Z/" + std::to_string(b.prime()) + "^k");
}

} // namespace

PadicScalar::PadicScalar(long long prime, int precision, BigInt value)
    : prime_(prime), precision_(precision) {
  if (prime < 2) throw ModulusMismatch("prime must be >= 2");
  if (precision < 1) throw ModulusMismatch("precision must be >= 1");
  residue_ = mod_reduce(std::move(value), modulus());
}

int PadicScalar::valuation() const {
  return valuation_of(residue_, prime_, precision_);
}

PadicScalar PadicScalar::inv() const {
  if (valuation() > 0)
    throw NotAUnit("cannot invert " + str() + " (valuation " +
                   std::to_string(valuation()) + ")");
  return PadicScalar(prime_, precision_, mod_inverse(residue_, modulus()));
}

PadicScalar PadicScalar::exact_div(const PadicScalar& y) const {
  require_same_prime(*this, y);
  int k = std::min(precision_, y.precision_);
  int vy = std::min(y.valuation(), k);
  if (vy >= k)
    throw InexactDivision("divisor is zero at precision " + std::to_string(k));
  if (std::min(valuation(), k) < vy)
    throw InexactDivision("valuation " + std::to_string(valuation()) +
                          " < divisor valuation " + std::to_string(vy));
  int kr = k - vy;
  BigInt shift = pow_bigint(BigInt(prime_), vy);
  BigInt mr = pow_bigint(BigInt(prime_), kr);
  BigInt xs = (residue_ / shift) % mr;
  BigInt ys = (y.residue_ / shift) % mr;
  return PadicScalar(prime_, kr, xs * mod_inverse(ys, mr));
}

PadicScalar PadicScalar::pow(BigInt e) const {
  if (e < 0) return inv().pow(-e);
  BigInt m = modulus();
  BigInt r = 1, b = residue_;
  while (e > 0) {
    if ((e & 1) != 0) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return PadicScalar(prime_, precision_, r);
}

PadicScalar PadicScalar::with_precision(int k) const {
  if (k == precision_) return *this;
  return PadicScalar(prime_, k, residue_);
}

bool PadicScalar::congruent(const PadicScalar& other, int digits) const {
  require_same_prime(*this, other);
  digits = std::min({digits, precision_, other.precision_});
  if (digits <= 0) return true;
  BigInt m = pow_bigint(BigInt(prime_), digits);
  return residue_ % m == other.residue_ % m;
}

std::string PadicScalar::str() const {
  std::ostringstream os;
  os << residue_ << " (mod " << prime_ << "^" << precision_ << ")";
  return os.str();
}

PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
  require_same_prime(a, b);
  int k = std::min(a.precision_, b.precision_);
  return PadicScalar(a.prime_, k, a.residue_ + b.residue_);
}

PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) {
  require_same_prime(a, b);
  int k = std::min(a.precision_, b.precision_);
  return PadicScalar(a.prime_, k, a.residue_ - b.residue_);
}

PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
  require_same_prime(a, b);
  int k = std::min(a.precision_, b.precision_);
  return PadicScalar(a.prime_, k, a.residue_ * b.residue_);
}

PadicScalar operator-(const PadicScalar& a) {
  return PadicScalar(a.prime_, a.precision_, -a.residue_);
}

bool operator==(const PadicScalar& a, const PadicScalar& b) {
  return a.prime_ == b.prime_ && a.precision_ == b.precision_ &&
         a.residue_ == b.residue_;
}

bool operator!=(const PadicScalar& a, const PadicScalar& b) { return !(a == b); }

PadicScalar padic_zero(long long p, int k) { return PadicScalar(p, k, 0); }
PadicScalar padic_one(long long p, int k) { return PadicScalar(p, k, 1); }

// ---------------------------------------------------------------------------
// PadicMatrix

PadicMatrix::PadicMatrix(int rows, int cols, long long prime, int precision)
    : rows_(rows), cols_(cols), prime_(prime), precision_(precision),
      e_(size_t(rows) * cols, padic_zero(prime, precision)) {}

PadicMatrix PadicMatrix::identity(int n, long long prime, int precision) {
  PadicMatrix m(n, n, prime, precision);
  for (int i = 0; i < n; ++i) m.set(i, i, padic_one(prime, precision));
  return m;
}

void PadicMatrix::set(int i, int j, const PadicScalar& v) {
  if (v.prime() != prime_)
    throw ModulusMismatch("matrix entry prime differs from matrix prime");
  e_[size_t(i) * cols_ + j] = v.with_precision(precision_);
}

PadicMatrix PadicMatrix::scalar_mul(const PadicScalar& s) const {
  PadicMatrix r = *this;
  for (auto& x : r.e_) x = (x * s).with_precision(precision_);
  return r;
}

PadicMatrix PadicMatrix::exact_div_scalar(const PadicScalar& s) const {
  int kr = std::min(precision_, s.precision()) - std::min(s.valuation(), precision_);
  if (kr < 1)
    throw InexactDivision("divisor is zero at matrix precision");
  PadicMatrix r(rows_, cols_, prime_, kr);
  for (size_t i = 0; i < e_.size(); ++i)
    r.e_[i] = e_[i].exact_div(s);
  return r;
}

PadicMatrix PadicMatrix::with_precision(int k) const {
  PadicMatrix r(rows_, cols_, prime_, k);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i].with_precision(k);
  return r;
}

PadicMatrix PadicMatrix::pow(BigInt e) const {
  PadicMatrix r = identity(rows_, prime_, precision_);
  PadicMatrix b = *this;
  while (e > 0) {
    if ((e & 1) != 0) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

int PadicMatrix::min_valuation() const {
  int v = precision_;
  for (const auto& x : e_) v = std::min(v, x.valuation());
  return v;
}

bool PadicMatrix::is_zero() const {
  for (const auto& x : e_)
    if (!x.is_zero()) return false;
  return true;
}

bool PadicMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  return *this == identity(rows_, prime_, precision_);
}

bool PadicMatrix::congruent(const PadicMatrix& other, int digits) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) return false;
  for (size_t i = 0; i < e_.size(); ++i)
    if (!e_[i].congruent(other.e_[i], digits)) return false;
  return true;
}

std::string PadicMatrix::str() const {
  std::ostringstream os;
  for (int i = 0; i < rows_; ++i) {
    os << (i == 0 ? "[" : " ");
    for (int j = 0; j < cols_; ++j)
      os << (j ? " " : "[") << at(i, j).residue();
    os << "]" << (i + 1 == rows_ ? "]" : "\n");
  }
  return os.str();
}

PadicMatrix operator+(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.prime_ != b.prime_)
    throw ModulusMismatch("matrix shape or prime mismatch in +");
  PadicMatrix r(a.rows_, a.cols_, a.prime_, std::min(a.precision_, b.precision_));
  for (size_t i = 0; i < a.e_.size(); ++i) r.e_[i] = (a.e_[i] + b.e_[i]).with_precision(r.precision_);
  return r;
}

PadicMatrix operator-(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.prime_ != b.prime_)
    throw ModulusMismatch("matrix shape or prime mismatch in -");
  PadicMatrix r(a.rows_, a.cols_, a.prime_, std::min(a.precision_, b.precision_));
  for (size_t i = 0; i < a.e_.size(); ++i) r.e_[i] = (a.e_[i] - b.e_[i]).with_precision(r.precision_);
  return r;
}

PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.cols_ != b.rows_ || a.prime_ != b.prime_)
    throw ModulusMismatch("matrix shape or prime mismatch in *");
  int k = std::min(a.precision_, b.precision_);
  BigInt m = pow_bigint(BigInt(a.prime_), k);
  PadicMatrix r(a.rows_, b.cols_, a.prime_, k);
  for (int i = 0; i < a.rows_; ++i)
    for (int j = 0; j < b.cols_; ++j) {
      BigInt acc = 0;
      for (int l = 0; l < a.cols_; ++l)
        acc += a.at(i, l).residue() * b.at(l, j).residue();
      r.set(i, j, PadicScalar(a.prime_, k, acc % m));
    }
  return r;
}

bool operator==(const PadicMatrix& a, const PadicMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.prime_ == b.prime_ &&
         a.precision_ == b.precision_ && a.e_ == b.e_;
}

bool operator!=(const PadicMatrix& a, const PadicMatrix& b) { return !(a == b); }

// ---------------------------------------------------------------------------
// Howell-style echelonization over Z/p^k

namespace {

struct WorkRow {
  std::vector<BigInt> h; // residual row
  std::vector<BigInt> u; // transform: u * M = h
};

// In-place echelonization with saturation. Rows that reduce to zero have
// their transforms appended to `kernel`; surviving rows end up in echelon
// form with pivots p^v and entries above each pivot reduced mod p^v.
void echelonize(std::vector<WorkRow>& rows, long long p, int k,
                std::vector<std::vector<BigInt>>* kernel) {
  const BigInt modulus = pow_bigint(BigInt(p), k);
  auto reduce_row = [&](std::vector<BigInt>& v) {
    for (auto& x : v) x = ((x % modulus) + modulus) % modulus;
  };
  auto is_zero_row = [&](const std::vector<BigInt>& v) {
    for (const auto& x : v)
      if (x != 0) return false;
    return true;
  };

  size_t cols = rows.empty() ? 0 : rows[0].h.size();
  size_t r = 0;
  for (size_t j = 0; j < cols && r < rows.size(); ++j) {
    // pick pivot of minimal valuation in column j among rows[r..]
    int best = -1, bestval = k;
    for (size_t i = r; i < rows.size(); ++i) {
      int v = valuation_of(rows[i].h[j], p, k);
      if (v < bestval) {
        bestval = v;
        best = int(i);
      }
    }
    if (best < 0) continue;
    std::swap(rows[r], rows[size_t(best)]);

    // normalize pivot to p^v
    BigInt pv = pow_bigint(BigInt(p), bestval);
    BigInt unit = rows[r].h[j] / pv;
    BigInt uinv = mod_inverse(unit, modulus);
    for (auto& x : rows[r].h) x = x * uinv % modulus;
    for (auto& x : rows[r].u) x = x * uinv % modulus;

    // eliminate below (exact) and reduce above (mod p^v)
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i].h[j] == 0) continue;
      BigInt q = rows[i].h[j] / pv; // exact below; canonical quotient above
      if (q == 0) continue;
      for (size_t c = 0; c < cols; ++c)
        rows[i].h[c] = mod_reduce(rows[i].h[c] - q * rows[r].h[c], modulus);
      for (size_t c = 0; c < rows[i].u.size(); ++c)
        rows[i].u[c] = mod_reduce(rows[i].u[c] - q * rows[r].u[c], modulus);
    }

    // saturation: p^(k-v) * pivot row re-enters the working set
    if (bestval > 0) {
      BigInt sat = pow_bigint(BigInt(p), k - bestval);
      WorkRow extra;
      extra.h.resize(cols);
      extra.u.resize(rows[r].u.size());
      for (size_t c = 0; c < cols; ++c) extra.h[c] = rows[r].h[c] * sat % modulus;
      for (size_t c = 0; c < extra.u.size(); ++c) extra.u[c] = rows[r].u[c] * sat % modulus;
      rows.push_back(std::move(extra));
    }
    ++r;

    // sweep zero rows out of the active region
    for (size_t i = r; i < rows.size();) {
      reduce_row(rows[i].h);
      if (is_zero_row(rows[i].h)) {
        if (kernel && !is_zero_row(rows[i].u)) kernel->push_back(rows[i].u);
        rows.erase(rows.begin() + long(i));
      } else {
        ++i;
      }
    }
  }
  // anything left past the pivot rows is zero
  while (rows.size() > r) {
    if (kernel && !is_zero_row(rows.back().u)) kernel->push_back(rows.back().u);
    rows.pop_back();
  }
}

std::vector<std::vector<PadicScalar>>
to_scalar_rows(const std::vector<std::vector<BigInt>>& rows, long long p, int k) {
  std::vector<std::vector<PadicScalar>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    std::vector<PadicScalar> s;
    s.reserve(r.size());
    for (const auto& x : r) s.emplace_back(p, k, x);
    out.push_back(std::move(s));
  }
  return out;
}

} // namespace

std::vector<std::vector<PadicScalar>>
howell_form(std::vector<std::vector<PadicScalar>> in, long long p, int k) {
  std::vector<WorkRow> rows;
  for (auto& r : in) {
    WorkRow w;
    for (auto& x : r) w.h.push_back(x.with_precision(k).residue());
    rows.push_back(std::move(w));
  }
  echelonize(rows, p, k, nullptr);
  std::vector<std::vector<BigInt>> out;
  for (auto& w : rows) out.push_back(std::move(w.h));
  return to_scalar_rows(out, p, k);
}

std::vector<std::vector<PadicScalar>> howell_kernel(const PadicMatrix& M) {
  long long p = M.prime();
  int k = M.precision();
  std::vector<WorkRow> rows(size_t(M.rows()));
  for (int i = 0; i < M.rows(); ++i) {
    rows[size_t(i)].h.resize(size_t(M.cols()));
    for (int j = 0; j < M.cols(); ++j) rows[size_t(i)].h[size_t(j)] = M.at(i, j).residue();
    rows[size_t(i)].u.assign(size_t(M.rows()), 0);
    rows[size_t(i)].u[size_t(i)] = 1;
  }
  std::vector<std::vector<BigInt>> kernel;
  echelonize(rows, p, k, &kernel);
  // canonicalize the collected generators
  auto gens = to_scalar_rows(kernel, p, k);
  return howell_form(std::move(gens), p, k);
}

} // namespace stdgrp
