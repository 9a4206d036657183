#ifndef STDGRP_PADIC_HPP
#define STDGRP_PADIC_HPP

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "stdgrp/errors.hpp"

namespace stdgrp {

using BigInt = boost::multiprecision::cpp_int;

BigInt pow_bigint(const BigInt& base, int exp);

// v_p(n) for n != 0; returns cap for n == 0.
int valuation_of(const BigInt& n, long long p, int cap);

// Residue class mod p^k. Equality of two scalars means literal equality of
// (prime, precision, residue); use congruent() for comparisons at a weaker
// precision. An inequality verified mod p^j is a true inequality in Zp; an
// equality is only "equal to precision".
class PadicScalar {
public:
  PadicScalar() : prime_(2), precision_(1), residue_(0) {}
  PadicScalar(long long prime, int precision, BigInt value);

  long long prime() const { return prime_; }
  int precision() const { return precision_; }
  const BigInt& residue() const { return residue_; }
  BigInt modulus() const { return pow_bigint(BigInt(prime_), precision_); }

  // min(v_p(residue), k); zero reports k ("valuation >= k").
  int valuation() const;
  bool is_zero() const { return residue_ == 0; }
  bool is_unit() const { return valuation() == 0; }

  PadicScalar inv() const;
  // Quotient z with z*y = *this; result precision drops to k - val(y).
  PadicScalar exact_div(const PadicScalar& y) const;
  PadicScalar pow(BigInt e) const; // e >= 0

  // Reduce to lower precision, or zero-lift the canonical representative to
  // a higher one. Lifting is representative semantics, not new information.
  PadicScalar with_precision(int k) const;

  bool congruent(const PadicScalar& other, int digits) const;

  std::string str() const;

  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator-(const PadicScalar& a);
  friend bool operator==(const PadicScalar& a, const PadicScalar& b);
  friend bool operator!=(const PadicScalar& a, const PadicScalar& b);

private:
  long long prime_;
  int precision_;
  BigInt residue_; // canonical representative in [0, p^k)
};

PadicScalar padic_zero(long long p, int k);
PadicScalar padic_one(long long p, int k);

// Matrix over Z/p^k with a shared modulus across all entries.
class PadicMatrix {
public:
  PadicMatrix() : rows_(0), cols_(0), prime_(2), precision_(1) {}
  PadicMatrix(int rows, int cols, long long prime, int precision);

  static PadicMatrix identity(int n, long long prime, int precision);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long long prime() const { return prime_; }
  int precision() const { return precision_; }

  const PadicScalar& at(int i, int j) const { return e_[size_t(i) * cols_ + j]; }
  void set(int i, int j, const PadicScalar& v);

  PadicMatrix scalar_mul(const PadicScalar& s) const;
  // Entrywise exact division; result precision drops to k - val(s).
  PadicMatrix exact_div_scalar(const PadicScalar& s) const;
  PadicMatrix with_precision(int k) const;
  PadicMatrix pow(BigInt e) const;

  // Smallest entry valuation; precision() for the zero matrix.
  int min_valuation() const;
  bool is_zero() const;
  bool is_identity() const;
  bool congruent(const PadicMatrix& other, int digits) const;

  std::string str() const;

  friend PadicMatrix operator+(const PadicMatrix& a, const PadicMatrix& b);
  friend PadicMatrix operator-(const PadicMatrix& a, const PadicMatrix& b);
  friend PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b);
  friend bool operator==(const PadicMatrix& a, const PadicMatrix& b);
  friend bool operator!=(const PadicMatrix& a, const PadicMatrix& b);

private:
  int rows_, cols_;
  long long prime_;
  int precision_;
  std::vector<PadicScalar> e_;
};

// Canonical (Howell-style) generating set of {v : v M = 0 mod p^k}.
// Gaussian elimination over a field is unsound here because of zero
// divisors; pivots are normalized to powers of p and every pivot p^v with
// v > 0 contributes its saturation p^(k-v) * row to the working set.
// The result is empty iff the kernel is trivial mod p^k.
std::vector<std::vector<PadicScalar>> howell_kernel(const PadicMatrix& M);

// Canonicalize a list of row vectors over Z/p^k into Howell echelon form
// (saturated, pivot-normalized, reduced above pivots). Zero rows are dropped.
std::vector<std::vector<PadicScalar>>
howell_form(std::vector<std::vector<PadicScalar>> rows, long long p, int k);

} // namespace stdgrp

#endif
