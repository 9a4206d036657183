#ifndef STDGRP_SERIES_HPP
#define STDGRP_SERIES_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "stdgrp/padic.hpp"

namespace stdgrp {

// Coefficient-ring descriptor: Zp when param_vars == 0, Zp[[t1..tm]]
// otherwise, always at working precision p^k and total-degree cutoff D.
struct RingDescriptor {
  long long prime = 3;
  int precision = 1;    // k >= 1
  int param_vars = 0;   // m >= 0
  int degree_cutoff = 2; // D >= 2

  // ideal_order value reported for zero ("at least everything").
  int zero_order() const { return precision + degree_cutoff; }

  bool operator==(const RingDescriptor& o) const = default;
  std::string str() const;
};

void validate_descriptor(const RingDescriptor& d);

// Exponent key of one term: x-part (the series variables) and t-part (the
// coefficient-ring parameters). Ordered lexicographically for canonical
// storage and deterministic printing.
struct Mono {
  std::vector<int> x;
  std::vector<int> t;

  int xdeg() const;
  int tdeg() const;
  bool operator<(const Mono& o) const {
    return x != o.x ? x < o.x : t < o.t;
  }
  bool operator==(const Mono& o) const = default;
};

// Result of evaluating at a point of positive valuation: the sum of the
// stored terms plus the number of digits it is actually good for. Dropped
// tail terms of degree > D contribute valuation >= (D+1)*vmin, which may be
// below k; the guarantee makes that loss explicit.
struct Evaluation {
  PadicScalar value;
  int guarantee;
};

// Sparse truncated power series in `nvars` variables over the coefficient
// ring of its descriptor. nvars == 0 gives an element of the coefficient
// ring itself (see the RingElement alias). Zero is canonically the empty
// term map; no stored zero coefficients, no term beyond the cutoff in
// either the x- or the t-degree.
class MultiSeries {
public:
  MultiSeries() = default;
  MultiSeries(RingDescriptor desc, int nvars);

  static MultiSeries constant(const RingDescriptor& d, int nvars, const PadicScalar& c);
  static MultiSeries variable(const RingDescriptor& d, int nvars, int i);
  static MultiSeries t_variable(const RingDescriptor& d, int nvars, int i);

  const RingDescriptor& descriptor() const { return desc_; }
  int nvars() const { return nvars_; }
  const std::map<Mono, PadicScalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Accumulates c * x^xexp * t^texp, normalizing away zeros and over-cutoff
  // exponents.
  void add_term(const std::vector<int>& xexp, const std::vector<int>& texp,
                const PadicScalar& c);
  PadicScalar coefficient_scalar(const std::vector<int>& xexp,
                                 const std::vector<int>& texp) const;
  // All terms with the given x-exponent, as a coefficient-ring element.
  MultiSeries coefficient(const std::vector<int>& xexp) const;

  MultiSeries scalar_mul(const PadicScalar& c) const;
  // Divides every coefficient; the result descriptor loses val(c) digits.
  MultiSeries exact_div_scalar(const PadicScalar& c) const;
  MultiSeries with_precision(int k) const;

  // Replace the x-variables by `images` (one per variable, shared target
  // variable count, zero constant terms). t-variables pass through.
  MultiSeries substitute(const std::vector<MultiSeries>& images) const;

  // Scalar evaluation at one value per variable, x-variables first, then
  // t-variables; every value must have valuation >= 1.
  Evaluation evaluate(const std::vector<PadicScalar>& point) const;

  // Evaluate the t-variables only, returning a series over Zp (m = 0).
  // Second member is the coefficient precision actually guaranteed.
  std::pair<MultiSeries, int> eval_t(const std::vector<PadicScalar>& point) const;

  // Evaluate the x-variables at coefficient-ring elements of positive
  // ideal order; exact in the working quotient on stored degrees.
  MultiSeries eval_points(const std::vector<MultiSeries>& args) const;

  // min over terms of valuation(coeff) + total degree; zero_order() for 0.
  // Membership x in m^*N holds at precision iff ideal_order(x) >= N.
  int ideal_order() const;

  std::string str() const;
  std::string str(const std::function<std::string(int)>& xname) const;

  friend MultiSeries operator+(const MultiSeries& a, const MultiSeries& b);
  friend MultiSeries operator-(const MultiSeries& a, const MultiSeries& b);
  friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b);
  friend MultiSeries operator-(const MultiSeries& a);
  friend bool operator==(const MultiSeries& a, const MultiSeries& b);
  friend bool operator!=(const MultiSeries& a, const MultiSeries& b);

private:
  RingDescriptor desc_;
  int nvars_ = 0;
  std::map<Mono, PadicScalar> terms_;
};

// Element of the coefficient ring R = Zp[[t1..tm]]: a MultiSeries with no
// x-variables.
using RingElement = MultiSeries;

RingElement ring_zero(const RingDescriptor& d);
RingElement ring_one(const RingDescriptor& d);
RingElement ring_scalar(const RingDescriptor& d, const PadicScalar& c);
RingElement ring_scalar(const RingDescriptor& d, long long c);
RingElement ring_t(const RingDescriptor& d, int i);

// true iff a - b has ideal order >= order (congruence in m^*order at
// precision).
bool congruent_order(const MultiSeries& a, const MultiSeries& b, int order);

} // namespace stdgrp

#endif
