#ifndef STDGRP_FGL_HPP
#define STDGRP_FGL_HPP

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "stdgrp/series.hpp"

namespace stdgrp {

struct ValidationEntry {
  std::string axiom;
  bool pass;
  std::string witness; // differing monomial, empty on pass
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  bool all_pass() const;
  std::string str() const;
};

// Point of (m^*N)^d in chart coordinates. The chart homeomorphism is the
// identity on stored data: a point *is* its coordinate tuple. `guarantee`
// is the ideal order up to which the coordinates are meaningful; fresh
// exact points carry the full working-quotient sentinel.
class StandardPoint {
public:
  StandardPoint() = default;
  StandardPoint(std::vector<RingElement> coords, int guarantee);

  int dim() const { return int(coords_.size()); }
  const std::vector<RingElement>& coords() const { return coords_; }
  const RingElement& coord(int i) const { return coords_[size_t(i)]; }
  int guarantee() const { return guarantee_; }

  bool is_identity() const;
  StandardPoint with_precision(int k) const;
  std::string str() const;

  friend bool operator==(const StandardPoint& a, const StandardPoint& b);

private:
  std::vector<RingElement> coords_;
  int guarantee_ = 0;
};

// d formal power series in 2d variables X1..Xd, Y1..Yd over the coefficient
// ring, defining the multiplication of an R-standard group of the given
// level in chart coordinates.
class FormalGroupLaw {
public:
  FormalGroupLaw(RingDescriptor desc, int dim, int level,
                 std::vector<MultiSeries> components, std::string name = "");

  const RingDescriptor& descriptor() const { return desc_; }
  int dim() const { return d_; }
  int level() const { return level_; }
  const std::string& name() const { return name_; }
  const std::vector<MultiSeries>& components() const { return components_; }
  const MultiSeries& component(int j) const { return components_[size_t(j)]; }

  // p for odd p, 4 for p = 2.
  long long bold_p() const;
  int bold_p_valuation() const; // 1 for odd p, 2 for p = 2
  // level constraint making the Zp-specialization uniform: N >= 1 for odd
  // p, N >= 2 for p = 2.
  bool level_ok() const;

  // Axiom check; failures become report entries with a witness monomial,
  // never exceptions.
  ValidationReport validate() const;

  // The tuple i(X) with F(X, i(X)) = 0, solved degree by degree; cached.
  const std::vector<MultiSeries>& formal_inverse() const;

  FormalGroupLaw with_precision(int k) const;

  StandardPoint identity() const;
  // Checks the level invariant of the coordinates.
  StandardPoint point(std::vector<RingElement> coords) const;
  StandardPoint point_from_integers(const std::vector<BigInt>& coords) const;

  StandardPoint gmul(const StandardPoint& P, const StandardPoint& Q) const;
  StandardPoint ginv(const StandardPoint& P) const;
  // P^-1 Q^-1 P Q
  StandardPoint gcomm(const StandardPoint& P, const StandardPoint& Q) const;

  // Quadratic-part structure constants c[i][j][l] = [X_i Y_j](F_l) -
  // [X_j Y_i](F_l), antisymmetric and Jacobi-compatible for a valid law.
  std::vector<std::vector<std::vector<RingElement>>> extract_bracket() const;

  // equality of points at the weaker of the two guarantees
  bool points_equal(const StandardPoint& P, const StandardPoint& Q) const;

private:
  RingDescriptor desc_;
  int d_;
  int level_;
  std::string name_;
  std::vector<MultiSeries> components_;

  struct InverseCache {
    std::once_flag flag;
    std::vector<MultiSeries> series;
  };
  mutable std::shared_ptr<InverseCache> inverse_cache_;
};

// Built-in laws; all are standard constructions used as fixtures.
FormalGroupLaw additive_law(const RingDescriptor& d, int dim, int level);
FormalGroupLaw multiplicative_law(const RingDescriptor& d, int level);
// X + Y + t XY over Zp[[t..]], requires param_vars >= 1
FormalGroupLaw t_twisted_law(const RingDescriptor& d, int level);
// chart of the unitriangular group 1 + x1 E12 + x2 E23 + x3 E13
FormalGroupLaw heisenberg_law(const RingDescriptor& d, int level);

// "additive", "additive2", "multiplicative", "t-twisted", "heisenberg"
FormalGroupLaw builtin_law(const std::string& name, const RingDescriptor& d,
                           int level);
std::vector<std::string> builtin_law_names();

} // namespace stdgrp

#endif
