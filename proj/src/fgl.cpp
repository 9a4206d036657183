#include "stdgrp/fgl.hpp"

#include <sstream>

namespace stdgrp {

bool ValidationReport::all_pass() const {
  for (const auto& e : entries)
    if (!e.pass) return false;
  return true;
}

std::string ValidationReport::str() const {
  std::ostringstream os;
  for (const auto& e : entries) {
    os << (e.pass ? "PASS " : "FAIL ") << e.axiom;
    if (!e.pass && !e.witness.empty()) os << " (witness: " << e.witness << ")";
    os << "\n";
  }
  return os.str();
}

StandardPoint::StandardPoint(std::vector<RingElement> coords, int guarantee)
    : coords_(std::move(coords)), guarantee_(guarantee) {}

bool StandardPoint::is_identity() const {
  for (const auto& c : coords_)
    if (!c.is_zero()) return false;
  return true;
}

StandardPoint StandardPoint::with_precision(int k) const {
  std::vector<RingElement> cs;
  cs.reserve(coords_.size());
  for (const auto& c : coords_) cs.push_back(c.with_precision(k));
  int g = guarantee_;
  if (!cs.empty()) g = std::min(g, cs[0].descriptor().zero_order());
  return StandardPoint(std::move(cs), g);
}

std::string StandardPoint::str() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < coords_.size(); ++i)
    os << (i ? ", " : "") << coords_[i].str();
  os << ")";
  return os.str();
}

bool operator==(const StandardPoint& a, const StandardPoint& b) {
  return a.coords_ == b.coords_;
}

// ---------------------------------------------------------------------------

namespace {

// X1..Xd, Y1..Yd for law components; X/Y/Z blocks for associativity.
std::function<std::string(int)> law_var_names(int d) {
  return [d](int i) {
    return i < d ? "X" + std::to_string(i + 1) : "Y" + std::to_string(i - d + 1);
  };
}

std::function<std::string(int)> xyz_var_names(int d) {
  return [d](int i) {
    const char* block = i < d ? "X" : (i < 2 * d ? "Y" : "Z");
    return block + std::to_string(i % d + 1);
  };
}

// the smallest differing monomial, printed with the given names
std::string witness_monomial(const MultiSeries& diff,
                             const std::function<std::string(int)>& names) {
  if (diff.is_zero()) return "";
  const auto& [m, c] = *diff.terms().begin();
  MultiSeries one_term(diff.descriptor(), diff.nvars());
  one_term.add_term(m.x, m.t, padic_one(diff.descriptor().prime, c.precision()));
  return one_term.str(names);
}

} // namespace

FormalGroupLaw::FormalGroupLaw(RingDescriptor desc, int dim, int level,
                               std::vector<MultiSeries> components,
                               std::string name)
    : desc_(desc), d_(dim), level_(level), name_(std::move(name)),
      components_(std::move(components)),
      inverse_cache_(std::make_shared<InverseCache>()) {
  validate_descriptor(desc_);
  if (d_ < 1) throw DescriptorMismatch("law dimension must be >= 1");
  if (level_ < 1) throw DescriptorMismatch("law level must be >= 1");
  if (int(components_.size()) != d_)
    throw DescriptorMismatch("law needs d components, got " +
                             std::to_string(components_.size()));
  for (const auto& f : components_) {
    if (f.nvars() != 2 * d_)
      throw DescriptorMismatch("law components must use 2d variables");
    if (!(f.descriptor() == desc_))
      throw DescriptorMismatch("component descriptor differs from the law's");
  }
}

long long FormalGroupLaw::bold_p() const { return desc_.prime == 2 ? 4 : desc_.prime; }

int FormalGroupLaw::bold_p_valuation() const { return desc_.prime == 2 ? 2 : 1; }

bool FormalGroupLaw::level_ok() const {
  return desc_.prime == 2 ? level_ >= 2 : level_ >= 1;
}

ValidationReport FormalGroupLaw::validate() const {
  ValidationReport rep;
  const int D = desc_.degree_cutoff;
  (void)D;

  // variable tuples used as substitution images
  std::vector<MultiSeries> xs_d, zeros_d, xs3, ys3, zs3;
  for (int i = 0; i < d_; ++i) {
    xs_d.push_back(MultiSeries::variable(desc_, d_, i));
    zeros_d.push_back(MultiSeries(desc_, d_));
    xs3.push_back(MultiSeries::variable(desc_, 3 * d_, i));
    ys3.push_back(MultiSeries::variable(desc_, 3 * d_, d_ + i));
    zs3.push_back(MultiSeries::variable(desc_, 3 * d_, 2 * d_ + i));
  }

  auto subst_pair = [&](const MultiSeries& f, const std::vector<MultiSeries>& a,
                        const std::vector<MultiSeries>& b) {
    std::vector<MultiSeries> imgs = a;
    imgs.insert(imgs.end(), b.begin(), b.end());
    return f.substitute(imgs);
  };

  for (int j = 0; j < d_; ++j) {
    auto fx0 = subst_pair(components_[size_t(j)], xs_d, zeros_d);
    auto diff = fx0 - xs_d[size_t(j)];
    rep.entries.push_back({"identity F" + std::to_string(j + 1) + "(X,0) = X" +
                               std::to_string(j + 1),
                           diff.is_zero(),
                           witness_monomial(diff, law_var_names(d_))});
  }
  for (int j = 0; j < d_; ++j) {
    auto f0y = subst_pair(components_[size_t(j)], zeros_d, xs_d);
    auto diff = f0y - xs_d[size_t(j)];
    rep.entries.push_back({"identity F" + std::to_string(j + 1) + "(0,Y) = X" +
                               std::to_string(j + 1),
                           diff.is_zero(),
                           witness_monomial(diff, law_var_names(d_))});
  }

  // associativity, checked in 3d variables
  std::vector<MultiSeries> fxy, fyz;
  for (int j = 0; j < d_; ++j) {
    fxy.push_back(subst_pair(components_[size_t(j)], xs3, ys3));
    fyz.push_back(subst_pair(components_[size_t(j)], ys3, zs3));
  }
  bool assoc_ok = true;
  std::string assoc_witness;
  for (int j = 0; j < d_; ++j) {
    auto lhs = subst_pair(components_[size_t(j)], fxy, zs3);
    auto rhs = subst_pair(components_[size_t(j)], xs3, fyz);
    auto diff = lhs - rhs;
    if (!diff.is_zero() && assoc_ok) {
      assoc_ok = false;
      assoc_witness = "F" + std::to_string(j + 1) + ": " +
                      witness_monomial(diff, xyz_var_names(d_));
    }
  }
  rep.entries.push_back({"associativity F(F(X,Y),Z) = F(X,F(Y,Z))", assoc_ok,
                         assoc_witness});

  rep.entries.push_back({"level constraint (N >= 1, N >= 2 when p = 2)",
                         level_ok(), level_ok() ? "" : "N = " + std::to_string(level_)});
  return rep;
}

const std::vector<MultiSeries>& FormalGroupLaw::formal_inverse() const {
  std::call_once(inverse_cache_->flag, [this] {
    const int D = desc_.degree_cutoff;
    std::vector<MultiSeries> xs, iota;
    for (int i = 0; i < d_; ++i) {
      xs.push_back(MultiSeries::variable(desc_, d_, i));
      iota.push_back(-xs.back());
    }
    for (int round = 0; round <= D + 1; ++round) {
      std::vector<MultiSeries> imgs = xs;
      imgs.insert(imgs.end(), iota.begin(), iota.end());
      std::vector<MultiSeries> defect;
      bool all_zero = true;
      for (int j = 0; j < d_; ++j) {
        defect.push_back(components_[size_t(j)].substitute(imgs));
        all_zero = all_zero && defect.back().is_zero();
      }
      if (all_zero) {
        inverse_cache_->series = iota;
        return;
      }
      if (round == D + 1)
        throw ConvergenceFailure(
            "formal inverse did not stabilize; the law is not a group law");
      for (int j = 0; j < d_; ++j)
        iota[size_t(j)] = iota[size_t(j)] - defect[size_t(j)];
    }
  });
  return inverse_cache_->series;
}

FormalGroupLaw FormalGroupLaw::with_precision(int k) const {
  RingDescriptor d = desc_;
  d.precision = k;
  std::vector<MultiSeries> comps;
  comps.reserve(components_.size());
  for (const auto& f : components_) comps.push_back(f.with_precision(k));
  return FormalGroupLaw(d, d_, level_, std::move(comps), name_);
}

StandardPoint FormalGroupLaw::identity() const {
  std::vector<RingElement> cs(size_t(d_), ring_zero(desc_));
  return StandardPoint(std::move(cs), desc_.zero_order());
}

StandardPoint FormalGroupLaw::point(std::vector<RingElement> coords) const {
  if (int(coords.size()) != d_)
    throw DescriptorMismatch("point needs " + std::to_string(d_) + " coordinates");
  for (int i = 0; i < d_; ++i) {
    const auto& c = coords[size_t(i)];
    if (c.nvars() != 0 || c.descriptor().prime != desc_.prime ||
        c.descriptor().param_vars != desc_.param_vars ||
        c.descriptor().degree_cutoff != desc_.degree_cutoff)
      throw DescriptorMismatch("coordinate " + std::to_string(i) +
                               " does not live in the coefficient ring");
    if (c.ideal_order() < level_)
      throw ValuationTooLow("coordinate " + std::to_string(i) + " has ideal order " +
                            std::to_string(c.ideal_order()) + " < level " +
                            std::to_string(level_));
  }
  int g = desc_.zero_order();
  for (const auto& c : coords) g = std::min(g, c.descriptor().zero_order());
  return StandardPoint(std::move(coords), g);
}

StandardPoint FormalGroupLaw::point_from_integers(const std::vector<BigInt>& coords) const {
  std::vector<RingElement> cs;
  cs.reserve(coords.size());
  for (const auto& c : coords)
    cs.push_back(ring_scalar(desc_, PadicScalar(desc_.prime, desc_.precision, c)));
  return point(std::move(cs));
}

StandardPoint FormalGroupLaw::gmul(const StandardPoint& P, const StandardPoint& Q) const {
  if (P.dim() != d_ || Q.dim() != d_)
    throw DescriptorMismatch("point dimension does not match the law");
  std::vector<RingElement> args = P.coords();
  args.insert(args.end(), Q.coords().begin(), Q.coords().end());
  int vmin = desc_.zero_order();
  for (const auto& a : args) vmin = std::min(vmin, a.ideal_order());
  std::vector<RingElement> out;
  out.reserve(size_t(d_));
  for (int j = 0; j < d_; ++j)
    out.push_back(components_[size_t(j)].eval_points(args));
  int g = std::min({P.guarantee(), Q.guarantee(),
                    (desc_.degree_cutoff + 1) * std::max(vmin, 1)});
  return StandardPoint(std::move(out), g);
}

StandardPoint FormalGroupLaw::ginv(const StandardPoint& P) const {
  const auto& iota = formal_inverse();
  std::vector<RingElement> out;
  out.reserve(size_t(d_));
  for (int j = 0; j < d_; ++j)
    out.push_back(iota[size_t(j)].eval_points(P.coords()));
  int vmin = desc_.zero_order();
  for (const auto& a : P.coords()) vmin = std::min(vmin, a.ideal_order());
  int g = std::min(P.guarantee(), (desc_.degree_cutoff + 1) * std::max(vmin, 1));
  return StandardPoint(std::move(out), g);
}

StandardPoint FormalGroupLaw::gcomm(const StandardPoint& P, const StandardPoint& Q) const {
  return gmul(gmul(ginv(P), ginv(Q)), gmul(P, Q));
}

std::vector<std::vector<std::vector<RingElement>>>
FormalGroupLaw::extract_bracket() const {
  std::vector<std::vector<std::vector<RingElement>>> c;
  c.resize(size_t(d_));
  for (int i = 0; i < d_; ++i) {
    c[size_t(i)].resize(size_t(d_));
    for (int j = 0; j < d_; ++j) {
      c[size_t(i)][size_t(j)].reserve(size_t(d_));
      for (int l = 0; l < d_; ++l) {
        std::vector<int> xiyj(size_t(2 * d_), 0), xjyi(size_t(2 * d_), 0);
        xiyj[size_t(i)] += 1;
        xiyj[size_t(d_ + j)] += 1;
        xjyi[size_t(j)] += 1;
        xjyi[size_t(d_ + i)] += 1;
        c[size_t(i)][size_t(j)].push_back(
            components_[size_t(l)].coefficient(xiyj) -
            components_[size_t(l)].coefficient(xjyi));
      }
    }
  }
  return c;
}

bool FormalGroupLaw::points_equal(const StandardPoint& P, const StandardPoint& Q) const {
  if (P.dim() != Q.dim()) return false;
  int g = std::min(P.guarantee(), Q.guarantee());
  for (int i = 0; i < P.dim(); ++i)
    if (!congruent_order(P.coord(i), Q.coord(i), g)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// built-in laws

FormalGroupLaw additive_law(const RingDescriptor& d, int dim, int level) {
  std::vector<MultiSeries> comps;
  for (int j = 0; j < dim; ++j)
    comps.push_back(MultiSeries::variable(d, 2 * dim, j) +
                    MultiSeries::variable(d, 2 * dim, dim + j));
  std::string name = "additive";
  if (dim > 1) name += std::to_string(dim);
  return FormalGroupLaw(d, dim, level, std::move(comps), name);
}

FormalGroupLaw multiplicative_law(const RingDescriptor& d, int level) {
  auto X = MultiSeries::variable(d, 2, 0);
  auto Y = MultiSeries::variable(d, 2, 1);
  return FormalGroupLaw(d, 1, level, {X + Y + X * Y}, "multiplicative");
}

FormalGroupLaw t_twisted_law(const RingDescriptor& d, int level) {
  if (d.param_vars < 1)
    throw DescriptorMismatch("t-twisted law needs at least one t-variable");
  auto X = MultiSeries::variable(d, 2, 0);
  auto Y = MultiSeries::variable(d, 2, 1);
  auto t = MultiSeries::t_variable(d, 2, 0);
  return FormalGroupLaw(d, 1, level, {X + Y + t * X * Y}, "t-twisted");
}

FormalGroupLaw heisenberg_law(const RingDescriptor& d, int level) {
  auto v = [&](int i) { return MultiSeries::variable(d, 6, i); };
  // chart (x1, x2, x3) <-> I + x1 E12 + x2 E23 + x3 E13
  std::vector<MultiSeries> comps{v(0) + v(3), v(1) + v(4), v(2) + v(5) + v(0) * v(4)};
  return FormalGroupLaw(d, 3, level, std::move(comps), "heisenberg");
}

FormalGroupLaw builtin_law(const std::string& name, const RingDescriptor& d,
                           int level) {
  if (name == "additive") return additive_law(d, 1, level);
  if (name == "additive2") return additive_law(d, 2, level);
  if (name == "multiplicative") return multiplicative_law(d, level);
  if (name == "t-twisted") return t_twisted_law(d, level);
  if (name == "heisenberg") return heisenberg_law(d, level);
  throw DescriptorMismatch("unknown built-in law: " + name);
}

std::vector<std::string> builtin_law_names() {
  return {"additive", "additive2", "multiplicative", "t-twisted", "heisenberg"};
}

} // namespace stdgrp
