#include "stdgrp/series.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace stdgrp {

std::string RingDescriptor::str() const {
  std::ostringstream os;
  os << "Z" << prime;
  if (param_vars > 0) os << "[[t1.." << param_vars << "]]";
  os << " mod " << prime << "^" << precision << ", deg<=" << degree_cutoff;
  return os.str();
}

void validate_descriptor(const RingDescriptor& d) {
  if (d.prime < 2) throw DescriptorMismatch("prime must be >= 2");
  if (d.precision < 1) throw DescriptorMismatch("precision must be >= 1");
  if (d.param_vars < 0) throw DescriptorMismatch("param_vars must be >= 0");
  if (d.degree_cutoff < 2) throw DescriptorMismatch("degree_cutoff must be >= 2");
}

int Mono::xdeg() const { return std::accumulate(x.begin(), x.end(), 0); }
int Mono::tdeg() const { return std::accumulate(t.begin(), t.end(), 0); }

namespace {

// Descriptors must agree except possibly in precision; mixed precisions
// truncate to the minimum, mirroring scalar arithmetic.
RingDescriptor merged_descriptor(const MultiSeries& a, const MultiSeries& b,
                                 const char* what) {
  const RingDescriptor& da = a.descriptor();
  const RingDescriptor& db = b.descriptor();
  if (da.prime != db.prime || da.param_vars != db.param_vars ||
      da.degree_cutoff != db.degree_cutoff)
    throw DescriptorMismatch(std::string(what) + ": " + da.str() + " vs " + db.str());
  if (a.nvars() != b.nvars())
    throw DescriptorMismatch(std::string(what) + ": variable counts " +
                             std::to_string(a.nvars()) + " vs " +
                             std::to_string(b.nvars()));
  RingDescriptor d = da;
  d.precision = std::min(da.precision, db.precision);
  return d;
}

std::vector<int> zeros(int n) { return std::vector<int>(size_t(n), 0); }

} // namespace

MultiSeries::MultiSeries(RingDescriptor desc, int nvars)
    : desc_(desc), nvars_(nvars) {
  validate_descriptor(desc_);
  if (nvars < 0) throw DescriptorMismatch("nvars must be >= 0");
}

MultiSeries MultiSeries::constant(const RingDescriptor& d, int nvars,
                                  const PadicScalar& c) {
  MultiSeries s(d, nvars);
  s.add_term(zeros(nvars), zeros(d.param_vars), c);
  return s;
}

MultiSeries MultiSeries::variable(const RingDescriptor& d, int nvars, int i) {
  MultiSeries s(d, nvars);
  std::vector<int> xe = zeros(nvars);
  xe.at(size_t(i)) = 1;
  s.add_term(xe, zeros(d.param_vars), padic_one(d.prime, d.precision));
  return s;
}

MultiSeries MultiSeries::t_variable(const RingDescriptor& d, int nvars, int i) {
  MultiSeries s(d, nvars);
  std::vector<int> te = zeros(d.param_vars);
  te.at(size_t(i)) = 1;
  s.add_term(zeros(nvars), te, padic_one(d.prime, d.precision));
  return s;
}

void MultiSeries::add_term(const std::vector<int>& xexp,
                           const std::vector<int>& texp, const PadicScalar& c) {
  if (int(xexp.size()) != nvars_ || int(texp.size()) != desc_.param_vars)
    throw DescriptorMismatch("exponent arity does not match series shape");
  Mono m{xexp, texp};
  if (m.xdeg() > desc_.degree_cutoff || m.tdeg() > desc_.degree_cutoff) return;
  PadicScalar cc = c.with_precision(desc_.precision);
  if (cc.prime() != desc_.prime)
    throw ModulusMismatch("coefficient prime does not match descriptor");
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    if (!cc.is_zero()) terms_.emplace(std::move(m), cc);
  } else {
    it->second = it->second + cc;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

PadicScalar MultiSeries::coefficient_scalar(const std::vector<int>& xexp,
                                            const std::vector<int>& texp) const {
  auto it = terms_.find(Mono{xexp, texp});
  return it == terms_.end() ? padic_zero(desc_.prime, desc_.precision) : it->second;
}

MultiSeries MultiSeries::coefficient(const std::vector<int>& xexp) const {
  RingDescriptor d = desc_;
  MultiSeries out(d, 0);
  for (const auto& [m, c] : terms_)
    if (m.x == xexp) out.add_term({}, m.t, c);
  return out;
}

MultiSeries MultiSeries::scalar_mul(const PadicScalar& c) const {
  MultiSeries out(desc_, nvars_);
  for (const auto& [m, v] : terms_) out.add_term(m.x, m.t, v * c);
  return out;
}

MultiSeries MultiSeries::exact_div_scalar(const PadicScalar& c) const {
  int loss = std::min(c.valuation(), c.precision());
  RingDescriptor d = desc_;
  d.precision = std::min(desc_.precision, c.precision()) - loss;
  if (d.precision < 1)
    throw InexactDivision("division leaves no precision");
  MultiSeries out(d, nvars_);
  for (const auto& [m, v] : terms_) out.add_term(m.x, m.t, v.exact_div(c));
  return out;
}

MultiSeries MultiSeries::with_precision(int k) const {
  RingDescriptor d = desc_;
  d.precision = k;
  MultiSeries out(d, nvars_);
  for (const auto& [m, v] : terms_) out.add_term(m.x, m.t, v.with_precision(k));
  return out;
}

MultiSeries operator+(const MultiSeries& a, const MultiSeries& b) {
  MultiSeries out(merged_descriptor(a, b, "series add"), a.nvars_);
  for (const auto& [m, c] : a.terms_) out.add_term(m.x, m.t, c);
  for (const auto& [m, c] : b.terms_) out.add_term(m.x, m.t, c);
  return out;
}

MultiSeries operator-(const MultiSeries& a, const MultiSeries& b) {
  MultiSeries out(merged_descriptor(a, b, "series sub"), a.nvars_);
  for (const auto& [m, c] : a.terms_) out.add_term(m.x, m.t, c);
  for (const auto& [m, c] : b.terms_) out.add_term(m.x, m.t, -c);
  return out;
}

MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) {
  RingDescriptor d = merged_descriptor(a, b, "series mul");
  MultiSeries out(d, a.nvars_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Mono m;
      m.x.resize(size_t(a.nvars_));
      m.t.resize(size_t(d.param_vars));
      for (size_t i = 0; i < m.x.size(); ++i) m.x[i] = ma.x[i] + mb.x[i];
      for (size_t i = 0; i < m.t.size(); ++i) m.t[i] = ma.t[i] + mb.t[i];
      if (m.xdeg() > d.degree_cutoff || m.tdeg() > d.degree_cutoff) continue;
      out.add_term(m.x, m.t, ca * cb);
    }
  return out;
}

MultiSeries operator-(const MultiSeries& a) {
  MultiSeries out(a.desc_, a.nvars_);
  for (const auto& [m, c] : a.terms_) out.add_term(m.x, m.t, -c);
  return out;
}

bool operator==(const MultiSeries& a, const MultiSeries& b) {
  return a.desc_ == b.desc_ && a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
}

bool operator!=(const MultiSeries& a, const MultiSeries& b) { return !(a == b); }

MultiSeries MultiSeries::substitute(const std::vector<MultiSeries>& images) const {
  if (int(images.size()) != nvars_)
    throw DescriptorMismatch("substitute needs one image per variable, got " +
                             std::to_string(images.size()) + " for " +
                             std::to_string(nvars_));
  int target_vars = images.empty() ? 0 : images[0].nvars_;
  for (size_t i = 0; i < images.size(); ++i) {
    if (images[i].nvars_ != target_vars ||
        images[i].desc_.prime != desc_.prime ||
        images[i].desc_.param_vars != desc_.param_vars ||
        images[i].desc_.degree_cutoff != desc_.degree_cutoff)
      throw DescriptorMismatch("substitute image " + std::to_string(i) +
                               " has incompatible shape");
    if (!images[i].coefficient_scalar(zeros(target_vars), zeros(desc_.param_vars)).is_zero())
      throw NonzeroConstantTerm("substitute image " + std::to_string(i) +
                                " has nonzero constant term");
  }

  RingDescriptor d = desc_;
  for (const auto& img : images) d.precision = std::min(d.precision, img.desc_.precision);

  // lazily grown power tables, pows[i][e] = images[i]^e
  std::vector<std::vector<MultiSeries>> pows;
  pows.resize(size_t(nvars_));
  auto power = [&](int i, int e) -> const MultiSeries& {
    auto& tab = pows[size_t(i)];
    if (tab.empty())
      tab.push_back(MultiSeries::constant(d, target_vars, padic_one(d.prime, d.precision)));
    while (int(tab.size()) <= e) tab.push_back(tab.back() * images[size_t(i)]);
    return tab[size_t(e)];
  };

  MultiSeries out(d, target_vars);
  for (const auto& [m, c] : terms_) {
    MultiSeries acc(d, target_vars);
    acc.add_term(zeros(target_vars), m.t, c);
    for (int i = 0; i < nvars_; ++i)
      if (m.x[size_t(i)] > 0) acc = acc * power(i, m.x[size_t(i)]);
    out = out + acc;
  }
  return out;
}

Evaluation MultiSeries::evaluate(const std::vector<PadicScalar>& point) const {
  int total = nvars_ + desc_.param_vars;
  if (int(point.size()) != total)
    throw DescriptorMismatch("evaluate needs " + std::to_string(total) +
                             " values, got " + std::to_string(point.size()));
  int vmin = desc_.precision;
  for (size_t i = 0; i < point.size(); ++i) {
    if (point[i].prime() != desc_.prime)
      throw ModulusMismatch("evaluation point prime differs from descriptor");
    int v = std::min(point[i].valuation(), point[i].precision());
    if (v == 0)
      throw ValuationTooLow("coordinate " + std::to_string(i) + " is a unit");
    vmin = std::min(vmin, v);
  }
  int k = desc_.precision;
  for (const auto& c : point) k = std::min(k, c.precision());
  PadicScalar acc = padic_zero(desc_.prime, k);
  for (const auto& [m, c] : terms_) {
    PadicScalar term = c.with_precision(k);
    for (int i = 0; i < nvars_; ++i)
      if (m.x[size_t(i)] > 0) term = term * point[size_t(i)].pow(m.x[size_t(i)]);
    for (int i = 0; i < desc_.param_vars; ++i)
      if (m.t[size_t(i)] > 0)
        term = term * point[size_t(nvars_ + i)].pow(m.t[size_t(i)]);
    acc = acc + term;
  }
  int guarantee = std::min(k, (desc_.degree_cutoff + 1) * vmin);
  return Evaluation{acc.with_precision(k), guarantee};
}

std::pair<MultiSeries, int>
MultiSeries::eval_t(const std::vector<PadicScalar>& point) const {
  if (int(point.size()) != desc_.param_vars)
    throw DescriptorMismatch("eval_t needs one value per t-variable");
  int vmin = desc_.precision;
  for (size_t i = 0; i < point.size(); ++i) {
    int v = std::min(point[i].valuation(), point[i].precision());
    if (v == 0)
      throw ValuationTooLow("t-coordinate " + std::to_string(i) + " is a unit");
    vmin = std::min(vmin, v);
  }
  RingDescriptor d = desc_;
  d.param_vars = 0;
  int k = desc_.precision;
  for (const auto& c : point) k = std::min(k, c.precision());
  d.precision = k;
  MultiSeries out(d, nvars_);
  for (const auto& [m, c] : terms_) {
    PadicScalar v = c.with_precision(k);
    for (int i = 0; i < desc_.param_vars; ++i)
      if (m.t[size_t(i)] > 0) v = v * point[size_t(i)].pow(m.t[size_t(i)]);
    out.add_term(m.x, {}, v);
  }
  int guarantee = std::min(k, (desc_.degree_cutoff + 1) * vmin);
  return {out, guarantee};
}

MultiSeries MultiSeries::eval_points(const std::vector<MultiSeries>& args) const {
  if (int(args.size()) != nvars_)
    throw DescriptorMismatch("eval_points needs one argument per variable");
  RingDescriptor d = desc_;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i].nvars_ != 0)
      throw DescriptorMismatch("eval_points arguments must be ring elements");
    if (args[i].desc_.prime != desc_.prime ||
        args[i].desc_.param_vars != desc_.param_vars ||
        args[i].desc_.degree_cutoff != desc_.degree_cutoff)
      throw DescriptorMismatch("eval_points argument descriptor mismatch");
    d.precision = std::min(d.precision, args[i].desc_.precision);
    if (args[i].ideal_order() < 1)
      throw ValuationTooLow("argument " + std::to_string(i) +
                            " lies outside the maximal ideal");
  }

  std::vector<std::vector<MultiSeries>> pows;
  pows.resize(size_t(nvars_));
  auto power = [&](int i, int e) -> const MultiSeries& {
    auto& tab = pows[size_t(i)];
    if (tab.empty()) tab.push_back(ring_one(d));
    while (int(tab.size()) <= e) tab.push_back(tab.back() * args[size_t(i)]);
    return tab[size_t(e)];
  };

  MultiSeries out(d, 0);
  for (const auto& [m, c] : terms_) {
    MultiSeries acc(d, 0);
    acc.add_term({}, m.t, c);
    for (int i = 0; i < nvars_; ++i)
      if (m.x[size_t(i)] > 0) acc = acc * power(i, m.x[size_t(i)]);
    out = out + acc;
  }
  return out;
}

int MultiSeries::ideal_order() const {
  if (terms_.empty()) return desc_.zero_order();
  int best = desc_.zero_order();
  for (const auto& [m, c] : terms_)
    best = std::min(best, c.valuation() + m.xdeg() + m.tdeg());
  return best;
}

std::string MultiSeries::str() const {
  return str([](int i) { return "x" + std::to_string(i + 1); });
}

std::string MultiSeries::str(const std::function<std::string(int)>& xname) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    bool printed = false;
    if (c.residue() != 1 || (m.xdeg() == 0 && m.tdeg() == 0)) {
      os << c.residue();
      printed = true;
    }
    for (int i = 0; i < nvars_; ++i)
      if (m.x[size_t(i)] > 0) {
        if (printed) os << "*";
        os << xname(i);
        if (m.x[size_t(i)] > 1) os << "^" << m.x[size_t(i)];
        printed = true;
      }
    for (int i = 0; i < desc_.param_vars; ++i)
      if (m.t[size_t(i)] > 0) {
        if (printed) os << "*";
        os << "t" << (desc_.param_vars > 1 ? std::to_string(i + 1) : "");
        if (m.t[size_t(i)] > 1) os << "^" << m.t[size_t(i)];
        printed = true;
      }
  }
  return os.str();
}

RingElement ring_zero(const RingDescriptor& d) { return MultiSeries(d, 0); }

RingElement ring_one(const RingDescriptor& d) {
  return MultiSeries::constant(d, 0, padic_one(d.prime, d.precision));
}

RingElement ring_scalar(const RingDescriptor& d, const PadicScalar& c) {
  return MultiSeries::constant(d, 0, c);
}

RingElement ring_scalar(const RingDescriptor& d, long long c) {
  return MultiSeries::constant(d, 0, PadicScalar(d.prime, d.precision, c));
}

RingElement ring_t(const RingDescriptor& d, int i) {
  return MultiSeries::t_variable(d, 0, i);
}

bool congruent_order(const MultiSeries& a, const MultiSeries& b, int order) {
  return (a - b).ideal_order() >= order;
}

} // namespace stdgrp
