#include "stdgrp/lazard.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace stdgrp {

namespace {

int bold_valuation(long long p) { return p == 2 ? 2 : 1; }

int factorial_valuation(int n, long long p) {
  int v = 0;
  long long q = p;
  while (q <= n) {
    v += int(n / q);
    if (q > n / p) break;
    q *= p;
  }
  return v;
}

int int_valuation(int n, long long p) {
  int v = 0;
  while (n % p == 0) {
    n = int(n / p);
    ++v;
  }
  return v;
}

} // namespace

// ---------------------------------------------------------------------------
// matrix exponential / logarithm

PadicMatrix mat_exp(const PadicMatrix& A) {
  long long p = A.prime();
  int k = A.precision();
  int vP = bold_valuation(p);
  if (A.rows() != A.cols())
    throw ValuationTooLow("mat_exp needs a square matrix");
  if (!A.is_zero() && A.min_valuation() < vP)
    throw ValuationTooLow("mat_exp argument has an entry of valuation < " +
                          std::to_string(vP));

  // smallest K with i*vP - v_p(i!) >= k for every i >= K
  int K = 1;
  for (int i = 1; i <= 4 * k + 16; ++i)
    if (i * vP - factorial_valuation(i, p) < k) K = i + 1;
  int guard = factorial_valuation(K, p);
  int kw = k + guard;

  PadicMatrix Aw = A.with_precision(kw);
  PadicMatrix term = PadicMatrix::identity(A.rows(), p, kw);
  PadicMatrix sum = term;
  for (int i = 1; i < K; ++i) {
    term = (term * Aw).exact_div_scalar(PadicScalar(p, term.precision(), i));
    sum = sum + term;
  }
  return sum.with_precision(k);
}

PadicMatrix mat_log(const PadicMatrix& B) {
  long long p = B.prime();
  int k = B.precision();
  int vP = bold_valuation(p);
  if (B.rows() != B.cols())
    throw ValuationTooLow("mat_log needs a square matrix");
  PadicMatrix X = B - PadicMatrix::identity(B.rows(), p, k);
  if (!X.is_zero() && X.min_valuation() < vP)
    throw ValuationTooLow("mat_log argument is not in I + " +
                          std::to_string(p == 2 ? 4 : p) + "*M");

  // smallest K with i*vP - v_p(i) >= k for every i >= K
  int K = 1, guard = 0;
  for (int i = 1; i <= 8 * k + 16; ++i)
    if (i * vP - int_valuation(i, p) < k) K = i + 1;
  for (int i = 1; i < K; ++i) guard = std::max(guard, int_valuation(i, p));
  int kw = k + guard;

  PadicMatrix Xw = X.with_precision(kw);
  PadicMatrix power = PadicMatrix::identity(B.rows(), p, kw);
  PadicMatrix sum(B.rows(), B.rows(), p, k);
  for (int i = 1; i < K; ++i) {
    power = power * Xw;
    PadicMatrix term = power.exact_div_scalar(PadicScalar(p, kw, i));
    term = term.with_precision(k);
    sum = (i % 2 == 1) ? sum + term : sum - term;
  }
  return sum;
}

PadicMatrix bch(const PadicMatrix& A, const PadicMatrix& B) {
  return mat_log(mat_exp(A) * mat_exp(B));
}

// ---------------------------------------------------------------------------
// group powers and p-th roots

StandardPoint gpow(const FormalGroupLaw& F, const StandardPoint& P, BigInt n) {
  if (n < 0) return gpow(F, F.ginv(P), -n);
  StandardPoint acc = F.identity();
  StandardPoint base = P;
  while (n > 0) {
    if ((n & 1) != 0) acc = F.gmul(acc, base);
    if ((n >>= 1) > 0) base = F.gmul(base, base);
  }
  return acc;
}

namespace {

// Divide every coordinate coefficient by p, keeping the precision (the top
// digit is a representative choice that the refinement loop corrects).
StandardPoint divide_point_coords(const FormalGroupLaw& F, const StandardPoint& P) {
  const RingDescriptor& d = F.descriptor();
  std::vector<RingElement> out;
  out.reserve(size_t(P.dim()));
  for (int i = 0; i < P.dim(); ++i) {
    MultiSeries nc(P.coord(i).descriptor(), 0);
    for (const auto& [m, c] : P.coord(i).terms()) {
      if (c.residue() % d.prime != 0)
        throw NotAPower("coordinate " + std::to_string(i) +
                        " is not divisible by p");
      nc.add_term(m.x, m.t, PadicScalar(c.prime(), c.precision(), c.residue() / d.prime));
    }
    out.push_back(std::move(nc));
  }
  try {
    return F.point(std::move(out));
  } catch (const ValuationTooLow& e) {
    throw NotAPower(std::string("root would leave the chart: ") + e.what());
  }
}

StandardPoint single_p_root(const FormalGroupLaw& F, const StandardPoint& P) {
  long long p = F.descriptor().prime;
  StandardPoint Q = divide_point_coords(F, P);
  int rounds = F.descriptor().precision;
  for (int r = 0; r <= rounds; ++r) {
    StandardPoint defect = F.gmul(F.ginv(gpow(F, Q, p)), P);
    if (defect.is_identity()) return Q;
    Q = F.gmul(Q, divide_point_coords(F, defect));
  }
  throw NotAPower("p-th root refinement did not converge within " +
                  std::to_string(rounds) + " rounds");
}

} // namespace

StandardPoint p_root(const FormalGroupLaw& F, const StandardPoint& P, int e) {
  if (e < 1) throw NotAPower("root exponent must be >= 1");
  StandardPoint Q = P;
  for (int s = 0; s < e; ++s) Q = single_p_root(F, Q);
  // acceptance gate: the iteration internals are not load-bearing
  BigInt pe = pow_bigint(BigInt(F.descriptor().prime), e);
  StandardPoint back = gpow(F, Q, pe);
  if (!F.points_equal(back, P))
    throw NotAPower("candidate root fails the direct power check");
  return Q;
}

// ---------------------------------------------------------------------------
// LieLattice

bool LieLattice::is_abelian() const {
  for (const auto& x : c)
    if (!x.is_zero()) return false;
  return true;
}

LieLattice LieLattice::from_constants(int rank, long long prime, int precision,
                                      std::vector<PadicScalar> cs) {
  if (int(cs.size()) != rank * rank * rank)
    throw DescriptorMismatch("structure constant table has wrong size");
  LieLattice L;
  L.rank = rank;
  L.prime = prime;
  L.precision = precision;
  L.c.reserve(cs.size());
  for (auto& x : cs) L.c.push_back(x.with_precision(precision));

  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j)
      for (int l = 0; l < rank; ++l) {
        if (L.at(i, j, l) != -L.at(j, i, l))
          throw DescriptorMismatch("structure constants are not antisymmetric");
        if (i == j && !L.at(i, j, l).is_zero())
          throw DescriptorMismatch("structure constants have c_ii != 0");
      }
  // Jacobi: [e_i,[e_j,e_l]] + [e_j,[e_l,e_i]] + [e_l,[e_i,e_j]] = 0
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j)
      for (int l = 0; l < rank; ++l)
        for (int t = 0; t < rank; ++t) {
          PadicScalar acc = padic_zero(prime, precision);
          for (int m = 0; m < rank; ++m) {
            acc = acc + L.at(j, l, m) * L.at(i, m, t);
            acc = acc + L.at(l, i, m) * L.at(j, m, t);
            acc = acc + L.at(i, j, m) * L.at(l, m, t);
          }
          if (!acc.is_zero())
            throw DescriptorMismatch("structure constants violate the Jacobi identity");
        }

  L.powerful = true;
  int vP = bold_valuation(prime);
  for (const auto& x : L.c)
    if (x.valuation() < vP) L.powerful = false;
  return L;
}

// ---------------------------------------------------------------------------
// representation verification and construction

bool rep_brackets_ok(const LieLattice& L, const MatrixRep& rep) {
  if (int(rep.images.size()) != L.rank) return false;
  for (int i = 0; i < L.rank; ++i)
    for (int j = 0; j < L.rank; ++j) {
      PadicMatrix lhs = rep.images[size_t(i)] * rep.images[size_t(j)] -
                        rep.images[size_t(j)] * rep.images[size_t(i)];
      PadicMatrix rhs(rep.degree, rep.degree, L.prime, L.precision);
      for (int l = 0; l < L.rank; ++l)
        rhs = rhs + rep.images[size_t(l)].scalar_mul(L.at(i, j, l));
      if (lhs != rhs) return false;
    }
  return true;
}

std::vector<std::vector<PadicScalar>> rep_kernel(const MatrixRep& rep) {
  int d = int(rep.images.size());
  int ell = rep.degree;
  long long p = rep.images.empty() ? 2 : rep.images[0].prime();
  int k = rep.images.empty() ? 1 : rep.images[0].precision();
  PadicMatrix stack(d, ell * ell, p, k);
  for (int i = 0; i < d; ++i)
    for (int r = 0; r < ell; ++r)
      for (int c = 0; c < ell; ++c)
        stack.set(i, r * ell + c, rep.images[size_t(i)].at(r, c));
  return howell_kernel(stack);
}

bool rep_faithful(const MatrixRep& rep) {
  for (const auto& gen : rep_kernel(rep))
    for (const auto& x : gen)
      if (x.is_unit()) return false;
  return true;
}

namespace {

MatrixRep make_abelian(const LieLattice& L) {
  if (!L.is_abelian())
    throw NoStrategyApplies("abelian strategy needs zero structure constants");
  MatrixRep rep;
  rep.degree = L.rank;
  rep.strategy = "abelian";
  for (int i = 0; i < L.rank; ++i) {
    PadicMatrix m(L.rank, L.rank, L.prime, L.precision);
    m.set(i, i, padic_one(L.prime, L.precision));
    rep.images.push_back(std::move(m));
  }
  return rep;
}

MatrixRep make_adjoint(const LieLattice& L) {
  MatrixRep rep;
  rep.degree = L.rank;
  rep.strategy = "adjoint";
  for (int i = 0; i < L.rank; ++i) {
    PadicMatrix m(L.rank, L.rank, L.prime, L.precision);
    // ad(e_i) e_j = sum_l c_ijl e_l
    for (int j = 0; j < L.rank; ++j)
      for (int l = 0; l < L.rank; ++l) m.set(l, j, L.at(i, j, l));
    rep.images.push_back(std::move(m));
  }
  return rep;
}

// multi-indices of total degree <= cls, ordered by (degree, lex)
std::vector<std::vector<int>> pbw_basis(int rank, int cls) {
  std::vector<std::vector<int>> out;
  std::vector<std::vector<int>> layer{std::vector<int>(size_t(rank), 0)};
  out.push_back(layer[0]);
  for (int deg = 1; deg <= cls; ++deg) {
    std::vector<std::vector<int>> next;
    // enumerate degree-deg multi-indices in lex order
    std::vector<int> idx(size_t(rank), 0);
    idx[0] = deg;
    while (true) {
      next.push_back(idx);
      // next composition of deg in lex-descending first coordinate order
      int pos = rank - 2;
      while (pos >= 0 && idx[size_t(pos)] == 0) --pos;
      if (pos < 0) break;
      idx[size_t(pos)] -= 1;
      int rest = 1;
      for (int q = pos + 1; q < rank; ++q) {
        rest += idx[size_t(q)];
        idx[size_t(q)] = 0;
      }
      idx[size_t(pos + 1)] = rest;
    }
    for (auto& v : next) out.push_back(std::move(v));
  }
  return out;
}

// Left-regular action on U(L)/I^(cls+1): straighten the word e_i * e^alpha
// with the rewriting rule e_a e_b -> e_b e_a + sum_l c_abl e_l for a > b.
std::map<std::vector<int>, PadicScalar>
straighten(const LieLattice& L, int gen, const std::vector<int>& alpha, int cls) {
  std::vector<int> word{gen};
  for (int i = 0; i < L.rank; ++i)
    for (int rep = 0; rep < alpha[size_t(i)]; ++rep) word.push_back(i);

  std::map<std::vector<int>, PadicScalar> out;
  std::vector<std::pair<PadicScalar, std::vector<int>>> stack;
  stack.emplace_back(padic_one(L.prime, L.precision), std::move(word));
  while (!stack.empty()) {
    auto [coef, w] = std::move(stack.back());
    stack.pop_back();
    if (coef.is_zero()) continue;
    size_t s = 0;
    while (s + 1 < w.size() && w[s] <= w[s + 1]) ++s;
    if (s + 1 >= w.size()) {
      if (int(w.size()) > cls) continue; // lands in I^(cls+1)
      std::vector<int> idx(size_t(L.rank), 0);
      for (int g : w) idx[size_t(g)] += 1;
      auto it = out.find(idx);
      if (it == out.end())
        out.emplace(std::move(idx), coef);
      else {
        it->second = it->second + coef;
        if (it->second.is_zero()) out.erase(it);
      }
      continue;
    }
    int a = w[s], b = w[s + 1];
    std::vector<int> swapped = w;
    std::swap(swapped[s], swapped[s + 1]);
    stack.emplace_back(coef, std::move(swapped));
    for (int l = 0; l < L.rank; ++l) {
      const PadicScalar& cab = L.at(a, b, l);
      if (cab.is_zero()) continue;
      std::vector<int> shorter;
      shorter.reserve(w.size() - 1);
      shorter.insert(shorter.end(), w.begin(), w.begin() + long(s));
      shorter.push_back(l);
      shorter.insert(shorter.end(), w.begin() + long(s + 2), w.end());
      stack.emplace_back(coef * cab, std::move(shorter));
    }
  }
  return out;
}

MatrixRep make_nilpotent(const LieLattice& L) {
  // lower central series mod p^k as Howell forms of generating sets
  auto bracket_into = [&](int i, const std::vector<PadicScalar>& v) {
    std::vector<PadicScalar> out(size_t(L.rank), padic_zero(L.prime, L.precision));
    for (int j = 0; j < L.rank; ++j)
      for (int l = 0; l < L.rank; ++l)
        out[size_t(l)] = out[size_t(l)] + v[size_t(j)] * L.at(i, j, l);
    return out;
  };

  std::vector<std::vector<PadicScalar>> current;
  for (int i = 0; i < L.rank; ++i) {
    std::vector<PadicScalar> e(size_t(L.rank), padic_zero(L.prime, L.precision));
    e[size_t(i)] = padic_one(L.prime, L.precision);
    current.push_back(std::move(e));
  }
  int cls = 0;
  for (int s = 1;; ++s) {
    std::vector<std::vector<PadicScalar>> next;
    for (int i = 0; i < L.rank; ++i)
      for (const auto& g : current) next.push_back(bracket_into(i, g));
    auto H = howell_form(std::move(next), L.prime, L.precision);
    if (H.empty()) {
      cls = s;
      break;
    }
    if (H == current)
      throw NoStrategyApplies(
          "lower central series stabilizes nonzero mod p^k; lattice is not nilpotent");
    current = std::move(H);
    if (s > L.rank * L.precision + 2)
      throw NoStrategyApplies("lower central series does not terminate");
  }

  auto basis = pbw_basis(L.rank, cls);
  std::map<std::vector<int>, int> index;
  for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = int(i);
  int ell = int(basis.size());

  MatrixRep rep;
  rep.degree = ell;
  rep.strategy = "nilpotent";
  for (int i = 0; i < L.rank; ++i) {
    PadicMatrix m(ell, ell, L.prime, L.precision);
    for (int col = 0; col < ell; ++col) {
      auto prod = straighten(L, i, basis[size_t(col)], cls);
      for (const auto& [idx, coef] : prod) m.set(index.at(idx), col, coef);
    }
    rep.images.push_back(std::move(m));
  }
  return rep;
}

MatrixRep make_supplied(const LieLattice& L, const std::vector<PadicMatrix>& supplied) {
  if (supplied.empty())
    throw NoStrategyApplies("no supplied matrices");
  if (int(supplied.size()) != L.rank)
    throw NoStrategyApplies("supplied strategy needs one matrix per basis element");
  MatrixRep rep;
  rep.degree = supplied[0].rows();
  rep.strategy = "supplied";
  for (const auto& m : supplied) {
    if (m.rows() != rep.degree || m.cols() != rep.degree || m.prime() != L.prime)
      throw NoStrategyApplies("supplied matrices have inconsistent shapes");
    rep.images.push_back(m.with_precision(L.precision));
  }
  return rep;
}

MatrixRep finish_rep(const LieLattice& L, MatrixRep rep) {
  if (!rep_brackets_ok(L, rep))
    throw UnfaithfulRep(rep.strategy + " images violate the bracket relations");
  if (!rep_faithful(rep))
    throw UnfaithfulRep(rep.strategy + " representation has a kernel at precision");
  return rep;
}

} // namespace

MatrixRep build_rep(const LieLattice& L, const std::string& strategy,
                    const std::vector<PadicMatrix>& supplied) {
  if (strategy == "abelian") return finish_rep(L, make_abelian(L));
  if (strategy == "adjoint") return finish_rep(L, make_adjoint(L));
  if (strategy == "nilpotent") return finish_rep(L, make_nilpotent(L));
  if (strategy == "supplied") return finish_rep(L, make_supplied(L, supplied));
  if (strategy != "auto")
    throw NoStrategyApplies("unknown strategy: " + strategy);

  std::vector<std::string> attempts;
  auto attempt = [&](auto&& maker) -> std::optional<MatrixRep> {
    try {
      return finish_rep(L, maker());
    } catch (const NoStrategyApplies& e) {
      attempts.push_back(e.what());
    } catch (const UnfaithfulRep& e) {
      attempts.push_back(e.what());
    }
    return std::nullopt;
  };

  if (auto r = attempt([&] { return make_abelian(L); })) return *r;
  if (auto r = attempt([&] { return make_adjoint(L); })) return *r;
  if (auto r = attempt([&] { return make_nilpotent(L); })) return *r;
  if (auto r = attempt([&] { return make_supplied(L, supplied); })) return *r;

  std::string detail;
  for (const auto& a : attempts) detail += "; " + a;
  throw NoStrategyApplies("no strategy yields a faithful representation" + detail);
}

// ---------------------------------------------------------------------------
// LazardContext

LazardContext::LazardContext(const FormalGroupLaw& F) : base_(F), work_(F) {
  const RingDescriptor& d = F.descriptor();
  if (d.param_vars != 0)
    throw DescriptorMismatch("Lazard operations need a Zp-law (no t-variables)");
  if (!F.level_ok())
    throw DescriptorMismatch("law level violates the uniformity constraint");
  cap_ = std::max(d.precision, 4);
  int headroom = F.level() * (2 * cap_ + 4) + 4;
  work_ = F.with_precision(d.precision + headroom);
}

StandardPoint LazardContext::lift(const StandardPoint& P) const {
  return work_.point(StandardPoint(P.coords(), P.guarantee())
                         .with_precision(work_.descriptor().precision)
                         .coords());
}

StandardPoint LazardContext::reduce(const StandardPoint& P) const {
  return base_.point(P.with_precision(base_.descriptor().precision).coords());
}

LimitResult LazardContext::limit(const StandardPoint& Pw, const StandardPoint& Qw,
                                 bool use_bracket) const {
  long long p = base_.descriptor().prime;
  int detect = base_.descriptor().precision;
  StandardPoint prev = use_bracket ? work_.gcomm(Pw, Qw) : work_.gmul(Pw, Qw);
  BigInt pn = 1;
  for (int n = 1; n <= cap_; ++n) {
    pn *= p;
    StandardPoint A = gpow(work_, Pw, pn);
    StandardPoint B = gpow(work_, Qw, pn);
    StandardPoint z = use_bracket ? work_.gcomm(A, B) : work_.gmul(A, B);
    z = p_root(work_, z, use_bracket ? 2 * n : n);
    bool stable = true;
    for (int i = 0; i < base_.dim() && stable; ++i)
      stable = congruent_order(z.coord(i), prev.coord(i), detect);
    if (stable) return LimitResult{z, n - 1};
    prev = z;
  }
  throw NoStabilization("Lazard limit did not stabilize within " +
                        std::to_string(cap_) + " iterations (non-uniform law?)");
}

LimitResult LazardContext::add(const StandardPoint& P, const StandardPoint& Q) const {
  auto r = limit(lift(P), lift(Q), false);
  return LimitResult{reduce(r.value), r.stabilized_at};
}

LimitResult LazardContext::bracket(const StandardPoint& P, const StandardPoint& Q) const {
  auto r = limit(lift(P), lift(Q), true);
  return LimitResult{reduce(r.value), r.stabilized_at};
}

std::vector<StandardPoint> LazardContext::basis() const {
  std::vector<StandardPoint> out;
  BigInt pN = pow_bigint(BigInt(base_.descriptor().prime), base_.level());
  for (int i = 0; i < base_.dim(); ++i) {
    std::vector<BigInt> coords(size_t(base_.dim()), 0);
    coords[size_t(i)] = pN;
    out.push_back(base_.point_from_integers(coords));
  }
  return out;
}

std::vector<PadicScalar> LazardContext::lie_coordinates(const StandardPoint& P) const {
  // lambda(g) = lim coords(g^{p^n}) / p^{N+n}: integer powers act as group
  // powers in the Lazard module and the chart becomes linear in the limit.
  // Two successive iterates must agree mod p^k, which keeps the convergence
  // rate assumption non-load-bearing.
  long long p = base_.descriptor().prime;
  int k = base_.descriptor().precision;
  int N = base_.level();
  int d = base_.dim();

  int n = k + 4 + (p == 2 ? 1 : 0);
  StandardPoint g1 = gpow(work_, lift(P), pow_bigint(BigInt(p), n));
  StandardPoint g2 = gpow(work_, g1, p);

  auto read = [&](const StandardPoint& g, int steps) {
    BigInt div = pow_bigint(BigInt(p), N + steps);
    std::vector<BigInt> lam(size_t(d), 0);
    for (int i = 0; i < d; ++i) {
      BigInt res = g.coord(i).coefficient_scalar({}, {}).residue();
      if (res % div != 0)
        throw NoStabilization("power limit is not divisible by p^(N+n)");
      lam[size_t(i)] = res / div;
    }
    return lam;
  };

  auto lam1 = read(g1, n);
  auto lam2 = read(g2, n + 1);
  BigInt modk = pow_bigint(BigInt(p), k);
  for (int i = 0; i < d; ++i)
    if ((lam1[size_t(i)] - lam2[size_t(i)]) % modk != 0)
      throw NoStabilization("Lazard coordinate iterates disagree mod p^k");

  std::vector<PadicScalar> out;
  out.reserve(size_t(d));
  for (int i = 0; i < d; ++i) out.emplace_back(p, k, lam2[size_t(i)]);
  return out;
}

StandardPoint LazardContext::combination(const std::vector<BigInt>& lambda) const {
  if (int(lambda.size()) != base_.dim())
    throw DescriptorMismatch("combination needs one coefficient per basis element");
  std::vector<StandardPoint> ew;
  for (const auto& e : basis()) ew.push_back(lift(e));
  StandardPoint acc = work_.identity();
  bool first = true;
  for (int i = 0; i < base_.dim(); ++i) {
    if (lambda[size_t(i)] == 0) continue;
    StandardPoint part = gpow(work_, ew[size_t(i)], lambda[size_t(i)]);
    acc = first ? part : limit(acc, part, false).value;
    first = false;
  }
  return reduce(acc);
}

LieLattice LazardContext::lattice() const {
  int d = base_.dim();
  long long p = base_.descriptor().prime;
  int k = base_.descriptor().precision;
  std::vector<PadicScalar> c(size_t(d * d * d), padic_zero(p, k));
  auto at = [&](int i, int j, int l) -> PadicScalar& {
    return c[size_t((i * d + j) * d + l)];
  };

  auto e = basis();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      auto b = bracket(e[size_t(i)], e[size_t(j)]);
      auto lam = lie_coordinates(b.value);
      for (int l = 0; l < d; ++l) {
        at(i, j, l) = lam[size_t(l)];
        at(j, i, l) = -lam[size_t(l)];
      }
    }

  LieLattice L = LieLattice::from_constants(d, p, k, std::move(c));
  if (!L.powerful)
    throw NotPowerful("structure constants have valuation below v_p(bold p)");
  return L;
}

bool LazardContext::in_power_subgroup(const StandardPoint& P) const {
  auto lam = lie_coordinates(P);
  for (const auto& x : lam)
    if (x.residue() % bold_p() != 0) return false;
  return true;
}

std::vector<StandardPoint> LazardContext::transversal() const {
  int d = base_.dim();
  long long bp = bold_p();
  std::vector<StandardPoint> out;
  std::vector<BigInt> v(size_t(d), 0);
  while (true) {
    out.push_back(combination(v));
    int pos = d - 1;
    while (pos >= 0) {
      if (++v[size_t(pos)] < bp) break;
      v[size_t(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }

  // pairwise distinct cosets of G^bold_p: t_i^-1 t_j has no bold_p-th root
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t j = i + 1; j < out.size(); ++j) {
      StandardPoint diff = base_.gmul(base_.ginv(out[i]), out[j]);
      bool has_root = true;
      try {
        p_root(base_, diff, root_exponent());
      } catch (const NotAPower&) {
        has_root = false;
      }
      if (has_root)
        throw TransversalVerificationFailed(
            "transversal elements " + std::to_string(i) + " and " +
            std::to_string(j) + " lie in the same coset at precision");
    }
  return out;
}

// ---------------------------------------------------------------------------
// free-function surface

StandardPoint lazard_add(const FormalGroupLaw& F, const StandardPoint& P,
                         const StandardPoint& Q) {
  return LazardContext(F).add(P, Q).value;
}

StandardPoint lazard_bracket(const FormalGroupLaw& F, const StandardPoint& P,
                             const StandardPoint& Q) {
  return LazardContext(F).bracket(P, Q).value;
}

LieLattice lie_lattice_of(const FormalGroupLaw& F) {
  return LazardContext(F).lattice();
}

std::vector<PadicScalar> lie_coordinates(const FormalGroupLaw& F,
                                         const StandardPoint& P) {
  return LazardContext(F).lie_coordinates(P);
}

std::vector<StandardPoint> coset_transversal(const FormalGroupLaw& F) {
  return LazardContext(F).transversal();
}

// ---------------------------------------------------------------------------
// InducedImage

InducedImage::InducedImage(std::vector<int> block_row, std::vector<PadicMatrix> blocks)
    : block_row_(std::move(block_row)), blocks_(std::move(blocks)) {}

int InducedImage::block_size() const {
  return blocks_.empty() ? 0 : blocks_[0].rows();
}

PadicMatrix InducedImage::dense() const {
  int ell = block_size();
  int n = block_count() * ell;
  long long p = blocks_[0].prime();
  int k = blocks_[0].precision();
  PadicMatrix m(n, n, p, k);
  for (int col = 0; col < block_count(); ++col) {
    int row = block_row_[size_t(col)];
    for (int r = 0; r < ell; ++r)
      for (int c = 0; c < ell; ++c)
        m.set(row * ell + r, col * ell + c, blocks_[size_t(col)].at(r, c));
  }
  return m;
}

bool InducedImage::congruent(const InducedImage& o, int digits) const {
  // blocks lie in I + pM, hence are nonzero: distinct block positions mean
  // distinct dense matrices
  if (block_row_ != o.block_row_) return false;
  for (int i = 0; i < block_count(); ++i)
    if (!blocks_[size_t(i)].congruent(o.blocks_[size_t(i)], digits)) return false;
  return true;
}

InducedImage operator*(const InducedImage& a, const InducedImage& b) {
  std::vector<int> rows(size_t(b.block_count()), 0);
  std::vector<PadicMatrix> blocks;
  blocks.reserve(size_t(b.block_count()));
  for (int i = 0; i < b.block_count(); ++i) {
    int mid = b.block_row_[size_t(i)];
    rows[size_t(i)] = a.block_row_[size_t(mid)];
    blocks.push_back(a.blocks_[size_t(mid)] * b.blocks_[size_t(i)]);
  }
  return InducedImage(std::move(rows), std::move(blocks));
}

bool operator==(const InducedImage& a, const InducedImage& b) {
  return a.block_row_ == b.block_row_ && a.blocks_ == b.blocks_;
}

// ---------------------------------------------------------------------------
// UniformEmbedding

UniformEmbedding::UniformEmbedding(const FormalGroupLaw& F, MatrixRep rep)
    : ctx_(F), rep_(std::move(rep)), lattice_(ctx_.lattice()),
      transversal_(ctx_.transversal()) {
  if (!rep_brackets_ok(lattice_, rep_))
    throw UnfaithfulRep("images do not satisfy the lattice bracket relations");
  if (!rep_faithful(rep_))
    throw UnfaithfulRep("representation has a kernel at precision");
  // digit vectors follow the transversal enumeration order
  long long bp = ctx_.bold_p();
  int d = F.dim();
  std::vector<int> v(size_t(d), 0);
  for (size_t idx = 0; idx < transversal_.size(); ++idx) {
    transversal_digits_.push_back(v);
    int pos = d - 1;
    while (pos >= 0) {
      if (++v[size_t(pos)] < bp) break;
      v[size_t(pos)] = 0;
      --pos;
    }
  }
}

UniformEmbedding UniformEmbedding::with_auto_rep(const FormalGroupLaw& F) {
  LazardContext ctx(F);
  return UniformEmbedding(F, build_rep(ctx.lattice()));
}

BigInt UniformEmbedding::degree() const {
  return BigInt(transversal_.size()) * rep_.degree;
}

int UniformEmbedding::digit_index(const std::vector<PadicScalar>& lambda) const {
  long long bp = ctx_.bold_p();
  std::vector<int> v;
  v.reserve(lambda.size());
  for (const auto& x : lambda) v.push_back(int(x.residue() % bp));
  for (size_t i = 0; i < transversal_digits_.size(); ++i)
    if (transversal_digits_[i] == v) return int(i);
  throw TransversalVerificationFailed("digit vector not found in transversal");
}

int UniformEmbedding::find_coset_index(const StandardPoint& x) const {
  const auto& law = ctx_.law();
  // fast path: for odd p the coset is determined by lambda mod p; for p = 2
  // the BCH corrections are only divisible by 2, so the candidate needs a
  // membership check with a scan fallback
  int cand = digit_index(ctx_.lie_coordinates(x));
  auto in_subgroup = [&](int j) {
    StandardPoint h = law.gmul(law.ginv(transversal_[size_t(j)]), x);
    return ctx_.in_power_subgroup(h);
  };
  if (in_subgroup(cand)) return cand;
  for (int j = 0; j < int(transversal_.size()); ++j)
    if (j != cand && in_subgroup(j)) return j;
  throw TransversalVerificationFailed(
      "element falls in no coset of the transversal");
}

PadicMatrix UniformEmbedding::m1(const StandardPoint& g) const {
  auto lam = ctx_.lie_coordinates(g);
  long long bp = ctx_.bold_p();
  const auto& law = ctx_.law();
  PadicMatrix A(rep_.degree, rep_.degree, law.descriptor().prime,
                law.descriptor().precision);
  for (size_t i = 0; i < lam.size(); ++i) {
    if (lam[i].residue() % bp != 0)
      throw NotAPower("element is not in G^bold_p");
    A = A + rep_.images[i].scalar_mul(lam[i]);
  }
  return mat_exp(A);
}

InducedImage UniformEmbedding::image(const StandardPoint& g) const {
  const auto& law = ctx_.law();
  int count = int(transversal_.size());
  std::vector<int> rows(size_t(count), 0);
  std::vector<PadicMatrix> blocks;
  blocks.reserve(size_t(count));
  for (int i = 0; i < count; ++i) {
    StandardPoint x = law.gmul(g, transversal_[size_t(i)]);
    int j = find_coset_index(x);
    StandardPoint h = law.gmul(law.ginv(transversal_[size_t(j)]), x);
    rows[size_t(i)] = j;
    blocks.push_back(m1(h)); // throws if h is not in G^bold_p
  }
  return InducedImage(std::move(rows), std::move(blocks));
}

StandardPoint UniformEmbedding::random_point(std::uint64_t& state) const {
  auto next = [&state] {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  const auto& law = ctx_.law();
  long long p = law.descriptor().prime;
  int k = law.descriptor().precision;
  int N = law.level();
  std::vector<BigInt> coords;
  for (int i = 0; i < law.dim(); ++i) {
    BigInt r = 0;
    for (int digit = 0; digit < k - N; ++digit)
      r = r * p + (long long)(next() % (std::uint64_t)p);
    coords.push_back(r * pow_bigint(BigInt(p), N));
  }
  return law.point_from_integers(coords);
}

GroupHomCertificate UniformEmbedding::certify(
    int mult_samples, const std::vector<StandardPoint>& separate,
    std::uint64_t seed) const {
  const auto& law = ctx_.law();
  GroupHomCertificate cert;
  cert.law_name = law.name();
  cert.prime = law.descriptor().prime;
  cert.level = law.level();
  cert.dim = law.dim();
  cert.precision = law.descriptor().precision;
  cert.bold_p = ctx_.bold_p();
  cert.rep_degree = rep_.degree;
  cert.rep_strategy = rep_.strategy;
  cert.subgroup_index = BigInt(transversal_.size());
  cert.degree = degree();
  cert.degree_bound = pow_bigint(BigInt(cert.prime), cert.level * cert.dim) *
                      cert.subgroup_index * rep_.degree;
  cert.seed = seed;
  cert.degree_bound_ok = cert.degree <= cert.degree_bound;
  cert.check_precision =
      std::max(1, law.descriptor().precision - law.level());

  std::uint64_t state = seed;
  cert.multiplicativity_ok = true;
  for (int s = 0; s < mult_samples; ++s) {
    StandardPoint P = random_point(state);
    StandardPoint Q = random_point(state);
    bool ok = image(law.gmul(P, Q))
                  .congruent(image(P) * image(Q), cert.check_precision);
    cert.multiplicativity.push_back({P, Q, ok});
    cert.multiplicativity_ok = cert.multiplicativity_ok && ok;
  }

  cert.separated_points = separate;
  for (const auto& P : separate) cert.separated_images.push_back(image(P));
  cert.injectivity_ok = true;
  for (size_t i = 0; i < separate.size(); ++i)
    for (size_t j = i + 1; j < separate.size(); ++j)
      if (cert.separated_images[i].congruent(cert.separated_images[j],
                                             cert.check_precision))
        cert.injectivity_ok = false;
  return cert;
}

GroupHomCertificate uniform_embedding(const FormalGroupLaw& F, const MatrixRep& rep,
                                      int mult_samples, std::uint64_t seed) {
  UniformEmbedding emb(F, rep);
  return emb.certify(mult_samples, emb.transversal(), seed);
}

} // namespace stdgrp
