#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "stdgrp/lazard.hpp"

using namespace stdgrp;

namespace {

std::mt19937_64 rng(1312);

RingDescriptor zp(long long p, int k, int D = 4) { return RingDescriptor{p, k, 0, D}; }

PadicMatrix eij(int n, int i, int j, long long p, int k, long long val = 1) {
  PadicMatrix m(n, n, p, k);
  m.set(i, j, PadicScalar(p, k, val));
  return m;
}

BigInt scalar_of(const StandardPoint& P, int i) {
  return P.coord(i).coefficient_scalar({}, {}).residue();
}

LieLattice sl2_lattice(long long p, int k) {
  std::vector<PadicScalar> c(27, padic_zero(p, k));
  auto set = [&](int i, int j, int l, long long v) {
    c[size_t((i * 3 + j) * 3 + l)] = PadicScalar(p, k, v);
    c[size_t((j * 3 + i) * 3 + l)] = PadicScalar(p, k, -v);
  };
  set(0, 1, 1, 2);  // [h,e] = 2e
  set(0, 2, 2, -2); // [h,f] = -2f
  set(1, 2, 0, 1);  // [e,f] = h
  return LieLattice::from_constants(3, p, k, std::move(c));
}

LieLattice heisenberg_lattice(long long p, int k, long long scale) {
  std::vector<PadicScalar> c(27, padic_zero(p, k));
  c[size_t((0 * 3 + 1) * 3 + 2)] = PadicScalar(p, k, scale);
  c[size_t((1 * 3 + 0) * 3 + 2)] = PadicScalar(p, k, -scale);
  return LieLattice::from_constants(3, p, k, std::move(c));
}

PadicMatrix random_exp_domain_matrix(long long p, int k, int n) {
  int vP = p == 2 ? 2 : 1;
  BigInt scale = pow_bigint(BigInt(p), vP);
  BigInt lim = pow_bigint(BigInt(p), k - vP);
  PadicMatrix m(n, n, p, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      BigInt r = 0;
      for (int digit = 0; digit < k; ++digit)
        r = r * p + (long long)(rng() % (unsigned long long)p);
      m.set(i, j, PadicScalar(p, k, (r % lim) * scale));
    }
  return m;
}

} // namespace

TEST_CASE("gpow") {
  auto law = multiplicative_law(zp(3, 3), 1);
  auto P = law.point_from_integers({3});
  CHECK(scalar_of(gpow(law, P, 2), 0) == 15);
  CHECK(scalar_of(gpow(law, P, 3), 0) == 9); // (1+3)^3 - 1 = 63 = 9 mod 27
  CHECK(gpow(law, P, 0).is_identity());
  CHECK(law.points_equal(gpow(law, P, -2), law.ginv(gpow(law, P, 2))));
}

TEST_CASE("p_root") {
  auto add = additive_law(zp(3, 3), 1, 1);
  auto r = p_root(add, add.point_from_integers({9}), 1);
  CHECK(scalar_of(r, 0) == 3);
  CHECK(p_root(add, add.identity(), 2).is_identity());

  auto mul = multiplicative_law(zp(3, 3), 1);
  auto r2 = p_root(mul, mul.point_from_integers({9}), 1);
  CHECK(r2.coord(0).coefficient_scalar({}, {}).congruent(PadicScalar(3, 3, 3), 2));
  CHECK(mul.points_equal(gpow(mul, r2, 3), mul.point_from_integers({9})));

  CHECK_THROWS_AS(p_root(mul, mul.point_from_integers({3}), 1), NotAPower);
}

TEST_CASE("lazard_add on abelian laws is the group product") {
  auto mul = multiplicative_law(zp(3, 3), 1);
  auto P = mul.point_from_integers({3});
  CHECK(scalar_of(lazard_add(mul, P, P), 0) == 15);
  CHECK(lazard_bracket(mul, P, mul.point_from_integers({6})).is_identity());
}

TEST_CASE("Heisenberg lazard bracket and lattice") {
  auto heis = heisenberg_law(zp(3, 6), 1);
  auto e1 = heis.point_from_integers({3, 0, 0});
  auto e2 = heis.point_from_integers({0, 3, 0});
  auto b = lazard_bracket(heis, e1, e2);
  CHECK(scalar_of(b, 0) == 0);
  CHECK(scalar_of(b, 1) == 0);
  CHECK(scalar_of(b, 2) == 9);

  auto L = lie_lattice_of(heis);
  CHECK(L.rank == 3);
  CHECK(L.powerful);
  CHECK(L.at(0, 1, 2).residue() == 3);
  CHECK(L.at(1, 0, 2).residue() == pow_bigint(BigInt(3), 6) - 3);
  CHECK(L.at(0, 1, 0).is_zero());
  CHECK(L.at(0, 2, 2).is_zero());
}

TEST_CASE("abelian laws have zero lattices") {
  auto add = additive_law(zp(3, 6), 2, 1);
  CHECK(lie_lattice_of(add).is_abelian());
  auto mul = multiplicative_law(zp(3, 6), 1);
  CHECK(lie_lattice_of(mul).is_abelian());
}

TEST_CASE("lazard constants match p^N times the quadratic bracket") {
  for (const auto& name : {"additive", "multiplicative", "heisenberg"}) {
    auto law = builtin_law(name, zp(3, 6), 1);
    auto L = lie_lattice_of(law);
    auto q = law.extract_bracket();
    BigInt mod = pow_bigint(BigInt(3), 4); // k - 2N
    for (int i = 0; i < law.dim(); ++i)
      for (int j = 0; j < law.dim(); ++j)
        for (int l = 0; l < law.dim(); ++l) {
          BigInt expect = 3 * q[size_t(i)][size_t(j)][size_t(l)]
                                  .coefficient_scalar({}, {})
                                  .residue();
          BigInt got = L.at(i, j, l).residue();
          CHECK((got - expect) % mod == 0);
        }
  }
}

TEST_CASE("limit outputs are stable under extra precision") {
  for (int k : {4, 6}) {
    auto heis = heisenberg_law(zp(3, k), 1);
    auto heis_hi = heisenberg_law(zp(3, k + 2), 1);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<BigInt> a, b;
      for (int i = 0; i < 3; ++i) {
        a.push_back(3 * (long long)(rng() % 27));
        b.push_back(3 * (long long)(rng() % 27));
      }
      auto low = lazard_add(heis, heis.point_from_integers(a),
                            heis.point_from_integers(b));
      auto high = lazard_add(heis_hi, heis_hi.point_from_integers(a),
                             heis_hi.point_from_integers(b));
      BigInt mod = pow_bigint(BigInt(3), k - 2);
      for (int i = 0; i < 3; ++i)
        CHECK((scalar_of(low, i) - scalar_of(high, i)) % mod == 0);
    }
  }
}

TEST_CASE("lie_coordinates") {
  auto heis = heisenberg_law(zp(3, 6), 1);
  LazardContext ctx(heis);
  auto e = ctx.basis();

  auto lam = ctx.lie_coordinates(e[1]);
  CHECK(lam[0].is_zero());
  CHECK(lam[1].residue() == 1);
  CHECK(lam[2].is_zero());

  auto lam5 = ctx.lie_coordinates(gpow(heis, e[0], 5));
  CHECK(lam5[0].residue() == 5);
  CHECK(lam5[1].is_zero());
  CHECK(lam5[2].is_zero());

  // roundtrip: combination then extraction
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<BigInt> want;
    for (int i = 0; i < 3; ++i) want.push_back((long long)(rng() % 729));
    auto point = ctx.combination(want);
    auto got = ctx.lie_coordinates(point);
    BigInt mod = pow_bigint(BigInt(3), 4);
    for (int i = 0; i < 3; ++i)
      CHECK((got[size_t(i)].residue() - want[size_t(i)]) % mod == 0);
  }
}

TEST_CASE("build_rep abelian") {
  std::vector<PadicScalar> zeros(8, padic_zero(3, 4));
  auto L = LieLattice::from_constants(2, 3, 4, zeros);
  auto rep = build_rep(L);
  CHECK(rep.strategy == "abelian");
  CHECK(rep.degree == 2);
  CHECK(rep.images[0] == eij(2, 0, 0, 3, 4));
  CHECK(rep.images[1] == eij(2, 1, 1, 3, 4));
  CHECK(rep_kernel(rep).empty());
}

TEST_CASE("build_rep adjoint on sl2") {
  auto L = sl2_lattice(3, 4);
  CHECK_FALSE(L.powerful);
  auto rep = build_rep(L);
  CHECK(rep.strategy == "adjoint");
  CHECK(rep.degree == 3);
  CHECK(rep_brackets_ok(L, rep));
  CHECK(rep_faithful(rep));
  CHECK(rep_kernel(rep).empty());
}

TEST_CASE("build_rep nilpotent on the Heisenberg lattice") {
  auto L = heisenberg_lattice(3, 5, 3);
  CHECK(L.powerful);
  auto rep = build_rep(L);
  CHECK(rep.strategy == "nilpotent");
  CHECK(rep.degree == 10); // multi-indices of degree <= 2 in rank 3
  CHECK(rep_brackets_ok(L, rep));
  CHECK(rep_faithful(rep));
  CHECK(rep_kernel(rep).empty());
}

TEST_CASE("build_rep supplied Heisenberg hand representation") {
  auto L = heisenberg_lattice(3, 5, 3);
  std::vector<PadicMatrix> hand{eij(3, 0, 1, 3, 5), eij(3, 1, 2, 3, 5, 3),
                                eij(3, 0, 2, 3, 5)};
  auto rep = build_rep(L, "supplied", hand);
  CHECK(rep.strategy == "supplied");
  CHECK(rep_brackets_ok(L, rep));
  CHECK(rep_faithful(rep));
  // the kernel is nonempty mod p^k but saturated into p Z^d
  auto K = rep_kernel(rep);
  CHECK_FALSE(K.empty());
  for (const auto& gen : K)
    for (const auto& x : gen) CHECK(x.valuation() >= 1);
}

TEST_CASE("build_rep NoStrategyApplies on sl2 + center") {
  // sl2 direct sum a central line: non-nilpotent with nontrivial center
  auto sl2 = sl2_lattice(3, 4);
  std::vector<PadicScalar> c(64, padic_zero(3, 4));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) c[size_t((i * 4 + j) * 4 + l)] = sl2.at(i, j, l);
  auto L = LieLattice::from_constants(4, 3, 4, std::move(c));
  CHECK_THROWS_AS(build_rep(L), NoStrategyApplies);
  CHECK_THROWS_AS(build_rep(L, "nilpotent"), NoStrategyApplies);
  CHECK_THROWS_AS(build_rep(L, "adjoint"), UnfaithfulRep);
}

TEST_CASE("mat_exp and mat_log fixtures") {
  CHECK(mat_exp(eij(2, 0, 1, 3, 4, 3)) ==
        PadicMatrix::identity(2, 3, 4) + eij(2, 0, 1, 3, 4, 3));

  PadicMatrix a(1, 1, 3, 3);
  a.set(0, 0, PadicScalar(3, 3, 3));
  auto e = mat_exp(a);
  CHECK(e.at(0, 0).residue() == 13);
  CHECK(mat_log(e).at(0, 0).residue() == 3);

  PadicMatrix zero(2, 2, 3, 4);
  CHECK(mat_exp(zero).is_identity());

  CHECK_THROWS_AS(mat_exp(eij(2, 0, 1, 3, 4, 1)), ValuationTooLow);
  CHECK_THROWS_AS(mat_exp(eij(2, 0, 1, 2, 6, 2)), ValuationTooLow);
}

TEST_CASE("exp/log roundtrip and closure across primes") {
  for (long long p : {2LL, 3LL, 5LL}) {
    for (int n = 1; n <= 3; ++n) {
      for (int trial = 0; trial < 8; ++trial) {
        auto A = random_exp_domain_matrix(p, 8, n);
        auto B = random_exp_domain_matrix(p, 8, n);
        CHECK(mat_log(mat_exp(A)) == A);
        auto prod = mat_exp(A) * mat_exp(B);
        int vP = p == 2 ? 2 : 1;
        CHECK((prod - PadicMatrix::identity(n, p, 8)).min_valuation() >= vP);
        CHECK(mat_exp(bch(A, B)) == prod);
      }
    }
  }
}

TEST_CASE("bch examples") {
  // commuting arguments add
  auto A = eij(2, 0, 1, 3, 5, 3);
  auto B = eij(2, 0, 1, 3, 5, 9);
  CHECK(bch(A, B) == A + B);

  // 3x3 nilpotent pair: log subtracts half the commutator
  auto A3 = eij(3, 0, 1, 3, 3, 3);
  auto B3 = eij(3, 1, 2, 3, 3, 3);
  auto C = bch(A3, B3);
  CHECK(C.at(0, 1).residue() == 3);
  CHECK(C.at(1, 2).residue() == 3);
  CHECK(C.at(0, 2).residue() == 18); // -9 mod 27

  PadicMatrix zero(3, 3, 3, 3);
  CHECK(bch(A3, zero) == A3);
}

TEST_CASE("coset transversal") {
  auto add = additive_law(zp(3, 4, 2), 1, 1);
  auto T = coset_transversal(add);
  REQUIRE(T.size() == 3);
  CHECK(scalar_of(T[0], 0) == 0);
  CHECK(scalar_of(T[1], 0) == 3);
  CHECK(scalar_of(T[2], 0) == 6);

  auto heis = heisenberg_law(zp(3, 5), 1);
  auto Th = coset_transversal(heis);
  CHECK(Th.size() == 27);
}

TEST_CASE("uniform embedding on the additive law") {
  auto add = additive_law(zp(3, 3, 2), 1, 1);
  UniformEmbedding emb = UniformEmbedding::with_auto_rep(add);
  CHECK(emb.degree() == 3);

  auto m = emb.m1(add.point_from_integers({9}));
  CHECK(m.at(0, 0).residue() == 13);

  auto id_img = emb.image(add.identity());
  CHECK(id_img.dense().is_identity());

  auto cert = emb.certify(25, emb.transversal(), 99);
  CHECK(cert.valid());
  CHECK(cert.degree == 3);
  CHECK(cert.rep_degree == 1);
}

TEST_CASE("uniform embedding on Heisenberg separates the transversal") {
  auto heis = heisenberg_law(zp(3, 5), 1);
  UniformEmbedding emb = UniformEmbedding::with_auto_rep(heis);
  CHECK(emb.degree() == 27 * 10);
  auto cert = emb.certify(10, emb.transversal(), 7);
  CHECK(cert.multiplicativity_ok);
  CHECK(cert.injectivity_ok);
  CHECK(cert.degree_bound_ok);
  CHECK(cert.degree <= cert.degree_bound);
}

TEST_CASE("p = 2 lattice, transversal, and embedding smoke test") {
  RingDescriptor d{2, 6, 0, 4};
  auto mul = multiplicative_law(d, 2); // level 2 for p = 2
  auto L = lie_lattice_of(mul);
  CHECK(L.is_abelian());
  auto T = coset_transversal(mul);
  CHECK(T.size() == 4); // bold p = 4
  UniformEmbedding emb = UniformEmbedding::with_auto_rep(mul);
  auto cert = emb.certify(10, emb.transversal(), 3);
  CHECK(cert.valid());
  CHECK(cert.degree == 4);
}

TEST_CASE("lazard context rejects non-Zp laws") {
  RingDescriptor d{3, 4, 1, 4};
  auto law = t_twisted_law(d, 1);
  CHECK_THROWS_AS(LazardContext ctx(law), DescriptorMismatch);

  RingDescriptor d2{2, 4, 0, 4};
  auto bad_level = multiplicative_law(d2, 1);
  CHECK_THROWS_AS(LazardContext ctx(bad_level), DescriptorMismatch);
}
