#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "stdgrp/fgl.hpp"

using namespace stdgrp;

namespace {

std::mt19937_64 rng(4242);

RingDescriptor zp(long long p, int k, int D = 4) { return RingDescriptor{p, k, 0, D}; }

// Heisenberg group as unitriangular 3x3 matrices over Z/p^k; the oracle is
// deliberately independent of the series machinery.
struct HeisOracle {
  BigInt mod;
  explicit HeisOracle(long long p, int k) : mod(pow_bigint(BigInt(p), k)) {}

  std::array<BigInt, 3> mul(const std::array<BigInt, 3>& a,
                            const std::array<BigInt, 3>& b) const {
    return {(a[0] + b[0]) % mod, (a[1] + b[1]) % mod,
            (a[2] + b[2] + a[0] * b[1]) % mod};
  }
  std::array<BigInt, 3> inv(const std::array<BigInt, 3>& a) const {
    auto r = [&](BigInt x) { return ((x % mod) + mod) % mod; };
    return {r(-a[0]), r(-a[1]), r(a[0] * a[1] - a[2])};
  }
  std::array<BigInt, 3> comm(const std::array<BigInt, 3>& a,
                             const std::array<BigInt, 3>& b) const {
    return mul(mul(inv(a), inv(b)), mul(a, b));
  }
};

std::array<BigInt, 3> to_triple(const StandardPoint& P) {
  return {P.coord(0).coefficient_scalar({}, {}).residue(),
          P.coord(1).coefficient_scalar({}, {}).residue(),
          P.coord(2).coefficient_scalar({}, {}).residue()};
}

BigInt random_coord(long long p, int k, int level) {
  BigInt m = pow_bigint(BigInt(p), k - level);
  BigInt r = 0;
  for (int i = 0; i < k; ++i) r = r * p + (long long)(rng() % (unsigned long long)p);
  return (r % m) * pow_bigint(BigInt(p), level);
}

} // namespace

TEST_CASE("validate built-in laws") {
  for (const auto& name : builtin_law_names()) {
    RingDescriptor d{3, 4, name == "t-twisted" ? 1 : 0, 4};
    auto law = builtin_law(name, d, 1);
    auto rep = law.validate();
    INFO(name, ":\n", rep.str());
    CHECK(rep.all_pass());
  }
}

TEST_CASE("validate rejects X + Y + X^2") {
  auto d = zp(3, 3);
  auto X = MultiSeries::variable(d, 2, 0);
  auto Y = MultiSeries::variable(d, 2, 1);
  FormalGroupLaw bad(d, 1, 1, {X + Y + X * X});
  auto rep = bad.validate();
  CHECK_FALSE(rep.all_pass());
  bool found = false;
  for (const auto& e : rep.entries)
    if (!e.pass && e.witness.find("X1^2") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("t-twisted law associativity expands symbolically") {
  RingDescriptor d{3, 3, 1, 4};
  auto law = t_twisted_law(d, 1);
  CHECK(law.validate().all_pass());
  // both associativity sides equal X+Y+Z + t(XY+XZ+YZ) + t^2 XYZ; spot-check
  // by evaluating at ring elements
  auto P = law.point({ring_scalar(d, 3)});
  auto Q = law.point({ring_t(d, 0)});
  auto S = law.point({ring_scalar(d, 6) + ring_t(d, 0)});
  CHECK(law.points_equal(law.gmul(law.gmul(P, Q), S), law.gmul(P, law.gmul(Q, S))));
}

TEST_CASE("gmul examples") {
  auto d = zp(3, 3);
  auto law = multiplicative_law(d, 1);
  auto P = law.point_from_integers({3});
  CHECK(law.gmul(P, P).coord(0).coefficient_scalar({}, {}).residue() == 15);

  // gmul(P, identity) = P for random P, any law
  for (const auto& name : builtin_law_names()) {
    RingDescriptor dd{3, 5, name == "t-twisted" ? 1 : 0, 4};
    auto l = builtin_law(name, dd, 1);
    for (int i = 0; i < 10; ++i) {
      std::vector<BigInt> cs;
      for (int j = 0; j < l.dim(); ++j) cs.push_back(random_coord(3, 5, 1));
      auto Q = l.point_from_integers(cs);
      CHECK(l.points_equal(l.gmul(Q, l.identity()), Q));
      CHECK(l.points_equal(l.gmul(l.identity(), Q), Q));
    }
  }

  // Heisenberg (3,0,0)*(0,3,0) = (3,3,9)
  auto dh = zp(3, 3);
  auto heis = heisenberg_law(dh, 1);
  auto A = heis.point_from_integers({3, 0, 0});
  auto B = heis.point_from_integers({0, 3, 0});
  auto AB = heis.gmul(A, B);
  CHECK(to_triple(AB) == std::array<BigInt, 3>{3, 3, 9});
}

TEST_CASE("ginv examples") {
  auto d = zp(3, 3);
  auto add = additive_law(d, 1, 1);
  auto P = add.point_from_integers({3});
  CHECK(add.ginv(P).coord(0).coefficient_scalar({}, {}).residue() == 24);

  auto mul = multiplicative_law(d, 1);
  auto M = mul.point_from_integers({3});
  auto Mi = mul.ginv(M);
  CHECK(Mi.coord(0).coefficient_scalar({}, {}).residue() == 6);
  CHECK(mul.gmul(M, Mi).is_identity());

  // Heisenberg inverse is (-x1, -x2, -x3 + x1 x2)
  auto heis = heisenberg_law(zp(3, 6, 4), 1);
  HeisOracle oracle(3, 6);
  for (int i = 0; i < 20; ++i) {
    std::array<BigInt, 3> a{random_coord(3, 6, 1), random_coord(3, 6, 1),
                            random_coord(3, 6, 1)};
    auto Ph = heis.point_from_integers({a[0], a[1], a[2]});
    CHECK(to_triple(heis.ginv(Ph)) == oracle.inv(a));
  }
}

TEST_CASE("gcomm examples") {
  auto d = zp(3, 4);
  auto mul = multiplicative_law(d, 1);
  auto P = mul.point_from_integers({3});
  auto Q = mul.point_from_integers({6});
  CHECK(mul.gcomm(P, Q).is_identity());
  CHECK(mul.gcomm(P, P).is_identity());

  auto heis = heisenberg_law(d, 1);
  auto A = heis.point_from_integers({3, 0, 0});
  auto B = heis.point_from_integers({0, 3, 0});
  CHECK(to_triple(heis.gcomm(A, B)) == std::array<BigInt, 3>{0, 0, 9});
  CHECK(heis.gcomm(A, A).is_identity());
}

TEST_CASE("Heisenberg matches the matrix oracle on 200 random pairs") {
  RingDescriptor d{3, 8, 0, 6};
  auto heis = heisenberg_law(d, 1);
  HeisOracle oracle(3, 8);
  for (int i = 0; i < 200; ++i) {
    std::array<BigInt, 3> a{random_coord(3, 8, 1), random_coord(3, 8, 1),
                            random_coord(3, 8, 1)};
    std::array<BigInt, 3> b{random_coord(3, 8, 1), random_coord(3, 8, 1),
                            random_coord(3, 8, 1)};
    auto P = heis.point_from_integers({a[0], a[1], a[2]});
    auto Q = heis.point_from_integers({b[0], b[1], b[2]});
    CHECK(to_triple(heis.gmul(P, Q)) == oracle.mul(a, b));
    CHECK(to_triple(heis.ginv(P)) == oracle.inv(a));
    CHECK(to_triple(heis.gcomm(P, Q)) == oracle.comm(a, b));
  }
}

TEST_CASE("group axioms hold at guaranteed precision on random points") {
  for (const auto& name : builtin_law_names()) {
    RingDescriptor d{3, 6, name == "t-twisted" ? 1 : 0, 4};
    auto law = builtin_law(name, d, 1);
    for (int i = 0; i < 15; ++i) {
      std::vector<BigInt> ca, cb, cc;
      for (int j = 0; j < law.dim(); ++j) {
        ca.push_back(random_coord(3, 6, 1));
        cb.push_back(random_coord(3, 6, 1));
        cc.push_back(random_coord(3, 6, 1));
      }
      auto P = law.point_from_integers(ca);
      auto Q = law.point_from_integers(cb);
      auto S = law.point_from_integers(cc);
      CHECK(law.points_equal(law.gmul(law.gmul(P, Q), S), law.gmul(P, law.gmul(Q, S))));
      CHECK(law.points_equal(law.gmul(law.ginv(P), P), law.identity()));
    }
  }
}

TEST_CASE("extract_bracket") {
  auto d = zp(3, 4);
  auto add = additive_law(d, 2, 1);
  auto c = add.extract_bracket();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int l = 0; l < 2; ++l) CHECK(c[i][j][l].is_zero());

  auto mul = multiplicative_law(d, 1);
  CHECK(mul.extract_bracket()[0][0][0].is_zero());

  auto heis = heisenberg_law(d, 1);
  auto ch = heis.extract_bracket();
  CHECK(ch[0][1][2] == ring_one(d));
  CHECK(ch[1][0][2] == -ring_one(d));
  CHECK(ch[0][1][0].is_zero());
  CHECK(ch[0][1][1].is_zero());
  CHECK(ch[0][0][2].is_zero());
}

TEST_CASE("extract_bracket satisfies antisymmetry and Jacobi") {
  for (const auto& name : builtin_law_names()) {
    RingDescriptor d{3, 4, name == "t-twisted" ? 1 : 0, 4};
    auto law = builtin_law(name, d, 1);
    auto c = law.extract_bracket();
    int n = law.dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          CHECK(c[i][j][l] == -c[j][i][l]);
          if (i == j) CHECK(c[i][j][l].is_zero());
        }
    // sum over cyclic permutations of [e_i,[e_j,e_l]] vanishes
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          for (int target = 0; target < n; ++target) {
            auto acc = ring_zero(d);
            for (int m = 0; m < n; ++m) {
              acc = acc + c[j][l][m] * c[i][m][target];
              acc = acc + c[l][i][m] * c[j][m][target];
              acc = acc + c[i][j][m] * c[l][m][target];
            }
            CHECK(acc.is_zero());
          }
  }
}

TEST_CASE("point construction enforces the level invariant") {
  auto d = zp(3, 3);
  auto law = multiplicative_law(d, 2);
  CHECK_THROWS_AS(law.point_from_integers({3}), ValuationTooLow);
  CHECK_NOTHROW(law.point_from_integers({9}));
}
