#ifndef STDGRP_LAZARD_HPP
#define STDGRP_LAZARD_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stdgrp/fgl.hpp"

namespace stdgrp {

// --- matrix exponential and logarithm --------------------------------------

// Truncated series sum(A^i / i!) with guard digits so that every division
// by i! is exact; requires every entry of A to have valuation >= 1 (odd p)
// or >= 2 (p = 2).
PadicMatrix mat_exp(const PadicMatrix& A);
// Inverse on I + pM (I + 4M for p = 2): sum((-1)^(i+1) (B-I)^i / i).
PadicMatrix mat_log(const PadicMatrix& B);
// mat_log(mat_exp(A) * mat_exp(B)); exact at precision by construction.
PadicMatrix bch(const PadicMatrix& A, const PadicMatrix& B);

// --- group-side power operations -------------------------------------------

StandardPoint gpow(const FormalGroupLaw& F, const StandardPoint& P, BigInt n);

// Inverts the p^e-power bijection of a uniform law: returns Q with
// gpow(Q, p^e) = P at the law's precision, by fixed-point refinement with
// the direct power check as acceptance gate. NotAPower when P has no root.
StandardPoint p_root(const FormalGroupLaw& F, const StandardPoint& P, int e);

// --- Lie lattice ------------------------------------------------------------

// Free Zp-lattice of finite rank with structure constants mod p^k.
struct LieLattice {
  int rank = 0;
  long long prime = 3;
  int precision = 1;
  std::vector<PadicScalar> c; // c[i][j][l], row-major
  bool powerful = false;      // every c_ijl has valuation >= v_p(bold p)

  const PadicScalar& at(int i, int j, int l) const {
    return c[size_t((i * rank + j) * rank + l)];
  }
  bool is_abelian() const;

  // Validates antisymmetry and the Jacobi identity mod p^k.
  static LieLattice from_constants(int rank, long long prime, int precision,
                                   std::vector<PadicScalar> c);
};

// Matrix images M_1..M_d of a lattice basis.
struct MatrixRep {
  int degree = 0; // ell
  std::vector<PadicMatrix> images;
  std::string strategy;
};

// M_i M_j - M_j M_i = sum_l c_ijl M_l mod p^k?
bool rep_brackets_ok(const LieLattice& L, const MatrixRep& rep);
// Kernel generators of lambda -> sum_i lambda_i M_i over Z/p^k.
std::vector<std::vector<PadicScalar>> rep_kernel(const MatrixRep& rep);
// Faithful at precision: no kernel generator has a unit entry, which rules
// out any honest kernel vector over Zp.
bool rep_faithful(const MatrixRep& rep);

// Strategies: "abelian" (diagonal, all constants zero), "adjoint"
// (ad-matrices, needs trivial center), "nilpotent" (left-regular action on
// the enveloping algebra modulo the (c+1)-st power of the augmentation
// ideal, PBW monomial basis), "supplied", or "auto" trying them in that
// order. Every returned rep passes rep_brackets_ok and rep_faithful.
MatrixRep build_rep(const LieLattice& L, const std::string& strategy = "auto",
                    const std::vector<PadicMatrix>& supplied = {});

// --- Lazard limit operations ------------------------------------------------

struct LimitResult {
  StandardPoint value;
  int stabilized_at; // first n with iterates n and n+1 agreeing mod p^k
};

// Lazard module operations of a uniform Zp-law, realized by the limit
// formulas x+y = lim (x^{p^n} y^{p^n})^{p^-n} and
// [x,y] = lim comm(x^{p^n}, y^{p^n})^{p^-2n}. All computation happens on
// canonical residue representatives at an internally boosted precision so
// that root losses never eat into the stated k digits.
class LazardContext {
public:
  explicit LazardContext(const FormalGroupLaw& F);

  const FormalGroupLaw& law() const { return base_; }
  const FormalGroupLaw& working_law() const { return work_; }
  long long bold_p() const { return base_.bold_p(); }
  int root_exponent() const { return base_.descriptor().prime == 2 ? 2 : 1; }

  LimitResult add(const StandardPoint& P, const StandardPoint& Q) const;
  LimitResult bracket(const StandardPoint& P, const StandardPoint& Q) const;

  // e_i with j-th coordinate delta_ij * p^N.
  std::vector<StandardPoint> basis() const;

  // lambda with sum_Lazard lambda_i e_i = P mod p^k, read off the power
  // limit coords(P^{p^n}) / p^{N+n} with a stabilization check.
  std::vector<PadicScalar> lie_coordinates(const StandardPoint& P) const;
  // sum_Lazard of gpow(e_i, lambda_i); integer scalars act as group powers.
  StandardPoint combination(const std::vector<BigInt>& lambda) const;

  LieLattice lattice() const;

  // The bold_p^d points {sum_L v_i e_i : v in [0, bold_p)^d}, verified
  // pairwise to lie in distinct cosets of G^bold_p via p_root failure.
  std::vector<StandardPoint> transversal() const;

  // membership in G^bold_p = E(bold_p L): all Lazard coordinates divisible
  // by bold_p
  bool in_power_subgroup(const StandardPoint& P) const;

private:
  FormalGroupLaw base_;
  FormalGroupLaw work_;
  int cap_;

  StandardPoint lift(const StandardPoint& P) const;
  StandardPoint reduce(const StandardPoint& P) const;
  LimitResult limit(const StandardPoint& P, const StandardPoint& Q,
                    bool use_bracket) const;
};

// Free-function surface over a throwaway context.
StandardPoint lazard_add(const FormalGroupLaw& F, const StandardPoint& P,
                         const StandardPoint& Q);
StandardPoint lazard_bracket(const FormalGroupLaw& F, const StandardPoint& P,
                             const StandardPoint& Q);
LieLattice lie_lattice_of(const FormalGroupLaw& F);
std::vector<PadicScalar> lie_coordinates(const FormalGroupLaw& F,
                                         const StandardPoint& P);
std::vector<StandardPoint> coset_transversal(const FormalGroupLaw& F);

// --- induced representation -------------------------------------------------

// Block-monomial matrix: one ell x ell block per block column, in block row
// block_row[i]. Dense materialization is n x n with n = blocks * ell.
class InducedImage {
public:
  InducedImage() = default;
  InducedImage(std::vector<int> block_row, std::vector<PadicMatrix> blocks);

  int block_count() const { return int(blocks_.size()); }
  int block_size() const;
  const std::vector<int>& block_rows() const { return block_row_; }
  const PadicMatrix& block(int col) const { return blocks_[size_t(col)]; }

  PadicMatrix dense() const;
  bool congruent(const InducedImage& o, int digits) const;

  friend InducedImage operator*(const InducedImage& a, const InducedImage& b);
  friend bool operator==(const InducedImage& a, const InducedImage& b);

private:
  std::vector<int> block_row_;
  std::vector<PadicMatrix> blocks_;
};

struct PairCheck {
  StandardPoint left, right;
  bool pass;
};

// Verification record of one group monomorphism G -> GL_n(Zp): the
// homomorphism is determined by (law, rep, transversal); the certificate
// stores the checks actually performed at the stated precision.
struct GroupHomCertificate {
  std::string law_name;
  long long prime = 3;
  int level = 1;
  int dim = 1;
  int precision = 1;
  long long bold_p = 3;
  int rep_degree = 0;      // ell
  std::string rep_strategy;
  BigInt subgroup_index;   // bold_p^d
  BigInt degree;           // n = bold_p^d * ell
  BigInt degree_bound;     // p^{N d} * bold_p^d * ell
  std::uint64_t seed = 0;
  // Images of mod-p^k representatives are determined mod p^(k-N): the
  // Lazard coordinates divide the chart by p^N. All image comparisons
  // happen at this precision.
  int check_precision = 1;

  std::vector<PairCheck> multiplicativity;
  bool multiplicativity_ok = false;
  std::vector<StandardPoint> separated_points;
  std::vector<InducedImage> separated_images;
  bool injectivity_ok = false;
  bool degree_bound_ok = false;

  bool valid() const {
    return multiplicativity_ok && injectivity_ok && degree_bound_ok;
  }
};

// The constructive content of the linearity theorem for a uniform Zp-law:
// m_1 on the subgroup G^bold_p by exp of the rep applied to Lazard
// coordinates, then the block-monomial representation of all of G induced
// across the coset transversal.
class UniformEmbedding {
public:
  UniformEmbedding(const FormalGroupLaw& F, MatrixRep rep);

  static UniformEmbedding with_auto_rep(const FormalGroupLaw& F);

  const LazardContext& context() const { return ctx_; }
  const MatrixRep& rep() const { return rep_; }
  const LieLattice& lattice() const { return lattice_; }
  const std::vector<StandardPoint>& transversal() const { return transversal_; }
  BigInt degree() const;

  // g in G^bold_p -> mat_exp(sum lambda_i(g) M_i)
  PadicMatrix m1(const StandardPoint& g) const;
  InducedImage image(const StandardPoint& g) const;

  GroupHomCertificate certify(int mult_samples,
                              const std::vector<StandardPoint>& separate,
                              std::uint64_t seed) const;

  StandardPoint random_point(std::uint64_t& state) const;

private:
  LazardContext ctx_;
  MatrixRep rep_;
  LieLattice lattice_;
  std::vector<StandardPoint> transversal_;
  std::vector<std::vector<int>> transversal_digits_;

  int digit_index(const std::vector<PadicScalar>& lambda) const;
  int find_coset_index(const StandardPoint& x) const;
};

// Full pipeline: lattice, auto rep, embedding, certificate with the
// transversal as separation set.
GroupHomCertificate uniform_embedding(const FormalGroupLaw& F,
                                      const MatrixRep& rep,
                                      int mult_samples = 100,
                                      std::uint64_t seed = 0x5eed);

} // namespace stdgrp

#endif
