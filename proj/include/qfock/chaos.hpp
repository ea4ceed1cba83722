#pragma once

#include <vector>

#include "qfock/levy.hpp"

namespace qfock {

// Monic orthogonal polynomials of nu, represented by their values on the
// atoms; p^(k) = 0 for k >= K.  Recurrence x p^(k) = p^(k+1) + b_k p^(k) +
// a_k p^(k-1) holds pointwise on the atoms, including the k = K-1 row.
struct OrthoPolyBasis {
  std::vector<std::vector<double>> values;  // values[k][j] = p^(k)(x_j), k < K
  std::vector<std::vector<double>> coeffs;  // monomial coefficients, for reporting
  std::vector<double> norm;                 // C_k = int |p^(k)|^2 dnu
  std::vector<double> a;                    // a_k, k = 0..K-1 (a_0 = 0)
  std::vector<double> b;                    // b_k, k = 0..K-1

  int order() const { return static_cast<int>(values.size()); }
};

OrthoPolyBasis ortho_polys(const JumpMeasure& jumps);

// X_k(f) = a+(f x mu_{k-1}) + a0(f x mu_k) + a-(f x mu_{k-1}), k >= 1.
GradedOperator power_jump(const LevySpace& space, const FockTensor& f, int k);

// Y_k(f) = a+(f x p^(k)) + a0(f x (p^(k+1)+b_k p^(k)+a_k p^(k-1))) +
//          a-(f x p^(k)), 0 <= k <= K-1.
GradedOperator orthogonalized_jump(const LevySpace& space, const OrthoPolyBasis& basis,
                                   const FockTensor& f, int k);

using ChaosIndex = std::vector<int>;  // alpha_0, alpha_1, ...

// Q-symmetrize the T-tensor within each equal-k slot group.
FockTensor group_symmetrize(const QKernel& base, const FockTensor& f, const ChaosIndex& alpha);

double group_symmetry_defect(const QKernel& base, const FockTensor& f, const ChaosIndex& alpha);

// I_alpha f = P_{|alpha|}[ f(t_1..t_n) p^(k_1)(x_1)...p^(k_n)(x_n) ] with the
// k's in nondecreasing alpha order; f is pre-projected group-symmetric.
GradedVector multiple_integral(const LevySpace& space, const OrthoPolyBasis& basis,
                               const ChaosIndex& alpha, const FockTensor& f, int cutoff);

// prod_i alpha_i! C_i^{alpha_i}
double chaos_weight(const OrthoPolyBasis& basis, const ChaosIndex& alpha);

std::vector<ChaosIndex> enumerate_chaos_indices(int total_degree, int order);

struct ChaosReport {
  double favard_residual = 0.0;
  double basis_orthogonality_residual = 0.0;
  double cross_orthogonality_residual = 0.0;  // <I_alpha f, I_beta g>, alpha != beta
  double norm_identity_residual = 0.0;
  std::vector<std::vector<double>> orthogonality_matrix;  // |<p_k,p_l> - delta C_k|
  std::vector<std::pair<ChaosIndex, int>> dims;  // dim F_alpha per alpha
  std::vector<int> degree_dims;                  // sum over |alpha| = n
  std::vector<int> pn_ranks;                     // rank of P_n on the product grid
  bool dims_match = true;
};

ChaosReport chaos_orthogonality_report(const LevySpace& space, const OrthoPolyBasis& basis,
                                       int max_degree, Rng& rng);

}  // namespace qfock
