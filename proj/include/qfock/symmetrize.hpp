#pragma once

#include <vector>

#include "qfock/kernel.hpp"
#include "qfock/tensor.hpp"

namespace qfock {

// Permutation of {1..n}, stored 0-based: images[i] = pi(i+1)-1.
struct Permutation {
  std::vector<int> images;

  int degree() const { return static_cast<int>(images.size()); }
  Permutation inverse() const;
  int inversions() const;
  // (i,j) with i<j and pi(i)>pi(j), 0-based positions
  std::vector<std::pair<int, int>> inversion_pairs() const;
};

// All of S_n in lexicographic order of the image sequence; this is the
// canonical enumeration order used by every permutation sum.
std::vector<Permutation> all_permutations(int n);

// Adjacent transposition operator: (Psi_j f)(..,t_j,t_{j+1},..) =
// Q(t_j,t_{j+1}) f(..,t_{j+1},t_j,..), j in 1..n-1.
FockTensor psi_j(const QKernel& k, int j, const FockTensor& f);

// Q_pi(t_1..t_n) = prod over inversion pairs of Q(t_i, t_j).
cplx q_coeff(const QKernel& k, const Permutation& pi, std::span<const int> idx);

// P_n by the explicit Q_pi sum (n <= 6) or the inductive formula (n <= 8).
// The OpenMP kernel parallelizes over output cells; each cell reduces over
// permutations in canonical order, so results match the serial reference
// bit for bit.
FockTensor symmetrize(const QKernel& k, const FockTensor& f);
FockTensor symmetrize_serial(const QKernel& k, const FockTensor& f);

// P applied to a contiguous slot range [start, start+len) only.
FockTensor symmetrize_partial(const QKernel& k, const FockTensor& f, int start, int len);

// max_j max-entry of |Psi_j f - f|; zero iff f is Q-symmetric.
double symmetry_defect(const QKernel& k, const FockTensor& f);

// (h (*) f) for Q-symmetric f via the (n+1)-term prefix-product formula.
FockTensor symmetrize_recursive(const QKernel& k, const FockTensor& h, const FockTensor& f);

// f (*) g = P(f x g)
FockTensor q_product(const QKernel& k, const FockTensor& f, const FockTensor& g);

// [n]_q = 1 + q + ... + q^{n-1};  [n]_q! = prod_{k<=n} [k]_q
cplx q_number(cplx q, int n);
cplx q_factorial(cplx q, int n);

struct ExclusionReport {
  // max |f^{(*)N}| over strictly increasing index tuples; the discrete
  // diagonal has positive mass, so only increasing tuples realize the
  // continuum statement.
  double max_residual = 0.0;
  // max over n <= N, increasing tuples, of |f^{(*)n} - ([n]_q!/n!) prod f|
  double closed_form_residual = 0.0;
  int root_order = 0;
};

// Requires an anyonic kernel built from a primitive N-th root of unity.
ExclusionReport check_exclusion(const QKernel& k, cplx q, const FockTensor& f, int N);

}  // namespace qfock
