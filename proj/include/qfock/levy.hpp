#pragma once

#include <optional>
#include <vector>

#include "qfock/field.hpp"

namespace qfock {

// Finite-support probability measure on the jump axis.
struct JumpMeasure {
  std::vector<double> xs;  // distinct atom positions
  std::vector<double> ws;  // positive weights summing to 1

  JumpMeasure(std::vector<double> x, std::vector<double> w);
  int atoms() const { return static_cast<int>(xs.size()); }
  double moment(int n) const;       // int x^n d nu
  double levy_moment(int n) const;  // int x^n d (levy measure) = sum_{x!=0} x^n w/x^2
};

// Q-Fock space data over T x supp(nu): product sites (t_i, x_j) with weights
// sigma_i w_j and the extended kernel constant in the jump coordinate.
class LevySpace {
 public:
  LevySpace(SiteGrid grid, JumpMeasure jumps, const QKernel& base);

  const SiteGrid& grid() const { return grid_; }
  const JumpMeasure& jumps() const { return jumps_; }
  const QKernel& base_kernel() const { return base_; }
  const QKernel& product_kernel() const { return product_; }
  int t_sites() const { return grid_.size(); }
  int x_atoms() const { return jumps_.atoms(); }
  int product_sites() const { return t_sites() * x_atoms(); }

  int t_of(int p) const { return p / x_atoms(); }
  int x_of(int p) const { return p % x_atoms(); }

  // degree-1 tensor (t,x) -> f(t) x^k on the product sites
  FockTensor lift_monomial(const FockTensor& f, int k) const;
  // degree-1 tensor (t,x) -> f(t) g(x) for atom values g
  FockTensor lift_values(const FockTensor& f, const std::vector<double>& g) const;

 private:
  SiteGrid grid_;
  JumpMeasure jumps_;
  QKernel base_;
  QKernel product_;
};

// <f,xi> = a+(f x mu_0) + a0(f x mu_1) + a-(f x mu_0), f on the T grid.
GradedOperator xi(const LevySpace& space, const FockTensor& f);

GradedVector xi_word_on_vacuum(const LevySpace& space, const std::vector<FockTensor>& word,
                               int cutoff);
cplx xi_vacuum_state(const LevySpace& space, const std::vector<FockTensor>& word, int cutoff);

// Moment tensors of xi over T cells, via the operator route.
MeasureTensors levy_moment_tensors(const LevySpace& space, int n_max, int cutoff);

struct LevyCumulantReport {
  double c1_residual = 0.0;
  std::vector<double> residuals;     // degree 2..n_max vs (int x^{n-2} nu) diag
  std::vector<double> levy_moments;  // C_n(<chi_Delta,xi>)/sigma(Delta), n = 3..n_max
  std::vector<double> levy_expected; // sum_{x!=0} x^n w/x^2
  double max_residual() const;
};

LevyCumulantReport verify_levy_cumulants(const LevySpace& space, int cutoff, int n_max);

struct PyramidalReport {
  double max_residual = 0.0;
  int cases_run = 0;
};

// |tau(f-word g-word f-word) - tau(f-word) tau(g-word)| over randomized
// disjoint-support configurations of total length <= cutoff.
PyramidalReport pyramidal_check(const LevySpace& space, int cutoff, int cases, Rng& rng);

// Factorization residual for one explicit configuration; f supported on A,
// g supported on B, A and B disjoint site sets.
double pyramidal_residual(const LevySpace& space, const std::vector<FockTensor>& f_head,
                          const std::vector<FockTensor>& g_mid,
                          const std::vector<FockTensor>& f_tail, int cutoff);

struct CyclicityReport {
  int achieved = 0;  // rank of degree components of word images, length <= L
  int target = 0;    // rank of span of P_i[f x^{l_1}..x^{l_i}], i + sum l <= L
  int word_rank = 0; // rank of the raw (mixed-degree) word images
};

CyclicityReport cyclicity_rank(const LevySpace& space, int max_len, int cutoff);

// Stationarity of increments: tau(<chi_D1,xi>^n) vs tau(<chi_D2,xi>^n) for
// equal-mass cell unions.
double stationarity_residual(const LevySpace& space, const std::vector<int>& cells1,
                             const std::vector<int>& cells2, int n_max, int cutoff);

}  // namespace qfock
