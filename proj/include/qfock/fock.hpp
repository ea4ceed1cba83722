#pragma once

#include <functional>
#include <vector>

#include "qfock/symmetrize.hpp"

namespace qfock {

// Truncated Q-Fock element: one tensor per particle number 0..N.  Inner
// product carries the n! weights.
class GradedVector {
 public:
  GradedVector(int sites, int cutoff);
  static GradedVector vacuum(int sites, int cutoff);

  int cutoff() const { return cutoff_; }
  int sites() const { return sites_; }
  FockTensor& comp(int n) { return comp_[n]; }
  const FockTensor& comp(int n) const { return comp_[n]; }

  GradedVector& operator+=(const GradedVector& o);
  GradedVector& operator-=(const GradedVector& o);
  GradedVector& operator*=(cplx c);
  friend GradedVector operator+(GradedVector a, const GradedVector& b) { return a += b; }
  friend GradedVector operator-(GradedVector a, const GradedVector& b) { return a -= b; }
  friend GradedVector operator*(cplx c, GradedVector a) { return a *= c; }

  double max_abs() const;

 private:
  int sites_;
  int cutoff_;
  std::vector<FockTensor> comp_;
};

// <F,G> = sum_n n! <f_n,g_n>_n
cplx graded_inner(const std::vector<double>& weights, const GradedVector& a,
                  const GradedVector& b);

double graded_max_diff(const GradedVector& a, const GradedVector& b);

// Linear map applied per degree; immutable closure over kernel data.
class GradedOperator {
 public:
  GradedOperator() = default;
  explicit GradedOperator(std::function<GradedVector(const GradedVector&)> fn)
      : fn_(std::move(fn)) {}

  GradedVector operator()(const GradedVector& v) const { return fn_(v); }

  static GradedOperator identity();
  friend GradedOperator operator*(const GradedOperator& a, const GradedOperator& b);  // a after b
  friend GradedOperator operator+(const GradedOperator& a, const GradedOperator& b);
  friend GradedOperator operator-(const GradedOperator& a, const GradedOperator& b);
  friend GradedOperator operator*(cplx c, const GradedOperator& a);

 private:
  std::function<GradedVector(const GradedVector&)> fn_;
};

// a+(h): degree n -> n+1 via h (*) f; degree N maps to 0 (truncation).
GradedOperator create(const QKernel& k, const FockTensor& h);

// a-(h): (t_1..t_{n-1}) -> n sum_s conj(h(s)) f(s,t_1..t_{n-1}) sigma_s;
// the adjoint of create on degrees <= N-1.
GradedOperator annihilate(const QKernel& k, const FockTensor& h);

// a0(h): multiplies degree n pointwise by h(t_1)+...+h(t_n).
GradedOperator neutral(const QKernel& k, const FockTensor& h);

// Creation/annihilation at a point, with the 1/sigma_i delta normalization.
GradedOperator point_creator(const QKernel& k, int i);
GradedOperator point_annihilator(const QKernel& k, int i);

struct CcrReport {
  double mixed_residual = 0.0;    // d_i d+_j - Q(i,j) d+_j d_i - delta_ij/sigma_i
  double annihilator_residual = 0.0;  // d_i d_j - Q(j,i) d_j d_i
  double creator_residual = 0.0;      // d+_i d+_j - Q(j,i) d+_j d+_i
  double max() const;
};

// Evaluates the three Q-commutation relations on the Q-symmetric spanning
// set of every degree <= N-2 (one guard grade below the cutoff).
CcrReport check_ccr(const QKernel& k, int cutoff);

// sum_{i,j} Q(i,j) f(i) conj(f(j)) sigma_i sigma_j with the within-cell
// form_diag on the diagonal.  Hermitian, so real up to rounding.
cplx negdef_form(const QKernel& k, const FockTensor& f);

struct RestrictedNormReport {
  double closed_form = 0.0;      // max_n |[n]_q|/sqrt(n) * sqrt(mass)
  double power_iteration = 0.0;  // numerical oracle on the Gram representation
  double bound = 0.0;            // 2/|1-q| * sqrt(mass)
  int arg_max = 0;
};

// Norm of a+(chi_Delta) restricted to span{Omega, chi_Delta^{(*)n}} for the
// anyonic kernel, using the continuum norms |[n]_q!|^2 mass^n / n!.
RestrictedNormReport restricted_creation_norm(cplx q, double delta_mass, int n_max);

}  // namespace qfock
