#pragma once

#include <vector>

#include "qfock/fock.hpp"
#include "qfock/partitions.hpp"

namespace qfock {

// White-noise field configuration: omega = a+ + lambda a0 + a-.
struct FieldConfig {
  QKernel kernel;
  double lambda = 0.0;
  int cutoff = 4;

  FieldConfig(QKernel k, double lam, int N);
};

// <f,omega> = a+(f) + lambda a0(f) + a-(f).  All identities are asserted for
// real f; complex f follows the same convention (a- conjugates internally).
GradedOperator omega(const FieldConfig& cfg, const FockTensor& f);

// Apply <f_1,omega>...<f_n,omega> to Omega (rightmost factor first).
GradedVector apply_word(const FieldConfig& cfg, const std::vector<FockTensor>& word);

// tau(word) = degree-0 component of word(Omega).
cplx vacuum_state(const FieldConfig& cfg, const std::vector<FockTensor>& word);

// Fock representative of <f, :omega^n:> under the isomorphism I.
FockTensor wick_polynomial_vector(const FieldConfig& cfg, const FockTensor& f);

// :omega(t_1)...omega(t_n): at sites, built by the three-term recurrence
// with the lambda-delta and Q-prefix-product delta corrections.
GradedOperator wick_recurrence_apply(const FieldConfig& cfg, const std::vector<int>& sites);

// Q-Wick (normal) ordering of omega(t_1)...omega(t_n): expand each factor
// into creation/annihilation letters and move creators left, each swap
// d_s d+_t -> Q(s,t) d+_t d_s with the delta term dropped.
GradedOperator wick_ordered_product(const FieldConfig& cfg, const std::vector<int>& sites);

// Gaussian-case normal ordering as the explicit bipartition sum
// sum_{(I,J)} Q_{I,J} d+_{I asc} d_{J asc}; requires lambda = 0.
GradedOperator normal_order_product(const FieldConfig& cfg, const std::vector<int>& sites);

struct WickNormalReport {
  bool equality_expected = false;  // real kernel with lambda=0, or Q=1
  double max_residual = 0.0;       // over all site triples and guarded degrees
  bool pass = false;               // equality within tol, or witness above it
};

// The n=3 dichotomy: orthogonal-polynomial Wick vs normal ordering.
WickNormalReport wick_vs_normal_report(const FieldConfig& cfg);

// One term of the Wick rule: Q(V;.) lambda^{...} delta-contractions applied
// to the smeared word, as a vector in the Fock space (term applied to Omega).
GradedVector wick_term(const FieldConfig& cfg, const MarkedPartition& v,
                       const std::vector<FockTensor>& fs);

struct WickRuleReport {
  GradedVector expansion;  // sum over marked partitions
  GradedVector direct;     // operator word applied to Omega
  double residual = 0.0;
};

WickRuleReport wick_rule_expand(const FieldConfig& cfg, const std::vector<FockTensor>& fs);

// Moment tensors of the field by cell: m_d[idx] = tau over basis indicators.
MeasureTensors field_moment_tensors(const FieldConfig& cfg, int n_max);

}  // namespace qfock
