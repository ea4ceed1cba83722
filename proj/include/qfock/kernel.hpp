#pragma once

#include <vector>

#include "qfock/error.hpp"
#include "qfock/types.hpp"

namespace qfock {

// Ordered finite discretization of the underlying space: strictly increasing
// site coordinates with positive cell masses.
struct SiteGrid {
  std::vector<double> sites;
  std::vector<double> weights;

  SiteGrid(std::vector<double> s, std::vector<double> w);
  static SiteGrid uniform(int m, double spacing = 1.0, double weight = 1.0);

  int size() const { return static_cast<int>(sites.size()); }
  double total_mass() const;
};

// Hermitian unimodular coefficient matrix with unit diagonal.  The extra
// form_diag entry is the within-cell mean of the continuum kernel; the
// algebra always sees 1 on the diagonal, quadratic forms see form_diag.
class QKernel {
 public:
  QKernel(std::vector<double> weights, std::vector<cplx> matrix,
          std::vector<double> form_diag);

  int size() const { return m_; }
  cplx operator()(int i, int j) const { return q_[static_cast<size_t>(i) * m_ + j]; }
  double weight(int i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double form_diag(int i) const { return form_diag_[i]; }

  bool is_real() const;      // every entry in {-1, +1}
  bool is_constant_one() const;

 private:
  int m_;
  std::vector<double> weights_;
  std::vector<cplx> q_;
  std::vector<double> form_diag_;
};

// Q(i,j) = q above the diagonal, conj(q) below, 1 on it.
QKernel build_anyonic_kernel(const SiteGrid& grid, cplx q);

// Q(i,j) = -1 when |t_i - t_j| < r off the diagonal, +1 otherwise.
QKernel build_window_kernel(const SiteGrid& grid, double r);

// Explicit matrix; must already satisfy the kernel invariants.
QKernel build_explicit_kernel(const SiteGrid& grid, std::vector<cplx> matrix);

struct KernelReport {
  double hermitian_defect = 0.0;
  double modulus_defect = 0.0;
  double diagonal_defect = 0.0;
  bool valid(double tol = kKernelTol) const {
    return hermitian_defect <= tol && modulus_defect <= tol && diagonal_defect <= tol;
  }
};

KernelReport validate_kernel(const QKernel& k);

}  // namespace qfock
