#include "qfock/kernel.hpp"

#include <cmath>
#include <numeric>

namespace qfock {

SiteGrid::SiteGrid(std::vector<double> s, std::vector<double> w)
    : sites(std::move(s)), weights(std::move(w)) {
  if (sites.empty() || sites.size() != weights.size())
    throw Error(errc::invalid_argument, "grid needs matching nonempty sites and weights");
  for (std::size_t i = 0; i + 1 < sites.size(); ++i)
    if (!(sites[i] < sites[i + 1]))
      throw Error(errc::invalid_argument, "sites must be strictly increasing");
  for (double w_i : weights)
    if (!(w_i > 0.0) || !std::isfinite(w_i))
      throw Error(errc::invalid_argument, "weights must be positive and finite");
}

SiteGrid SiteGrid::uniform(int m, double spacing, double weight) {
  if (m < 1) throw Error(errc::invalid_argument, "grid needs at least one site");
  std::vector<double> s(m), w(m, weight);
  for (int i = 0; i < m; ++i) s[i] = i * spacing;
  return SiteGrid(std::move(s), std::move(w));
}

double SiteGrid::total_mass() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

QKernel::QKernel(std::vector<double> weights, std::vector<cplx> matrix,
                 std::vector<double> form_diag)
    : m_(static_cast<int>(weights.size())),
      weights_(std::move(weights)),
      q_(std::move(matrix)),
      form_diag_(std::move(form_diag)) {
  if (q_.size() != static_cast<std::size_t>(m_) * m_)
    throw Error(errc::invalid_argument, "kernel matrix shape mismatch");
  if (form_diag_.size() != static_cast<std::size_t>(m_))
    throw Error(errc::invalid_argument, "form_diag shape mismatch");
}

bool QKernel::is_real() const {
  for (const cplx& v : q_)
    if (std::abs(v.imag()) > kKernelTol) return false;
  return true;
}

bool QKernel::is_constant_one() const {
  for (const cplx& v : q_)
    if (std::abs(v - cplx(1.0)) > kKernelTol) return false;
  return true;
}

QKernel build_anyonic_kernel(const SiteGrid& grid, cplx q) {
  if (std::abs(std::abs(q) - 1.0) > kKernelTol)
    throw Error(errc::not_unimodular, "anyonic parameter must have modulus 1");
  const int m = grid.size();
  std::vector<cplx> mat(static_cast<std::size_t>(m) * m, cplx(1.0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i < j) mat[static_cast<std::size_t>(i) * m + j] = q;
      else if (i > j) mat[static_cast<std::size_t>(i) * m + j] = std::conj(q);
    }
  // Within one shrinking cell the two order sectors average to Re(q).
  std::vector<double> diag(m, q.real());
  return QKernel(grid.weights, std::move(mat), std::move(diag));
}

QKernel build_window_kernel(const SiteGrid& grid, double r) {
  if (!(r > 0.0)) throw Error(errc::invalid_argument, "window radius must be positive");
  const int m = grid.size();
  std::vector<cplx> mat(static_cast<std::size_t>(m) * m, cplx(1.0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && std::abs(grid.sites[i] - grid.sites[j]) < r)
        mat[static_cast<std::size_t>(i) * m + j] = cplx(-1.0);
  // dist -> 0 within a cell, always below r
  std::vector<double> diag(m, -1.0);
  return QKernel(grid.weights, std::move(mat), std::move(diag));
}

QKernel build_explicit_kernel(const SiteGrid& grid, std::vector<cplx> matrix) {
  const int m = grid.size();
  if (matrix.size() != static_cast<std::size_t>(m) * m)
    throw Error(errc::invalid_argument, "explicit kernel matrix shape mismatch");
  std::vector<double> diag(m);
  for (int i = 0; i < m; ++i) diag[i] = matrix[static_cast<std::size_t>(i) * m + i].real();
  return QKernel(grid.weights, std::move(matrix), std::move(diag));
}

KernelReport validate_kernel(const QKernel& k) {
  KernelReport r;
  const int m = k.size();
  for (int i = 0; i < m; ++i) {
    r.diagonal_defect = std::max(r.diagonal_defect, std::abs(k(i, i) - cplx(1.0)));
    for (int j = 0; j < m; ++j) {
      r.modulus_defect = std::max(r.modulus_defect, std::abs(std::abs(k(i, j)) - 1.0));
      r.hermitian_defect = std::max(r.hermitian_defect, std::abs(k(i, j) - std::conj(k(j, i))));
    }
  }
  return r;
}

}  // namespace qfock
