#include "qfock/linalg.hpp"

#include <Eigen/Dense>

#include "qfock/error.hpp"

namespace qfock {

int gram_rank(const std::vector<cplx>& gram, int n, double rel_tol) {
  if (n == 0) return 0;
  if (gram.size() != static_cast<std::size_t>(n) * n)
    throw Error(errc::invalid_argument, "gram matrix shape mismatch");
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gram[static_cast<std::size_t>(i) * n + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  if (top <= 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < n; ++i)
    if (ev(i) > rel_tol * top) ++rank;
  return rank;
}

int span_rank(const std::vector<std::vector<cplx>>& vectors, const std::vector<double>& weights,
              double rel_tol) {
  const int n = static_cast<int>(vectors.size());
  if (n == 0) return 0;
  std::vector<cplx> gram(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      cplx s(0.0);
      for (std::size_t i = 0; i < vectors[a].size(); ++i)
        s += vectors[a][i] * std::conj(vectors[b][i]) * weights[i];
      gram[static_cast<std::size_t>(a) * n + b] = s;
    }
  return gram_rank(gram, n, rel_tol);
}

}  // namespace qfock
