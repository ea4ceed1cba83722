#pragma once

#include <vector>

#include "qfock/types.hpp"

namespace qfock {

// Numerical rank of a Hermitian PSD Gram matrix: eigenvalues above
// rel_tol * max eigenvalue.
int gram_rank(const std::vector<cplx>& gram, int n, double rel_tol = 1e-8);

// Rank of the span of a set of vectors under a weighted inner product.
int span_rank(const std::vector<std::vector<cplx>>& vectors, const std::vector<double>& weights,
              double rel_tol = 1e-8);

}  // namespace qfock
