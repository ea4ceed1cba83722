#include "qfock/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace qfock {

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.images.assign(images.size(), 0);
  for (std::size_t i = 0; i < images.size(); ++i) inv.images[images[i]] = static_cast<int>(i);
  return inv;
}

int Permutation::inversions() const {
  int c = 0;
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      if (images[i] > images[j]) ++c;
  return c;
}

std::vector<std::pair<int, int>> Permutation::inversion_pairs() const {
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      if (images[i] > images[j]) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return pairs;
}

std::vector<Permutation> all_permutations(int n) {
  if (n < 0 || n > 8) throw Error(errc::range_error, "permutation degree outside 0..8");
  std::vector<int> images(n);
  std::iota(images.begin(), images.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation{images});
  } while (std::next_permutation(images.begin(), images.end()));
  return out;
}

FockTensor psi_j(const QKernel& k, int j, const FockTensor& f) {
  const int n = f.degree();
  if (j < 1 || j > n - 1) throw Error(errc::index_out_of_range, "psi_j needs 1 <= j <= n-1");
  FockTensor out(f.sites(), n);
  std::vector<int> idx(n), src(n);
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    f.decode(flat, idx);
    src = idx;
    std::swap(src[j - 1], src[j]);
    out[flat] = k(idx[j - 1], idx[j]) * f.at(src);
  }
  return out;
}

cplx q_coeff(const QKernel& k, const Permutation& pi, std::span<const int> idx) {
  if (idx.size() != pi.images.size())
    throw Error(errc::invalid_argument, "q_coeff index length mismatch");
  cplx c(1.0);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      if (pi.images[i] > pi.images[j]) c *= k(idx[i], idx[j]);
  return c;
}

namespace {

struct PermData {
  std::vector<int> inverse;
  std::vector<std::pair<int, int>> pairs;
};

std::vector<PermData> permutation_tables(int n) {
  std::vector<PermData> tables;
  for (const Permutation& pi : all_permutations(n))
    tables.push_back({pi.inverse().images, pi.inversion_pairs()});
  return tables;
}

// One output cell of (P_n f); the permutation loop runs in canonical order.
cplx symmetrize_cell(const QKernel& k, const FockTensor& f, const std::vector<PermData>& tables,
                     std::span<const int> idx, std::span<int> src) {
  cplx acc(0.0);
  for (const PermData& pd : tables) {
    cplx coeff(1.0);
    for (const auto& [i, j] : pd.pairs) coeff *= k(idx[i], idx[j]);
    for (std::size_t s = 0; s < src.size(); ++s) src[s] = idx[pd.inverse[s]];
    acc += coeff * f.at(src);
  }
  return acc;
}

// Inductive route: P_{n+1} = 1/(n+1) (1 + sum_k Psi_k...Psi_1)(1 x P_n).
FockTensor symmetrize_inductive(const QKernel& k, const FockTensor& f, bool parallel);

FockTensor symmetrize_impl(const QKernel& k, const FockTensor& f, bool parallel) {
  const int n = f.degree();
  if (n <= 1) return f;
  if (n > 6) return symmetrize_inductive(k, f, parallel);

  const auto tables = permutation_tables(n);
  const double inv_fact = 1.0 / std::tgamma(n + 1.0);
  FockTensor out(f.sites(), n);
  const std::ptrdiff_t sz = static_cast<std::ptrdiff_t>(f.size());

#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel
    {
      std::vector<int> idx(n), src(n);
#pragma omp for schedule(static)
      for (std::ptrdiff_t flat = 0; flat < sz; ++flat) {
        f.decode(static_cast<std::size_t>(flat), idx);
        out[static_cast<std::size_t>(flat)] =
            inv_fact * symmetrize_cell(k, f, tables, idx, src);
      }
    }
    return out;
  }
#else
  (void)parallel;
#endif
  std::vector<int> idx(n), src(n);
  for (std::ptrdiff_t flat = 0; flat < sz; ++flat) {
    f.decode(static_cast<std::size_t>(flat), idx);
    out[static_cast<std::size_t>(flat)] = inv_fact * symmetrize_cell(k, f, tables, idx, src);
  }
  return out;
}

FockTensor symmetrize_inductive(const QKernel& k, const FockTensor& f, bool parallel) {
  const int n = f.degree();
  const int m = f.sites();
  // (1 x P_{n-1}): symmetrize each first-slot slice, recursing as needed
  FockTensor tail(m, n);
  const std::size_t stride = f.size() / static_cast<std::size_t>(m);
  for (int i = 0; i < m; ++i) {
    FockTensor slice(m, n - 1);
    std::copy(f.data().begin() + i * stride, f.data().begin() + (i + 1) * stride,
              slice.data().begin());
    FockTensor ssym = symmetrize_impl(k, slice, parallel);
    std::copy(ssym.data().begin(), ssym.data().end(), tail.data().begin() + i * stride);
  }
  // coset representatives 1, Psi_1, Psi_2 Psi_1, ..., applied stepwise
  FockTensor acc = tail;
  FockTensor term = std::move(tail);
  for (int j = 1; j <= n - 1; ++j) {
    term = psi_j(k, j, term);
    acc += term;
  }
  return (1.0 / n) * acc;
}

}  // namespace

FockTensor symmetrize(const QKernel& k, const FockTensor& f) {
  return symmetrize_impl(k, f, true);
}

FockTensor symmetrize_serial(const QKernel& k, const FockTensor& f) {
  return symmetrize_impl(k, f, false);
}

FockTensor symmetrize_partial(const QKernel& k, const FockTensor& f, int start, int len) {
  const int n = f.degree();
  if (start < 0 || len < 0 || start + len > n)
    throw Error(errc::index_out_of_range, "partial symmetrization range");
  if (len <= 1) return f;
  const auto tables = permutation_tables(len);
  const double inv_fact = 1.0 / std::tgamma(len + 1.0);
  FockTensor out(f.sites(), n);
  std::vector<int> idx(n), src(n), sub(len), subsrc(len);
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    f.decode(flat, idx);
    for (int s = 0; s < len; ++s) sub[s] = idx[start + s];
    cplx acc(0.0);
    src = idx;
    for (const PermData& pd : tables) {
      cplx coeff(1.0);
      for (const auto& [i, j] : pd.pairs) coeff *= k(sub[i], sub[j]);
      for (int s = 0; s < len; ++s) src[start + s] = sub[pd.inverse[s]];
      acc += coeff * f.at(src);
    }
    out[flat] = inv_fact * acc;
  }
  return out;
}

double symmetry_defect(const QKernel& k, const FockTensor& f) {
  double d = 0.0;
  for (int j = 1; j <= f.degree() - 1; ++j) d = std::max(d, max_abs_diff(psi_j(k, j, f), f));
  return d;
}

FockTensor symmetrize_recursive(const QKernel& k, const FockTensor& h, const FockTensor& f) {
  if (h.degree() != 1) throw Error(errc::invalid_argument, "left factor must have degree 1");
  if (symmetry_defect(k, f) > kIdentityTol)
    throw Error(errc::not_symmetric, "recursive symmetrization needs a Q-symmetric right factor");
  const int n = f.degree();
  const int m = f.sites();
  FockTensor out(m, n + 1);
  const std::ptrdiff_t sz = static_cast<std::ptrdiff_t>(out.size());
#ifdef _OPENMP
#pragma omp parallel
#endif
  {
    std::vector<int> idx(n + 1), rest(n);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (std::ptrdiff_t flat = 0; flat < sz; ++flat) {
      out.decode(static_cast<std::size_t>(flat), idx);
      for (int s = 0; s < n; ++s) rest[s] = idx[s + 1];
      cplx acc = h[idx[0]] * f.at(rest);
      cplx prefix(1.0);
      for (int kk = 1; kk <= n; ++kk) {
        // Q(t_1,t_k) Q(t_2,t_k) ... Q(t_{k-1},t_k), built incrementally
        prefix = cplx(1.0);
        for (int l = 0; l < kk; ++l) prefix *= k(idx[l], idx[kk]);
        for (int s = 0; s < kk; ++s) rest[s] = idx[s];
        for (int s = kk; s < n; ++s) rest[s] = idx[s + 1];
        acc += prefix * h[idx[kk]] * f.at(rest);
      }
      out[static_cast<std::size_t>(flat)] = acc / static_cast<double>(n + 1);
    }
  }
  return out;
}

FockTensor q_product(const QKernel& k, const FockTensor& f, const FockTensor& g) {
  return symmetrize(k, tensor_product(f, g));
}

cplx q_number(cplx q, int n) {
  cplx acc(0.0), p(1.0);
  for (int i = 0; i < n; ++i) {
    acc += p;
    p *= q;
  }
  return acc;
}

cplx q_factorial(cplx q, int n) {
  cplx acc(1.0);
  for (int k = 1; k <= n; ++k) acc *= q_number(q, k);
  return acc;
}

namespace {
void for_increasing_tuples(int m, int n, const std::function<void(std::span<const int>)>& fn) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  if (n > m) return;
  while (true) {
    fn(idx);
    int k = n - 1;
    while (k >= 0 && idx[k] == m - n + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
}
}  // namespace

ExclusionReport check_exclusion(const QKernel& k, cplx q, const FockTensor& f, int N) {
  if (N < 2) throw Error(errc::bad_root, "exclusion needs N >= 2");
  if (std::abs(std::pow(q, N) - cplx(1.0)) > kIdentityTol)
    throw Error(errc::bad_root, "q must satisfy q^N = 1");
  if (std::abs(q - cplx(1.0)) <= kIdentityTol)
    throw Error(errc::bad_root, "q = 1 is the boson case, excluded");
  if (k.size() < N) throw Error(errc::invalid_argument, "grid needs at least N sites");
  if (f.degree() != 1) throw Error(errc::invalid_argument, "exclusion input must have degree 1");

  ExclusionReport rep;
  rep.root_order = N;
  const int m = k.size();
  FockTensor power = f;
  for (int n = 2; n <= N; ++n) {
    power = symmetrize_recursive(k, f, power);
    const cplx coeff = q_factorial(q, n) / std::tgamma(n + 1.0);
    double closed = 0.0;
    for_increasing_tuples(m, n, [&](std::span<const int> idx) {
      cplx prod(1.0);
      for (int v : idx) prod *= f[static_cast<std::size_t>(v)];
      closed = std::max(closed, std::abs(power.at(idx) - coeff * prod));
    });
    rep.closed_form_residual = std::max(rep.closed_form_residual, closed);
  }
  for_increasing_tuples(m, N, [&](std::span<const int> idx) {
    rep.max_residual = std::max(rep.max_residual, std::abs(power.at(idx)));
  });
  return rep;
}

}  // namespace qfock
