#include "qfock/chaos.hpp"

#include <algorithm>
#include <cmath>

#include "qfock/linalg.hpp"

namespace qfock {

OrthoPolyBasis ortho_polys(const JumpMeasure& jumps) {
  const int K = jumps.atoms();
  OrthoPolyBasis basis;
  basis.values.assign(K, std::vector<double>(K, 0.0));
  basis.coeffs.assign(K, {});
  basis.norm.assign(K, 0.0);
  basis.a.assign(K, 0.0);
  basis.b.assign(K, 0.0);

  auto dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (int j = 0; j < K; ++j) s += u[j] * v[j] * jumps.ws[j];
    return s;
  };

  // Stieltjes: p_{k+1} = (x - b_k) p_k - a_k p_{k-1} on the atom values
  basis.values[0].assign(K, 1.0);
  basis.coeffs[0] = {1.0};
  basis.norm[0] = dot(basis.values[0], basis.values[0]);
  for (int k = 0; k < K; ++k) {
    if (basis.norm[k] <= 1e-14)
      throw Error(errc::degenerate_measure, "orthogonal polynomial norm collapsed");
    std::vector<double> xpk(K);
    for (int j = 0; j < K; ++j) xpk[j] = jumps.xs[j] * basis.values[k][j];
    basis.b[k] = dot(xpk, basis.values[k]) / basis.norm[k];
    if (k >= 1) basis.a[k] = basis.norm[k] / basis.norm[k - 1];
    if (k + 1 < K) {
      std::vector<double>& nxt = basis.values[k + 1];
      for (int j = 0; j < K; ++j) {
        nxt[j] = (jumps.xs[j] - basis.b[k]) * basis.values[k][j];
        if (k >= 1) nxt[j] -= basis.a[k] * basis.values[k - 1][j];
      }
      basis.norm[k + 1] = dot(nxt, nxt);
      // coefficient vector, for the report table
      std::vector<double> c(k + 2, 0.0);
      for (std::size_t i = 0; i < basis.coeffs[k].size(); ++i) {
        c[i + 1] += basis.coeffs[k][i];
        c[i] -= basis.b[k] * basis.coeffs[k][i];
      }
      if (k >= 1)
        for (std::size_t i = 0; i < basis.coeffs[k - 1].size(); ++i)
          c[i] -= basis.a[k] * basis.coeffs[k - 1][i];
      basis.coeffs[k + 1] = std::move(c);
    }
  }
  return basis;
}

GradedOperator power_jump(const LevySpace& space, const FockTensor& f, int k) {
  if (k < 1) throw Error(errc::index_out_of_range, "power jump index starts at 1");
  const QKernel& pk = space.product_kernel();
  return create(pk, space.lift_monomial(f, k - 1)) + neutral(pk, space.lift_monomial(f, k)) +
         annihilate(pk, space.lift_monomial(f, k - 1));
}

GradedOperator orthogonalized_jump(const LevySpace& space, const OrthoPolyBasis& basis,
                                   const FockTensor& f, int k) {
  const int K = basis.order();
  if (k < 0 || k >= K) throw Error(errc::index_out_of_range, "orthogonalized jump needs k < K");
  const QKernel& pk = space.product_kernel();
  std::vector<double> neutral_vals(K, 0.0);  // p^(k+1) + b_k p^(k) + a_k p^(k-1), p^(K) = 0
  for (int j = 0; j < K; ++j) {
    double v = basis.b[k] * basis.values[k][j];
    if (k + 1 < K) v += basis.values[k + 1][j];
    if (k >= 1) v += basis.a[k] * basis.values[k - 1][j];
    neutral_vals[j] = v;
  }
  std::vector<double> pk_vals = basis.values[k];
  return create(pk, space.lift_values(f, pk_vals)) +
         neutral(pk, space.lift_values(f, neutral_vals)) +
         annihilate(pk, space.lift_values(f, pk_vals));
}

FockTensor group_symmetrize(const QKernel& base, const FockTensor& f, const ChaosIndex& alpha) {
  FockTensor out = f;
  int start = 0;
  for (int a : alpha) {
    if (a >= 2) out = symmetrize_partial(base, out, start, a);
    start += a;
  }
  return out;
}

double group_symmetry_defect(const QKernel& base, const FockTensor& f, const ChaosIndex& alpha) {
  return max_abs_diff(f, group_symmetrize(base, f, alpha));
}

GradedVector multiple_integral(const LevySpace& space, const OrthoPolyBasis& basis,
                               const ChaosIndex& alpha, const FockTensor& f, int cutoff) {
  int n = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 0) throw Error(errc::invalid_argument, "chaos index must be nonnegative");
    if (alpha[i] > 0 && static_cast<int>(i) >= basis.order())
      throw Error(errc::index_out_of_range, "chaos index beyond the polynomial order");
    n += alpha[i];
  }
  if (n > cutoff) throw Error(errc::cutoff_too_small, "multiple integral degree above cutoff");
  if (f.degree() != n || f.sites() != space.t_sites())
    throw Error(errc::invalid_argument, "integrand shape must match |alpha| over the T grid");

  const FockTensor fg = group_symmetrize(space.base_kernel(), f, alpha);

  std::vector<int> ks;  // nondecreasing polynomial indices
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (int c = 0; c < alpha[i]; ++c) ks.push_back(static_cast<int>(i));

  GradedVector out(space.product_sites(), cutoff);
  if (n == 0) {
    out.comp(0)[0] = fg[0];
    return out;
  }
  const int d = space.product_sites();
  FockTensor lifted(d, n);
  std::vector<int> idx(n), tix(n);
  for (std::size_t flat = 0; flat < lifted.size(); ++flat) {
    lifted.decode(flat, idx);
    for (int s = 0; s < n; ++s) tix[s] = space.t_of(idx[s]);
    cplx val = fg.at(tix);
    if (val == cplx(0.0)) continue;
    for (int s = 0; s < n; ++s) val *= basis.values[ks[s]][space.x_of(idx[s])];
    lifted[flat] = val;
  }
  out.comp(n) = (n >= 2) ? symmetrize(space.product_kernel(), lifted) : lifted;
  return out;
}

double chaos_weight(const OrthoPolyBasis& basis, const ChaosIndex& alpha) {
  double w = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (int c = 1; c <= alpha[i]; ++c) w *= c;
    for (int c = 0; c < alpha[i]; ++c) w *= basis.norm[i];
  }
  return w;
}

std::vector<ChaosIndex> enumerate_chaos_indices(int total_degree, int order) {
  std::vector<ChaosIndex> out;
  ChaosIndex alpha(order, 0);
  // compositions of total_degree into `order` parts, lexicographic
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == order - 1) {
      alpha[pos] = remaining;
      out.push_back(alpha);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      alpha[pos] = v;
      rec(pos + 1, remaining - v);
    }
  };
  if (order >= 1) rec(0, total_degree);
  return out;
}

namespace {

FockTensor random_tensor(int sites, int degree, Rng& rng) {
  FockTensor t(sites, degree);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = cplx(rng.sym(), rng.sym());
  return t;
}

std::vector<double> degree_weights(const std::vector<double>& w, int d) {
  std::vector<double> out(1, 1.0);
  for (int rep = 0; rep < d; ++rep) {
    std::vector<double> next;
    next.reserve(out.size() * w.size());
    for (double a : out)
      for (double b : w) next.push_back(a * b);
    out = std::move(next);
  }
  return out;
}

}  // namespace

ChaosReport chaos_orthogonality_report(const LevySpace& space, const OrthoPolyBasis& basis,
                                       int max_degree, Rng& rng) {
  ChaosReport rep;
  const JumpMeasure& nu = space.jumps();
  const int K = basis.order();
  const int m = space.t_sites();

  // Favard rows, including the terminal p^(K) = 0 row
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < K; ++j) {
      double rhs = basis.b[k] * basis.values[k][j];
      if (k + 1 < K) rhs += basis.values[k + 1][j];
      if (k >= 1) rhs += basis.a[k] * basis.values[k - 1][j];
      rep.favard_residual =
          std::max(rep.favard_residual, std::abs(nu.xs[j] * basis.values[k][j] - rhs));
    }
  }
  rep.orthogonality_matrix.assign(K, std::vector<double>(K, 0.0));
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < K; ++l) {
      double v = 0.0;
      for (int j = 0; j < K; ++j) v += basis.values[k][j] * basis.values[l][j] * nu.ws[j];
      const double expect = (k == l) ? basis.norm[k] : 0.0;
      rep.orthogonality_matrix[k][l] = std::abs(v - expect);
      rep.basis_orthogonality_residual =
          std::max(rep.basis_orthogonality_residual, rep.orthogonality_matrix[k][l]);
    }

  // alpha-indexed checks
  std::vector<ChaosIndex> all_alphas;
  for (int n = 0; n <= max_degree; ++n)
    for (const ChaosIndex& a : enumerate_chaos_indices(n, K)) all_alphas.push_back(a);

  std::vector<std::pair<ChaosIndex, GradedVector>> samples;
  for (const ChaosIndex& alpha : all_alphas) {
    int n = 0;
    for (int a : alpha) n += a;
    FockTensor f = random_tensor(m, n, rng);
    FockTensor fg = group_symmetrize(space.base_kernel(), f, alpha);
    GradedVector integral = multiple_integral(space, basis, alpha, fg, max_degree);
    // norm identity on the group-symmetric representative
    const double lhs = graded_inner(space.product_kernel().weights(), integral, integral).real();
    const double rhs =
        chaos_weight(basis, alpha) * norm_squared(space.grid().weights, fg);
    rep.norm_identity_residual = std::max(rep.norm_identity_residual, std::abs(lhs - rhs));
    samples.emplace_back(alpha, std::move(integral));
  }
  for (std::size_t a = 0; a < samples.size(); ++a)
    for (std::size_t b = a + 1; b < samples.size(); ++b) {
      if (samples[a].first == samples[b].first) continue;
      const cplx ip = graded_inner(space.product_kernel().weights(), samples[a].second,
                                   samples[b].second);
      rep.cross_orthogonality_residual =
          std::max(rep.cross_orthogonality_residual, std::abs(ip));
    }

  // dimension bookkeeping: sum over |alpha| = n of dim F_alpha vs rank of P_n
  rep.degree_dims.assign(max_degree + 1, 0);
  rep.pn_ranks.assign(max_degree + 1, 0);
  for (int n = 0; n <= max_degree; ++n) {
    if (n == 0) {
      rep.degree_dims[0] = 1;
      rep.pn_ranks[0] = 1;
      continue;
    }
    for (const ChaosIndex& alpha : enumerate_chaos_indices(n, K)) {
      std::vector<std::vector<cplx>> vecs;
      FockTensor base(m, n);
      for (std::size_t flat = 0; flat < base.size(); ++flat) {
        FockTensor e(m, n);
        e[flat] = cplx(1.0);
        GradedVector integral = multiple_integral(space, basis, alpha, e, max_degree);
        vecs.push_back(integral.comp(n).data());
      }
      const int dim =
          span_rank(vecs, degree_weights(space.product_kernel().weights(), n));
      rep.dims.emplace_back(alpha, dim);
      rep.degree_dims[n] += dim;
    }
    std::vector<std::vector<cplx>> pn_vecs;
    FockTensor base(space.product_sites(), n);
    for (std::size_t flat = 0; flat < base.size(); ++flat) {
      FockTensor e(space.product_sites(), n);
      e[flat] = cplx(1.0);
      pn_vecs.push_back(symmetrize(space.product_kernel(), e).data());
    }
    rep.pn_ranks[n] =
        span_rank(pn_vecs, degree_weights(space.product_kernel().weights(), n));
    if (rep.degree_dims[n] != rep.pn_ranks[n]) rep.dims_match = false;
  }
  return rep;
}

}  // namespace qfock
