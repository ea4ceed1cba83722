#include "qfock/fock.hpp"

#include <cmath>

namespace qfock {

GradedVector::GradedVector(int sites, int cutoff) : sites_(sites), cutoff_(cutoff) {
  if (cutoff < 0) throw Error(errc::invalid_argument, "cutoff must be nonnegative");
  comp_.reserve(cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) comp_.emplace_back(sites, n);
}

GradedVector GradedVector::vacuum(int sites, int cutoff) {
  GradedVector v(sites, cutoff);
  v.comp(0)[0] = cplx(1.0);
  return v;
}

GradedVector& GradedVector::operator+=(const GradedVector& o) {
  for (int n = 0; n <= cutoff_; ++n) comp_[n] += o.comp_[n];
  return *this;
}

GradedVector& GradedVector::operator-=(const GradedVector& o) {
  for (int n = 0; n <= cutoff_; ++n) comp_[n] -= o.comp_[n];
  return *this;
}

GradedVector& GradedVector::operator*=(cplx c) {
  for (int n = 0; n <= cutoff_; ++n) comp_[n] *= c;
  return *this;
}

double GradedVector::max_abs() const {
  double m = 0.0;
  for (const FockTensor& t : comp_) m = std::max(m, t.max_abs());
  return m;
}

cplx graded_inner(const std::vector<double>& weights, const GradedVector& a,
                  const GradedVector& b) {
  cplx tot(0.0);
  double fact = 1.0;
  for (int n = 0; n <= a.cutoff(); ++n) {
    if (n > 0) fact *= n;
    tot += fact * inner_product(weights, a.comp(n), b.comp(n));
  }
  return tot;
}

double graded_max_diff(const GradedVector& a, const GradedVector& b) {
  double m = 0.0;
  for (int n = 0; n <= a.cutoff(); ++n) m = std::max(m, max_abs_diff(a.comp(n), b.comp(n)));
  return m;
}

GradedOperator GradedOperator::identity() {
  return GradedOperator([](const GradedVector& v) { return v; });
}

GradedOperator operator*(const GradedOperator& a, const GradedOperator& b) {
  return GradedOperator([a, b](const GradedVector& v) { return a(b(v)); });
}

GradedOperator operator+(const GradedOperator& a, const GradedOperator& b) {
  return GradedOperator([a, b](const GradedVector& v) { return a(v) + b(v); });
}

GradedOperator operator-(const GradedOperator& a, const GradedOperator& b) {
  return GradedOperator([a, b](const GradedVector& v) { return a(v) - b(v); });
}

GradedOperator operator*(cplx c, const GradedOperator& a) {
  return GradedOperator([c, a](const GradedVector& v) { return c * a(v); });
}

GradedOperator create(const QKernel& k, const FockTensor& h) {
  if (h.degree() != 1) throw Error(errc::invalid_argument, "creation argument must have degree 1");
  return GradedOperator([k, h](const GradedVector& v) {
    GradedVector out(v.sites(), v.cutoff());
    for (int n = 0; n < v.cutoff(); ++n) {
      const FockTensor& f = v.comp(n);
      if (f.max_abs() == 0.0) continue;
      if (n == 0)
        out.comp(1) += f[0] * h;
      else
        out.comp(n + 1) += symmetrize_recursive(k, h, f);
    }
    return out;
  });
}

GradedOperator annihilate(const QKernel& k, const FockTensor& h) {
  if (h.degree() != 1)
    throw Error(errc::invalid_argument, "annihilation argument must have degree 1");
  return GradedOperator([k, h](const GradedVector& v) {
    const int m = v.sites();
    GradedVector out(m, v.cutoff());
    for (int n = 1; n <= v.cutoff(); ++n) {
      const FockTensor& f = v.comp(n);
      FockTensor& tgt = out.comp(n - 1);
      const std::size_t stride = f.size() / static_cast<std::size_t>(m);
      for (int s = 0; s < m; ++s) {
        const cplx c = static_cast<double>(n) * std::conj(h[s]) * k.weight(s);
        if (c == cplx(0.0)) continue;
        for (std::size_t r = 0; r < stride; ++r) tgt[r] += c * f[s * stride + r];
      }
    }
    return out;
  });
}

GradedOperator neutral(const QKernel& k, const FockTensor& h) {
  if (h.degree() != 1) throw Error(errc::invalid_argument, "neutral argument must have degree 1");
  (void)k;
  return GradedOperator([h](const GradedVector& v) {
    GradedVector out(v.sites(), v.cutoff());
    for (int n = 1; n <= v.cutoff(); ++n) {
      const FockTensor& f = v.comp(n);
      FockTensor& tgt = out.comp(n);
      std::vector<int> idx(n);
      for (std::size_t flat = 0; flat < f.size(); ++flat) {
        if (f[flat] == cplx(0.0)) continue;
        f.decode(flat, idx);
        cplx mult(0.0);
        for (int kk = 0; kk < n; ++kk) mult += h[idx[kk]];
        tgt[flat] = mult * f[flat];
      }
    }
    return out;
  });
}

GradedOperator point_creator(const QKernel& k, int i) {
  return create(k, FockTensor::point_delta(k.size(), i, k.weight(i)));
}

GradedOperator point_annihilator(const QKernel& k, int i) {
  return annihilate(k, FockTensor::point_delta(k.size(), i, k.weight(i)));
}

double CcrReport::max() const {
  return std::max(mixed_residual, std::max(annihilator_residual, creator_residual));
}

CcrReport check_ccr(const QKernel& k, int cutoff) {
  if (cutoff < 3) throw Error(errc::cutoff_too_small, "CCR check needs cutoff >= 3");
  const int m = k.size();
  CcrReport rep;

  std::vector<GradedOperator> cr(m), an(m);
  for (int i = 0; i < m; ++i) {
    cr[i] = point_creator(k, i);
    an[i] = point_annihilator(k, i);
  }

  // spanning set: P_d applied to every basis tensor, degrees <= cutoff-2
  for (int d = 0; d <= cutoff - 2; ++d) {
    FockTensor probe(m, d);
    for (std::size_t flat = 0; flat < probe.size(); ++flat) {
      FockTensor base(m, d);
      base[flat] = cplx(1.0);
      GradedVector v(m, cutoff);
      v.comp(d) = (d >= 2) ? symmetrize(k, base) : base;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          GradedVector lhs_mixed = an[i](cr[j](v));
          GradedVector rhs_mixed = k(i, j) * cr[j](an[i](v));
          if (i == j) rhs_mixed += (1.0 / k.weight(i)) * v;
          rep.mixed_residual = std::max(rep.mixed_residual, graded_max_diff(lhs_mixed, rhs_mixed));

          GradedVector lhs_ann = an[i](an[j](v));
          GradedVector rhs_ann = k(j, i) * an[j](an[i](v));
          rep.annihilator_residual =
              std::max(rep.annihilator_residual, graded_max_diff(lhs_ann, rhs_ann));

          GradedVector lhs_cre = cr[i](cr[j](v));
          GradedVector rhs_cre = k(j, i) * cr[j](cr[i](v));
          rep.creator_residual =
              std::max(rep.creator_residual, graded_max_diff(lhs_cre, rhs_cre));
        }
      }
    }
  }
  return rep;
}

cplx negdef_form(const QKernel& k, const FockTensor& f) {
  if (f.degree() != 1) throw Error(errc::invalid_argument, "form input must have degree 1");
  const int m = k.size();
  cplx tot(0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const cplx q = (i == j) ? cplx(k.form_diag(i)) : k(i, j);
      tot += q * f[i] * std::conj(f[j]) * k.weight(i) * k.weight(j);
    }
  return tot;
}

RestrictedNormReport restricted_creation_norm(cplx q, double delta_mass, int n_max) {
  if (std::abs(q - cplx(1.0)) <= kIdentityTol)
    throw Error(errc::boson_case, "restricted creation norm is unbounded at q = 1");
  if (n_max < 1) throw Error(errc::invalid_argument, "n_max must be >= 1");

  RestrictedNormReport rep;
  rep.bound = 2.0 / std::abs(cplx(1.0) - q) * std::sqrt(delta_mass);

  for (int n = 1; n <= n_max; ++n) {
    const double v = std::abs(q_number(q, n)) / std::sqrt(static_cast<double>(n)) *
                     std::sqrt(delta_mass);
    if (v > rep.closed_form) {
      rep.closed_form = v;
      rep.arg_max = n;
    }
  }

  // Numerical oracle: Gram norms g_n = |[n]_q!|^2 mass^n / n!; the creator is
  // the shift v_n -> v_{n+1}, so its square is diagonal in the orthonormalized
  // basis with entries g_{n+1}/g_n.  Power-iterate A*A without using the
  // closed-form sup.
  std::vector<double> g(n_max + 1);
  g[0] = 1.0;
  double fact = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    fact *= n;
    g[n] = std::norm(q_factorial(q, n)) * std::pow(delta_mass, n) / fact;
  }
  std::vector<double> diag(n_max);  // (A*A)_{nn} = g_{n+1}/g_n, last level truncated
  for (int n = 0; n < n_max; ++n) diag[n] = (g[n] > 0.0) ? g[n + 1] / g[n] : 0.0;

  std::vector<double> x(n_max, 1.0 / std::sqrt(static_cast<double>(n_max)));
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    double nrm = 0.0;
    for (int i = 0; i < n_max; ++i) {
      x[i] *= diag[i];
      nrm += x[i] * x[i];
    }
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) break;
    for (double& v : x) v /= nrm;
    if (std::abs(nrm - lambda) < 1e-15 * std::max(1.0, nrm) && it > 10) {
      lambda = nrm;
      break;
    }
    lambda = nrm;
  }
  rep.power_iteration = std::sqrt(lambda);
  return rep;
}

}  // namespace qfock
