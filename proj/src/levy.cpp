#include "qfock/levy.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qfock/linalg.hpp"

namespace qfock {

JumpMeasure::JumpMeasure(std::vector<double> x, std::vector<double> w)
    : xs(std::move(x)), ws(std::move(w)) {
  if (xs.empty() || xs.size() != ws.size())
    throw Error(errc::invalid_argument, "jump measure needs matching nonempty atoms and weights");
  double total = 0.0;
  for (double v : ws) {
    if (!(v > 0.0)) throw Error(errc::invalid_argument, "atom weights must be positive");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw Error(errc::invalid_argument, "atom weights must sum to 1");
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      if (xs[i] == xs[j]) throw Error(errc::invalid_argument, "atoms must be distinct");
}

double JumpMeasure::moment(int n) const {
  double s = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) s += std::pow(xs[j], n) * ws[j];
  return s;
}

double JumpMeasure::levy_moment(int n) const {
  double s = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j)
    if (xs[j] != 0.0) s += std::pow(xs[j], n) * ws[j] / (xs[j] * xs[j]);
  return s;
}

namespace {

QKernel make_product_kernel(const SiteGrid& grid, const JumpMeasure& jumps, const QKernel& base) {
  const int m = grid.size();
  const int K = jumps.atoms();
  const int d = m * K;
  std::vector<double> weights(d);
  std::vector<cplx> mat(static_cast<std::size_t>(d) * d, cplx(1.0));
  for (int p = 0; p < d; ++p) weights[p] = grid.weights[p / K] * jumps.ws[p % K];
  for (int p = 0; p < d; ++p)
    for (int r = 0; r < d; ++r) {
      const int i = p / K, ip = r / K;
      // equal t-cells sit in the excluded set: kernel value 1 by convention
      mat[static_cast<std::size_t>(p) * d + r] = (i == ip) ? cplx(1.0) : base(i, ip);
    }
  std::vector<double> diag(d, 1.0);
  return QKernel(std::move(weights), std::move(mat), std::move(diag));
}

}  // namespace

LevySpace::LevySpace(SiteGrid grid, JumpMeasure jumps, const QKernel& base)
    : grid_(std::move(grid)),
      jumps_(std::move(jumps)),
      base_(base),
      product_(make_product_kernel(grid_, jumps_, base)) {
  if (base.size() != grid_.size())
    throw Error(errc::invalid_argument, "kernel must be built on the given grid");
}

FockTensor LevySpace::lift_monomial(const FockTensor& f, int k) const {
  std::vector<double> g(jumps_.atoms());
  for (int j = 0; j < jumps_.atoms(); ++j) g[j] = std::pow(jumps_.xs[j], k);
  return lift_values(f, g);
}

FockTensor LevySpace::lift_values(const FockTensor& f, const std::vector<double>& g) const {
  if (f.degree() != 1 || f.sites() != t_sites())
    throw Error(errc::invalid_argument, "lift needs a degree-1 tensor on the T grid");
  FockTensor out(product_sites(), 1);
  for (int p = 0; p < product_sites(); ++p) out[p] = f[t_of(p)] * g[x_of(p)];
  return out;
}

GradedOperator xi(const LevySpace& space, const FockTensor& f) {
  const QKernel& pk = space.product_kernel();
  return create(pk, space.lift_monomial(f, 0)) + neutral(pk, space.lift_monomial(f, 1)) +
         annihilate(pk, space.lift_monomial(f, 0));
}

GradedVector xi_word_on_vacuum(const LevySpace& space, const std::vector<FockTensor>& word,
                               int cutoff) {
  GradedVector v = GradedVector::vacuum(space.product_sites(), cutoff);
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = xi(space, *it)(v);
  return v;
}

cplx xi_vacuum_state(const LevySpace& space, const std::vector<FockTensor>& word, int cutoff) {
  if (static_cast<int>(word.size()) > cutoff)
    throw Error(errc::word_too_long, "word longer than the cutoff loses mass under truncation");
  return xi_word_on_vacuum(space, word, cutoff).comp(0)[0];
}

MeasureTensors levy_moment_tensors(const LevySpace& space, int n_max, int cutoff) {
  if (n_max > cutoff) throw Error(errc::cutoff_too_small, "moments need cutoff >= degree");
  const int m = space.t_sites();
  MeasureTensors moments;
  for (int d = 1; d <= n_max; ++d) {
    FockTensor t(m, d);
    std::vector<int> idx(d);
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
      t.decode(flat, idx);
      std::vector<FockTensor> word;
      word.reserve(d);
      for (int i : idx) word.push_back(FockTensor::basis(m, i));
      t[flat] = xi_vacuum_state(space, word, cutoff);
    }
    moments.push_back(std::move(t));
  }
  return moments;
}

double LevyCumulantReport::max_residual() const {
  double r = c1_residual;
  for (double v : residuals) r = std::max(r, v);
  return r;
}

LevyCumulantReport verify_levy_cumulants(const LevySpace& space, int cutoff, int n_max) {
  if (n_max > std::min(cutoff, 6))
    throw Error(errc::cutoff_too_small, "levy cumulants need n_max <= min(cutoff, 6)");
  const int m = space.t_sites();
  MeasureTensors moments = levy_moment_tensors(space, n_max, cutoff);
  MeasureTensors cums = cumulants_from_moments(space.base_kernel(), moments);

  LevyCumulantReport rep;
  rep.c1_residual = cums[0].max_abs();
  for (int d = 2; d <= n_max; ++d) {
    FockTensor expected(m, d);
    const double ratio = space.jumps().moment(d - 2);
    std::vector<int> idx(d);
    for (int i = 0; i < m; ++i) {
      std::fill(idx.begin(), idx.end(), i);
      expected.at(idx) = ratio * space.grid().weights[i];
    }
    rep.residuals.push_back(max_abs_diff(cums[d - 1], expected));
  }
  // C_n(<chi_Delta,xi>)/sigma(Delta) for Delta = first cell, n >= 3
  for (int d = 3; d <= n_max; ++d) {
    std::vector<int> idx(d, 0);
    rep.levy_moments.push_back(cums[d - 1].at(idx).real() / space.grid().weights[0]);
    rep.levy_expected.push_back(space.jumps().levy_moment(d));
  }
  return rep;
}

namespace {

std::set<int> t_support(const FockTensor& f) {
  std::set<int> s;
  for (int i = 0; i < f.sites(); ++i)
    if (std::abs(f[i]) > 0.0) s.insert(i);
  return s;
}

}  // namespace

double pyramidal_residual(const LevySpace& space, const std::vector<FockTensor>& f_head,
                          const std::vector<FockTensor>& g_mid,
                          const std::vector<FockTensor>& f_tail, int cutoff) {
  std::set<int> a_supp, b_supp;
  for (const auto& f : f_head)
    for (int s : t_support(f)) a_supp.insert(s);
  for (const auto& f : f_tail)
    for (int s : t_support(f)) a_supp.insert(s);
  for (const auto& g : g_mid)
    for (int s : t_support(g)) b_supp.insert(s);
  for (int s : a_supp)
    if (b_supp.count(s)) throw Error(errc::support_overlap, "pyramidal supports must be disjoint");

  std::vector<FockTensor> sandwich = f_head;
  sandwich.insert(sandwich.end(), g_mid.begin(), g_mid.end());
  sandwich.insert(sandwich.end(), f_tail.begin(), f_tail.end());
  std::vector<FockTensor> outer = f_head;
  outer.insert(outer.end(), f_tail.begin(), f_tail.end());

  const cplx lhs = xi_vacuum_state(space, sandwich, cutoff);
  const cplx rhs =
      xi_vacuum_state(space, outer, cutoff) * xi_vacuum_state(space, g_mid, cutoff);
  return std::abs(lhs - rhs);
}

PyramidalReport pyramidal_check(const LevySpace& space, int cutoff, int cases, Rng& rng) {
  const int m = space.t_sites();
  if (m < 2) throw Error(errc::invalid_argument, "pyramidal check needs at least 2 cells");
  PyramidalReport rep;
  const int max_len = std::min(cutoff, 5);
  for (int c = 0; c < cases; ++c) {
    // random split of cells into A and B (both nonempty)
    std::vector<int> a_cells, b_cells;
    while (a_cells.empty() || b_cells.empty()) {
      a_cells.clear();
      b_cells.clear();
      for (int i = 0; i < m; ++i) (rng.below(2) ? a_cells : b_cells).push_back(i);
    }
    const int n_mid = 1 + rng.below(std::max(1, max_len - 1));
    const int remaining = max_len - n_mid;
    const int n_head = rng.below(remaining + 1);
    const int n_tail = rng.below(remaining - n_head + 1);

    auto random_on = [&](const std::vector<int>& cells) {
      FockTensor f(m, 1);
      for (int i : cells) f[i] = cplx(rng.sym());
      return f;
    };
    std::vector<FockTensor> head, mid, tail;
    for (int i = 0; i < n_head; ++i) head.push_back(random_on(a_cells));
    for (int i = 0; i < n_mid; ++i) mid.push_back(random_on(b_cells));
    for (int i = 0; i < n_tail; ++i) tail.push_back(random_on(a_cells));
    rep.max_residual =
        std::max(rep.max_residual, pyramidal_residual(space, head, mid, tail, cutoff));
    ++rep.cases_run;
  }
  return rep;
}

namespace {

// flatten the degree-d component for rank computations
std::vector<cplx> flat_component(const GradedVector& v, int d) {
  return v.comp(d).data();
}

std::vector<double> degree_weights(const std::vector<double>& w, int d) {
  if (d == 0) return {1.0};
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

CyclicityReport cyclicity_rank(const LevySpace& space, int max_len, int cutoff) {
  if (max_len > cutoff) throw Error(errc::cutoff_too_small, "cyclicity needs max_len <= cutoff");
  const int m = space.t_sites();
  const int d = space.product_sites();
  CyclicityReport rep;

  // word images over the indicator basis, lengths 0..max_len
  std::vector<GradedVector> images;
  images.push_back(GradedVector::vacuum(d, cutoff));
  std::vector<int> word;
  for (int len = 1; len <= max_len; ++len) {
    word.assign(len, 0);
    while (true) {
      std::vector<FockTensor> fs;
      fs.reserve(len);
      for (int i : word) fs.push_back(FockTensor::basis(m, i));
      images.push_back(xi_word_on_vacuum(space, fs, cutoff));
      int i = len - 1;
      while (i >= 0 && word[i] == m - 1) word[i--] = 0;
      if (i < 0) break;
      ++word[i];
    }
  }

  // achieved: degree components span (degrees are mutually orthogonal)
  for (int deg = 0; deg <= max_len; ++deg) {
    std::vector<std::vector<cplx>> vecs;
    for (const GradedVector& v : images)
      if (v.comp(deg).max_abs() > 0.0) vecs.push_back(flat_component(v, deg));
    rep.achieved += span_rank(vecs, degree_weights(space.product_kernel().weights(), deg));
  }

  // raw mixed-vector rank, for reference
  {
    const std::size_t nv = images.size();
    std::vector<cplx> gram(nv * nv);
    for (std::size_t a = 0; a < nv; ++a)
      for (std::size_t b = 0; b < nv; ++b)
        gram[a * nv + b] =
            graded_inner(space.product_kernel().weights(), images[a], images[b]);
    rep.word_rank = gram_rank(gram, static_cast<int>(nv));
  }

  // target: P_i[e_j x mu_l products] with i + sum(l) <= max_len, plus vacuum
  rep.target = 1;
  for (int i = 1; i <= max_len; ++i) {
    std::vector<std::vector<cplx>> vecs;
    std::vector<int> ls(i, 0);
    while (true) {
      int total = 0;
      for (int l : ls) total += l;
      if (i + total <= max_len) {
        std::vector<int> js(i, 0);
        while (true) {
          FockTensor outer = space.lift_monomial(FockTensor::basis(m, js[0]), ls[0]);
          for (int s = 1; s < i; ++s)
            outer = tensor_product(outer,
                                   space.lift_monomial(FockTensor::basis(m, js[s]), ls[s]));
          FockTensor sym =
              (i >= 2) ? symmetrize(space.product_kernel(), outer) : outer;
          vecs.push_back(sym.data());
          int s = i - 1;
          while (s >= 0 && js[s] == m - 1) js[s--] = 0;
          if (s < 0) break;
          ++js[s];
        }
      }
      int s = i - 1;
      while (s >= 0 && ls[s] == max_len) ls[s--] = 0;
      if (s < 0) break;
      ++ls[s];
    }
    rep.target += span_rank(vecs, degree_weights(space.product_kernel().weights(), i));
  }
  return rep;
}

double stationarity_residual(const LevySpace& space, const std::vector<int>& cells1,
                             const std::vector<int>& cells2, int n_max, int cutoff) {
  const int m = space.t_sites();
  FockTensor chi1(m, 1), chi2(m, 1);
  for (int i : cells1) chi1[i] = cplx(1.0);
  for (int i : cells2) chi2[i] = cplx(1.0);
  double worst = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<FockTensor> w1(n, chi1), w2(n, chi2);
    worst = std::max(worst, std::abs(xi_vacuum_state(space, w1, cutoff) -
                                     xi_vacuum_state(space, w2, cutoff)));
  }
  return worst;
}

}  // namespace qfock
