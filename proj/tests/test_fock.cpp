#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qfock/fock.hpp"

using namespace qfock;

namespace {

FockTensor random_tensor(int m, int n, Rng& rng) {
  FockTensor t(m, n);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = cplx(rng.sym(), rng.sym());
  return t;
}

GradedVector random_symmetric_vector(const QKernel& k, int cutoff, int top, Rng& rng) {
  GradedVector v(k.size(), cutoff);
  for (int n = 0; n <= top; ++n) {
    FockTensor f = random_tensor(k.size(), n, rng);
    v.comp(n) = (n >= 2) ? symmetrize(k, f) : f;
  }
  return v;
}

}  // namespace

TEST_CASE("creation basics") {
  SiteGrid g({0.0, 1.0, 2.0}, {0.7, 1.1, 0.4});
  cplx q = std::polar(1.0, 0.9);
  QKernel k = build_anyonic_kernel(g, q);
  Rng rng(2);

  FockTensor h = random_tensor(3, 1, rng);
  GradedVector vac = GradedVector::vacuum(3, 3);
  GradedVector one = create(k, h)(vac);
  CHECK(max_abs_diff(one.comp(1), h) == 0.0);
  CHECK(one.comp(0).max_abs() == 0.0);

  // fermion nilpotence off the diagonal: creation squared vanishes there
  QKernel fermi = build_anyonic_kernel(g, cplx(-1.0));
  GradedVector twice = create(fermi, h)(create(fermi, h)(vac));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(twice.comp(2).at(std::vector<int>{i, j})) < 1e-14);

  // anyonic a+(e0) a+(e1) vacuum = e0 (*) e1
  GradedVector pair =
      create(k, FockTensor::basis(3, 0))(create(k, FockTensor::basis(3, 1))(vac));
  CHECK(std::abs(pair.comp(2).at(std::vector<int>{0, 1}) - cplx(0.5)) < 1e-14);
  CHECK(std::abs(pair.comp(2).at(std::vector<int>{1, 0}) - 0.5 * std::conj(q)) < 1e-14);

  // truncation: degree N input maps to zero
  GradedVector top(3, 2);
  top.comp(2) = symmetrize(k, random_tensor(3, 2, rng));
  CHECK(create(k, h)(top).max_abs() == 0.0);
}

TEST_CASE("annihilation: vacuum, delta pairing, product formula") {
  SiteGrid g({0.0, 1.0, 2.0}, {0.7, 1.1, 0.4});
  QKernel k = build_anyonic_kernel(g, std::polar(1.0, 1.3));
  Rng rng(3);

  GradedVector vac = GradedVector::vacuum(3, 4);
  FockTensor h = random_tensor(3, 1, rng);
  CHECK(annihilate(k, h)(vac).max_abs() == 0.0);

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      GradedVector ej(3, 2);
      ej.comp(1) = FockTensor::basis(3, j);
      GradedVector out = annihilate(k, FockTensor::point_delta(3, i, k.weight(i)))(ej);
      CHECK(std::abs(out.comp(0)[0] - cplx(i == j ? 1.0 : 0.0)) < 1e-14);
    }

  // a-(h)(f1 (*) ... (*) fn) expands as the k-sum of kernel-twisted products
  std::vector<FockTensor> fs;
  for (int i = 0; i < 3; ++i) fs.push_back(random_tensor(3, 1, rng));
  FockTensor prod = fs[0];
  for (int i = 1; i < 3; ++i) prod = q_product(k, prod, fs[i]);
  GradedVector vec(3, 3);
  vec.comp(3) = prod;
  FockTensor lhs = annihilate(k, h)(vec).comp(2);

  FockTensor rhs(3, 2);
  for (int s = 0; s < 3; ++s) {
    const cplx hw = std::conj(h[s]) * k.weight(s);
    for (int kk = 0; kk < 3; ++kk) {
      // (Q(s,.) f_1) (*) ... (*) (Q(s,.) f_{k-1}) (*) f_{k+1} (*) ... (*) f_n
      FockTensor term = FockTensor::scalar(3, cplx(1.0));
      std::vector<FockTensor> factors;
      for (int l = 0; l < kk; ++l) {
        FockTensor tw = fs[l];
        for (int t = 0; t < 3; ++t) tw[t] *= k(s, t);
        factors.push_back(tw);
      }
      for (int l = kk + 1; l < 3; ++l) factors.push_back(fs[l]);
      FockTensor tp = factors[0];
      for (std::size_t l = 1; l < factors.size(); ++l) tp = q_product(k, tp, factors[l]);
      rhs += hw * fs[kk][s] * tp;
    }
  }
  CHECK(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("adjointness of creation and annihilation") {
  SiteGrid g({0.0, 1.0, 2.0}, {0.7, 1.1, 0.4});
  QKernel k = build_anyonic_kernel(g, std::polar(1.0, 2.4));
  Rng rng(4);
  const int N = 4;
  FockTensor h = random_tensor(3, 1, rng);
  GradedVector F = random_symmetric_vector(k, N, N - 1, rng);
  GradedVector G = random_symmetric_vector(k, N, N, rng);
  cplx lhs = graded_inner(k.weights(), create(k, h)(F), G);
  cplx rhs = graded_inner(k.weights(), F, annihilate(k, h)(G));
  CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("neutral operator") {
  SiteGrid g({0.0, 1.0, 2.0}, {0.7, 1.1, 0.4});
  QKernel k = build_anyonic_kernel(g, std::polar(1.0, 0.4));
  Rng rng(5);

  // h = 1 counts particles
  FockTensor ones = FockTensor::from_values(3, {cplx(1.0), cplx(1.0), cplx(1.0)});
  GradedVector v = random_symmetric_vector(k, 3, 3, rng);
  GradedVector counted = neutral(k, ones)(v);
  for (int n = 0; n <= 3; ++n) {
    FockTensor expect = v.comp(n);
    expect *= cplx(static_cast<double>(n));
    CHECK(max_abs_diff(counted.comp(n), expect) < 1e-14);
  }

  CHECK(neutral(k, ones)(GradedVector::vacuum(3, 3)).max_abs() == 0.0);

  // derivation rule over the Q-symmetric product
  FockTensor h = random_tensor(3, 1, rng);
  FockTensor f = random_tensor(3, 1, rng);
  FockTensor gg = random_tensor(3, 1, rng);
  GradedVector fg(3, 2);
  fg.comp(2) = q_product(k, f, gg);
  FockTensor lhs = neutral(k, h)(fg).comp(2);
  FockTensor hf = f, hg = gg;
  for (int i = 0; i < 3; ++i) {
    hf[i] *= h[i];
    hg[i] *= h[i];
  }
  FockTensor rhs = q_product(k, hf, gg) + q_product(k, f, hg);
  CHECK(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("point operators") {
  SiteGrid g({0.0, 1.0, 2.0}, {0.7, 1.1, 0.4});
  QKernel k = build_anyonic_kernel(g, std::polar(1.0, 1.9));
  Rng rng(6);
  GradedVector vac = GradedVector::vacuum(3, 3);

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      GradedVector out = point_annihilator(k, i)(point_creator(k, j)(vac));
      const double expect = (i == j) ? 1.0 / k.weight(i) : 0.0;
      CHECK(std::abs(out.comp(0)[0] - cplx(expect)) < 1e-14);
    }

  // smeared creation recovers a+(h)
  FockTensor h = random_tensor(3, 1, rng);
  GradedVector v = random_symmetric_vector(k, 3, 2, rng);
  GradedVector sum(3, 3);
  for (int i = 0; i < 3; ++i) sum += (k.weight(i) * h[i]) * point_creator(k, i)(v);
  CHECK(graded_max_diff(sum, create(k, h)(v)) < 1e-12);

  // d+_i d_i on e_i scales like neutral(chi_i)
  GradedVector e(3, 2);
  e.comp(1) = FockTensor::basis(3, 1);
  GradedVector raised = point_creator(k, 1)(point_annihilator(k, 1)(e));
  CHECK(std::abs(raised.comp(1)[1] - cplx(1.0 / k.weight(1))) < 1e-14);
  FockTensor chi = FockTensor::basis(3, 1);
  GradedVector via_neutral = neutral(k, chi)(e);
  CHECK(graded_max_diff((cplx(k.weight(1))) * raised, via_neutral) < 1e-14);
}

TEST_CASE("commutation relations for the four kernel families") {
  SiteGrid g({0.0, 1.0, 2.0}, {0.7, 1.1, 0.4});
  std::vector<QKernel> kernels{
      build_anyonic_kernel(g, cplx(1.0)),
      build_anyonic_kernel(g, cplx(-1.0)),
      build_window_kernel(g, 1.5),
      build_anyonic_kernel(g, std::polar(1.0, std::numbers::pi / 3.0)),
  };
  for (const QKernel& k : kernels) {
    CcrReport rep = check_ccr(k, 4);
    CHECK(rep.max() < 1e-10);
  }
  CHECK_THROWS_AS(check_ccr(kernels[0], 2), Error);
}

TEST_CASE("negative semidefiniteness form") {
  SiteGrid g({0.0, 1.0, 2.0, 3.0}, {1.0, 0.5, 2.0, 0.8});
  Rng rng(8);

  // fermion: -|sum f sigma|^2
  QKernel fermi = build_anyonic_kernel(g, cplx(-1.0));
  FockTensor f = random_tensor(4, 1, rng);
  cplx total(0.0);
  for (int i = 0; i < 4; ++i) total += f[i] * g.weights[i];
  cplx form = negdef_form(fermi, f);
  CHECK(std::abs(form - (-std::norm(total))) < 1e-12);
  CHECK(form.real() <= 1e-12);

  // boson with real f: positive
  QKernel boson = build_anyonic_kernel(g, cplx(1.0));
  FockTensor fr(4, 1);
  for (int i = 0; i < 4; ++i) fr[i] = cplx(0.3 + 0.2 * i);
  CHECK(negdef_form(boson, fr).real() > 0.0);

  // the proof's test vector gives exactly 2 b^2 (Re q + 1)
  for (double phase : {0.3, 1.2, 2.5, std::numbers::pi}) {
    cplx q = std::polar(1.0, phase);
    QKernel k = build_anyonic_kernel(g, q);
    const double a = g.weights[0] + g.weights[1];
    const double b = g.weights[2] + g.weights[3];
    FockTensor tv(4, 1);
    tv[0] = tv[1] = (b / a) * std::conj(q);
    tv[2] = tv[3] = cplx(1.0);
    cplx v = negdef_form(k, tv);
    CHECK(std::abs(v.imag()) < 1e-12);
    CHECK(std::abs(v.real() - 2.0 * b * b * (q.real() + 1.0)) < 1e-10);
    // nonpositive for that vector iff q = -1
    if (q.real() > -1.0 + 1e-9)
      CHECK(v.real() > 0.0);
    else
      CHECK(v.real() <= 1e-10);
  }
}

TEST_CASE("restricted creation norm") {
  // q = -1: the supremum sits at n = 1
  RestrictedNormReport fermi = restricted_creation_norm(cplx(-1.0), 0.37, 12);
  CHECK(fermi.closed_form == doctest::Approx(std::sqrt(0.37)));
  CHECK(fermi.arg_max == 1);

  // q = i with unit mass: sup_n |1 - i^n| / (sqrt(2) sqrt(n)) = 1, bound sqrt(2)
  RestrictedNormReport qi = restricted_creation_norm(cplx(0.0, 1.0), 1.0, 12);
  CHECK(qi.closed_form == doctest::Approx(1.0));
  CHECK(qi.bound == doctest::Approx(std::sqrt(2.0)));
  CHECK(qi.closed_form <= qi.bound + 1e-12);

  // closed form vs power iteration across sampled q
  for (double phase : {0.2, 0.9, 1.7, 2.8, std::numbers::pi}) {
    RestrictedNormReport rep = restricted_creation_norm(std::polar(1.0, phase), 0.85, 12);
    CHECK(std::abs(rep.closed_form - rep.power_iteration) < 1e-8);
    CHECK(rep.closed_form <= rep.bound + 1e-12);
  }

  CHECK_THROWS_AS(restricted_creation_norm(cplx(1.0), 1.0, 12), Error);
}

TEST_CASE("operators preserve Q-symmetry") {
  SiteGrid g({0.0, 1.0, 2.0}, {0.7, 1.1, 0.4});
  QKernel k = build_anyonic_kernel(g, std::polar(1.0, 2.7));
  Rng rng(9);
  GradedVector v = random_symmetric_vector(k, 4, 3, rng);
  FockTensor h = random_tensor(3, 1, rng);

  for (const GradedOperator& op : {create(k, h), annihilate(k, h), neutral(k, h)}) {
    GradedVector out = op(v);
    for (int n = 2; n <= 4; ++n) CHECK(symmetry_defect(k, out.comp(n)) < 1e-10);
  }
}
