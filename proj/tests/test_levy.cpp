#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qfock/levy.hpp"

using namespace qfock;

namespace {

FockTensor random_real_vector(int m, Rng& rng) {
  FockTensor t(m, 1);
  for (int i = 0; i < m; ++i) t[i] = cplx(rng.sym());
  return t;
}

SiteGrid test_grid() { return SiteGrid({0.0, 1.0}, {0.8, 1.2}); }

}  // namespace

TEST_CASE("jump measure invariants") {
  CHECK_THROWS_AS(JumpMeasure({1.0, 1.0}, {0.5, 0.5}), Error);   // duplicate atoms
  CHECK_THROWS_AS(JumpMeasure({0.0, 1.0}, {0.5, 0.4}), Error);   // mass != 1
  CHECK_THROWS_AS(JumpMeasure({0.0, 1.0}, {1.5, -0.5}), Error);  // negative weight

  JumpMeasure nu({-1.0, 0.0, 2.0}, {0.25, 0.25, 0.5});
  CHECK(nu.moment(0) == doctest::Approx(1.0));
  CHECK(nu.moment(1) == doctest::Approx(-0.25 + 1.0));
  // levy measure: mass w/x^2 off zero
  CHECK(nu.levy_moment(2) == doctest::Approx(0.25 + 0.5));
  CHECK(nu.levy_moment(3) == doctest::Approx(-0.25 + 2.0 * 0.5));
}

TEST_CASE("levy space construction") {
  SiteGrid g = test_grid();
  cplx q = std::polar(1.0, 1.1);
  QKernel base = build_anyonic_kernel(g, q);

  // K = 1 collapses to the base space
  LevySpace single(g, JumpMeasure({0.7}, {1.0}), base);
  CHECK(single.product_sites() == 2);
  for (int p = 0; p < 2; ++p)
    for (int r = 0; r < 2; ++r) CHECK(single.product_kernel()(p, r) == base(p, r));

  LevySpace space(g, JumpMeasure({-1.0, 1.0}, {0.5, 0.5}), base);
  CHECK(space.product_sites() == 4);
  for (int p = 0; p < 4; ++p) {
    CHECK(space.product_kernel().weight(p) ==
          doctest::Approx(g.weights[space.t_of(p)] * 0.5));
    for (int r = 0; r < 4; ++r) {
      const cplx expect =
          (space.t_of(p) == space.t_of(r)) ? cplx(1.0) : base(space.t_of(p), space.t_of(r));
      CHECK(space.product_kernel()(p, r) == expect);
    }
  }
  KernelReport rep = validate_kernel(space.product_kernel());
  CHECK(rep.hermitian_defect == 0.0);
  CHECK(rep.modulus_defect == 0.0);
  CHECK(rep.diagonal_defect == 0.0);
}

TEST_CASE("xi basics and the K = 1 identification") {
  SiteGrid g = test_grid();
  QKernel base = build_anyonic_kernel(g, std::polar(1.0, 0.9));
  Rng rng(41);

  // <f,xi> Omega = f x mu_0 and tau(<f,xi>) = 0
  LevySpace space(g, JumpMeasure({-1.0, 1.0}, {0.5, 0.5}), base);
  FockTensor f = random_real_vector(2, rng);
  GradedVector one = xi(space, f)(GradedVector::vacuum(space.product_sites(), 3));
  CHECK(max_abs_diff(one.comp(1), space.lift_monomial(f, 0)) < 1e-15);
  CHECK(std::abs(xi_vacuum_state(space, {f}, 3)) < 1e-15);

  // <f,xi> is symmetric for real f on guarded degrees
  {
    const int N = 3;
    GradedVector F(space.product_sites(), N), G(space.product_sites(), N);
    for (int n = 0; n < N; ++n) {
      FockTensor t(space.product_sites(), n);
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = cplx(rng.sym(), rng.sym());
      F.comp(n) = (n >= 2) ? symmetrize(space.product_kernel(), t) : t;
      FockTensor u(space.product_sites(), n);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = cplx(rng.sym(), rng.sym());
      G.comp(n) = (n >= 2) ? symmetrize(space.product_kernel(), u) : u;
    }
    GradedOperator op = xi(space, f);
    cplx lhs = graded_inner(space.product_kernel().weights(), op(F), G);
    cplx rhs = graded_inner(space.product_kernel().weights(), F, op(G));
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }

  // nu = delta_{lambda0}: xi matches omega at parameter lambda0
  const double lambda0 = 0.85;
  LevySpace point(g, JumpMeasure({lambda0}, {1.0}), base);
  FieldConfig cfg(base, lambda0, 5);
  for (int n = 1; n <= 5; ++n) {
    std::vector<FockTensor> word;
    for (int i = 0; i < n; ++i) word.push_back(random_real_vector(2, rng));
    cplx via_xi = xi_vacuum_state(point, word, 5);
    cplx via_omega = vacuum_state(cfg, word);
    CHECK(std::abs(via_xi - via_omega) < 1e-11);
  }
}

TEST_CASE("levy cumulant identification") {
  SiteGrid g = test_grid();
  QKernel base = build_anyonic_kernel(g, std::polar(1.0, 2.2));

  // symmetric two-atom: c3 = 0, c4 = diag(sigma)
  LevySpace sym2(g, JumpMeasure({-1.0, 1.0}, {0.5, 0.5}), base);
  LevyCumulantReport rep = verify_levy_cumulants(sym2, 5, 5);
  CHECK(rep.max_residual() < 1e-10);
  CHECK(rep.levy_expected[0] == doctest::Approx(0.0));  // odd levy moment
  CHECK(rep.levy_expected[1] == doctest::Approx(1.0));
  for (std::size_t i = 0; i < rep.levy_moments.size(); ++i)
    CHECK(rep.levy_moments[i] == doctest::Approx(rep.levy_expected[i]).epsilon(1e-9));

  // point mass: c_n = lambda^{n-2} diag, the omega field
  LevySpace point(g, JumpMeasure({0.6}, {1.0}), base);
  LevyCumulantReport rp = verify_levy_cumulants(point, 5, 5);
  CHECK(rp.max_residual() < 1e-10);

  // asymmetric three-atom measure
  LevySpace tri(g, JumpMeasure({-0.5, 0.3, 1.7}, {0.3, 0.5, 0.2}), base);
  LevyCumulantReport rt = verify_levy_cumulants(tri, 5, 5);
  CHECK(rt.max_residual() < 1e-10);

  CHECK_THROWS_AS(verify_levy_cumulants(sym2, 3, 5), Error);
}

TEST_CASE("independence and stationarity of increments") {
  SiteGrid g({0.0, 1.0, 2.0}, {0.5, 0.5, 0.5});
  QKernel base = build_anyonic_kernel(g, std::polar(1.0, 1.4));
  LevySpace space(g, JumpMeasure({-1.0, 0.5}, {0.4, 0.6}), base);

  // mixed cumulants over disjoint cells vanish
  MeasureTensors cums =
      cumulants_from_moments(base, levy_moment_tensors(space, 4, 4));
  std::vector<FockTensor> disjoint{FockTensor::basis(3, 0), FockTensor::basis(3, 1),
                                   FockTensor::basis(3, 2)};
  CHECK(independence_test(cums, disjoint, 4) < 1e-10);

  // equal-mass cells: tau(<chi_D1, xi>^n) = tau(<chi_D2, xi>^n)
  CHECK(stationarity_residual(space, {0}, {2}, 5, 5) < 1e-10);
  CHECK(stationarity_residual(space, {0, 1}, {1, 2}, 4, 5) < 1e-10);
}

TEST_CASE("pyramidal independence") {
  SiteGrid g({0.0, 1.0, 2.0}, {0.7, 1.1, 0.4});
  QKernel base = build_anyonic_kernel(g, std::polar(1.0, 0.6));
  LevySpace space(g, JumpMeasure({-1.0, 1.0}, {0.5, 0.5}), base);
  Rng rng(42);

  // no middle factors: trivial equality
  FockTensor fa = FockTensor::basis(3, 0);
  CHECK(pyramidal_residual(space, {fa}, {}, {fa}, 5) < 1e-12);

  // single-site supports, m = k = 1, n = 2
  FockTensor gb = FockTensor::basis(3, 1);
  CHECK(pyramidal_residual(space, {fa}, {gb, gb}, {fa}, 5) < 1e-11);

  PyramidalReport rep = pyramidal_check(space, 5, 40, rng);
  CHECK(rep.cases_run == 40);
  CHECK(rep.max_residual < 1e-10);

  // overlapping supports are rejected by the checked entry point, and the
  // unchecked two-sided comparison genuinely fails to factorize
  FockTensor overlap(3, 1);
  overlap[0] = overlap[1] = cplx(1.0);
  CHECK_THROWS_AS(pyramidal_residual(space, {fa}, {overlap}, {fa}, 5), Error);
  std::vector<FockTensor> sandwich{fa, overlap, overlap, fa};
  std::vector<FockTensor> outer{fa, fa}, mid{overlap, overlap};
  cplx lhs = xi_vacuum_state(space, sandwich, 5);
  cplx rhs = xi_vacuum_state(space, outer, 5) * xi_vacuum_state(space, mid, 5);
  CHECK(std::abs(lhs - rhs) > 1e-6);
}

TEST_CASE("cyclicity ranks") {
  SiteGrid g = test_grid();
  QKernel base = build_anyonic_kernel(g, std::polar(1.0, 1.1));

  // L = 1: vacuum plus the m degree-1 vectors f x mu_0
  LevySpace space(g, JumpMeasure({-1.0, 1.0}, {0.5, 0.5}), base);
  CyclicityReport r1 = cyclicity_rank(space, 1, 3);
  CHECK(r1.achieved == 3);
  CHECK(r1.target == 3);

  // m = 2, K = 2, L = 3: degree components of word images span the target
  CyclicityReport r3 = cyclicity_rank(space, 3, 3);
  CHECK(r3.achieved == r3.target);

  // K = 1: the target is the truncated symmetric range
  LevySpace point(g, JumpMeasure({0.9}, {1.0}), base);
  CyclicityReport rp = cyclicity_rank(point, 3, 3);
  CHECK(rp.achieved == rp.target);
}
