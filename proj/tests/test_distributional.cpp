#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "confham/distributional.hpp"
#include "confham/grid.hpp"
#include "confham/potential.hpp"

using namespace confham;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

template <typename F>
WaveFunction sample(const Decomposition& dec, F f) {
  WaveFunction psi = WaveFunction::zeros(dec);
  for (Blk blk : all_blocks) {
    auto& v = psi.block(blk);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(dec.x_of(blk, j));
  }
  return psi;
}

// Independent trace bookkeeping for piecewise-linear states: given the slope
// and value of each one-sided limit, computes the same jump/mean functionals
// the implementation derives from stencils. Exact for linear pieces.
struct AnalyticTraces {
  double value1, slope1;  // inner side, as functions of x
  double value2, slope2;  // outer side

  Complex g0_1() const { return value1; }
  Complex g0_2() const { return value2; }
  Complex g1_1(double n1) const { return n1 * slope1; }
  Complex g1_2(double n1) const { return -n1 * slope2; }
};

}  // namespace

TEST_CASE("blockwise action reproduces -psi'' exactly on cubics",
          "[distributional]") {
  Decomposition dec = build_decomposition(1.0, 32, 0.25, 0.75);
  Potential V = evaluate_potential(dec, PotentialSpec::zero());
  WaveFunction psi = sample(dec, [](double x) { return x * x * x - 0.5 * x; });
  WaveFunction out = apply_maximal(psi, V);
  // -(x^3 - x/2)'' = -6x, at every node including the one-sided block ends.
  for (Blk blk : all_blocks) {
    for (std::size_t j = 0; j < dec.block_size(blk); ++j) {
      double x = dec.x_of(blk, j);
      CHECK_THAT(out.block(blk)[j].real(), WithinAbs(-6.0 * x, 1e-8));
    }
  }
}

TEST_CASE("blockwise action matches the discrete sine eigenvalue",
          "[distributional]") {
  // On interior nodes the centered stencil satisfies
  //   -D2 sin(pi x) = (2 - 2 cos(pi h)) / h^2 * sin(pi x)
  // exactly; the block-end rows are consistent only to O(h^2).
  Decomposition dec = build_decomposition(1.0, 64, 0.25, 0.75);
  Potential V = evaluate_potential(dec, PotentialSpec::constant(3.0));
  WaveFunction psi = sample(dec, [](double x) { return std::sin(M_PI * x); });
  WaveFunction out = apply_maximal(psi, V);
  const double h = dec.h();
  const double lam = (2.0 - 2.0 * std::cos(M_PI * h)) / (h * h);
  for (Blk blk : all_blocks) {
    const std::size_t m = dec.block_size(blk);
    for (std::size_t j = 1; j + 1 < m; ++j) {
      double x = dec.x_of(blk, j);
      double expected = (lam + 3.0) * std::sin(M_PI * x);
      CHECK_THAT(out.block(blk)[j].real(), WithinAbs(expected, 1e-9));
    }
    for (std::size_t j : {std::size_t{0}, m - 1}) {
      double x = dec.x_of(blk, j);
      double expected = (M_PI * M_PI + 3.0) * std::sin(M_PI * x);
      // truncation of the one-sided row: (11/12) h^2 max|f''''| = 89.4 h^2
      CHECK_THAT(out.block(blk)[j].real(), WithinAbs(expected, 120.0 * h * h));
    }
  }
}

TEST_CASE("free action of a smooth state is regular", "[distributional]") {
  Decomposition dec = build_decomposition(1.0, 32, 0.25, 0.75);
  Potential V = evaluate_potential(dec, PotentialSpec::zero());
  WaveFunction psi =
      sample(dec, [](double x) { return 1.0 + 2.0 * x - 0.7 * x * x; });
  SingularFunction act = apply_h0_distributional(psi, V);
  CHECK(act.is_regular());
  CHECK_THAT(act.singular_magnitude(), WithinAbs(0.0, 1e-11));
}

TEST_CASE("free action of a jumping state carries a dipole",
          "[distributional]") {
  Decomposition dec = build_decomposition(1.0, 32, 0.25, 0.75);
  Potential V = evaluate_potential(dec, PotentialSpec::zero());
  WaveFunction psi = WaveFunction::zeros(dec);
  for (auto& v : psi.left) v = 1.0;
  for (auto& v : psi.omega1) v = 4.0;
  for (auto& v : psi.right) v = 4.0;

  SingularFunction act = apply_h0_distributional(psi, V);
  CHECK_FALSE(act.is_regular());
  // Value jump of 3 at a, smooth at b; constants have no derivative jump.
  CHECK_THAT(act.dipole[index_of(GammaPoint::a)].real(), WithinAbs(3.0, 1e-11));
  CHECK_THAT(std::abs(act.delta[index_of(GammaPoint::a)]), WithinAbs(0.0, 1e-11));
  CHECK_THAT(std::abs(act.dipole[index_of(GammaPoint::b)]), WithinAbs(0.0, 1e-11));
}

TEST_CASE("boundary potential weights match hand-computed traces",
          "[distributional]") {
  // Piecewise linear state: psi = 2x on the inner region, psi = 3 - x outside.
  // All stencils are exact on linear pieces, so the implementation's weights
  // must agree with the trace algebra done by hand here.
  // Fill per block so each interface copy carries its own side's limit.
  Decomposition dec = build_decomposition(1.0, 32, 0.25, 0.75);
  WaveFunction psi = WaveFunction::zeros(dec);
  for (std::size_t j = 0; j < dec.block_size(Blk::omega1); ++j)
    psi.omega1[j] = 2.0 * dec.x_of(Blk::omega1, j);
  for (std::size_t j = 0; j < dec.block_size(Blk::left); ++j)
    psi.left[j] = 3.0 - dec.x_of(Blk::left, j);
  for (std::size_t j = 0; j < dec.block_size(Blk::right); ++j)
    psi.right[j] = 3.0 - dec.x_of(Blk::right, j);
  // One-sided limits at a = 1/4 and b = 3/4:
  AnalyticTraces at_a{0.5, 2.0, 2.75, -1.0};   // inner 2x, outer 3-x
  AnalyticTraces at_b{1.5, 2.0, 2.25, -1.0};

  auto check_point = [&](const SingularFunction& act, GammaPoint p,
                         Complex want_delta, Complex want_dipole) {
    const std::size_t ip = index_of(p);
    CHECK_THAT(act.delta[ip].real(), WithinAbs(want_delta.real(), 1e-10));
    CHECK_THAT(act.dipole[ip].real(), WithinAbs(want_dipole.real(), 1e-10));
  };

  SECTION("dirichlet: delta = mu0 - j1, no dipole") {
    SingularFunction act =
        boundary_potential(psi, BoundaryPotentialSpec::dirichlet());
    for (auto [p, t] : {std::pair{GammaPoint::a, at_a}, {GammaPoint::b, at_b}}) {
      double n1 = normal_sign(p, Side::omega1);
      Complex mu0 = 0.5 * (t.g0_1() + t.g0_2());
      Complex j1 = t.g1_1(n1) + t.g1_2(n1);
      check_point(act, p, mu0 - j1, Complex{});
    }
  }

  SECTION("neumann: dipole = mu1 - j0, no delta") {
    SingularFunction act =
        boundary_potential(psi, BoundaryPotentialSpec::neumann());
    for (auto [p, t] : {std::pair{GammaPoint::a, at_a}, {GammaPoint::b, at_b}}) {
      double n1 = normal_sign(p, Side::omega1);
      Complex mu1 = 0.5 * (t.g1_1(n1) - t.g1_2(n1));
      Complex j0 = t.g0_1() - t.g0_2();
      check_point(act, p, Complex{}, mu1 - j0);
    }
  }

  SECTION("robin: delta = -j0f, dipole = mu1 - mu0f - j0") {
    RobinData f = RobinData::uniform(1.5, -0.5);
    SingularFunction act =
        boundary_potential(psi, BoundaryPotentialSpec::robin_bc(f));
    for (auto [p, t] : {std::pair{GammaPoint::a, at_a}, {GammaPoint::b, at_b}}) {
      double n1 = normal_sign(p, Side::omega1);
      Complex j0f = 1.5 * t.g0_1() + (-0.5) * t.g0_2();
      Complex mu0f = 0.5 * (1.5 * t.g0_1() - (-0.5) * t.g0_2());
      Complex mu1 = 0.5 * (t.g1_1(n1) - t.g1_2(n1));
      Complex j0 = t.g0_1() - t.g0_2();
      check_point(act, p, -j0f, mu1 - mu0f - j0);
    }
  }

  SECTION("general functionals reduce to the same algebra") {
    BoundaryPotentialSpec::General g;
    for (std::size_t ip = 0; ip < 2; ++ip) {
      g.F1[ip] = {0.4, -0.3};
      g.F2[ip] = {-0.2, 0.9};
    }
    g.c1 = 2.0;
    g.c2 = -1.0;
    SingularFunction act =
        boundary_potential(psi, BoundaryPotentialSpec::general_bc(g));
    for (auto [p, t] : {std::pair{GammaPoint::a, at_a}, {GammaPoint::b, at_b}}) {
      double n1 = normal_sign(p, Side::omega1);
      Complex F1 = 0.4 * t.g0_1() - 0.3 * t.g1_1(n1);
      Complex F2 = -0.2 * t.g0_2() + 0.9 * t.g1_2(n1);
      Complex j1 = t.g1_1(n1) + t.g1_2(n1);
      Complex j0 = t.g0_1() - t.g0_2();
      check_point(act, p, 2.0 * (F1 + F2) - j1, -1.0 * (F1 - F2) - j0);
    }
  }
}

TEST_CASE("general boundary potential rejects degenerate constants",
          "[distributional]") {
  BoundaryPotentialSpec::General g;
  g.c1 = 0.0;
  CHECK_THROWS_AS(BoundaryPotentialSpec::general_bc(g), SpecError);
}

TEST_CASE("domain membership for the Dirichlet operator", "[distributional]") {
  Decomposition dec = build_decomposition(1.0, 32, 0.25, 0.75);
  Potential V = evaluate_potential(dec, PotentialSpec::constant(1.0));
  const double a = dec.a(), b = dec.b(), L = dec.L();

  // Quadratics vanishing at the interface points (and walls) sit in the
  // Dirichlet domain; every stencil is exact on them.
  WaveFunction psi = WaveFunction::zeros(dec);
  for (std::size_t j = 0; j < dec.block_size(Blk::left); ++j) {
    double x = dec.x_of(Blk::left, j);
    psi.left[j] = x * (a - x);
  }
  for (std::size_t j = 0; j < dec.block_size(Blk::omega1); ++j) {
    double x = dec.x_of(Blk::omega1, j);
    psi.omega1[j] = (x - a) * (b - x);
  }
  for (std::size_t j = 0; j < dec.block_size(Blk::right); ++j) {
    double x = dec.x_of(Blk::right, j);
    psi.right[j] = (x - b) * (L - x);
  }

  DomainCheck ok = in_domain(psi, V, BoundaryPotentialSpec::dirichlet());
  CHECK(ok);
  CHECK(ok.defect <= ok.threshold);

  // Shifting the inner block off zero at the interface leaves the domain.
  WaveFunction bad = psi;
  for (auto& v : bad.omega1) v += 0.5;
  DomainCheck no = in_domain(bad, V, BoundaryPotentialSpec::dirichlet());
  CHECK_FALSE(no);
  CHECK(no.defect > 1e3 * no.threshold);
}

TEST_CASE("domain membership distinguishes the boundary conditions",
          "[distributional]") {
  // A state whose one-sided normal derivatives all vanish lies in the Neumann
  // domain no matter what the boundary values do: both total singular weights
  // for Neumann are trace-derivative functionals (j1 and mu1). The same state
  // has nonzero boundary values, so the Dirichlet check must reject it.
  Decomposition dec = build_decomposition(1.0, 32, 0.25, 0.75);
  Potential V = evaluate_potential(dec, PotentialSpec::zero());
  const double a = dec.a(), b = dec.b();

  WaveFunction psi = WaveFunction::zeros(dec);
  for (std::size_t j = 0; j < dec.block_size(Blk::left); ++j) {
    double x = dec.x_of(Blk::left, j);
    psi.left[j] = 2.0 + (x - a) * (x - a);
  }
  for (auto& v : psi.omega1) v = 3.0;  // flat: both inner slopes vanish
  for (std::size_t j = 0; j < dec.block_size(Blk::right); ++j) {
    double x = dec.x_of(Blk::right, j);
    psi.right[j] = -0.5 + 3.0 * (x - b) * (x - b);
  }

  DomainCheck nm = in_domain(psi, V, BoundaryPotentialSpec::neumann());
  CHECK(nm);
  DomainCheck dr = in_domain(psi, V, BoundaryPotentialSpec::dirichlet());
  CHECK_FALSE(dr);
}
