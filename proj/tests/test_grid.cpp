#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "confham/grid.hpp"

using namespace confham;
using Catch::Matchers::WithinAbs;

namespace {

// Fills a wavefunction by sampling f at each block node.
template <typename F>
WaveFunction sample(const Decomposition& dec, F f) {
  WaveFunction psi = WaveFunction::zeros(dec);
  for (Blk blk : all_blocks) {
    auto& v = psi.block(blk);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(dec.x_of(blk, j));
  }
  return psi;
}

}  // namespace

TEST_CASE("decomposition geometry and node bookkeeping", "[grid]") {
  Decomposition dec = build_decomposition(1.0, 16, 0.25, 0.75);

  CHECK(dec.N() == 16);
  CHECK_THAT(dec.h(), WithinAbs(1.0 / 16.0, 1e-15));
  CHECK(dec.node_a() == 4);
  CHECK(dec.node_b() == 12);
  CHECK_THAT(dec.a(), WithinAbs(0.25, 1e-15));
  CHECK_THAT(dec.b(), WithinAbs(0.75, 1e-15));

  // Hard-wall nodes 0 and N carry no degrees of freedom; the interface nodes
  // appear once per adjacent block.
  CHECK(dec.block_size(Blk::left) == 4);    // nodes 1..4
  CHECK(dec.block_size(Blk::omega1) == 9);  // nodes 4..12
  CHECK(dec.block_size(Blk::right) == 4);   // nodes 12..15

  CHECK(dec.node_of(Blk::left, 0) == 1);
  CHECK(dec.node_of(Blk::left, 3) == 4);
  CHECK(dec.node_of(Blk::omega1, 0) == 4);
  CHECK(dec.node_of(Blk::omega1, 8) == 12);
  CHECK(dec.node_of(Blk::right, 0) == 12);
  CHECK(dec.node_of(Blk::right, 3) == 15);

  CHECK_THAT(dec.x_of(Blk::omega1, 0), WithinAbs(0.25, 1e-15));
  CHECK_THAT(dec.x_of(Blk::right, 3), WithinAbs(15.0 / 16.0, 1e-15));

  // Interface copies are exactly the four duplicated nodes.
  CHECK(dec.is_interface_copy(Blk::left, 3));
  CHECK(dec.is_interface_copy(Blk::omega1, 0));
  CHECK(dec.is_interface_copy(Blk::omega1, 8));
  CHECK(dec.is_interface_copy(Blk::right, 0));
  CHECK_FALSE(dec.is_interface_copy(Blk::left, 0));
  CHECK_FALSE(dec.is_interface_copy(Blk::omega1, 4));
}

TEST_CASE("quadrature weights sum to L - h", "[grid]") {
  // Duplicated interface nodes get half weight each, so the total mass is the
  // same as for the plain grid on nodes 1..N-1.
  Decomposition dec = build_decomposition(2.0, 40, 0.5, 1.5);
  double total = 0.0;
  int halves = 0;
  for (Blk blk : all_blocks) {
    for (std::size_t j = 0; j < dec.block_size(blk); ++j) {
      total += dec.weight(blk, j);
      if (dec.is_interface_copy(blk, j)) {
        CHECK_THAT(dec.weight(blk, j), WithinAbs(dec.h() / 2.0, 1e-15));
        ++halves;
      } else {
        CHECK_THAT(dec.weight(blk, j), WithinAbs(dec.h(), 1e-15));
      }
    }
  }
  CHECK(halves == 4);
  CHECK_THAT(total, WithinAbs(2.0 - dec.h(), 1e-12));
}

TEST_CASE("interface points must land on grid nodes", "[grid]") {
  CHECK_NOTHROW(build_decomposition(1.0, 32, 0.25, 0.75));
  CHECK_THROWS_AS(build_decomposition(1.0, 32, 0.24, 0.75), AlignmentError);
  CHECK_THROWS_AS(build_decomposition(1.0, 30, 0.25, 0.75), AlignmentError);
}

TEST_CASE("each subgrid needs at least four nodes", "[grid]") {
  // At N = 8 the outer blocks would hold only two nodes; the one-sided
  // interface stencils need four.
  CHECK_THROWS_AS(build_decomposition(1.0, 8, 0.25, 0.75), ResolutionError);
  CHECK_THROWS_AS(build_decomposition(1.0, 64, 1.0 / 64.0, 0.75),
                  ResolutionError);
  CHECK_NOTHROW(build_decomposition(1.0, 16, 0.25, 0.75));
}

TEST_CASE("degenerate box parameters are rejected", "[grid]") {
  CHECK_THROWS_AS(build_decomposition(-1.0, 16, 0.25, 0.75), SpecError);
  CHECK_THROWS_AS(build_decomposition(1.0, 16, 0.75, 0.25), SpecError);
  CHECK_THROWS_AS(build_decomposition(1.0, 16, 0.0, 0.75), SpecError);
  CHECK_THROWS_AS(build_decomposition(1.0, 16, 0.25, 1.0), SpecError);
}

TEST_CASE("inner product is the weighted dot, conjugate in the first slot",
          "[grid]") {
  Decomposition dec = build_decomposition(1.0, 16, 0.25, 0.75);
  WaveFunction ones = sample(dec, [](double) { return 1.0; });

  // <1,1> is the total weight.
  Complex s = inner_product(ones, ones);
  CHECK_THAT(s.real(), WithinAbs(1.0 - dec.h(), 1e-13));
  CHECK_THAT(s.imag(), WithinAbs(0.0, 1e-15));

  WaveFunction scaled = ones;
  for (Blk blk : all_blocks)
    for (auto& v : scaled.block(blk)) v *= Complex(0.0, 1.0);
  Complex t = inner_product(scaled, ones);
  // Conjugate-linear first argument: <i psi, psi> = -i <psi, psi>.
  CHECK_THAT(t.imag(), WithinAbs(-s.real(), 1e-13));
  CHECK_THAT(t.real(), WithinAbs(0.0, 1e-15));

  CHECK_THAT(norm(ones), WithinAbs(std::sqrt(1.0 - dec.h()), 1e-13));
}

TEST_CASE("projections onto the regions are orthogonal and complete",
          "[grid]") {
  Decomposition dec = build_decomposition(1.0, 32, 0.25, 0.75);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  WaveFunction psi = sample(dec, [&](double) { return Complex(u(rng), u(rng)); });

  WaveFunction p1 = project_omega(psi, 1);
  WaveFunction p2 = project_omega(psi, 2);

  double total = norm(psi) * norm(psi);
  double n1sq = norm(p1) * norm(p1);
  double n2sq = norm(p2) * norm(p2);
  CHECK_THAT(n1sq + n2sq, WithinAbs(total, 1e-12));
  Complex cross = inner_product(p1, p2);
  CHECK_THAT(std::abs(cross), WithinAbs(0.0, 1e-15));

  // P1 keeps the inner block verbatim and clears the rest.
  for (std::size_t j = 0; j < dec.block_size(Blk::omega1); ++j)
    CHECK(p1.omega1[j] == psi.omega1[j]);
  for (std::size_t j = 0; j < dec.block_size(Blk::left); ++j)
    CHECK(p1.left[j] == Complex(0.0, 0.0));

  CHECK_THROWS_AS(project_omega(psi, 3), SpecError);
}

TEST_CASE("glue and split are inverse on conforming data", "[grid]") {
  Decomposition dec = build_decomposition(1.0, 16, 0.25, 0.75);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  std::vector<Complex> global(dec.N() - 1);
  for (auto& v : global) v = Complex(u(rng), u(rng));

  WaveFunction psi = split(global, dec);
  // Both copies of each interface node carry the global value.
  CHECK(psi.left.back() == global[dec.node_a() - 1]);
  CHECK(psi.omega1.front() == global[dec.node_a() - 1]);
  CHECK(psi.omega1.back() == global[dec.node_b() - 1]);
  CHECK(psi.right.front() == global[dec.node_b() - 1]);

  std::vector<Complex> back = glue(psi);
  REQUIRE(back.size() == global.size());
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == global[i]);

  // A mismatch between the two copies is not a conforming state.
  psi.omega1.front() += 0.5;
  CHECK_THROWS_AS(glue(psi), SpecError);
}

TEST_CASE("wavefunctions from different grids do not mix", "[grid]") {
  Decomposition d1 = build_decomposition(1.0, 16, 0.25, 0.75);
  Decomposition d2 = build_decomposition(1.0, 32, 0.25, 0.75);
  WaveFunction a = WaveFunction::zeros(d1);
  WaveFunction b = WaveFunction::zeros(d2);
  CHECK_THROWS_AS(inner_product(a, b), ShapeError);
}
