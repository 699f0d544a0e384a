// Crank-Nicolson evolution: exact conservation laws of the Cayley transform,
// the analytic phase of an eigenstate, reversibility, and confinement versus
// leakage through the interface.

#include <cmath>
#include <complex>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "confham/assembly.hpp"
#include "confham/dynamics.hpp"
#include "confham/spectral.hpp"

using namespace confham;

namespace {

Complex w_dot(const HamiltonianMatrix& H, const std::vector<Complex>& u,
              const std::vector<Complex>& v) {
  Complex s = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    s += H.dofs()[i].w * std::conj(u[i]) * v[i];
  return s;
}

}  // namespace

TEST_CASE("norm and energy are conserved through a transparent interface",
          "[dynamics]") {
  const Decomposition dec = build_decomposition(2.0, 400, 0.5, 1.5);
  const Potential V = evaluate_potential(dec, PotentialSpec::zero());
  const CouplingSpec coupling{PointCoupling::transparent(),
                              PointCoupling::transparent()};
  const HamiltonianMatrix H = assemble_coupled(dec, V, coupling);

  const WaveFunction psi0 = gaussian_packet(dec, 1.0, 0.1, 15.0);
  const EvolveResult res = crank_nicolson_evolve(H, psi0, 1e-4, 200);

  const Trajectory& tr = res.trajectory;
  REQUIRE(tr.t.size() == 201);
  const double n0 = tr.norm_w[0];
  const double e0 = tr.energy[0];
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    INFO("step " << k);
    CHECK(std::abs(tr.norm_w[k] - n0) < 1e-12);
    CHECK(std::abs(tr.energy[k] - e0) < 1e-9 * std::abs(e0));
  }
  // the packet does move
  CHECK(std::abs(tr.prob_omega1.back() - tr.prob_omega1.front()) > 1e-6);
}

TEST_CASE("an eigenstate acquires exactly the Cayley phase", "[dynamics]") {
  const Decomposition dec = build_decomposition(1.0, 200, 0.25, 0.75);
  const Potential V = evaluate_potential(dec, PotentialSpec::zero());
  const auto bcs = SeparatedBcs::uniform(BoundaryCondition::dirichlet());
  const HamiltonianMatrix H = assemble_separating(dec, V, bcs);

  const EigenResult eig = eigensolve(H, 1);
  const double lambda = eig.values[0];
  const double dt = 1e-3;
  const int steps = 100;
  const EvolveResult res = crank_nicolson_evolve(H, eig.vectors[0], dt, steps);

  // separating conditions: the state never touches the outer blocks
  for (double p : res.trajectory.prob_omega1) CHECK(p >= 1.0 - 1e-12);

  // one step multiplies the mode by (1 - i theta lambda) / (1 + i theta lambda)
  const double phase = -2.0 * steps * std::atan(0.5 * dt * lambda);
  const Complex expected = std::polar(1.0, phase);
  const Complex overlap = w_dot(H, eig.vectors[0], res.final_state);
  CHECK(std::abs(overlap - expected) < 1e-8);
}

TEST_CASE("conjugation reverses the evolution", "[dynamics]") {
  const Decomposition dec = build_decomposition(2.0, 300, 0.5, 1.5);
  const Potential V = evaluate_potential(dec, PotentialSpec::harmonic(3.0, 1.0));
  const CouplingSpec coupling{PointCoupling::delta(1.0),
                              PointCoupling::delta(1.0)};
  const HamiltonianMatrix H = assemble_coupled(dec, V, coupling);

  const std::vector<Complex> psi0 =
      H.to_dofs(gaussian_packet(dec, 1.2, 0.08, 10.0));
  const int steps = 100;
  const double dt = 1e-4;

  std::vector<Complex> fwd =
      crank_nicolson_evolve(H, psi0, dt, steps).final_state;
  for (auto& z : fwd) z = std::conj(z);  // time reversal for real K
  std::vector<Complex> back =
      crank_nicolson_evolve(H, std::move(fwd), dt, steps).final_state;

  double err2 = 0;
  for (std::size_t i = 0; i < psi0.size(); ++i)
    err2 += H.dofs()[i].w * std::norm(std::conj(back[i]) - psi0[i]);
  CHECK(std::sqrt(err2) < 1e-9);
}

TEST_CASE("separating walls confine what a transparent interface lets out",
          "[dynamics]") {
  const Decomposition dec = build_decomposition(2.0, 500, 0.5, 1.5);
  const Potential V = evaluate_potential(dec, PotentialSpec::zero());
  const WaveFunction packet = gaussian_packet(dec, 1.3, 0.05, 20.0);
  const double dt = 1e-5;
  const int steps = 400;

  const auto bcs = SeparatedBcs::uniform(BoundaryCondition::dirichlet());
  const Trajectory sep =
      crank_nicolson_evolve(assemble_separating(dec, V, bcs), packet, dt, steps)
          .trajectory;
  for (double p : sep.prob_omega1)
    CHECK(std::abs(p - sep.prob_omega1[0]) < 1e-12);

  const CouplingSpec open{PointCoupling::transparent(),
                          PointCoupling::transparent()};
  const Trajectory leak =
      crank_nicolson_evolve(assemble_coupled(dec, V, open), packet, dt, steps)
          .trajectory;
  CHECK(leak.prob_omega1.front() - leak.prob_omega1.back() > 1e-3);
}

TEST_CASE("stepper input validation", "[dynamics]") {
  const Decomposition dec = build_decomposition(1.0, 32, 0.25, 0.75);
  const Potential V = evaluate_potential(dec, PotentialSpec::zero());
  const auto bcs = SeparatedBcs::uniform(BoundaryCondition::dirichlet());
  const HamiltonianMatrix H = assemble_separating(dec, V, bcs);

  CHECK_THROWS_AS(CrankNicolsonStepper(H, 0.0), SpecError);
  CHECK_THROWS_AS(CrankNicolsonStepper(H, -1e-3), SpecError);

  CrankNicolsonStepper stepper(H, 1e-3);
  std::vector<Complex> wrong(H.size() + 1);
  CHECK_THROWS_AS(stepper.step(wrong), ShapeError);

  std::vector<Complex> psi(H.size(), Complex(1.0, 0.0));
  CHECK_THROWS_AS(crank_nicolson_evolve(H, psi, 1e-3, -1), SpecError);
  CHECK_THROWS_AS(gaussian_packet(dec, 0.5, 0.0, 1.0), SpecError);
}
