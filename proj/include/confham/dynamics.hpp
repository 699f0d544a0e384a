#pragma once
// Crank-Nicolson time stepping for the assembled operator.
//
// One step solves  (W + i dt/2 K) psi' = (W - i dt/2 K) psi  with K = W A.
// The step operator is a Cayley transform of the W-Hermitian K, so the
// weighted norm and the energy <psi, K psi> are conserved exactly (up to the
// linear solve), and separating interface conditions keep the two regions
// decoupled step by step because both factors inherit the block structure.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "confham/assembly.hpp"
#include "confham/errors.hpp"
#include "confham/grid.hpp"
#include "confham/lapack.hpp"

namespace confham {

/// Weighted norm of a dof vector.
inline double w_norm(const HamiltonianMatrix& H, const std::vector<Complex>& v) {
  if (v.size() != H.size()) throw ShapeError("w_norm: length mismatch");
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += H.dofs()[i].w * std::norm(v[i]);
  return std::sqrt(s);
}

/// Probability mass carried by the inner region's dofs (shared interface
/// nodes count as inner), relative to the total.
inline double probability_omega1(const HamiltonianMatrix& H,
                                 const std::vector<Complex>& v) {
  if (v.size() != H.size()) throw ShapeError("probability: length mismatch");
  double inner = 0, total = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double m = H.dofs()[i].w * std::norm(v[i]);
    total += m;
    if (H.dofs()[i].in_omega1) inner += m;
  }
  if (total == 0) throw SpecError("probability: zero state");
  return inner / total;
}

/// Energy expectation <psi, K psi> (real part; the imaginary part vanishes
/// for Hermitian K and is dropped).
inline double energy_expectation(const HamiltonianMatrix& H,
                                 const std::vector<Complex>& v) {
  const std::vector<Complex> av = H.apply(v);
  Complex s = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += std::conj(v[i]) * H.dofs()[i].w * av[i];
  return s.real();
}

/// Gaussian packet exp(-(x-x0)^2 / (2 sigma^2)) exp(i k0 x) supported on the
/// inner block only, W-normalized.
inline WaveFunction gaussian_packet(const Decomposition& dec, double x0,
                                    double sigma, double k0) {
  if (!(sigma > 0)) throw SpecError("gaussian packet: sigma must be positive");
  WaveFunction psi = WaveFunction::zeros(dec);
  for (std::size_t j = 0; j < dec.block_size(Blk::omega1); ++j) {
    const double x = dec.x_of(Blk::omega1, j);
    const double env = std::exp(-0.5 * (x - x0) * (x - x0) / (sigma * sigma));
    psi.omega1[j] = env * Complex(std::cos(k0 * x), std::sin(k0 * x));
  }
  const double n = norm(psi);
  if (!(n > 1e-300)) throw SpecError("gaussian packet: vanishing norm");
  for (auto& v : psi.omega1) v /= n;
  return psi;
}

/// Factored Crank-Nicolson stepper; build once, step many times.
class CrankNicolsonStepper {
 public:
  CrankNicolsonStepper(const HamiltonianMatrix& H, double dt)
      : n_(static_cast<lapack_int>(H.size())), dt_(dt) {
    if (!(dt > 0) || !std::isfinite(dt))
      throw SpecError("crank-nicolson: dt must be positive");
    const std::size_t n = H.size();
    const Complex itheta(0.0, 0.5 * dt);
    const auto& dofs = H.dofs();

    plus_d_.resize(n);
    plus_dl_.resize(n > 0 ? n - 1 : 0);
    plus_du_.resize(n > 0 ? n - 1 : 0);
    minus_d_.resize(n);
    minus_dl_.resize(n > 0 ? n - 1 : 0);
    minus_du_.resize(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex k = dofs[i].w * H.diag()[i];
      plus_d_[i] = dofs[i].w + itheta * k;
      minus_d_[i] = dofs[i].w - itheta * k;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const Complex k_up = dofs[i].w * H.super()[i];
      const Complex k_dn = dofs[i + 1].w * H.sub()[i];
      plus_du_[i] = itheta * k_up;
      plus_dl_[i] = itheta * k_dn;
      minus_du_[i] = -itheta * k_up;
      minus_dl_[i] = -itheta * k_dn;
    }

    du2_.resize(n > 1 ? n - 2 : 0);
    ipiv_.resize(n);
    lapack_int info = LAPACKE_zgttrf(n_, plus_dl_.data(), plus_d_.data(),
                                     plus_du_.data(), du2_.data(), ipiv_.data());
    if (info != 0)
      throw SolverError("zgttrf failed, info = " + std::to_string(info));
  }

  double dt() const { return dt_; }

  /// Advances psi by one step in place.
  void step(std::vector<Complex>& psi) const {
    if (psi.size() != static_cast<std::size_t>(n_))
      throw ShapeError("crank-nicolson: state length mismatch");
    const std::size_t n = psi.size();
    std::vector<Complex> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc = minus_d_[i] * psi[i];
      if (i > 0) acc += minus_dl_[i - 1] * psi[i - 1];
      if (i + 1 < n) acc += minus_du_[i] * psi[i + 1];
      rhs[i] = acc;
    }
    lapack_int info = LAPACKE_zgttrs(LAPACK_COL_MAJOR, 'N', n_, 1, plus_dl_.data(),
                                     plus_d_.data(), plus_du_.data(), du2_.data(),
                                     ipiv_.data(), rhs.data(), n_);
    if (info != 0)
      throw SolverError("zgttrs failed, info = " + std::to_string(info));
    psi = std::move(rhs);
  }

 private:
  lapack_int n_;
  double dt_;
  // factored W + i dt/2 K, and the multiplicative W - i dt/2 K
  std::vector<Complex> plus_dl_, plus_d_, plus_du_, du2_;
  std::vector<Complex> minus_dl_, minus_d_, minus_du_;
  std::vector<lapack_int> ipiv_;
};

/// Per-step observables of an evolution, including the initial instant.
struct Trajectory {
  std::vector<double> t;
  std::vector<double> norm_w;       // weighted norm
  std::vector<double> prob_omega1;  // inner-region probability fraction
  std::vector<double> energy;       // <psi, K psi>
};

struct EvolveResult {
  Trajectory trajectory;
  std::vector<Complex> final_state;  // dof vector after the last step
};

inline EvolveResult crank_nicolson_evolve(const HamiltonianMatrix& H,
                                          std::vector<Complex> psi, double dt,
                                          int steps) {
  if (steps < 0) throw SpecError("crank-nicolson: negative step count");
  CrankNicolsonStepper stepper(H, dt);
  EvolveResult out;
  auto record = [&](int k) {
    out.trajectory.t.push_back(k * dt);
    out.trajectory.norm_w.push_back(w_norm(H, psi));
    out.trajectory.prob_omega1.push_back(probability_omega1(H, psi));
    out.trajectory.energy.push_back(energy_expectation(H, psi));
  };
  record(0);
  for (int k = 1; k <= steps; ++k) {
    stepper.step(psi);
    record(k);
  }
  out.final_state = std::move(psi);
  return out;
}

inline EvolveResult crank_nicolson_evolve(const HamiltonianMatrix& H,
                                          const WaveFunction& psi0, double dt,
                                          int steps) {
  return crank_nicolson_evolve(H, H.to_dofs(psi0), dt, steps);
}

}  // namespace confham
