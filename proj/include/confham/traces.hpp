#pragma once

// One-sided boundary values and normal derivatives at the interface points,
// plus the jump/mean functionals built from them.
//
// Orientation conventions, used consistently everywhere:
//   * side 1 is the inner interval [a, b], side 2 the outer region;
//   * n(x) is the outward unit normal of the inner interval, so n(a) = -1,
//     n(b) = +1, and the outer region sees the opposite sign;
//   * gamma0 is the one-sided boundary value, gamma1 the *outward* normal
//     derivative of the owning side (n_k times d/dx).
//
// With opposite normals the natural combinations are
//   j0  = gamma0_1 - gamma0_2          (value jump)
//   j1  = gamma1_1 + gamma1_2          (derivative jump, normals opposite)
//   mu0 = (gamma0_1 + gamma0_2) / 2    (value mean)
//   mu1 = (gamma1_1 - gamma1_2) / 2    (derivative mean, oriented by n)
// and the Robin-weighted variants j0f, mu0f defined below.

#include <array>

#include "confham/grid.hpp"

namespace confham {

enum class GammaPoint : int { a = 0, b = 1 };
enum class Side : int { omega1 = 1, omega2 = 2 };

constexpr std::array<GammaPoint, 2> both_points{GammaPoint::a, GammaPoint::b};

constexpr std::size_t index_of(GammaPoint p) {
  return static_cast<std::size_t>(p);
}

/// Outward normal of the side's own region at an interface point.
inline double normal_sign(GammaPoint p, Side s) {
  const double n1 = (p == GammaPoint::a) ? -1.0 : 1.0;
  return (s == Side::omega1) ? n1 : -n1;
}

namespace detail {

struct TraceStencil {
  Blk blk;        // block owning this side of the point
  std::size_t j;  // local index of the interface node
  int d;          // +1 when inward means increasing local index
};

inline TraceStencil trace_stencil(const Decomposition& dec, GammaPoint p,
                                  Side s) {
  const std::size_t n1 = dec.block_size(Blk::omega1);
  if (p == GammaPoint::a) {
    if (s == Side::omega1) return {Blk::omega1, 0, +1};
    return {Blk::left, dec.block_size(Blk::left) - 1, -1};
  }
  if (s == Side::omega1) return {Blk::omega1, n1 - 1, -1};
  return {Blk::right, 0, +1};
}

}  // namespace detail

/// Boundary value of the chosen side's copy at an interface point.
inline Complex trace_value(const WaveFunction& psi, GammaPoint p, Side s) {
  const auto st = detail::trace_stencil(psi.dec, p, s);
  return psi.block(st.blk)[st.j];
}

/// Outward normal derivative of the chosen side, second-order one-sided:
/// n * (-3 psi_0 + 4 psi_1 - psi_2) / (2 h s), where psi_1, psi_2 are the
/// next nodes inward and s = +1 iff inward is increasing x.
inline Complex trace_normal_derivative(const WaveFunction& psi, GammaPoint p,
                                       Side s) {
  const Decomposition& dec = psi.dec;
  const auto st = detail::trace_stencil(dec, p, s);
  const auto& v = psi.block(st.blk);
  const std::size_t j = st.j;
  const Complex slope =
      (-3.0 * v[j] + 4.0 * v[j + st.d] - v[j + 2 * st.d]) /
      (2.0 * dec.h() * st.d);
  return normal_sign(p, s) * slope;
}

/// Robin coefficients, one per interface point and side.
struct RobinData {
  std::array<double, 2> f1{0.0, 0.0};  // side 1, indexed by GammaPoint
  std::array<double, 2> f2{0.0, 0.0};  // side 2

  static RobinData uniform(double f1_all, double f2_all) {
    return {{f1_all, f1_all}, {f2_all, f2_all}};
  }
};

/// Both one-sided traces at one interface point and the derived functionals.
struct PointTraces {
  Complex g0_1, g0_2;  // boundary values, side 1 and 2
  Complex g1_1, g1_2;  // outward normal derivatives

  Complex j0() const { return g0_1 - g0_2; }
  Complex j1() const { return g1_1 + g1_2; }
  Complex mu0() const { return 0.5 * (g0_1 + g0_2); }
  Complex mu1() const { return 0.5 * (g1_1 - g1_2); }
  Complex j0f(double f1, double f2) const { return f1 * g0_1 + f2 * g0_2; }
  Complex mu0f(double f1, double f2) const {
    return 0.5 * (f1 * g0_1 - f2 * g0_2);
  }
};

struct InterfaceData {
  std::array<PointTraces, 2> at;  // indexed by GammaPoint

  const PointTraces& operator[](GammaPoint p) const { return at[index_of(p)]; }
  PointTraces& operator[](GammaPoint p) { return at[index_of(p)]; }
};

/// Evaluates all eight one-sided traces of psi.
inline InterfaceData interface_functionals(const WaveFunction& psi) {
  InterfaceData data{};
  for (GammaPoint p : both_points) {
    PointTraces& t = data[p];
    t.g0_1 = trace_value(psi, p, Side::omega1);
    t.g0_2 = trace_value(psi, p, Side::omega2);
    t.g1_1 = trace_normal_derivative(psi, p, Side::omega1);
    t.g1_2 = trace_normal_derivative(psi, p, Side::omega2);
  }
  return data;
}

}  // namespace confham
