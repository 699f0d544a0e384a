#pragma once
// State builders used by the verification routines.
//
// domain_sample draws random states that lie exactly in the domain of a
// separated-condition operator: block interiors are random, but near every
// block end the state follows a quadratic whose coefficients satisfy the end
// condition. All end stencils (one-sided traces, ghost rows, wall rows with
// the implicit zero) reproduce quadratics exactly, so membership holds at
// rounding level rather than at discretization order.
//
// cubic_trace_state solves, per block, for the cubic whose *discrete* trace
// readouts hit prescribed values, which makes the interface trace map
// surjective by construction.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstddef>
#include <random>

#include "confham/assembly.hpp"
#include "confham/grid.hpp"
#include "confham/traces.hpp"

namespace confham {

namespace detail {

inline Complex random_unit_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double re = u(rng);
  const double im = u(rng);
  return {re, im};
}

/// Quadratic q(s) = g + p s + c s^2 in the inward coordinate s >= 0 from a
/// block end, with (g, p) tied by the end condition. The outward normal
/// derivative is -p.
struct EndQuadratic {
  Complex g, p, c;

  static EndQuadratic for_bc(const BoundaryCondition& bc, std::mt19937_64& rng) {
    EndQuadratic q{random_unit_box(rng), random_unit_box(rng),
                   random_unit_box(rng)};
    switch (bc.kind) {
      case BoundaryCondition::Kind::dirichlet:
        q.g = 0;
        break;
      case BoundaryCondition::Kind::neumann:
        q.p = 0;
        break;
      case BoundaryCondition::Kind::robin:
        q.p = -bc.f * q.g;
        break;
    }
    return q;
  }

  Complex at(double s) const { return g + p * s + c * s * s; }
};

/// Row (r0, r1, r2) of the homogeneous constraint  r . (c0, c1, c2) = 0  for
/// a global quadratic c0 + c1 x + c2 x^2 at position x with outward direction
/// sign out (bc relates out * q'(x) to q(x)).
inline std::array<double, 3> quadratic_constraint(const BoundaryCondition& bc,
                                                  double x, double out) {
  switch (bc.kind) {
    case BoundaryCondition::Kind::dirichlet:
      return {1.0, x, x * x};
    case BoundaryCondition::Kind::neumann:
      return {0.0, out, 2.0 * out * x};
    default:  // robin: out * q'(x) - f q(x) = 0
      return {-bc.f, out - bc.f * x, 2.0 * out * x - bc.f * x * x};
  }
}

/// Any nonzero vector orthogonal to both rows (cross product, with a fallback
/// when the rows are parallel).
inline std::array<double, 3> kernel_vector(const std::array<double, 3>& r1,
                                           const std::array<double, 3>& r2) {
  std::array<double, 3> k{r1[1] * r2[2] - r1[2] * r2[1],
                          r1[2] * r2[0] - r1[0] * r2[2],
                          r1[0] * r2[1] - r1[1] * r2[0]};
  double mag = std::abs(k[0]) + std::abs(k[1]) + std::abs(k[2]);
  if (mag > 1e-12) return k;
  // parallel rows: one independent constraint, pick an orthogonal direction
  std::array<double, 3> k1{-r1[1], r1[0], 0.0};
  std::array<double, 3> k2{-r1[2], 0.0, r1[0]};
  double m1 = std::abs(k1[0]) + std::abs(k1[1]);
  double m2 = std::abs(k2[0]) + std::abs(k2[2]);
  if (m1 + m2 < 1e-12) return {0.0, r1[2], -r1[1]};
  return m1 >= m2 ? k1 : k2;
}

}  // namespace detail

/// Random state in the domain of the separated-condition operator: random in
/// the block interiors, condition-satisfying quadratic near every block end.
/// Small blocks fall back to a single quadratic satisfying both of their end
/// conditions at once.
inline WaveFunction domain_sample(const Decomposition& dec,
                                  const SeparatedBcs& bcs,
                                  std::mt19937_64& rng) {
  WaveFunction psi = WaveFunction::zeros(dec);
  const double h = dec.h();

  // end metadata per block: interface point/side of each non-wall end
  struct End {
    bool wall;
    GammaPoint p;
    Side s;
  };
  auto ends_of = [](Blk blk) -> std::array<End, 2> {  // {low-x end, high-x end}
    switch (blk) {
      case Blk::left:
        return {{{true, GammaPoint::a, Side::omega2},
                 {false, GammaPoint::a, Side::omega2}}};
      case Blk::omega1:
        return {{{false, GammaPoint::a, Side::omega1},
                 {false, GammaPoint::b, Side::omega1}}};
      default:
        return {{{false, GammaPoint::b, Side::omega2},
                 {true, GammaPoint::b, Side::omega2}}};
    }
  };

  for (Blk blk : all_blocks) {
    auto& v = psi.block(blk);
    const std::size_t m = v.size();
    const std::array<End, 2> ends = ends_of(blk);

    if (m >= 8) {
      for (std::size_t j = 0; j < m; ++j) v[j] = detail::random_unit_box(rng);
      for (int side = 0; side < 2; ++side) {
        const End& end = ends[static_cast<std::size_t>(side)];
        // local index of the end node and the inward step
        const std::size_t j0 = side == 0 ? 0 : m - 1;
        const int dj = side == 0 ? 1 : -1;
        if (end.wall) {
          // quadratic vanishing at the wall, one h outside the end node
          const Complex p = detail::random_unit_box(rng);
          const Complex c = detail::random_unit_box(rng);
          for (int t = 0; t < 4; ++t) {
            const double s = (t + 1) * h;
            v[j0 + static_cast<std::size_t>(t * dj)] = p * s + c * s * s;
          }
        } else {
          const BoundaryCondition& bc = bcs.at(end.p, end.s);
          const detail::EndQuadratic q = detail::EndQuadratic::for_bc(bc, rng);
          for (int t = 0; t < 4; ++t)
            v[j0 + static_cast<std::size_t>(t * dj)] = q.at(t * h);
        }
      }
    } else {
      // whole-block quadratic in global x satisfying both end constraints
      std::array<std::array<double, 3>, 2> rows;
      for (int side = 0; side < 2; ++side) {
        const End& end = ends[static_cast<std::size_t>(side)];
        const double out = side == 0 ? -1.0 : 1.0;
        if (end.wall) {
          const double xw = side == 0 ? 0.0 : dec.L();
          rows[static_cast<std::size_t>(side)] = {1.0, xw, xw * xw};
        } else {
          const double xp = end.p == GammaPoint::a ? dec.a() : dec.b();
          rows[static_cast<std::size_t>(side)] =
              detail::quadratic_constraint(bcs.at(end.p, end.s), xp, out);
        }
      }
      const std::array<double, 3> k = detail::kernel_vector(rows[0], rows[1]);
      const Complex amp = detail::random_unit_box(rng);
      for (std::size_t j = 0; j < m; ++j) {
        const double x = dec.x_of(blk, j);
        v[j] = amp * (k[0] + k[1] * x + k[2] * x * x);
      }
    }
  }
  return psi;
}

/// Prescribed discrete traces, indexed [interface point][side - 1].
struct TraceTargets {
  std::array<std::array<Complex, 2>, 2> g0{};
  std::array<std::array<Complex, 2>, 2> g1{};
};

/// State whose discrete trace readouts reproduce the targets exactly: each
/// block carries the cubic solving the 4x4 system of its end constraints.
/// Wall ends are pinned by value and slope zero at the wall node.
inline WaveFunction cubic_trace_state(const Decomposition& dec,
                                      const TraceTargets& targets) {
  WaveFunction psi = WaveFunction::zeros(dec);
  const double h = dec.h();

  for (Blk blk : all_blocks) {
    auto& v = psi.block(blk);
    const std::size_t m = v.size();
    const double x_lo = dec.x_of(blk, 0);
    const double x_hi = dec.x_of(blk, m - 1);
    const double xc = 0.5 * (x_lo + x_hi);
    const double half = 0.5 * (x_hi - x_lo);
    auto basis = [&](double x, int k) {
      return std::pow((x - xc) / half, k);
    };

    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    Eigen::Vector4cd rhs = Eigen::Vector4cd::Zero();
    int row = 0;
    auto add_value_row = [&](double x, Complex target) {
      for (int k = 0; k < 4; ++k) M(row, k) = basis(x, k);
      rhs(row) = target;
      ++row;
    };
    auto add_trace_rows = [&](GammaPoint p, Side s) {
      const std::size_t ip = index_of(p);
      const std::size_t is = s == Side::omega1 ? 0 : 1;
      // discrete value readout at the end node
      const int node_e = p == GammaPoint::a ? dec.node_a() : dec.node_b();
      const double xe = p == GammaPoint::a ? dec.a() : dec.b();
      add_value_row(xe, targets.g0[ip][is]);
      // discrete one-sided derivative: n * (-3 v0 + 4 v1 - v2) / (2 h d)
      const std::size_t j0 = dec.node_of(blk, 0) == node_e ? 0 : m - 1;
      const int dj = j0 == 0 ? 1 : -1;
      const double n = normal_sign(p, s);
      const double denom = 2.0 * h * dj;
      const double coef[3] = {-3.0, 4.0, -1.0};
      for (int k = 0; k < 4; ++k) {
        double acc = 0;
        for (int t = 0; t < 3; ++t) {
          const double xt = dec.x_of(blk, j0 + static_cast<std::size_t>(t * dj));
          acc += coef[t] * basis(xt, k);
        }
        M(row, k) = n * acc / denom;
      }
      rhs(row) = targets.g1[ip][is];
      ++row;
    };
    auto add_wall_rows = [&](double xw) {
      add_value_row(xw, Complex{});
      // slope zero at the wall
      for (int k = 0; k < 4; ++k)
        M(row, k) = k == 0 ? 0.0 : k * std::pow((xw - xc) / half, k - 1) / half;
      rhs(row) = Complex{};
      ++row;
    };

    switch (blk) {
      case Blk::left:
        add_wall_rows(0.0);
        add_trace_rows(GammaPoint::a, Side::omega2);
        break;
      case Blk::omega1:
        add_trace_rows(GammaPoint::a, Side::omega1);
        add_trace_rows(GammaPoint::b, Side::omega1);
        break;
      default:
        add_trace_rows(GammaPoint::b, Side::omega2);
        add_wall_rows(dec.L());
        break;
    }

    Eigen::Vector4cd c = M.cast<Complex>().fullPivLu().solve(rhs);
    for (std::size_t j = 0; j < m; ++j) {
      const double x = dec.x_of(blk, j);
      Complex acc = 0;
      for (int k = 0; k < 4; ++k) acc += c(k) * basis(x, k);
      v[j] = acc;
    }
  }
  return psi;
}

}  // namespace confham
