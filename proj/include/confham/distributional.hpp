#pragma once

// Distributional action of the kinetic operator on discontinuous grid
// functions, and the singular boundary potentials that cancel the interface
// terms for states satisfying the boundary conditions.
//
// Acting with -d2/dx2 + V across an interface produces, besides the regular
// blockwise part, a delta term weighted by the derivative jump j1 and a
// dipole term (derivative of a delta, oriented along n) weighted by the value
// jump j0. A boundary potential is a distribution supported on the interface
// whose delta/dipole weights are themselves trace functionals of the state;
// adding it to the kinetic part yields a total whose singular weights vanish
// exactly on the states belonging to the chosen boundary condition.

#include <algorithm>
#include <array>
#include <cmath>

#include "confham/potential.hpp"
#include "confham/traces.hpp"

namespace confham {

/// Regular grid part plus delta and dipole weights at the two interface
/// points. `dipole[p]` multiplies d/dx of a delta oriented along n.
struct SingularFunction {
  WaveFunction regular;
  std::array<Complex, 2> delta{};   // indexed by GammaPoint
  std::array<Complex, 2> dipole{};  // indexed by GammaPoint
  double scale = 0;  // reference magnitude for tolerance decisions

  double singular_magnitude() const {
    double m = 0;
    for (std::size_t p = 0; p < 2; ++p)
      m = std::max({m, std::abs(delta[p]), std::abs(dipole[p])});
    return m;
  }

  /// True when every singular weight is negligible against tol * scale.
  bool is_regular(double tol = 1e-10) const {
    return singular_magnitude() <= tol * scale;
  }
};

namespace detail {

inline double tolerance_scale(const WaveFunction& psi,
                              const WaveFunction& regular) {
  return sup_norm(psi) + psi.dec.h() * sup_norm(regular);
}

inline SingularFunction combine(SingularFunction lhs,
                                const SingularFunction& rhs) {
  for (Blk blk : all_blocks) {
    auto& dst = lhs.regular.block(blk);
    const auto& src = rhs.regular.block(blk);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  for (std::size_t p = 0; p < 2; ++p) {
    lhs.delta[p] += rhs.delta[p];
    lhs.dipole[p] += rhs.dipole[p];
  }
  lhs.scale = std::max(lhs.scale, rhs.scale);
  return lhs;
}

}  // namespace detail

/// Blockwise action of -d2/dx2 + V, never reading across an interface.
/// Interior nodes use the centered 3-point stencil; each block's end nodes
/// use the one-sided 4-point stencil -(2 v0 - 5 v1 + 4 v2 - v3) / h^2
/// (indices running inward), which is exact through cubics.
inline WaveFunction apply_maximal(const WaveFunction& psi, const Potential& V) {
  const Decomposition& dec = psi.dec;
  const double inv_h2 = 1.0 / (dec.h() * dec.h());
  WaveFunction out = WaveFunction::zeros(dec);
  for (Blk blk : all_blocks) {
    const auto& v = psi.block(blk);
    const auto& pot = V.block(blk);
    auto& dst = out.block(blk);
    const std::size_t m = v.size();
    if (m < 4) throw ResolutionError("apply_maximal: block has fewer than 4 nodes");
    for (std::size_t i = 1; i + 1 < m; ++i)
      dst[i] = (-v[i - 1] + 2.0 * v[i] - v[i + 1]) * inv_h2 + pot[i] * v[i];
    dst[0] = -(2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) * inv_h2 +
             pot[0] * v[0];
    dst[m - 1] =
        -(2.0 * v[m - 1] - 5.0 * v[m - 2] + 4.0 * v[m - 3] - v[m - 4]) *
            inv_h2 +
        pot[m - 1] * v[m - 1];
  }
  return out;
}

/// Full distributional action of the free box operator on a possibly jumping
/// state: regular blockwise part, delta weight j1, dipole weight j0.
inline SingularFunction apply_h0_distributional(const WaveFunction& psi,
                                                const Potential& V) {
  SingularFunction out{apply_maximal(psi, V), {}, {}, 0};
  const InterfaceData traces = interface_functionals(psi);
  for (GammaPoint p : both_points) {
    out.delta[index_of(p)] = traces[p].j1();
    out.dipole[index_of(p)] = traces[p].j0();
  }
  out.scale = detail::tolerance_scale(psi, out.regular);
  return out;
}

/// Per-side scalar trace functional used by the general boundary potential:
/// F psi = c_value * gamma0 + c_deriv * gamma1 of the owning side.
struct TraceFunctional {
  double c_value = 0;
  double c_deriv = 0;

  Complex operator()(Complex g0, Complex g1) const {
    return c_value * g0 + c_deriv * g1;
  }
};

/// Which singular boundary potential to attach at the interface.
struct BoundaryPotentialSpec {
  enum class Kind { dirichlet, neumann, robin, general };

  struct General {
    std::array<TraceFunctional, 2> F1;  // side 1, indexed by GammaPoint
    std::array<TraceFunctional, 2> F2;  // side 2
    double c1 = 1;
    double c2 = 1;
  };

  Kind kind = Kind::dirichlet;
  RobinData robin{};
  General general{};

  static BoundaryPotentialSpec dirichlet() { return {}; }
  static BoundaryPotentialSpec neumann() { return {Kind::neumann, {}, {}}; }
  static BoundaryPotentialSpec robin_bc(const RobinData& data) {
    return {Kind::robin, data, {}};
  }
  static BoundaryPotentialSpec general_bc(const General& g) {
    if (g.c1 == 0 || g.c2 == 0)
      throw SpecError("general boundary potential needs c1 * c2 != 0");
    return {Kind::general, {}, g};
  }
};

/// Singular boundary potential B applied to psi. B is supported on the
/// interface only, so the regular part is zero; the delta/dipole weights are
/// chosen so that the full operator becomes regular exactly on states
/// satisfying the requested boundary condition.
inline SingularFunction boundary_potential(const WaveFunction& psi,
                                           const BoundaryPotentialSpec& spec) {
  SingularFunction out{WaveFunction::zeros(psi.dec), {}, {}, 0};
  const InterfaceData traces = interface_functionals(psi);
  for (GammaPoint p : both_points) {
    const PointTraces& t = traces[p];
    const std::size_t ip = index_of(p);
    switch (spec.kind) {
      case BoundaryPotentialSpec::Kind::dirichlet:
        out.delta[ip] = t.mu0() - t.j1();
        out.dipole[ip] = Complex{};
        break;
      case BoundaryPotentialSpec::Kind::neumann:
        out.delta[ip] = Complex{};
        out.dipole[ip] = t.mu1() - t.j0();
        break;
      case BoundaryPotentialSpec::Kind::robin: {
        const double f1 = spec.robin.f1[ip];
        const double f2 = spec.robin.f2[ip];
        out.delta[ip] = -t.j0f(f1, f2);
        out.dipole[ip] = t.mu1() - t.mu0f(f1, f2) - t.j0();
        break;
      }
      case BoundaryPotentialSpec::Kind::general: {
        const auto& g = spec.general;
        const Complex F1psi = g.F1[ip](t.g0_1, t.g1_1);
        const Complex F2psi = g.F2[ip](t.g0_2, t.g1_2);
        out.delta[ip] = g.c1 * (F1psi + F2psi) - t.j1();
        out.dipole[ip] = g.c2 * (F1psi - F2psi) - t.j0();
        break;
      }
    }
  }
  out.scale = detail::tolerance_scale(psi, out.regular);
  return out;
}

/// Distributional action of the full operator -d2/dx2 + V + B.
inline SingularFunction apply_full(const WaveFunction& psi, const Potential& V,
                                   const BoundaryPotentialSpec& spec) {
  return detail::combine(apply_h0_distributional(psi, V),
                         boundary_potential(psi, spec));
}

/// Domain membership verdict with the worst offending interface point.
struct DomainCheck {
  bool in_domain = false;
  double defect = 0;     // largest singular weight of the full action
  double threshold = 0;  // tol * scale actually used
  GammaPoint worst = GammaPoint::a;
  std::array<Complex, 2> delta{}, dipole{};

  explicit operator bool() const { return in_domain; }
};

/// A state belongs to the discrete operator domain exactly when the full
/// action has no singular part left.
inline DomainCheck in_domain(const WaveFunction& psi, const Potential& V,
                             const BoundaryPotentialSpec& spec,
                             double tol = 1e-10) {
  const SingularFunction full = apply_full(psi, V, spec);
  DomainCheck check;
  check.delta = full.delta;
  check.dipole = full.dipole;
  for (std::size_t p = 0; p < 2; ++p) {
    const double mag =
        std::max(std::abs(full.delta[p]), std::abs(full.dipole[p]));
    if (mag >= check.defect) {
      check.defect = mag;
      check.worst = static_cast<GammaPoint>(p);
    }
  }
  check.threshold = tol * full.scale;
  check.in_domain = check.defect <= check.threshold;
  return check;
}

}  // namespace confham
