#pragma once
// Deficiency indices of the per-region minimal operators, and the
// separating / transversal classification of interface couplings.
//
// The indices are structural: each free (interface) end of a component
// contributes one dimension to ker(S* -+ i), while hard-wall ends contribute
// none. The computation nevertheless goes through a rank-revealing SVD of the
// rectangular interior-row operator, so a rank anomaly in the assembled
// recurrence would be detected rather than assumed away.

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstddef>
#include <vector>

#include "confham/assembly.hpp"
#include "confham/errors.hpp"
#include "confham/grid.hpp"
#include "confham/potential.hpp"

namespace confham {

/// One component of the decomposition with the character of its two ends.
/// Fixed ends sit against a hard wall (value pinned to zero one node
/// outside); free ends are interface ends with no condition imposed.
struct ComponentSpec {
  Blk blk = Blk::omega1;
  bool fixed_low = false;
  bool fixed_high = false;

  static ComponentSpec inner() { return {Blk::omega1, false, false}; }
  static ComponentSpec outer_left() { return {Blk::left, true, false}; }
  static ComponentSpec outer_right() { return {Blk::right, false, true}; }
};

struct ComponentDeficiency {
  int m_plus = 0;
  int m_minus = 0;
  // localized unit basis vectors of the two null spaces, one per dimension,
  // over the component's nodes
  std::vector<std::vector<Complex>> basis_plus, basis_minus;
};

namespace detail {

/// Null space of the interior-row operator  psi -> -D2 psi + (V - z) psi
/// restricted to the rows that are fully determined by the component's nodes
/// (plus the implicit zero behind fixed ends).
inline std::vector<std::vector<Complex>> interior_row_null_space(
    const Decomposition& dec, const Potential& V, const ComponentSpec& comp,
    Complex z, double tol) {
  const auto& pot = V.block(comp.blk);
  const std::size_t m = dec.block_size(comp.blk);
  if (m < 4) throw ResolutionError("deficiency: component has fewer than 4 nodes");
  const double inv_h2 = 1.0 / (dec.h() * dec.h());

  const std::size_t rows =
      m - 2 + (comp.fixed_low ? 1 : 0) + (comp.fixed_high ? 1 : 0);
  Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows),
                                              static_cast<Eigen::Index>(m));
  Eigen::Index r = 0;
  auto emit = [&](std::size_t j, bool lo_neighbor, bool hi_neighbor) {
    R(r, static_cast<Eigen::Index>(j)) = 2.0 * inv_h2 + pot[j] - z;
    if (lo_neighbor) R(r, static_cast<Eigen::Index>(j - 1)) = -inv_h2;
    if (hi_neighbor) R(r, static_cast<Eigen::Index>(j + 1)) = -inv_h2;
    ++r;
  };
  if (comp.fixed_low) emit(0, false, true);
  for (std::size_t j = 1; j + 1 < m; ++j) emit(j, true, true);
  if (comp.fixed_high) emit(m - 1, true, false);

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(R, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) >= tol * smax) ++rank;

  std::vector<std::vector<Complex>> basis;
  for (Eigen::Index k = rank; k < static_cast<Eigen::Index>(m); ++k) {
    std::vector<Complex> v(m);
    for (std::size_t i = 0; i < m; ++i)
      v[i] = svd.matrixV()(static_cast<Eigen::Index>(i), k);
    basis.push_back(std::move(v));
  }
  return basis;
}

inline void normalize_phase(std::vector<Complex>& v) {
  std::size_t imax = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  const double mag = std::abs(v[imax]);
  if (mag == 0) return;
  const Complex phase = std::conj(v[imax]) / mag;
  double nrm = 0;
  for (const Complex& c : v) nrm += std::norm(c);
  nrm = std::sqrt(nrm);
  for (Complex& c : v) c *= phase / nrm;
}

/// Recombines a 2-dimensional null basis into vectors pinned to zero at the
/// far end, one per free end, so each is localized where it belongs.
inline std::vector<std::vector<Complex>> localize(
    std::vector<std::vector<Complex>> basis) {
  for (auto& v : basis) normalize_phase(v);
  if (basis.size() != 2) return basis;
  const std::size_t m = basis[0].size();
  const Complex u_hi = basis[0][m - 1], v_hi = basis[1][m - 1];
  const Complex u_lo = basis[0][0], v_lo = basis[1][0];
  if (std::abs(u_hi) + std::abs(v_hi) == 0 || std::abs(u_lo) + std::abs(v_lo) == 0)
    return basis;  // already end-pinned; leave as is

  std::vector<Complex> low(m), high(m);
  for (std::size_t i = 0; i < m; ++i) {
    low[i] = v_hi * basis[0][i] - u_hi * basis[1][i];   // vanishes at high end
    high[i] = v_lo * basis[0][i] - u_lo * basis[1][i];  // vanishes at low end
  }
  normalize_phase(low);
  normalize_phase(high);
  return {std::move(low), std::move(high)};
}

}  // namespace detail

/// Deficiency indices m_+- = dim ker(S* -+ i) of one component, counted by a
/// rank-revealing SVD with singular values below tol * sigma_max treated as
/// zero. For real bounded V the two indices agree.
inline ComponentDeficiency deficiency_indices(const Decomposition& dec,
                                              const Potential& V,
                                              const ComponentSpec& comp,
                                              double tol = 1e-10) {
  ComponentDeficiency out;
  // m_+ counts solutions of (S* - i) psi = 0, i.e. the null space at z = +i
  out.basis_plus = detail::localize(
      detail::interior_row_null_space(dec, V, comp, Complex(0.0, 1.0), tol));
  out.basis_minus = detail::localize(
      detail::interior_row_null_space(dec, V, comp, Complex(0.0, -1.0), tol));
  out.m_plus = static_cast<int>(out.basis_plus.size());
  out.m_minus = static_cast<int>(out.basis_minus.size());
  return out;
}

/// Indices and bases for the standard three components of a decomposition.
struct DeficiencyReport {
  ComponentDeficiency omega1, left, right;

  int omega2_plus() const { return left.m_plus + right.m_plus; }
  int omega2_minus() const { return left.m_minus + right.m_minus; }
  int total_plus() const { return omega1.m_plus + omega2_plus(); }
  int total_minus() const { return omega1.m_minus + omega2_minus(); }
};

inline DeficiencyReport deficiency_report(const Decomposition& dec,
                                          const Potential& V,
                                          double tol = 1e-10) {
  return {deficiency_indices(dec, V, ComponentSpec::inner(), tol),
          deficiency_indices(dec, V, ComponentSpec::outer_left(), tol),
          deficiency_indices(dec, V, ComponentSpec::outer_right(), tol)};
}

/// A coupling is separating when every interface point carries separated
/// boundary conditions; anything else couples the regions.
enum class ExtensionClass { separating, transversal };

inline ExtensionClass classify(const CouplingSpec& spec) {
  return spec.separating() ? ExtensionClass::separating
                           : ExtensionClass::transversal;
}

}  // namespace confham
