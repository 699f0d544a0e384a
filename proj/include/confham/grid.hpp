#pragma once

// Uniform grid on a box [0, L] split into an inner interval [a, b] and the
// outer remainder [0, a] u [b, L]. The split points a, b are shared interface
// nodes: each side keeps its own copy, so grid functions may jump there. The
// box ends 0 and L are hard walls and carry no degree of freedom.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <vector>

#include "confham/errors.hpp"

namespace confham {

using Complex = std::complex<double>;

/// The three storage blocks of a decomposed grid function, ordered by x.
enum class Blk : int { left = 0, omega1 = 1, right = 2 };

constexpr std::array<Blk, 3> all_blocks{Blk::left, Blk::omega1, Blk::right};

/// Grid geometry for the decomposition of [0, L] at interface points a < b.
///
/// Nodes sit at x_i = i h, h = L / N, and a, b must land on nodes. Degrees of
/// freedom per block: left holds nodes 1..ia, omega1 holds ia..ib, right holds
/// ib..N-1. The interface nodes ia, ib are therefore duplicated (one copy per
/// touching block); nodes 0 and N are eliminated by the hard walls.
class Decomposition {
 public:
  Decomposition(double L, int N, int ia, int ib)
      : L_(L), N_(N), h_(L / N), ia_(ia), ib_(ib) {}

  double L() const { return L_; }
  int N() const { return N_; }
  double h() const { return h_; }
  double a() const { return ia_ * h_; }
  double b() const { return ib_ * h_; }
  int node_a() const { return ia_; }
  int node_b() const { return ib_; }

  std::size_t block_size(Blk blk) const {
    switch (blk) {
      case Blk::left:
        return static_cast<std::size_t>(ia_);
      case Blk::omega1:
        return static_cast<std::size_t>(ib_ - ia_ + 1);
      case Blk::right:
        return static_cast<std::size_t>(N_ - ib_);
    }
    return 0;
  }

  /// Global node index of local entry i in a block.
  int node_of(Blk blk, std::size_t i) const {
    switch (blk) {
      case Blk::left:
        return 1 + static_cast<int>(i);
      case Blk::omega1:
        return ia_ + static_cast<int>(i);
      case Blk::right:
        return ib_ + static_cast<int>(i);
    }
    return -1;
  }

  double x_of(Blk blk, std::size_t i) const { return node_of(blk, i) * h_; }

  /// True when the block entry is a duplicated interface-node copy.
  bool is_interface_copy(Blk blk, std::size_t i) const {
    switch (blk) {
      case Blk::left:
        return i + 1 == block_size(blk);
      case Blk::omega1:
        return i == 0 || i + 1 == block_size(blk);
      case Blk::right:
        return i == 0;
    }
    return false;
  }

  /// Trapezoid quadrature weight of a degree of freedom: h in the open part
  /// of each piece, h/2 on the duplicated interface copies.
  double weight(Blk blk, std::size_t i) const {
    return is_interface_copy(blk, i) ? 0.5 * h_ : h_;
  }

  bool same_grid(const Decomposition& o) const {
    return N_ == o.N_ && ia_ == o.ia_ && ib_ == o.ib_ && L_ == o.L_;
  }

 private:
  double L_;
  int N_;
  double h_;
  int ia_;
  int ib_;
};

namespace detail {

inline int snap_to_node(double coord, double h, double scale, const char* name) {
  const double r = coord / h;
  const double rounded = std::round(r);
  if (std::abs(r - rounded) > 1e-9 * std::max(1.0, std::abs(r))) {
    throw AlignmentError(std::string(name) +
                         " does not land on a grid node (off by " +
                         std::to_string((r - rounded) * h / scale) + " of L)");
  }
  return static_cast<int>(rounded);
}

}  // namespace detail

/// Validates geometry and snaps a, b to nodes. Every block needs at least
/// 4 nodes so that the one-sided interface stencils have room.
inline Decomposition build_decomposition(double L, int N, double a, double b) {
  if (!(L > 0) || N < 2) throw SpecError("box: need L > 0 and N >= 2");
  if (!(0 < a && a < b && b < L))
    throw SpecError("interface points must satisfy 0 < a < b < L");
  const double h = L / N;
  const int ia = detail::snap_to_node(a, h, L, "a");
  const int ib = detail::snap_to_node(b, h, L, "b");
  if (ia < 4) throw ResolutionError("left block has fewer than 4 nodes");
  if (ib - ia < 3) throw ResolutionError("inner block has fewer than 4 nodes");
  if (N - ib < 4) throw ResolutionError("right block has fewer than 4 nodes");
  return Decomposition(L, N, ia, ib);
}

/// A grid function in the decomposed representation: one value vector per
/// block, interface nodes duplicated.
struct WaveFunction {
  Decomposition dec;
  std::vector<Complex> left, omega1, right;

  static WaveFunction zeros(const Decomposition& d) {
    WaveFunction psi{d, {}, {}, {}};
    psi.left.assign(d.block_size(Blk::left), Complex{});
    psi.omega1.assign(d.block_size(Blk::omega1), Complex{});
    psi.right.assign(d.block_size(Blk::right), Complex{});
    return psi;
  }

  std::vector<Complex>& block(Blk blk) {
    switch (blk) {
      case Blk::left:
        return left;
      case Blk::omega1:
        return omega1;
      default:
        return right;
    }
  }
  const std::vector<Complex>& block(Blk blk) const {
    return const_cast<WaveFunction*>(this)->block(blk);
  }

  bool conforms_to(const Decomposition& d) const {
    return dec.same_grid(d) && left.size() == d.block_size(Blk::left) &&
           omega1.size() == d.block_size(Blk::omega1) &&
           right.size() == d.block_size(Blk::right);
  }
};

inline void require_same_grid(const WaveFunction& phi, const WaveFunction& psi) {
  if (!phi.conforms_to(psi.dec) || !psi.conforms_to(psi.dec))
    throw ShapeError("wave functions live on different grids");
}

/// Weighted inner product <phi, psi>, conjugate-linear in the first slot.
inline Complex inner_product(const WaveFunction& phi, const WaveFunction& psi) {
  require_same_grid(phi, psi);
  Complex acc{};
  for (Blk blk : all_blocks) {
    const auto& f = phi.block(blk);
    const auto& g = psi.block(blk);
    for (std::size_t i = 0; i < f.size(); ++i)
      acc += psi.dec.weight(blk, i) * std::conj(f[i]) * g[i];
  }
  return acc;
}

inline double norm(const WaveFunction& psi) {
  return std::sqrt(std::abs(inner_product(psi, psi)));
}

inline double sup_norm(const WaveFunction& psi) {
  double m = 0;
  for (Blk blk : all_blocks)
    for (const Complex& v : psi.block(blk)) m = std::max(m, std::abs(v));
  return m;
}

/// Projection onto subdomain k: keeps the inner block (k = 1) or the two
/// outer blocks (k = 2) and zeroes the rest, interface copies included.
inline WaveFunction project_omega(const WaveFunction& psi, int k) {
  if (k != 1 && k != 2) throw SpecError("project_omega: k must be 1 or 2");
  WaveFunction out = psi;
  if (k == 1) {
    std::fill(out.left.begin(), out.left.end(), Complex{});
    std::fill(out.right.begin(), out.right.end(), Complex{});
  } else {
    std::fill(out.omega1.begin(), out.omega1.end(), Complex{});
  }
  return out;
}

/// Identifies the duplicated interface copies and returns the plain box-grid
/// vector over nodes 1..N-1. The copies must agree (conforming data); the
/// stored value is their mean.
inline std::vector<Complex> glue(const WaveFunction& psi, double tol = 1e-10) {
  const Decomposition& d = psi.dec;
  const double scale = std::max(1.0, sup_norm(psi));
  auto fuse = [&](Complex u, Complex v) {
    if (std::abs(u - v) > tol * scale)
      throw SpecError("glue: interface copies disagree, data is not conforming");
    return 0.5 * (u + v);
  };
  std::vector<Complex> out(static_cast<std::size_t>(d.N() - 1));
  for (int node = 1; node < d.N(); ++node) {
    Complex v;
    if (node < d.node_a())
      v = psi.left[static_cast<std::size_t>(node - 1)];
    else if (node == d.node_a())
      v = fuse(psi.left.back(), psi.omega1.front());
    else if (node < d.node_b())
      v = psi.omega1[static_cast<std::size_t>(node - d.node_a())];
    else if (node == d.node_b())
      v = fuse(psi.omega1.back(), psi.right.front());
    else
      v = psi.right[static_cast<std::size_t>(node - d.node_b())];
    out[static_cast<std::size_t>(node - 1)] = v;
  }
  return out;
}

/// Inverse of glue: samples a box-grid vector (nodes 1..N-1) into the
/// decomposed representation, duplicating the interface values.
inline WaveFunction split(const std::vector<Complex>& global,
                          const Decomposition& d) {
  if (global.size() != static_cast<std::size_t>(d.N() - 1))
    throw ShapeError("split: expected N-1 interior node values");
  WaveFunction psi = WaveFunction::zeros(d);
  auto at = [&](int node) { return global[static_cast<std::size_t>(node - 1)]; };
  for (std::size_t i = 0; i < psi.left.size(); ++i)
    psi.left[i] = at(d.node_of(Blk::left, i));
  for (std::size_t i = 0; i < psi.omega1.size(); ++i)
    psi.omega1[i] = at(d.node_of(Blk::omega1, i));
  for (std::size_t i = 0; i < psi.right.size(); ++i)
    psi.right[i] = at(d.node_of(Blk::right, i));
  return psi;
}

}  // namespace confham
