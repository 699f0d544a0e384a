#pragma once

// Assembly of the Hamiltonian as a tridiagonal operator on the decomposed
// grid, for separating boundary conditions (independent blocks) and for the
// point couplings that join them (transparent, delta, delta').
//
// Rows follow the quadratic form of the operator with trapezoid weights, so
// W A is symmetric by construction whenever the input data is real:
//   * interior rows: centered 3-point stencil plus V;
//   * a kept interface copy with Neumann/Robin data f carries the ghost
//     elimination row (2 v_x - 2 v_x') / h^2 - (2 f / h) v_x + V v_x, where
//     x' is the node inward (outward-normal convention: positive f binds);
//   * Dirichlet interface copies and the box-end nodes are eliminated;
//   * transparent / delta couplings merge the two copies into one shared
//     degree of freedom (weight h), delta adding strength / h on the diagonal
//     so the form gains strength * |v(x)|^2;
//   * delta'(beta) keeps both copies with Neumann-type rows and couples them
//     through the form (1 / beta) |v(x+) - v(x-)|^2.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "confham/potential.hpp"
#include "confham/traces.hpp"

namespace confham {

struct BoundaryCondition {
  enum class Kind { dirichlet, neumann, robin };

  Kind kind = Kind::dirichlet;
  double f = 0;

  static BoundaryCondition dirichlet() { return {}; }
  static BoundaryCondition neumann() { return {Kind::neumann, 0}; }
  static BoundaryCondition robin(double f) {
    if (!std::isfinite(f)) throw SpecError("robin coefficient must be finite");
    return {Kind::robin, f};
  }
};

/// What happens at one interface point.
struct PointCoupling {
  enum class Kind { separated, transparent, delta, delta_prime };

  Kind kind = Kind::separated;
  BoundaryCondition side1{}, side2{};  // used when separated
  double strength = 0;                 // alpha for delta, beta for delta'

  static PointCoupling separated(BoundaryCondition s1, BoundaryCondition s2) {
    return {Kind::separated, s1, s2, 0};
  }
  static PointCoupling transparent() { return {Kind::transparent, {}, {}, 0}; }
  static PointCoupling delta(double alpha) {
    if (!std::isfinite(alpha)) throw SpecError("delta strength must be finite");
    return {Kind::delta, {}, {}, alpha};
  }
  static PointCoupling delta_prime(double beta) {
    if (beta == 0 || !std::isfinite(beta))
      throw SpecError("delta' strength must be finite and nonzero");
    return {Kind::delta_prime, {}, {}, beta};
  }

  bool separates() const { return kind == Kind::separated; }
};

struct CouplingSpec {
  PointCoupling at_a{}, at_b{};

  const PointCoupling& at(GammaPoint p) const {
    return p == GammaPoint::a ? at_a : at_b;
  }
  bool separating() const { return at_a.separates() && at_b.separates(); }
};

/// Separated boundary conditions for every interface point and side.
struct SeparatedBcs {
  // indexed [point][side - 1]
  std::array<std::array<BoundaryCondition, 2>, 2> bc{};

  static SeparatedBcs uniform(BoundaryCondition all) {
    SeparatedBcs out;
    out.bc = {{{all, all}, {all, all}}};
    return out;
  }

  BoundaryCondition& at(GammaPoint p, Side s) {
    return bc[index_of(p)][s == Side::omega1 ? 0 : 1];
  }
  const BoundaryCondition& at(GammaPoint p, Side s) const {
    return bc[index_of(p)][s == Side::omega1 ? 0 : 1];
  }

  CouplingSpec as_coupling() const {
    return {PointCoupling::separated(bc[0][0], bc[0][1]),
            PointCoupling::separated(bc[1][0], bc[1][1])};
  }
};

/// One matrix degree of freedom with its quadrature weight and ownership.
struct Dof {
  int node = 0;  // global grid node index
  double x = 0;
  double w = 0;
  Blk blk = Blk::omega1;
  bool shared = false;    // merged interface node
  bool in_omega1 = false; // shared nodes count toward the inner region
};

/// Tridiagonal operator A on the matrix degrees of freedom, together with the
/// weight vector making W A symmetric. Entries are stored complex so that
/// deliberately broken inputs (diagnostics) remain representable; valid
/// physics always produces real entries.
class HamiltonianMatrix {
 public:
  HamiltonianMatrix(Decomposition dec, CouplingSpec spec,
                    std::vector<Dof> dofs, std::vector<Complex> diag,
                    std::vector<Complex> sub, std::vector<Complex> super)
      : dec_(dec),
        spec_(spec),
        dofs_(std::move(dofs)),
        diag_(std::move(diag)),
        sub_(std::move(sub)),
        super_(std::move(super)) {}

  const Decomposition& decomposition() const { return dec_; }
  const CouplingSpec& coupling() const { return spec_; }
  bool separating() const { return spec_.separating(); }
  std::size_t size() const { return dofs_.size(); }
  const std::vector<Dof>& dofs() const { return dofs_; }

  // sub_[i] couples row i+1 to column i; super_[i] couples row i to i+1.
  const std::vector<Complex>& diag() const { return diag_; }
  const std::vector<Complex>& sub() const { return sub_; }
  const std::vector<Complex>& super() const { return super_; }

  std::vector<Complex> apply(const std::vector<Complex>& v) const {
    if (v.size() != size()) throw ShapeError("apply: dof vector length mismatch");
    const std::size_t n = size();
    std::vector<Complex> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc = diag_[i] * v[i];
      if (i > 0) acc += sub_[i - 1] * v[i - 1];
      if (i + 1 < n) acc += super_[i] * v[i + 1];
      out[i] = acc;
    }
    return out;
  }

  /// Restricts a decomposed grid function to the matrix degrees of freedom.
  /// Shared nodes take the mean of the two copies; eliminated nodes drop.
  std::vector<Complex> to_dofs(const WaveFunction& psi) const {
    if (!psi.conforms_to(dec_)) throw ShapeError("to_dofs: wrong grid");
    std::vector<Complex> out(size());
    for (std::size_t i = 0; i < size(); ++i) {
      const Dof& d = dofs_[i];
      if (d.shared) {
        const Complex u = (d.node == dec_.node_a())
                              ? psi.left.back()
                              : psi.omega1.back();
        const Complex v = (d.node == dec_.node_a())
                              ? psi.omega1.front()
                              : psi.right.front();
        out[i] = 0.5 * (u + v);
      } else {
        out[i] = psi.block(d.blk)[local_index(d)];
      }
    }
    return out;
  }

  /// Expands a dof vector back to the decomposed representation; eliminated
  /// nodes become zero, shared values are copied to both sides.
  WaveFunction from_dofs(const std::vector<Complex>& v) const {
    if (v.size() != size()) throw ShapeError("from_dofs: length mismatch");
    WaveFunction psi = WaveFunction::zeros(dec_);
    for (std::size_t i = 0; i < size(); ++i) {
      const Dof& d = dofs_[i];
      if (d.shared) {
        if (d.node == dec_.node_a()) {
          psi.left.back() = v[i];
          psi.omega1.front() = v[i];
        } else {
          psi.omega1.back() = v[i];
          psi.right.front() = v[i];
        }
      } else {
        psi.block(d.blk)[local_index(d)] = v[i];
      }
    }
    return psi;
  }

 private:
  std::size_t local_index(const Dof& d) const {
    switch (d.blk) {
      case Blk::left:
        return static_cast<std::size_t>(d.node - 1);
      case Blk::omega1:
        return static_cast<std::size_t>(d.node - dec_.node_a());
      default:
        return static_cast<std::size_t>(d.node - dec_.node_b());
    }
  }

  Decomposition dec_;
  CouplingSpec spec_;
  std::vector<Dof> dofs_;
  std::vector<Complex> diag_, sub_, super_;
};

namespace detail {

/// Boundary condition with a complex Robin slot. Valid physics keeps f real;
/// tests inject complex values to confirm the symmetry diagnostics notice.
struct BcComplex {
  BoundaryCondition::Kind kind = BoundaryCondition::Kind::dirichlet;
  Complex f{};
};

struct RowSpec {
  // what each matrix dof is, resolved during the layout pass
  enum class Role { interior, ghost_end, shared, dp_copy } role = Role::interior;
  int node = 0;
  Blk blk = Blk::omega1;
  bool in_omega1 = false;
  bool is_copy = false;       // duplicated interface node (weight h/2)
  int inward = 0;             // dof-index step toward the owning block
  int cross = 0;              // dof-index step to the delta' partner, 0 if none
  Complex f{};                // Robin coefficient for ghost rows
  double strength = 0;        // delta / delta' strength
  PointCoupling::Kind ckind = PointCoupling::Kind::separated;
};

inline double potential_at_node(const Decomposition& dec, const Potential& V,
                                int node) {
  if (node <= dec.node_a())
    return node == dec.node_a() ? V.omega1.front()
                                : V.left[static_cast<std::size_t>(node - 1)];
  if (node < dec.node_b())
    return V.omega1[static_cast<std::size_t>(node - dec.node_a())];
  return node == dec.node_b()
             ? V.right.front()
             : V.right[static_cast<std::size_t>(node - dec.node_b())];
}

inline HamiltonianMatrix assemble_engine(
    const Decomposition& dec, const Potential& V, const CouplingSpec& spec,
    const std::array<std::array<BcComplex, 2>, 2>& sep_bc) {
  const double h = dec.h();
  const double inv_h = 1.0 / h;
  const double inv_h2 = inv_h * inv_h;

  std::vector<Dof> dofs;
  std::vector<RowSpec> rows;
  auto push = [&](RowSpec r) {
    const bool in1 = r.blk == Blk::omega1 || r.role == RowSpec::Role::shared;
    const double w = r.role == RowSpec::Role::shared ? h
                     : r.is_copy                     ? 0.5 * h
                                                     : h;
    dofs.push_back(
        {r.node, r.node * h, w, r.blk, r.role == RowSpec::Role::shared, in1});
    r.in_omega1 = in1;
    rows.push_back(r);
  };
  auto push_interior = [&](Blk blk, int node) {
    push({RowSpec::Role::interior, node, blk});
  };
  // Emits the dofs living exactly at an interface node, in x order (outer
  // side 2 copy first at a, inner side 1 copy first at b).
  auto push_interface = [&](GammaPoint p) {
    const PointCoupling& c = spec.at(p);
    const int node = p == GammaPoint::a ? dec.node_a() : dec.node_b();
    const Blk inner = Blk::omega1;
    const Blk outer = p == GammaPoint::a ? Blk::left : Blk::right;
    // inward list-direction of each copy: the side-2 copy at a has its block
    // before it, the side-1 copy after it, and mirrored at b.
    const int inward_outer = p == GammaPoint::a ? -1 : +1;
    const int inward_inner = -inward_outer;
    const Blk first_blk = p == GammaPoint::a ? outer : inner;
    const Blk second_blk = p == GammaPoint::a ? inner : outer;
    const int inward_first = p == GammaPoint::a ? inward_outer : inward_inner;
    const int inward_second = p == GammaPoint::a ? inward_inner : inward_outer;

    switch (c.kind) {
      case PointCoupling::Kind::separated: {
        auto bc_of = [&](Blk blk) {
          const std::size_t side = blk == inner ? 0 : 1;
          return sep_bc[index_of(p)][side];
        };
        auto emit = [&](Blk blk, int inward) {
          const BcComplex bc = bc_of(blk);
          if (bc.kind == BoundaryCondition::Kind::dirichlet) return;
          RowSpec r{RowSpec::Role::ghost_end, node, blk};
          r.is_copy = true;
          r.inward = inward;
          r.f = bc.kind == BoundaryCondition::Kind::robin ? bc.f : Complex{};
          push(r);
        };
        emit(first_blk, inward_first);
        emit(second_blk, inward_second);
        break;
      }
      case PointCoupling::Kind::transparent:
      case PointCoupling::Kind::delta: {
        RowSpec r{RowSpec::Role::shared, node, inner};
        r.strength = c.kind == PointCoupling::Kind::delta ? c.strength : 0.0;
        r.ckind = c.kind;
        push(r);
        break;
      }
      case PointCoupling::Kind::delta_prime: {
        auto emit = [&](Blk blk, int inward, int cross) {
          RowSpec r{RowSpec::Role::dp_copy, node, blk};
          r.is_copy = true;
          r.inward = inward;
          r.cross = cross;
          r.strength = c.strength;
          push(r);
        };
        emit(first_blk, inward_first, +1);
        emit(second_blk, inward_second, -1);
        break;
      }
    }
  };

  for (int node = 1; node < dec.node_a(); ++node) push_interior(Blk::left, node);
  push_interface(GammaPoint::a);
  for (int node = dec.node_a() + 1; node < dec.node_b(); ++node)
    push_interior(Blk::omega1, node);
  push_interface(GammaPoint::b);
  for (int node = dec.node_b() + 1; node < dec.N(); ++node)
    push_interior(Blk::right, node);

  // locate dofs by (block, node) for neighbor resolution
  const std::size_t n = dofs.size();
  auto find_neighbor = [&](std::size_t i, Blk blk, int node) -> int {
    // a block neighbor, when present, sits directly next to i in the x-order
    for (int j : {static_cast<int>(i) - 1, static_cast<int>(i) + 1}) {
      if (j < 0 || j >= static_cast<int>(n)) continue;
      const std::size_t ju = static_cast<std::size_t>(j);
      if (dofs[ju].node != node) continue;
      if (dofs[ju].shared || dofs[ju].blk == blk) return j;
    }
    return -1;
  };

  std::vector<Complex> diag(n), sub(n > 0 ? n - 1 : 0), sup(n > 0 ? n - 1 : 0);
  auto couple = [&](std::size_t i, int j, Complex value) {
    if (j == static_cast<int>(i) - 1)
      sub[static_cast<std::size_t>(j)] += value;
    else if (j == static_cast<int>(i) + 1)
      sup[i] += value;
    else
      throw Error("assembly: non-adjacent coupling, layout is inconsistent");
  };

  for (std::size_t i = 0; i < n; ++i) {
    const RowSpec& r = rows[i];
    const double v_here = potential_at_node(dec, V, r.node);
    switch (r.role) {
      case RowSpec::Role::interior: {
        diag[i] = 2.0 * inv_h2 + v_here;
        for (int dn : {-1, +1}) {
          const int j = find_neighbor(i, r.blk, r.node + dn);
          if (j >= 0) couple(i, j, -inv_h2);
        }
        break;
      }
      case RowSpec::Role::ghost_end: {
        diag[i] = 2.0 * inv_h2 + v_here - 2.0 * r.f * inv_h;
        const int j = find_neighbor(i, r.blk, r.node + ((r.inward > 0) ? 1 : -1));
        if (j < 0) throw Error("assembly: ghost row lost its inward neighbor");
        couple(i, j, -2.0 * inv_h2);
        break;
      }
      case RowSpec::Role::shared: {
        diag[i] = 2.0 * inv_h2 + v_here + r.strength * inv_h;
        for (int dn : {-1, +1}) {
          const Blk nb_blk = dn < 0 ? (r.node == dec.node_a() ? Blk::left : Blk::omega1)
                                    : (r.node == dec.node_a() ? Blk::omega1 : Blk::right);
          const int j = find_neighbor(i, nb_blk, r.node + dn);
          if (j < 0) throw Error("assembly: shared node lost a neighbor");
          couple(i, j, -inv_h2);
        }
        break;
      }
      case RowSpec::Role::dp_copy: {
        const double gamma = 2.0 / (r.strength * h);
        diag[i] = 2.0 * inv_h2 + v_here + gamma;
        const int j = find_neighbor(i, r.blk, r.node + ((r.inward > 0) ? 1 : -1));
        if (j < 0) throw Error("assembly: delta' row lost its inward neighbor");
        couple(i, j, -2.0 * inv_h2);
        couple(i, static_cast<int>(i) + r.cross, -gamma);
        break;
      }
    }
  }

  return HamiltonianMatrix(dec, spec, std::move(dofs), std::move(diag),
                           std::move(sub), std::move(sup));
}

inline std::array<std::array<BcComplex, 2>, 2> lift_bcs(const CouplingSpec& s) {
  std::array<std::array<BcComplex, 2>, 2> out{};
  for (GammaPoint p : both_points) {
    const PointCoupling& c = s.at(p);
    out[index_of(p)][0] = {c.side1.kind, Complex{c.side1.f, 0}};
    out[index_of(p)][1] = {c.side2.kind, Complex{c.side2.f, 0}};
  }
  return out;
}

}  // namespace detail

/// Assembles the decoupled Hamiltonian for separated boundary conditions.
inline HamiltonianMatrix assemble_separating(const Decomposition& dec,
                                             const Potential& V,
                                             const SeparatedBcs& bcs) {
  const CouplingSpec spec = bcs.as_coupling();
  return detail::assemble_engine(dec, V, spec, detail::lift_bcs(spec));
}

/// Assembles the Hamiltonian for an arbitrary mix of separated and coupling
/// interface conditions.
inline HamiltonianMatrix assemble_coupled(const Decomposition& dec,
                                          const Potential& V,
                                          const CouplingSpec& spec) {
  return detail::assemble_engine(dec, V, spec, detail::lift_bcs(spec));
}

namespace detail {

/// Test hook: assemble with one Robin coefficient forced to a complex value,
/// bypassing the real-coefficient validation of the public types.
inline HamiltonianMatrix assemble_with_robin_override(
    const Decomposition& dec, const Potential& V, const SeparatedBcs& bcs,
    GammaPoint p, Side s, Complex f) {
  const CouplingSpec spec = bcs.as_coupling();
  auto lifted = lift_bcs(spec);
  lifted[index_of(p)][s == Side::omega1 ? 0 : 1] = {
      BoundaryCondition::Kind::robin, f};
  return assemble_engine(dec, V, spec, lifted);
}

}  // namespace detail

/// Largest Hermiticity violation of W A, relative to the largest entry of
/// W A. Zero up to rounding for any validly assembled operator.
inline double hermiticity_defect(const HamiltonianMatrix& H) {
  const auto& dofs = H.dofs();
  const std::size_t n = H.size();
  double worst = 0, scale = 0;
  auto upd = [&](Complex kij, Complex kji_conj) {
    worst = std::max(worst, std::abs(kij - kji_conj));
    scale = std::max({scale, std::abs(kij), std::abs(kji_conj)});
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Complex kii = dofs[i].w * H.diag()[i];
    upd(kii, std::conj(kii));
    if (i + 1 < n)
      upd(dofs[i].w * H.super()[i], std::conj(dofs[i + 1].w * H.sub()[i]));
  }
  return scale > 0 ? worst / scale : 0.0;
}

/// Max-norm of P1 A - A P1 with P1 the inner-region indicator (shared nodes
/// count as inner). Exactly zero iff no matrix entry crosses the partition.
inline double projection_commutator_norm(const HamiltonianMatrix& H) {
  const auto& dofs = H.dofs();
  double worst = 0;
  for (std::size_t i = 0; i + 1 < H.size(); ++i) {
    if (dofs[i].in_omega1 != dofs[i + 1].in_omega1) {
      worst = std::max(worst, std::abs(H.super()[i]));
      worst = std::max(worst, std::abs(H.sub()[i]));
    }
  }
  return worst;
}

}  // namespace confham
