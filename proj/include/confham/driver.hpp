#pragma once
// Wires a parsed Config into the library and writes the CSV artifacts for
// the four subcommands. All floats are printed with %.17g so a run is
// reproducible bit for bit; verification randomness comes only from the
// config seed.

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "confham/assembly.hpp"
#include "confham/config.hpp"
#include "confham/distributional.hpp"
#include "confham/dynamics.hpp"
#include "confham/extensions.hpp"
#include "confham/grid.hpp"
#include "confham/potential.hpp"
#include "confham/sampling.hpp"
#include "confham/spectral.hpp"

namespace confham {

namespace detail {

inline std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

struct BuiltProblem {
  Config cfg;
  Decomposition dec;
  Potential V;
  HamiltonianMatrix H;
};

inline BuiltProblem build_problem(const Config& cfg) {
  Decomposition dec = build_decomposition(cfg.L, cfg.N, cfg.a, cfg.b);
  Potential V = evaluate_potential(dec, cfg.potential);
  HamiltonianMatrix H = cfg.separated
                            ? assemble_separating(dec, V, cfg.bcs)
                            : assemble_coupled(dec, V, cfg.coupling);
  return {cfg, dec, V, std::move(H)};
}

/// Encodes arbitrary separated conditions as the per-side functionals of the
/// general boundary potential: Dirichlet F = g0, Neumann F = g1, Robin
/// F = g1 - f g0. The full action is then singularity-free exactly on states
/// meeting every side's condition.
inline BoundaryPotentialSpec boundary_potential_for(const SeparatedBcs& bcs) {
  BoundaryPotentialSpec::General g;
  auto functional = [](const BoundaryCondition& bc) -> TraceFunctional {
    switch (bc.kind) {
      case BoundaryCondition::Kind::dirichlet:
        return {1.0, 0.0};
      case BoundaryCondition::Kind::neumann:
        return {0.0, 1.0};
      default:
        return {-bc.f, 1.0};
    }
  };
  for (GammaPoint p : both_points) {
    g.F1[index_of(p)] = functional(bcs.at(p, Side::omega1));
    g.F2[index_of(p)] = functional(bcs.at(p, Side::omega2));
  }
  return BoundaryPotentialSpec::general_bc(g);
}

namespace detail {

/// Analytic eigenvalues for the configuration when available: separated
/// conditions with V = 0 use the per-block interval spectra (hard walls are
/// Dirichlet ends), a fully transparent coupling with V = 0 uses the global
/// box. Returns an empty list when no closed reference applies.
inline std::vector<double> reference_values(const BuiltProblem& p, int count) {
  if (!std::holds_alternative<PotentialSpec::Zero>(p.cfg.potential.kind))
    return {};
  const auto D = BoundaryCondition::dirichlet();
  std::vector<double> merged;
  if (p.cfg.separated) {
    const SeparatedBcs& bcs = p.cfg.bcs;
    auto append = [&](const BoundaryCondition& lo, const BoundaryCondition& hi,
                      double ell) {
      for (double v : reference_spectrum_mixed(lo, hi, ell, count))
        merged.push_back(v);
    };
    append(D, bcs.at(GammaPoint::a, Side::omega2), p.dec.a());
    append(bcs.at(GammaPoint::a, Side::omega1),
           bcs.at(GammaPoint::b, Side::omega1), p.dec.b() - p.dec.a());
    append(bcs.at(GammaPoint::b, Side::omega2), D, p.dec.L() - p.dec.b());
  } else if (p.cfg.coupling.at_a.kind == PointCoupling::Kind::transparent &&
             p.cfg.coupling.at_b.kind == PointCoupling::Kind::transparent) {
    merged = reference_spectrum_mixed(D, D, p.dec.L(), count);
  } else {
    return {};
  }
  std::sort(merged.begin(), merged.end());
  if (static_cast<int>(merged.size()) > count)
    merged.resize(static_cast<std::size_t>(count));
  return merged;
}

/// Which block carries (essentially) all of the eigenvector's weighted mass.
inline std::string block_label(const HamiltonianMatrix& H,
                               const std::vector<Complex>& v) {
  double mass[3] = {0, 0, 0};
  double total = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Dof& d = H.dofs()[i];
    const double m = d.w * std::norm(v[i]);
    total += m;
    if (d.in_omega1)
      mass[1] += m;
    else
      mass[d.blk == Blk::left ? 0 : 2] += m;
  }
  const char* names[3] = {"left", "omega1", "right"};
  for (int k = 0; k < 3; ++k)
    if (mass[k] >= (1.0 - 1e-8) * total) return names[k];
  return "mixed";
}

}  // namespace detail

/// CSV `n,lambda,block,reference,rel_error`; reference and rel_error are nan
/// when no analytic spectrum applies. rel_error = |lambda - ref| / max(1, |ref|).
inline void write_spectrum_csv(std::ostream& out, const BuiltProblem& p) {
  const int count = p.cfg.spectrum_count;
  EigenResult eig = eigensolve(p.H, count);
  const std::vector<double> refs = detail::reference_values(p, count);

  out << "n,lambda,block,reference,rel_error\n";
  for (int n = 0; n < count; ++n) {
    const double lam = eig.values[static_cast<std::size_t>(n)];
    double ref = std::numeric_limits<double>::quiet_NaN();
    double rel = std::numeric_limits<double>::quiet_NaN();
    if (static_cast<std::size_t>(n) < refs.size()) {
      ref = refs[static_cast<std::size_t>(n)];
      rel = std::abs(lam - ref) / std::max(1.0, std::abs(ref));
    }
    out << (n + 1) << ',' << detail::fmt_g(lam) << ','
        << detail::block_label(p.H, eig.vectors[static_cast<std::size_t>(n)])
        << ',' << detail::fmt_g(ref) << ',' << detail::fmt_g(rel) << '\n';
  }
}

/// CSV `t,norm,p_omega,energy` for the configured evolution.
inline void write_evolve_csv(std::ostream& out, const BuiltProblem& p) {
  if (!p.cfg.evolve)
    throw ConfigError("config.evolve: required for the evolve subcommand");
  const EvolveConfig& ev = *p.cfg.evolve;

  std::vector<Complex> psi0;
  if (ev.initial.kind == InitialState::Kind::gaussian) {
    psi0 = p.H.to_dofs(gaussian_packet(p.dec, ev.initial.x0, ev.initial.sigma,
                                       ev.initial.k0));
  } else {
    EigenResult eig = eigensolve(p.H, ev.initial.index + 1);
    psi0 = eig.vectors.back();
  }

  EvolveResult res = crank_nicolson_evolve(p.H, std::move(psi0), ev.dt, ev.steps);
  out << "t,norm,p_omega,energy\n";
  const Trajectory& tr = res.trajectory;
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    out << detail::fmt_g(tr.t[k]) << ',' << detail::fmt_g(tr.norm_w[k]) << ','
        << detail::fmt_g(tr.prob_omega1[k]) << ',' << detail::fmt_g(tr.energy[k])
        << '\n';
  }
}

/// Pass/fail report `check,value,status`. Separated configurations addition-
/// ally verify domain membership and the decoupling identity on seeded random
/// domain samples. Returns true when every line passed.
inline bool write_verify_report(std::ostream& out, const BuiltProblem& p) {
  bool all_pass = true;
  out << "check,value,status\n";
  auto line = [&](const std::string& name, double value, bool pass) {
    out << name << ',' << detail::fmt_g(value) << ','
        << (pass ? "PASS" : "FAIL") << '\n';
    all_pass = all_pass && pass;
  };

  const double herm = hermiticity_defect(p.H);
  line("hermiticity_defect", herm, herm <= 1e-12);

  const double comm = projection_commutator_norm(p.H);
  const bool separating = p.H.separating();
  line("projection_commutator_norm", comm,
       separating ? comm == 0.0 : comm > 0.0);

  if (p.cfg.separated) {
    const BoundaryPotentialSpec bp = boundary_potential_for(p.cfg.bcs);
    std::mt19937_64 rng(p.cfg.seed);
    double worst_domain = 0, worst_decouple = 0;
    const int samples = 25;
    for (int s = 0; s < samples; ++s) {
      WaveFunction psi = domain_sample(p.dec, p.cfg.bcs, rng);
      SingularFunction full = apply_full(psi, p.V, bp);
      worst_domain = std::max(
          worst_domain, full.singular_magnitude() / std::max(full.scale, 1e-300));

      // Matrix route vs the regular part of the distributional action,
      // compared dof by dof (eliminated Dirichlet copies carry no dof).
      std::vector<Complex> matrix_out = p.H.apply(p.H.to_dofs(psi));
      double err = 0, scale = 0;
      for (std::size_t i = 0; i < p.H.size(); ++i) {
        const Dof& d = p.H.dofs()[i];
        const std::size_t local =
            static_cast<std::size_t>(d.node - p.dec.node_of(d.blk, 0));
        const Complex rhs = full.regular.block(d.blk)[local];
        err = std::max(err, std::abs(matrix_out[i] - rhs));
        scale = std::max({scale, std::abs(matrix_out[i]), std::abs(rhs)});
      }
      worst_decouple = std::max(worst_decouple, err / std::max(scale, 1e-300));
    }
    line("in_domain_max_defect", worst_domain, worst_domain <= 1e-10);
    line("decoupling_max_rel_error", worst_decouple, worst_decouple <= 1e-12);
  }
  return all_pass;
}

/// CSV `component,m_plus,m_minus` with the per-component indices and totals.
inline void write_deficiency_csv(std::ostream& out, const BuiltProblem& p) {
  const DeficiencyReport rep = deficiency_report(p.dec, p.V);
  out << "component,m_plus,m_minus\n";
  out << "omega1," << rep.omega1.m_plus << ',' << rep.omega1.m_minus << '\n';
  out << "omega2_left," << rep.left.m_plus << ',' << rep.left.m_minus << '\n';
  out << "omega2_right," << rep.right.m_plus << ',' << rep.right.m_minus << '\n';
  out << "omega2," << rep.omega2_plus() << ',' << rep.omega2_minus() << '\n';
  out << "total," << rep.total_plus() << ',' << rep.total_minus() << '\n';
}

}  // namespace confham
