#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "confham/grid.hpp"

namespace confham {

/// Bounded real potential, evaluated per degree of freedom. The table kind
/// carries one value per box node 0..N (duplicated interface copies read the
/// same entry).
struct PotentialSpec {
  struct Zero {};
  struct Constant {
    double value;
  };
  struct Harmonic {
    double omega;
    double x0;
  };
  struct Table {
    std::vector<double> values;
  };

  std::variant<Zero, Constant, Harmonic, Table> kind = Zero{};

  static PotentialSpec zero() { return {}; }
  static PotentialSpec constant(double c) { return {Constant{c}}; }
  static PotentialSpec harmonic(double omega, double x0) {
    return {Harmonic{omega, x0}};
  }
  static PotentialSpec table(std::vector<double> values) {
    return {Table{std::move(values)}};
  }
};

/// Potential samples in the decomposed layout.
struct Potential {
  std::vector<double> left, omega1, right;

  const std::vector<double>& block(Blk blk) const {
    switch (blk) {
      case Blk::left:
        return left;
      case Blk::omega1:
        return omega1;
      default:
        return right;
    }
  }
};

inline Potential evaluate_potential(const Decomposition& dec,
                                    const PotentialSpec& spec) {
  if (const auto* tab = std::get_if<PotentialSpec::Table>(&spec.kind)) {
    if (tab->values.size() != static_cast<std::size_t>(dec.N() + 1))
      throw SpecError("potential.values: expected N+1 node samples, got " +
                      std::to_string(tab->values.size()));
    for (double v : tab->values)
      if (!std::isfinite(v))
        throw SpecError("potential.values: entries must be finite");
  }
  auto value_at = [&](double x, int node) -> double {
    if (std::holds_alternative<PotentialSpec::Zero>(spec.kind)) return 0.0;
    if (const auto* c = std::get_if<PotentialSpec::Constant>(&spec.kind))
      return c->value;
    if (const auto* ho = std::get_if<PotentialSpec::Harmonic>(&spec.kind)) {
      const double r = x - ho->x0;
      return ho->omega * ho->omega * r * r;
    }
    return std::get<PotentialSpec::Table>(spec.kind)
        .values[static_cast<std::size_t>(node)];
  };
  Potential out;
  for (Blk blk : all_blocks) {
    std::vector<double>& dst = const_cast<std::vector<double>&>(out.block(blk));
    dst.resize(dec.block_size(blk));
    for (std::size_t i = 0; i < dst.size(); ++i)
      dst[i] = value_at(dec.x_of(blk, i), dec.node_of(blk, i));
  }
  return out;
}

}  // namespace confham
