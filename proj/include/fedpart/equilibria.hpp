#pragma once

// Self-fulfilling expectation equilibria: points with h(K) = K.

#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "fedpart/dynamics.hpp"

namespace fedpart {

// Unit-perturbation classes on the integer domain. `flat` covers fixed points
// that neither absorb nor repel a unit perturbation, e.g. runs of consecutive
// fixed points.
enum class EquilibriumKind { stable, tipping, flat };

std::string_view to_string(EquilibriumKind kind);

struct EquilibriumReport {
  Count point = 0;
  EquilibriumKind kind = EquilibriumKind::flat;
  std::optional<Count> h_below;  // h(point - 1)
  std::optional<Count> h_above;  // h(point + 1)

  friend bool operator==(const EquilibriumReport&, const EquilibriumReport&) = default;
};

// Throws std::invalid_argument if `point` is not a fixed point.
//  interior: stable iff h(K-1) > K-1 and h(K+1) < K+1; tipping iff both reversed
//  K = 0:    stable iff h(1) < 1
//  K = max:  stable iff h(max-1) > max-1
EquilibriumKind classify(Count point, const RealizationMap& h);

// Every fixed point in [0, domain_max], ascending.
std::vector<EquilibriumReport> enumerate_fixed_points(const RealizationMap& h);

// Iterates x <- h(x) from `start` while h(x) > x. Requires h(start) >= start;
// throws std::invalid_argument otherwise, and std::logic_error if the chain
// stops at a point with h(x) < x (only possible for a non-monotone h).
Count find_equilibrium_above(Count start, const RealizationMap& h);

// Limit of the natural dynamic from every starting expectation; nullopt where
// the dynamic does not converge.
std::vector<std::optional<Count>> basins(const Scenario& scenario);

void write_equilibria_csv(std::ostream& out, const std::vector<EquilibriumReport>& reports,
                          const std::vector<std::optional<Count>>& basin);
void write_equilibria_text(std::ostream& out, const std::vector<EquilibriumReport>& reports,
                           const std::vector<std::optional<Count>>& basin);
void write_h_curve_csv(std::ostream& out, const RealizationMap& h);
void write_basins_csv(std::ostream& out, const std::vector<std::optional<Count>>& basin);

}  // namespace fedpart
