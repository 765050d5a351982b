#include "fedpart/equilibria.hpp"

#include <algorithm>
#include <stdexcept>

namespace fedpart {

std::string_view to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::stable: return "stable";
    case EquilibriumKind::tipping: return "tipping";
    case EquilibriumKind::flat: return "flat";
  }
  return "?";
}

EquilibriumKind classify(Count point, const RealizationMap& h) {
  const Count top = h.domain_max();
  if (h(point) != point) {
    throw std::invalid_argument("classify: " + std::to_string(point) + " is not a fixed point");
  }
  if (top == 0) return EquilibriumKind::stable;
  if (point == 0) return h(1) < 1 ? EquilibriumKind::stable : EquilibriumKind::flat;
  if (point == top) return h(top - 1) > top - 1 ? EquilibriumKind::stable : EquilibriumKind::flat;

  const Count below = h(point - 1);
  const Count above = h(point + 1);
  if (below > point - 1 && above < point + 1) return EquilibriumKind::stable;
  if (below < point - 1 && above > point + 1) return EquilibriumKind::tipping;
  return EquilibriumKind::flat;
}

std::vector<EquilibriumReport> enumerate_fixed_points(const RealizationMap& h) {
  std::vector<EquilibriumReport> out;
  for (Count x = 0; x <= h.domain_max(); ++x) {
    if (h(x) != x) continue;
    EquilibriumReport r;
    r.point = x;
    r.kind = classify(x, h);
    if (x > 0) r.h_below = h(x - 1);
    if (x < h.domain_max()) r.h_above = h(x + 1);
    out.push_back(r);
  }
  return out;
}

Count find_equilibrium_above(Count start, const RealizationMap& h) {
  if (h(start) < start) {
    throw std::invalid_argument("find_equilibrium_above: h(" + std::to_string(start) + ") < " +
                                std::to_string(start));
  }
  Count x = start;
  while (h(x) > x) x = h(x);
  if (h(x) != x) throw std::logic_error("find_equilibrium_above: realization map is not monotone");
  return x;
}

std::vector<std::optional<Count>> basins(const Scenario& scenario) {
  std::vector<std::optional<Count>> out;
  for (Count x = 0; x <= scenario.domain_max(); ++x) {
    const auto trace = simulate(scenario, state_from_expectation(scenario, x));
    out.push_back(trace.converged() ? std::optional<Count>(trace.last().expectation) : std::nullopt);
  }
  return out;
}

namespace {

struct Extent {
  Count size = 0;
  Count lo = 0;
  Count hi = 0;
};

Extent basin_extent(Count point, const std::vector<std::optional<Count>>& basin) {
  Extent e;
  for (std::size_t x = 0; x < basin.size(); ++x) {
    if (basin[x] != point) continue;
    const auto cx = static_cast<Count>(x);
    if (e.size == 0) e.lo = cx;
    e.hi = cx;
    ++e.size;
  }
  return e;
}

std::string opt(const std::optional<Count>& v) { return v ? std::to_string(*v) : std::string(); }

}  // namespace

void write_equilibria_csv(std::ostream& out, const std::vector<EquilibriumReport>& reports,
                          const std::vector<std::optional<Count>>& basin) {
  out << "point,kind,h_below,h_above,basin_size,basin_min,basin_max\n";
  for (const auto& r : reports) {
    const auto e = basin_extent(r.point, basin);
    out << r.point << ',' << to_string(r.kind) << ',' << opt(r.h_below) << ',' << opt(r.h_above) << ',' << e.size
        << ',';
    if (e.size > 0) out << e.lo << ',' << e.hi;
    else out << ',';
    out << '\n';
  }
}

void write_equilibria_text(std::ostream& out, const std::vector<EquilibriumReport>& reports,
                           const std::vector<std::optional<Count>>& basin) {
  for (const auto& r : reports) {
    const auto e = basin_extent(r.point, basin);
    out << r.point << "  " << to_string(r.kind) << "  h(K-1)=" << (r.h_below ? opt(r.h_below) : "-")
        << "  h(K+1)=" << (r.h_above ? opt(r.h_above) : "-") << "  basin=";
    if (e.size == 0) out << "{}";
    else out << e.size << " points in [" << e.lo << ", " << e.hi << "]";
    out << '\n';
  }
}

void write_h_curve_csv(std::ostream& out, const RealizationMap& h) {
  out << "x,h\n";
  for (Count x = 0; x <= h.domain_max(); ++x) out << x << ',' << h(x) << '\n';
}

void write_basins_csv(std::ostream& out, const std::vector<std::optional<Count>>& basin) {
  out << "start,limit\n";
  for (std::size_t x = 0; x < basin.size(); ++x) out << x << ',' << opt(basin[x]) << '\n';
}

}  // namespace fedpart
