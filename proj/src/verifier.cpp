#include "fedpart/verifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "fedpart/dynamics.hpp"
#include "fedpart/equilibria.hpp"
#include "fedpart/format.hpp"
#include "fedpart/utility.hpp"

namespace fedpart {

namespace {

using Mask = std::uint64_t;

bool bit(Mask m, std::size_t i) { return (m >> i) & 1U; }

double homogeneous_u(const Scenario& s, Count k) {
  return utility_gain_homogeneous(k, s.clients.front().samples, s.sigma2());
}

// Members of the coalition realized from expectation x (homogeneous or
// heterogeneous), as a bit mask over client positions.
Mask expectation_members(const Scenario& s, Count x) {
  Mask out = 0;
  if (s.mode == UtilityMode::homogeneous) {
    const double u = homogeneous_u(s, x);
    for (std::size_t i = 0; i < s.clients.size(); ++i) {
      if (s.clients[i].cost <= u) out |= Mask{1} << i;
    }
    return out;
  }
  if (x <= 0) return 0;
  // selection by z, highest first, lowest id on ties
  const double k = static_cast<double>(x);
  std::vector<double> z;
  for (const auto& c : s.clients) z.push_back(additional_gain(c.samples, k, s.sigma2()) - c.cost);
  std::vector<bool> used(s.clients.size());
  std::vector<std::size_t> prefix;
  Count covered = 0;
  while (covered < x && prefix.size() < s.clients.size()) {
    std::size_t pick = s.clients.size();
    for (std::size_t i = 0; i < s.clients.size(); ++i) {
      if (used[i]) continue;
      if (pick == s.clients.size() || z[i] > z[pick] || (z[i] == z[pick] && s.clients[i].id < s.clients[pick].id)) {
        pick = i;
      }
    }
    used[pick] = true;
    prefix.push_back(pick);
    covered += s.clients[pick].samples;
  }
  std::vector<Count> samples;
  for (std::size_t idx : prefix) samples.push_back(s.clients[idx].samples);
  for (std::size_t j = 0; j < prefix.size(); ++j) {
    if (utility_gain(samples, j, s.sigma2()) >= s.clients[prefix[j]].cost) out |= Mask{1} << prefix[j];
  }
  return out;
}

Count mask_samples(const Scenario& s, Mask m) {
  Count total = 0;
  for (std::size_t i = 0; i < s.clients.size(); ++i) {
    if (bit(m, i)) total += s.clients[i].samples;
  }
  return total;
}

// Oracle-mode best responses to the coalition `current`.
Mask oracle_members(const Scenario& s, Mask current) {
  const Count total = mask_samples(s, current);
  Mask out = 0;
  for (std::size_t i = 0; i < s.clients.size(); ++i) {
    const Count seen = bit(current, i) ? total : total + s.clients[i].samples;
    if (oracle_utility(*s.oracle, seen, s.sigma2()) >= s.clients[i].cost) out |= Mask{1} << i;
  }
  return out;
}

// A dynamic state keyed by expectation (homogeneous, heterogeneous) or by
// coalition mask (oracle).
struct Dynamic {
  const Scenario& s;

  Mask volunteers(Mask key) const {
    return s.mode == UtilityMode::oracle ? oracle_members(s, key) : expectation_members(s, static_cast<Count>(key));
  }
  Mask key_of(Mask coalition) const {
    switch (s.mode) {
      case UtilityMode::homogeneous: return static_cast<Mask>(std::popcount(coalition));
      case UtilityMode::heterogeneous: return static_cast<Mask>(mask_samples(s, coalition));
      case UtilityMode::oracle: return coalition;
    }
    return 0;
  }
  Count value_of(Mask key) const {
    return s.mode == UtilityMode::oracle ? mask_samples(s, key) : static_cast<Count>(key);
  }
  int step_bound() const { return static_cast<int>(s.domain_max()) + 10; }

  // Settled value from `key` with `forced` clients always in; nullopt if it does not settle.
  std::optional<Count> settle(Mask key, Mask forced) const {
    for (int t = 0; t < step_bound(); ++t) {
      const Mask next = key_of(volunteers(key) | forced);
      if (next == key) return value_of(key);
      key = next;
    }
    return std::nullopt;
  }
};

double price_sum(const Scenario& s, Mask m) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.clients.size(); ++i) {
    if (bit(m, i)) total += s.clients[i].cost;
  }
  return total;
}

std::vector<ClientId> mask_ids(const Scenario& s, Mask m) {
  std::vector<ClientId> ids;
  for (std::size_t i = 0; i < s.clients.size(); ++i) {
    if (bit(m, i)) ids.push_back(s.clients[i].id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

Mask cheapest_reaching(const Scenario& s, Count start) {
  std::vector<bool> used(s.clients.size());
  Mask out = 0;
  Count total = 0;
  while (total < start) {
    std::size_t pick = s.clients.size();
    for (std::size_t i = 0; i < s.clients.size(); ++i) {
      if (used[i]) continue;
      const auto& a = s.clients[i];
      if (pick == s.clients.size() || a.cost < s.clients[pick].cost ||
          (a.cost == s.clients[pick].cost && a.id < s.clients[pick].id)) {
        pick = i;
      }
    }
    if (pick == s.clients.size()) break;
    used[pick] = true;
    out |= Mask{1} << pick;
    total += s.clients[pick].samples;
  }
  return out;
}

}  // namespace

Count brute_force_h(const Scenario& s, Count x) {
  if (s.mode == UtilityMode::oracle) {
    const double u = oracle_utility(*s.oracle, x, s.sigma2());
    Count total = 0;
    for (const auto& c : s.clients) {
      if (u >= c.cost) total += c.samples;
    }
    return total;
  }
  const Mask m = expectation_members(s, x);
  return s.mode == UtilityMode::homogeneous ? std::popcount(m) : mask_samples(s, m);
}

std::vector<Count> brute_force_fixed_points(const Scenario& s) {
  std::vector<Count> out;
  for (Count x = 0; x <= s.domain_max(); ++x) {
    if (brute_force_h(s, x) == x) out.push_back(x);
  }
  return out;
}

std::optional<Count> brute_force_limit(const Scenario& s, Count start) {
  if (s.size() > 64) throw std::invalid_argument("brute_force_limit supports at most 64 clients");
  const Dynamic dyn{s};
  if (s.mode != UtilityMode::oracle) return dyn.settle(static_cast<Mask>(start), 0);
  return dyn.settle(cheapest_reaching(s, start), 0);
}

std::optional<Kickstart> brute_force_min_kickstart(const Scenario& s, Count target, SubsidyModel model) {
  if (s.size() > 15) throw std::invalid_argument("brute_force_min_kickstart supports at most 15 clients");
  const Dynamic dyn{s};
  const std::size_t m = s.clients.size();
  const Mask all = (Mask{1} << m) - 1;

  if (model == SubsidyModel::permanent) {
    std::optional<std::tuple<double, int, std::vector<ClientId>>> best;
    for (Mask paid = 0; paid <= all; ++paid) {
      const auto limit = dyn.settle(dyn.key_of(paid), paid);
      if (!limit || *limit < target) continue;
      std::tuple<double, int, std::vector<ClientId>> cand{price_sum(s, paid), std::popcount(paid), mask_ids(s, paid)};
      if (!best || cand < *best) best = cand;
    }
    if (!best) return std::nullopt;
    return Kickstart{std::get<2>(*best), std::get<0>(*best)};
  }

  // Shortest path: a round is "everyone best-responds, then the server pays
  // any subset of those who stayed out".
  std::map<Mask, double> dist;
  std::map<Mask, std::pair<Mask, Mask>> parent;  // key -> (previous key, paid mask)
  std::unordered_map<Mask, std::optional<Count>> settled;
  using Entry = std::pair<double, Mask>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[0] = 0.0;
  queue.push({0.0, 0});
  std::map<Mask, bool> done;
  while (!queue.empty()) {
    const auto [d, key] = queue.top();
    queue.pop();
    if (done[key]) continue;
    done[key] = true;
    auto it = settled.find(key);
    if (it == settled.end()) it = settled.emplace(key, dyn.settle(key, 0)).first;
    if (it->second && *it->second >= target) {
      Kickstart result;
      result.total = d;
      std::vector<Mask> rounds;
      for (auto p = parent.find(key); p != parent.end(); p = parent.find(p->second.first)) {
        rounds.push_back(p->second.second);
      }
      std::reverse(rounds.begin(), rounds.end());
      for (Mask r : rounds) {
        for (ClientId id : mask_ids(s, r)) result.payments.push_back(id);
      }
      return result;
    }
    const Mask stay = dyn.volunteers(key);
    const Mask out = all & ~stay;
    // every subset of `out`, including the empty one
    for (Mask q = out;; q = (q - 1) & out) {
      double cost = d;
      for (std::size_t i = 0; i < m; ++i) {
        if (bit(q, i)) cost += s.clients[i].cost;
      }
      const Mask next = dyn.key_of(stay | q);
      const auto found = dist.find(next);
      if (!done[next] && (found == dist.end() || cost < found->second)) {
        dist[next] = cost;
        parent[next] = {key, q};
        queue.push({cost, next});
      }
      if (q == 0) break;
    }
  }
  return std::nullopt;
}

std::optional<double> brute_force_knapsack(std::span<const KnapsackCandidate> candidates, Count deficit) {
  if (candidates.size() > 20) throw std::invalid_argument("brute_force_knapsack supports at most 20 candidates");
  std::optional<double> best;
  const Mask all = (Mask{1} << candidates.size()) - 1;
  for (Mask m = 0; m <= all; ++m) {
    Count covered = 0;
    double price = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!bit(m, i)) continue;
      covered += candidates[i].samples;
      price += candidates[i].price;
    }
    if (covered >= deficit && (!best || price < *best)) best = price;
  }
  return best;
}

BatteryGenerator::BatteryGenerator(std::uint64_t seed) : engine_(seed) {}

double BatteryGenerator::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::int64_t BatteryGenerator::integer(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(std::floor(unit() * static_cast<double>(hi - lo + 1)));
}

double BatteryGenerator::log_uniform(double lo, double hi) {
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  return std::pow(10.0, a + (b - a) * unit());
}

Scenario BatteryGenerator::scenario(const BatteryLimits& limits, const std::string& name) {
  Scenario s;
  s.name = name;
  s.mode = limits.mode;
  const auto m = static_cast<int>(integer(1, limits.max_clients));
  s.prior.sigma_theta_sq = limits.max_sigma2 * unit();
  if (limits.mode == UtilityMode::oracle) {
    const double scale = 0.1 + 1.9 * unit();
    const double rate = 0.05 + 0.95 * unit();
    s.oracle = LogSaturatingOracle{scale, rate};
  }
  Count shared = 0;
  if (limits.mode == UtilityMode::homogeneous) shared = integer(1, limits.max_samples);
  for (int i = 1; i <= m; ++i) {
    Client c;
    c.id = i;
    c.samples = limits.mode == UtilityMode::homogeneous ? shared : integer(1, limits.max_samples);
    c.cost = log_uniform(limits.min_cost, limits.max_cost);
    s.clients.push_back(c);
  }
  s.initial = InitialExpectation{integer(0, s.domain_max())};
  return make_scenario(std::move(s));
}

KnapsackInstance BatteryGenerator::knapsack(int max_candidates) {
  KnapsackInstance inst;
  const auto k = static_cast<int>(integer(1, max_candidates));
  Count total = 0;
  for (int i = 1; i <= k; ++i) {
    KnapsackCandidate c;
    c.id = i;
    c.samples = integer(1, 10);
    c.price = log_uniform(1e-3, 10.0);
    total += c.samples;
    inst.candidates.push_back(c);
  }
  inst.deficit = integer(1, total);
  return inst;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed || !c.asserted; });
}

bool BatteryReport::passed() const {
  return std::all_of(scenarios.begin(), scenarios.end(), [](const auto& r) { return r.passed(); });
}

namespace {

bool close_rel(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

std::string payload(const Scenario& s, const std::string& inputs) {
  return to_json(s).dump() + (inputs.empty() ? "" : " | " + inputs);
}

class Checker {
 public:
  explicit Checker(const Scenario& s) : s_(s) { report_.scenario = s.name; }

  void check(const std::string& name, bool ok, std::string details = {}, std::string inputs = {},
             bool asserted = true) {
    CheckOutcome c;
    c.name = name;
    c.passed = ok;
    c.asserted = asserted;
    c.details = std::move(details);
    if (!ok) c.counterexample = payload(s_, inputs);
    report_.checks.push_back(std::move(c));
  }

  VerificationReport take() { return std::move(report_); }

 private:
  const Scenario& s_;
  VerificationReport report_;
};

bool eventually_monotone(const DynamicsTrace& trace) {
  int direction = 0;  // +1 rising, -1 falling
  for (std::size_t t = 1; t < trace.states.size(); ++t) {
    const Count prev = trace.states[t - 1].expectation;
    const Count cur = trace.states[t].expectation;
    if (cur == prev) continue;
    const int d = cur > prev ? 1 : -1;
    if (direction == 0) direction = d;
    else if (d != direction) return false;
  }
  return true;
}

bool strictly_increasing_costs(const Scenario& s) {
  for (std::size_t i = 1; i < s.clients.size(); ++i) {
    if (!(s.clients[i].cost > s.clients[i - 1].cost)) return false;
  }
  return true;
}

}  // namespace

VerificationReport verify_scenario(const Scenario& s) {
  Checker chk(s);
  const bool homogeneous = s.mode == UtilityMode::homogeneous;
  const bool heterogeneous = s.mode == UtilityMode::heterogeneous;
  const RealizationMap h(s);
  const Count top = s.domain_max();

  // h: bounds, monotonicity, agreement with the independent evaluation
  {
    bool bounded = true, monotone = true, agree = true;
    std::string where_bound, where_mono, where_agree;
    for (Count x = 0; x <= top; ++x) {
      const Count v = h(x);
      if (v < 0 || v > top) {
        bounded = false;
        where_bound = "x=" + std::to_string(x);
      }
      if (x > 0 && v < h(x - 1) && monotone) {
        monotone = false;
        where_mono = "x=" + std::to_string(x) + " h(x-1)=" + std::to_string(h(x - 1)) + " h(x)=" + std::to_string(v);
      }
      if (v != brute_force_h(s, x) && agree) {
        agree = false;
        where_agree = "x=" + std::to_string(x);
      }
    }
    chk.check("h_bounds", bounded, where_bound, where_bound);
    chk.check("h_monotone", monotone, where_mono, where_mono, !heterogeneous);
    chk.check("h_matches_oracle", agree, where_agree, where_agree);
  }

  const auto reports = enumerate_fixed_points(h);
  {
    std::vector<Count> points;
    for (const auto& r : reports) points.push_back(r.point);
    const auto expected = brute_force_fixed_points(s);
    std::ostringstream d;
    d << points.size() << " fixed points";
    chk.check("fixed_points", points == expected, d.str());
    const bool sound = std::all_of(reports.begin(), reports.end(), [&](const auto& r) { return h(r.point) == r.point; });
    const bool has_zero = !points.empty() && points.front() == 0;
    chk.check("fixed_points_contain_zero", has_zero);
    chk.check("fixed_point_soundness", sound);
  }

  // every starting point: simulate vs independent loop, bounds on the trace
  {
    bool limits_ok = true, terminated = true, monotone = true, sound = true;
    std::string where_limit, where_term, where_mono;
    for (Count x = 0; x <= top; ++x) {
      const auto trace = simulate(s, state_from_expectation(s, x));
      const std::optional<Count> got = trace.converged() ? std::optional(trace.last().expectation) : std::nullopt;
      const auto expected = brute_force_limit(s, x);
      if (got != expected && limits_ok) {
        limits_ok = false;
        where_limit = "start=" + std::to_string(x);
      }
      if ((!trace.converged() || trace.steps() > top + 2) && terminated) {
        terminated = false;
        where_term = "start=" + std::to_string(x) + " steps=" + std::to_string(trace.steps());
      }
      if (!eventually_monotone(trace) && monotone) {
        monotone = false;
        where_mono = "start=" + std::to_string(x);
      }
      if (trace.converged() && s.mode != UtilityMode::oracle && h(trace.last().expectation) != trace.last().expectation) {
        sound = false;
      }
      if (trace.converged() && s.mode == UtilityMode::oracle &&
          h_oracle(s, trace.last().coalition_samples) != trace.last().coalition_samples) {
        sound = false;
      }
    }
    chk.check("limits_match_oracle", limits_ok, where_limit, where_limit);
    chk.check("termination_bound", terminated, where_term, where_term, homogeneous);
    chk.check("eventually_monotone", monotone, where_mono, where_mono, homogeneous);
    chk.check("limit_is_fixed_point", sound);
  }

  // classification against unit perturbations of the dynamic
  if (s.mode != UtilityMode::oracle) {
    bool ok = true;
    std::string where;
    for (const auto& r : reports) {
      auto limit_from = [&](Count x) { return brute_force_limit(s, std::clamp<Count>(x, 0, top)); };
      if (r.kind == EquilibriumKind::stable) {
        if (limit_from(r.point - 1) != r.point || limit_from(r.point + 1) != r.point) {
          ok = false;
          where = "stable " + std::to_string(r.point);
        }
      } else if (r.kind == EquilibriumKind::tipping) {
        const auto lo = limit_from(r.point - 1);
        const auto hi = limit_from(r.point + 1);
        if (!lo || !hi || *lo >= r.point || *hi <= r.point) {
          ok = false;
          where = "tipping " + std::to_string(r.point);
        }
      }
    }
    chk.check("classification_vs_perturbation", ok, where, where, homogeneous);
  }

  if (homogeneous) {
    // find_equilibrium_above == smallest fixed point >= x; sign of h(x) - x between fixed points
    bool above_ok = true, sign_ok = true;
    std::string where;
    for (Count x = 0; x <= top; ++x) {
      if (h(x) < x) continue;
      const auto smallest = std::find_if(reports.begin(), reports.end(), [&](const auto& r) { return r.point >= x; });
      if (smallest == reports.end() || find_equilibrium_above(x, h) != smallest->point) {
        above_ok = false;
        where = "x=" + std::to_string(x);
      }
    }
    for (std::size_t k = 0; k + 1 < reports.size(); ++k) {
      int sign = 0;
      for (Count x = reports[k].point + 1; x < reports[k + 1].point; ++x) {
        const int sx = h(x) > x ? 1 : -1;
        if (sign == 0) sign = sx;
        else if (sx != sign) sign_ok = false;
      }
    }
    chk.check("find_equilibrium_above", above_ok, where, where);
    // integer h can step over the diagonal without meeting it, so this is reported only
    chk.check("constant_sign_between_fixed_points", sign_ok, {}, {}, false);
  }

  // knapsack on the roster itself, every deficit
  if (s.size() <= 20) {
    std::vector<KnapsackCandidate> candidates;
    for (const auto& c : s.clients) candidates.push_back({c.id, c.samples, c.cost});
    bool ok = true;
    std::string where;
    for (Count d = 1; d <= s.total_samples(); ++d) {
      const auto dp = knapsack_min_payment(candidates, d);
      const auto bf = brute_force_knapsack(candidates, d);
      if (!bf || !close_rel(dp.price, *bf)) {
        ok = false;
        where = "deficit=" + std::to_string(d);
        break;
      }
    }
    chk.check("knapsack_matches_enumeration", ok, where, where);
  }

  // payment plans
  const Count max_point = reports.empty() ? 0 : reports.back().point;
  const auto full = plan_payment(s);
  const auto efficient = plan_payment(s, PlanOptions{std::nullopt, true});
  double all_costs = 0.0;
  for (const auto& c : s.clients) all_costs += c.cost;
  chk.check("plan_total_resums", full.total == total_payment(full));
  chk.check("plan_below_paying_everyone", full.total <= all_costs * (1.0 + 1e-12));
  chk.check("efficient_not_above_full", efficient.total <= full.total * (1.0 + 1e-12) + 0.0,
            format_number(efficient.total) + " vs " + format_number(full.total), {}, homogeneous);
  {
    bool progress = true;
    for (const auto& st : full.stages) progress = progress && st.post_point > st.at_point;
    chk.check("plan_stages_progress", progress, {}, {}, homogeneous);
  }
  chk.check("plan_reaches_max_fixed_point", full.final_point == max_point,
            "final " + std::to_string(full.final_point) + " max " + std::to_string(max_point), {}, homogeneous);

  chk.check("plan_final_strict_terminal", strict_terminal(s, full.final_coalition), {}, {}, false);

  const bool kickstart_feasible = s.size() <= (homogeneous ? 15 : 10);
  if (kickstart_feasible) {
    const auto best = brute_force_min_kickstart(s, max_point, SubsidyModel::per_round);
    const bool ok = best && close_rel(best->total, full.total);
    const bool strict = strictly_increasing_costs(s);
    chk.check(strict || !homogeneous ? "plan_optimal_per_round" : "plan_optimal_per_round_ties", ok,
              "plan " + format_number(full.total) + " oracle " + (best ? format_number(best->total) : "none"),
              "target=" + std::to_string(max_point), homogeneous && strict);
    const auto permanent = brute_force_min_kickstart(s, max_point, SubsidyModel::permanent);
    const bool same = permanent && close_rel(permanent->total, full.total);
    chk.check("plan_vs_permanent_subsidy_optimum", same,
              "plan " + format_number(full.total) + " permanent " +
                  (permanent ? format_number(permanent->total) : "none"),
              "target=" + std::to_string(max_point), false);
  }
  return chk.take();
}

std::vector<Scenario> generate_battery(std::uint64_t seed, int count, const BatteryLimits& limits) {
  BatteryGenerator gen(seed);
  std::vector<Scenario> out;
  for (int k = 0; k < count; ++k) {
    out.push_back(gen.scenario(limits, "battery-s" + std::to_string(seed) + "-" + std::to_string(k)));
  }
  return out;
}

BatteryReport run_battery(std::uint64_t seed, int count, const BatteryLimits& limits) {
  BatteryReport report;
  report.seed = seed;
  report.count = count;
  report.limits = limits;
  for (const auto& s : generate_battery(seed, count, limits)) report.scenarios.push_back(verify_scenario(s));
  return report;
}

namespace {

struct Tally {
  int passed = 0;
  int failed = 0;
  bool asserted = true;
  const CheckOutcome* first_failure = nullptr;
  std::string failing_scenario;
};

std::vector<std::pair<std::string, Tally>> tally(const BatteryReport& report) {
  std::vector<std::pair<std::string, Tally>> out;
  for (const auto& sc : report.scenarios) {
    for (const auto& c : sc.checks) {
      auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == c.name; });
      if (it == out.end()) {
        out.push_back({c.name, Tally{}});
        it = std::prev(out.end());
        it->second.asserted = c.asserted;
      }
      it->second.asserted = it->second.asserted && c.asserted;
      if (c.passed) {
        ++it->second.passed;
      } else {
        ++it->second.failed;
        if (!it->second.first_failure) {
          it->second.first_failure = &c;
          it->second.failing_scenario = sc.scenario;
        }
      }
    }
  }
  return out;
}

}  // namespace

void write_report_text(std::ostream& out, const BatteryReport& report) {
  out << "battery seed=" << report.seed << " count=" << report.count << " mode=" << to_string(report.limits.mode)
      << " max_clients=" << report.limits.max_clients << '\n';
  for (const auto& [name, t] : tally(report)) {
    const char* status = t.failed == 0 ? "PASS" : (t.asserted ? "FAIL" : "NOTE");
    out << status << "  " << name << "  " << t.passed << "/" << (t.passed + t.failed)
        << (t.asserted ? "" : "  (reported)") << '\n';
  }
  for (const auto& [name, t] : tally(report)) {
    if (!t.first_failure || !t.asserted) continue;
    out << "counterexample " << name << " [" << t.failing_scenario << "] " << t.first_failure->details << '\n'
        << "  " << t.first_failure->counterexample << '\n';
  }
  out << (report.passed() ? "battery passed" : "battery FAILED") << '\n';
}

void write_report_csv(std::ostream& out, const BatteryReport& report) {
  out << "scenario,check,status,asserted,details\n";
  for (const auto& sc : report.scenarios) {
    for (const auto& c : sc.checks) {
      std::string details = c.details;
      std::replace(details.begin(), details.end(), ',', ';');
      out << sc.scenario << ',' << c.name << ',' << (c.passed ? "pass" : "fail") << ','
          << (c.asserted ? "true" : "false") << ',' << details << '\n';
    }
  }
}

}  // namespace fedpart
