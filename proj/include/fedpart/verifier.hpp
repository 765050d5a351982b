#pragma once

// Brute-force oracles and the randomized cross-check battery.
//
// The brute_force_* functions only depend on the model and utility formulas;
// they re-derive h, the dynamic, and the optimal payments by direct
// enumeration so they can check dynamics, equilibria and payment.
//
// Battery generator (stable across implementations):
//   state' = 6364136223846793005 * state + 1442695040888963407  (mod 2^64),
//   state_0 = seed; every draw advances once and uses the new state.
//   unit()          = (state >> 11) * 2^-53
//   integer(a, b)   = a + floor(unit() * (b - a + 1))
//   log_uniform(lo, hi) = 10^(log10 lo + (log10 hi - log10 lo) * unit())
// A scenario draws, in order: M = integer(1, max_clients); sigma2 =
// max_sigma2 * unit(); for oracle mode scale = 0.1 + 1.9 unit() and rate =
// 0.05 + 0.95 unit() (log-saturating); for homogeneous mode n = integer(1,
// max_samples); then per client i = 1..M: samples = integer(1, max_samples)
// (non-homogeneous modes only) and cost = log_uniform(min_cost, max_cost);
// finally the initial expectation = integer(0, domain_max).

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fedpart/model.hpp"
#include "fedpart/payment.hpp"

namespace fedpart {

// Independent h(x) for every utility mode.
Count brute_force_h(const Scenario& scenario, Count x);

std::vector<Count> brute_force_fixed_points(const Scenario& scenario);

// Limit of the dynamic started at expectation `start` (oracle: from the
// cheapest clients whose samples first reach `start`); nullopt when it does
// not settle within domain_max + 10 steps.
std::optional<Count> brute_force_limit(const Scenario& scenario, Count start);

// How paid clients behave after the round they are paid in.
enum class SubsidyModel {
  per_round,  // paid for one round, then best-respond like everyone else
  permanent,  // stay in the coalition for the rest of the run
};

struct Kickstart {
  std::vector<ClientId> payments;  // in payment order; per_round may repeat an id
  double total = 0.0;
};

// Cheapest payments that make the dynamic from the empty coalition settle at
// or above `target`. per_round searches every payment set in every round
// (shortest path over dynamic states); permanent enumerates all 2^M subsets.
// nullopt when no payments reach the target. Throws std::invalid_argument for
// more than 15 clients.
std::optional<Kickstart> brute_force_min_kickstart(const Scenario& scenario, Count target,
                                                   SubsidyModel model = SubsidyModel::per_round);

// Minimum price by subset enumeration (at most 20 candidates); nullopt if infeasible.
std::optional<double> brute_force_knapsack(std::span<const KnapsackCandidate> candidates, Count deficit);

struct BatteryLimits {
  UtilityMode mode = UtilityMode::homogeneous;
  int max_clients = 12;
  Count max_samples = 10;
  double min_cost = 1e-3;
  double max_cost = 10.0;
  double max_sigma2 = 2.0;
};

struct KnapsackInstance {
  std::vector<KnapsackCandidate> candidates;
  Count deficit = 1;
};

class BatteryGenerator {
 public:
  explicit BatteryGenerator(std::uint64_t seed);

  double unit();
  std::int64_t integer(std::int64_t lo, std::int64_t hi);
  double log_uniform(double lo, double hi);

  Scenario scenario(const BatteryLimits& limits, const std::string& name);
  // Candidates draw samples integer(1, 10) and prices log_uniform(1e-3, 10);
  // deficit = integer(1, total samples).
  KnapsackInstance knapsack(int max_candidates);

 private:
  std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL, 1442695040888963407ULL, 0ULL> engine_;
};

struct CheckOutcome {
  std::string name;
  bool passed = true;
  bool asserted = true;  // false: reported only
  std::string details;
  std::string counterexample;  // scenario document plus inputs, set on failure
};

struct VerificationReport {
  std::string scenario;
  std::vector<CheckOutcome> checks;

  bool passed() const;  // every asserted check passed
};

// Cross-checks one scenario against the brute-force oracles.
VerificationReport verify_scenario(const Scenario& scenario);

struct BatteryReport {
  std::uint64_t seed = 0;
  int count = 0;
  BatteryLimits limits;
  std::vector<VerificationReport> scenarios;

  bool passed() const;
};

BatteryReport run_battery(std::uint64_t seed, int count, const BatteryLimits& limits = {});

// Scenarios the battery would check, for writing to disk.
std::vector<Scenario> generate_battery(std::uint64_t seed, int count, const BatteryLimits& limits = {});

void write_report_text(std::ostream& out, const BatteryReport& report);
void write_report_csv(std::ostream& out, const BatteryReport& report);

}  // namespace fedpart
