#pragma once

// Payment schedules that move the dynamic off the empty coalition and across
// tipping points up to the largest equilibrium.

#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "fedpart/dynamics.hpp"

namespace fedpart {

struct PaidClient {
  ClientId id = 0;
  double amount = 0.0;

  friend bool operator==(const PaidClient&, const PaidClient&) = default;
};

struct PaymentStage {
  Count at_point = 0;  // where the dynamic was stuck
  std::vector<PaidClient> paid;
  Count post_point = 0;  // where it settled after this stage

  friend bool operator==(const PaymentStage&, const PaymentStage&) = default;
};

struct PaymentSchedule {
  std::vector<PaymentStage> stages;
  double total = 0.0;
  Count final_point = 0;
  std::vector<ClientId> final_coalition;  // ascending ids
  bool budget_truncated = false;

  friend bool operator==(const PaymentSchedule&, const PaymentSchedule&) = default;
};

struct PlanOptions {
  std::optional<double> budget;
  // Pay max(0, cost - utility at the stage's point) instead of the full cost.
  bool efficient = false;
};

// Equal-sample roster. At every stuck point pays the cheapest non-members up
// to the next point x with h(x) >= x, then lets the dynamic run.
PaymentSchedule plan_homogeneous(const Scenario& scenario, const PlanOptions& options = {});

// Smallest j > current with h(j) >= j.
std::optional<Count> next_tipping(Count current, const RealizationMap& h);

struct KnapsackCandidate {
  ClientId id = 0;
  Count samples = 1;
  double price = 0.0;
};

struct KnapsackChoice {
  std::vector<ClientId> ids;  // ascending
  double price = 0.0;
};

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Minimum-price subset whose samples reach `deficit`. Ties go to fewer
// clients, then the lexicographically smallest id set. Throws
// InfeasibleError when all candidates together fall short.
KnapsackChoice knapsack_min_payment(std::span<const KnapsackCandidate> candidates, Count deficit);

// Oracle or heterogeneous roster: per-stage knapsack over non-members to cover
// the sample deficit to the next tipping point. Paid clients stay subsidized.
PaymentSchedule plan_oracle(const Scenario& scenario, const PlanOptions& options = {});

// plan_homogeneous or plan_oracle by utility mode.
PaymentSchedule plan_payment(const Scenario& scenario, const PlanOptions& options = {});

double total_payment(const PaymentSchedule& schedule);

// Strict form of the stopping condition on a settled coalition: every member
// has utility above its cost and every non-member would stay below its cost
// one unit past the coalition. Reported after planning, never used to stop it.
bool strict_terminal(const Scenario& scenario, std::span<const ClientId> coalition);

void write_payment_csv(std::ostream& out, const PaymentSchedule& schedule);
void write_payment_text(std::ostream& out, const PaymentSchedule& schedule);

}  // namespace fedpart
