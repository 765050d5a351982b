#pragma once

// Realization maps h(.) and the best-response participation dynamic.
//
// Expectations are counted in clients in the homogeneous setting and in
// samples otherwise. Every client best-responds simultaneously each step.

#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "fedpart/model.hpp"

namespace fedpart {

// Clients ordered by z-score (descending, ties by ascending id) truncated to
// the shortest prefix whose samples reach the expectation.
struct InferredCoalition {
  std::vector<ClientId> members;  // in z order
  std::size_t prefix_length = 0;
  Count samples = 0;
};

InferredCoalition infer_coalition(const Scenario& scenario, Count expectation);

Count h_homogeneous(const Scenario& scenario, Count k);
Count h_heterogeneous(const Scenario& scenario, Count k);
Count h_oracle(const Scenario& scenario, Count n);

// Dispatches on the scenario's utility mode.
Count realize(const Scenario& scenario, Count x);

// h over [0, domain_max] with a lazily filled memo. Safe for concurrent calls.
class RealizationMap {
 public:
  explicit RealizationMap(Scenario scenario);

  Count operator()(Count x) const;
  Count domain_max() const { return domain_max_; }
  const Scenario& scenario() const { return scenario_; }

 private:
  Scenario scenario_;
  Count domain_max_;
  mutable std::unique_ptr<std::mutex> mutex_;
  mutable std::vector<Count> memo_;  // -1 marks "not computed"
};

struct DynamicsState {
  int step = 0;
  Count expectation = 0;
  std::vector<ClientId> coalition;  // ascending ids
  Count coalition_samples = 0;

  friend bool operator==(const DynamicsState&, const DynamicsState&) = default;
};

struct ClientUtility {
  ClientId id = 0;
  double value = 0.0;

  friend bool operator==(const ClientUtility&, const ClientUtility&) = default;
};

struct StepEvents {
  std::vector<ClientId> joined;
  std::vector<ClientId> left;
  // Utility each evaluating client saw this step, ascending ids. Clients
  // outside the inferred prefix do not evaluate.
  std::vector<ClientUtility> utilities;

  friend bool operator==(const StepEvents&, const StepEvents&) = default;
};

enum class Terminal { converged, max_steps_exceeded };

struct DynamicsTrace {
  std::vector<DynamicsState> states;
  std::vector<StepEvents> events;  // events[t] leads from states[t] to states[t + 1]
  Terminal terminal = Terminal::max_steps_exceeded;

  const DynamicsState& last() const { return states.back(); }
  bool converged() const { return terminal == Terminal::converged; }
  // Number of steps taken.
  int steps() const { return static_cast<int>(states.size()) - 1; }
};

// Starting states. From an expectation: homogeneous takes the K cheapest
// clients, heterogeneous the inferred coalition, oracle the cheapest clients
// whose samples first reach the expectation.
DynamicsState state_from_expectation(const Scenario& scenario, Count expectation);
DynamicsState state_from_coalition(const Scenario& scenario, std::vector<ClientId> members);
// Throws std::invalid_argument when the scenario has no initial condition.
DynamicsState initial_state(const Scenario& scenario);

struct StepResult {
  DynamicsState next;
  StepEvents events;
};

// `subsidized` clients (ascending ids) are paid to stay in regardless of utility.
StepResult step(const DynamicsState& state, const Scenario& scenario,
                std::span<const ClientId> subsidized = {});

int default_max_steps(const Scenario& scenario);

DynamicsTrace simulate(const Scenario& scenario, const DynamicsState& start,
                       std::optional<int> max_steps = std::nullopt,
                       std::span<const ClientId> subsidized = {});
DynamicsTrace simulate(const Scenario& scenario, std::optional<int> max_steps = std::nullopt);

void write_trace_csv(std::ostream& out, const DynamicsTrace& trace);
void write_trace_text(std::ostream& out, const DynamicsTrace& trace);

}  // namespace fedpart
