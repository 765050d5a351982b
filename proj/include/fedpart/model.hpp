#pragma once

// Domain types for the client-participation game and the scenario document
// that carries a full game instance.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace fedpart {

using ClientId = int;
using Count = std::int64_t;

class ScenarioError : public std::runtime_error {
 public:
  enum class Kind { schema, invariant, duplicate_id };

  ScenarioError(Kind kind, const std::string& what);

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct Client {
  ClientId id = 0;
  Count samples = 1;
  double cost = 0.0;

  friend bool operator==(const Client&, const Client&) = default;
};

struct Prior {
  double sigma_theta_sq = 0.0;

  friend bool operator==(const Prior&, const Prior&) = default;
};

// Cost generators. Index i runs 1..M in cost order.
struct TableCost {
  std::vector<double> costs;
};
// c(i) = c_min + slope * i
struct AffineCost {
  double c_min = 0.0;
  double slope = 0.0;
};
// c(i) = base + scale * i^exponent
struct PowerCost {
  double base = 0.0;
  double scale = 0.0;
  double exponent = 1.0;
};
// c(i) = U(i, n); U(1, n) = 0 is replaced by `floor`.
struct MirrorUtilityCost {
  double floor = 1e-9;
};
using CostModel = std::variant<TableCost, AffineCost, PowerCost, MirrorUtilityCost>;

struct UtilityContext {
  Count samples = 1;
  double sigma_theta_sq = 0.0;
};

// Returns M strictly positive, non-decreasing costs or throws ScenarioError.
std::vector<double> expand_cost_model(const CostModel& model, int count,
                                      std::optional<UtilityContext> context = std::nullopt);

// Homogeneous mean-estimation utility evaluated at K = N / n_ref.
struct BuiltinHomogeneousOracle {
  Count n_ref = 1;
  friend bool operator==(const BuiltinHomogeneousOracle&, const BuiltinHomogeneousOracle&) = default;
};
// Step function: u(N) is the value of the last point with point.first <= N,
// 0 below the first point.
struct TableOracle {
  std::vector<std::pair<Count, double>> points;
  friend bool operator==(const TableOracle&, const TableOracle&) = default;
};
// u(N) = scale * ln(1 + rate * N)
struct LogSaturatingOracle {
  double scale = 1.0;
  double rate = 1.0;
  friend bool operator==(const LogSaturatingOracle&, const LogSaturatingOracle&) = default;
};
using OracleSpec = std::variant<BuiltinHomogeneousOracle, TableOracle, LogSaturatingOracle>;

enum class UtilityMode { homogeneous, heterogeneous, oracle };

std::string_view to_string(UtilityMode mode);
UtilityMode parse_utility_mode(std::string_view text);

struct InitialExpectation {
  Count value = 0;
  friend bool operator==(const InitialExpectation&, const InitialExpectation&) = default;
};
struct InitialCoalition {
  std::vector<ClientId> members;
  friend bool operator==(const InitialCoalition&, const InitialCoalition&) = default;
};
using InitialCondition = std::variant<std::monostate, InitialExpectation, InitialCoalition>;

// A validated game instance. Build through load_scenario or make_scenario so
// the invariants hold: ids unique, samples >= 1, cost > 0, homogeneous rosters
// share one sample count and are sorted by cost (stable).
struct Scenario {
  std::string name;
  std::vector<Client> clients;
  Prior prior;
  UtilityMode mode = UtilityMode::homogeneous;
  std::optional<OracleSpec> oracle;
  InitialCondition initial;

  int size() const { return static_cast<int>(clients.size()); }
  Count total_samples() const;
  // Upper end of the expectation domain: M clients (homogeneous) or N_total samples.
  Count domain_max() const;
  // Position of `id` in `clients`; throws std::out_of_range.
  std::size_t index_of(ClientId id) const;
  double sigma2() const { return prior.sigma_theta_sq; }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Validates and normalizes a programmatically built scenario.
Scenario make_scenario(Scenario draft);

Scenario load_scenario(std::string_view json_text);
Scenario load_scenario_file(const std::string& path);

nlohmann::json to_json(const Scenario& scenario);
std::string dump_scenario(const Scenario& scenario);

}  // namespace fedpart
