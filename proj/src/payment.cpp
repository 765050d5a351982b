#include "fedpart/payment.hpp"

#include <algorithm>
#include <limits>

#include "fedpart/format.hpp"
#include "fedpart/utility.hpp"

namespace fedpart {

std::optional<Count> next_tipping(Count current, const RealizationMap& h) {
  for (Count j = current + 1; j <= h.domain_max(); ++j) {
    if (h(j) >= j) return j;
  }
  return std::nullopt;
}

namespace {

bool fits_budget(const PlanOptions& options, double total, std::span<const PaidClient> stage) {
  if (!options.budget) return true;
  double t = total;
  for (const auto& p : stage) t += p.amount;
  return t <= *options.budget;
}

void add_stage(PaymentSchedule& schedule, PaymentStage stage) {
  for (const auto& p : stage.paid) schedule.total += p.amount;
  schedule.final_point = stage.post_point;
  schedule.stages.push_back(std::move(stage));
}

void insert_sorted(std::vector<ClientId>& ids, std::span<const ClientId> more) {
  ids.insert(ids.end(), more.begin(), more.end());
  std::sort(ids.begin(), ids.end());
}

}  // namespace

PaymentSchedule plan_homogeneous(const Scenario& scenario, const PlanOptions& options) {
  if (scenario.mode != UtilityMode::homogeneous) {
    throw std::invalid_argument("plan_homogeneous needs a homogeneous scenario");
  }
  const RealizationMap h(scenario);
  const Count n = scenario.clients.front().samples;
  PaymentSchedule schedule;
  std::vector<ClientId> subsidized;
  Count point = 0;

  while (auto target = next_tipping(point, h)) {
    // the coalition at a stuck point is the `point` cheapest clients
    PaymentStage stage;
    stage.at_point = point;
    const double utility = utility_gain_homogeneous(point, n, scenario.sigma2());
    for (Count i = point; i < *target; ++i) {
      const auto& c = scenario.clients[static_cast<std::size_t>(i)];
      stage.paid.push_back({c.id, options.efficient ? std::max(0.0, c.cost - utility) : c.cost});
    }
    if (!fits_budget(options, schedule.total, stage.paid)) {
      schedule.budget_truncated = true;
      break;
    }
    for (const auto& p : stage.paid) subsidized.push_back(p.id);
    std::sort(subsidized.begin(), subsidized.end());

    const auto trace = simulate(scenario, state_from_expectation(scenario, *target), std::nullopt, subsidized);
    stage.post_point = trace.last().expectation;
    const bool progressed = trace.converged() && stage.post_point > point;
    add_stage(schedule, std::move(stage));
    schedule.final_coalition = trace.last().coalition;
    if (!progressed) break;
    point = schedule.final_point;
  }
  return schedule;
}

KnapsackChoice knapsack_min_payment(std::span<const KnapsackCandidate> candidates, Count deficit) {
  if (deficit <= 0) throw std::invalid_argument("knapsack deficit must be positive");
  Count available = 0;
  for (const auto& c : candidates) available += c.samples;
  if (available < deficit) {
    throw InfeasibleError("infeasible: candidates hold " + std::to_string(available) + " samples, deficit " +
                          std::to_string(deficit));
  }

  std::vector<KnapsackCandidate> items(candidates.begin(), candidates.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

  // best[i][w]: cheapest (price, count) covering w samples from items[i..].
  struct Cell {
    double price = std::numeric_limits<double>::infinity();
    int count = 0;
    bool operator<(const Cell& o) const { return price != o.price ? price < o.price : count < o.count; }
    bool operator==(const Cell& o) const { return price == o.price && count == o.count; }
  };
  const auto width = static_cast<std::size_t>(deficit) + 1;
  std::vector<std::vector<Cell>> best(items.size() + 1, std::vector<Cell>(width));
  best[items.size()][0] = Cell{0.0, 0};
  auto with_item = [&](std::size_t i, std::size_t w) {
    const auto rest = static_cast<std::size_t>(std::max<Count>(0, static_cast<Count>(w) - items[i].samples));
    const Cell& tail = best[i + 1][rest];
    return Cell{items[i].price + tail.price, tail.count + 1};
  };
  for (std::size_t i = items.size(); i-- > 0;) {
    for (std::size_t w = 0; w < width; ++w) {
      const Cell take = with_item(i, w);
      best[i][w] = take < best[i + 1][w] ? take : best[i + 1][w];
    }
  }

  // Walk ids in ascending order and take an item whenever it is optimal.
  KnapsackChoice choice;
  choice.price = best[0][width - 1].price;
  std::size_t w = width - 1;
  for (std::size_t i = 0; i < items.size() && w > 0; ++i) {
    if (with_item(i, w) == best[i][w]) {
      choice.ids.push_back(items[i].id);
      w = static_cast<std::size_t>(std::max<Count>(0, static_cast<Count>(w) - items[i].samples));
    }
  }
  return choice;
}

PaymentSchedule plan_oracle(const Scenario& scenario, const PlanOptions& options) {
  if (scenario.mode == UtilityMode::homogeneous) {
    throw std::invalid_argument("plan_oracle needs an oracle or heterogeneous scenario");
  }
  const RealizationMap h(scenario);
  PaymentSchedule schedule;
  std::vector<ClientId> subsidized;
  DynamicsState state = state_from_coalition(scenario, {});

  while (auto target = next_tipping(state.coalition_samples, h)) {
    const Count have = state.coalition_samples;
    std::vector<Count> members;
    for (ClientId id : state.coalition) members.push_back(scenario.clients[scenario.index_of(id)].samples);

    std::vector<KnapsackCandidate> candidates;
    for (const auto& c : scenario.clients) {
      if (std::binary_search(state.coalition.begin(), state.coalition.end(), c.id)) continue;
      double price = c.cost;
      if (options.efficient) {
        double utility = 0.0;
        if (scenario.mode == UtilityMode::oracle) {
          utility = oracle_utility(*scenario.oracle, have, scenario.sigma2());
        } else {
          auto with_i = members;
          with_i.push_back(c.samples);
          utility = utility_gain(with_i, with_i.size() - 1, scenario.sigma2());
        }
        price = std::max(0.0, c.cost - utility);
      }
      candidates.push_back({c.id, c.samples, price});
    }
    const auto choice = knapsack_min_payment(candidates, *target - have);

    PaymentStage stage;
    stage.at_point = have;
    for (ClientId id : choice.ids) {
      const auto it = std::find_if(candidates.begin(), candidates.end(), [&](const auto& c) { return c.id == id; });
      stage.paid.push_back({id, it->price});
    }
    if (!fits_budget(options, schedule.total, stage.paid)) {
      schedule.budget_truncated = true;
      break;
    }
    insert_sorted(subsidized, choice.ids);

    auto start_members = state.coalition;
    insert_sorted(start_members, choice.ids);
    const auto trace =
        simulate(scenario, state_from_coalition(scenario, start_members), std::nullopt, subsidized);
    stage.post_point = trace.last().coalition_samples;
    const bool progressed = trace.converged() && stage.post_point > have;
    add_stage(schedule, std::move(stage));
    state = trace.last();
    schedule.final_coalition = state.coalition;
    if (!progressed) break;
  }
  return schedule;
}

PaymentSchedule plan_payment(const Scenario& scenario, const PlanOptions& options) {
  return scenario.mode == UtilityMode::homogeneous ? plan_homogeneous(scenario, options)
                                                   : plan_oracle(scenario, options);
}

double total_payment(const PaymentSchedule& schedule) {
  double total = 0.0;
  for (const auto& stage : schedule.stages) {
    for (const auto& p : stage.paid) total += p.amount;
  }
  return total;
}

bool strict_terminal(const Scenario& scenario, std::span<const ClientId> coalition) {
  const double s2 = scenario.sigma2();
  std::vector<Count> members;
  for (ClientId id : coalition) members.push_back(scenario.clients[scenario.index_of(id)].samples);
  Count total = 0;
  for (Count n : members) total += n;

  for (const auto& c : scenario.clients) {
    const auto pos = std::lower_bound(coalition.begin(), coalition.end(), c.id);
    const bool member = pos != coalition.end() && *pos == c.id;
    double u = 0.0;
    switch (scenario.mode) {
      case UtilityMode::homogeneous: {
        const auto k = static_cast<Count>(coalition.size());
        u = utility_gain_homogeneous(member ? k : k + 1, c.samples, s2);
        break;
      }
      case UtilityMode::oracle:
        u = oracle_utility(*scenario.oracle, member ? total : total + 1, s2);
        break;
      case UtilityMode::heterogeneous: {
        if (member) {
          u = utility_gain(members, static_cast<std::size_t>(pos - coalition.begin()), s2);
        } else {
          auto with_c = members;
          with_c.push_back(c.samples);
          u = utility_gain(with_c, with_c.size() - 1, s2);
        }
        break;
      }
    }
    if (member ? !(u > c.cost) : !(u < c.cost)) return false;
  }
  return true;
}

void write_payment_csv(std::ostream& out, const PaymentSchedule& schedule) {
  out << "record,stage,at_point,paid_ids,amounts,post_point,total,final_point,budget_truncated\n";
  for (std::size_t k = 0; k < schedule.stages.size(); ++k) {
    const auto& st = schedule.stages[k];
    std::vector<ClientId> ids;
    std::string amounts;
    for (const auto& p : st.paid) {
      ids.push_back(p.id);
      if (!amounts.empty()) amounts += ';';
      amounts += format_number(p.amount);
    }
    out << "stage," << k << ',' << st.at_point << ',' << join_ids(ids) << ',' << amounts << ',' << st.post_point
        << ",,,\n";
  }
  out << "summary,,,,,," << format_number(schedule.total) << ',' << schedule.final_point << ','
      << (schedule.budget_truncated ? "true" : "false") << '\n';
}

void write_payment_text(std::ostream& out, const PaymentSchedule& schedule) {
  for (std::size_t k = 0; k < schedule.stages.size(); ++k) {
    const auto& st = schedule.stages[k];
    out << "stage " << k << ": at " << st.at_point << " pay";
    for (const auto& p : st.paid) out << " " << p.id << "(" << format_number(p.amount) << ")";
    out << " -> " << st.post_point << '\n';
  }
  out << "total " << format_number(schedule.total) << '\n';
  out << "final_point " << schedule.final_point << '\n';
  out << "budget_truncated " << (schedule.budget_truncated ? "true" : "false") << '\n';
  out << "final_coalition " << (schedule.final_coalition.empty() ? "-" : join_ids(schedule.final_coalition)) << '\n';
}

}  // namespace fedpart
