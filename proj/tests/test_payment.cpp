#include <doctest.h>

#include <numeric>
#include <sstream>

#include "fedpart/equilibria.hpp"
#include "fedpart/payment.hpp"
#include "fedpart/utility.hpp"
#include "support.hpp"

using namespace fedpart;

namespace {

std::vector<ClientId> paid_ids(const PaymentStage& stage) {
  std::vector<ClientId> ids;
  for (const auto& p : stage.paid) ids.push_back(p.id);
  return ids;
}

}  // namespace

TEST_CASE("three-client plan pays the two cheapest") {
  const auto s = test::homogeneous({0.1, 0.2, 5.0}, 10, 1.0);
  const auto plan = plan_homogeneous(s);
  REQUIRE(plan.stages.size() == 1);
  CHECK(plan.stages[0].at_point == 0);
  CHECK(paid_ids(plan.stages[0]) == std::vector<ClientId>{1, 2});
  CHECK(plan.stages[0].post_point == 2);
  CHECK(plan.total == 0.1 + 0.2);
  CHECK(plan.final_point == 2);
  CHECK(plan.final_coalition == std::vector<ClientId>{1, 2});
  CHECK_FALSE(plan.budget_truncated);
  CHECK(strict_terminal(s, plan.final_coalition));
}

TEST_CASE("mirrored costs are paid in full") {
  const auto s = test::mirror();
  const auto plan = plan_homogeneous(s);
  double sum = 0.0;
  for (const auto& c : s.clients) sum += c.cost;
  CHECK(plan.total == sum);
  CHECK(total_payment(plan) == sum);
  CHECK(plan.final_point == 20);
  // 1 is not an equilibrium, so the first stage pays two clients
  REQUIRE(plan.stages.size() == 19);
  CHECK(paid_ids(plan.stages[0]) == std::vector<ClientId>{1, 2});
  for (std::size_t k = 1; k < plan.stages.size(); ++k) {
    CHECK(plan.stages[k].paid.size() == 1);
    CHECK(plan.stages[k].post_point == plan.stages[k].at_point + 1);
  }
}

TEST_CASE("unaffordable roster needs no plan") {
  const auto plan = plan_homogeneous(test::homogeneous({50.0, 60.0, 70.0}, 10, 1.0));
  CHECK(plan.stages.empty());
  CHECK(plan.total == 0.0);
  CHECK(plan.final_point == 0);
  CHECK_FALSE(plan.budget_truncated);
}

TEST_CASE("tipping point plan") {
  // h = 0, 0, 1, 3, 5, 5: pay three to reach 3, then one more to tip to 5
  const auto s = test::homogeneous({0.5, 1.2, 1.3, 1.6, 1.65}, 1, 0.5);
  const auto plan = plan_homogeneous(s);
  REQUIRE(plan.stages.size() == 2);
  CHECK(paid_ids(plan.stages[0]) == std::vector<ClientId>{1, 2, 3});
  CHECK(plan.stages[0].post_point == 3);
  CHECK(paid_ids(plan.stages[1]) == std::vector<ClientId>{4});
  CHECK(plan.stages[1].post_point == 5);
  CHECK(plan.final_point == 5);
  CHECK(plan.total == doctest::Approx(0.5 + 1.2 + 1.3 + 1.6).epsilon(1e-15));

  const auto efficient = plan_homogeneous(s, PlanOptions{std::nullopt, true});
  REQUIRE(efficient.stages.size() == 2);
  // at 0 nobody gains anything; at 3 client 4 already gets U(3)
  CHECK(efficient.stages[0].paid[0].amount == 0.5);
  CHECK(efficient.stages[1].paid[0].amount == doctest::Approx(1.6 - utility_gain_homogeneous(3, 1, 0.5)));
  CHECK(efficient.total <= plan.total);
  CHECK(efficient.final_point == 5);
}

TEST_CASE("budget truncation") {
  const auto s = test::homogeneous({0.5, 1.2, 1.3, 1.6, 1.65}, 1, 0.5);
  const auto none = plan_homogeneous(s, PlanOptions{0.25, false});
  CHECK(none.stages.empty());
  CHECK(none.final_point == 0);
  CHECK(none.budget_truncated);

  const auto first = plan_homogeneous(s, PlanOptions{3.5, false});
  CHECK(first.stages.size() == 1);
  CHECK(first.final_point == 3);
  CHECK(first.budget_truncated);

  const auto exact = plan_homogeneous(s, PlanOptions{0.5 + 1.2 + 1.3 + 1.6, false});
  CHECK(exact.final_point == 5);
  CHECK_FALSE(exact.budget_truncated);
}

TEST_CASE("next tipping point on the oracle example") {
  const RealizationMap h(test::four_client_oracle());
  CHECK(next_tipping(0, h) == 1);
  CHECK(next_tipping(1, h) == 3);
  CHECK(next_tipping(10, h) == std::nullopt);
}

TEST_CASE("knapsack examples") {
  const std::vector<KnapsackCandidate> first{{1, 3, 0.5}, {2, 2, 0.3}, {3, 2, 0.3}};
  const auto a = knapsack_min_payment(first, 4);
  CHECK(a.ids == std::vector<ClientId>{2, 3});
  CHECK(a.price == doctest::Approx(0.6).epsilon(1e-15));

  const std::vector<KnapsackCandidate> second{{1, 5, 1.0}, {2, 3, 0.4}, {3, 3, 0.4}};
  const auto b = knapsack_min_payment(second, 5);
  CHECK(b.ids == std::vector<ClientId>{2, 3});
  CHECK(b.price == 0.4 + 0.4);

  const std::vector<KnapsackCandidate> single{{1, 4, 0.1}, {2, 2, 0.3}, {3, 2, 0.3}};
  const auto c = knapsack_min_payment(single, 4);
  CHECK(c.ids == std::vector<ClientId>{1});
}

TEST_CASE("knapsack tie breaks") {
  // equal price: fewer clients wins
  const std::vector<KnapsackCandidate> fewer{{1, 1, 0.25}, {2, 1, 0.25}, {3, 2, 0.5}};
  CHECK(knapsack_min_payment(fewer, 2).ids == std::vector<ClientId>{3});
  // equal price and count: smallest id set
  const std::vector<KnapsackCandidate> lex{{4, 2, 0.5}, {2, 2, 0.5}, {3, 2, 0.5}};
  CHECK(knapsack_min_payment(lex, 4).ids == std::vector<ClientId>{2, 3});
  // zero prices still count clients
  const std::vector<KnapsackCandidate> free{{1, 1, 0.0}, {2, 1, 0.0}, {3, 5, 0.0}};
  CHECK(knapsack_min_payment(free, 2).ids == std::vector<ClientId>{3});
}

TEST_CASE("knapsack preconditions") {
  const std::vector<KnapsackCandidate> small{{1, 1, 0.5}, {2, 2, 0.5}};
  CHECK_THROWS_AS(knapsack_min_payment(small, 4), InfeasibleError);
  CHECK_THROWS_AS(knapsack_min_payment(small, 0), std::invalid_argument);
  CHECK(knapsack_min_payment(small, 3).ids == std::vector<ClientId>{1, 2});
}

TEST_CASE("oracle plan on the four-client example") {
  const auto s = test::four_client_oracle();
  const auto plan = plan_oracle(s);
  REQUIRE(plan.stages.size() == 1);
  CHECK(paid_ids(plan.stages[0]) == std::vector<ClientId>{1});
  CHECK(plan.stages[0].paid[0].amount == 0.05);
  CHECK(plan.total == 0.05);
  CHECK(plan.final_point == 10);
  CHECK(plan.final_coalition == std::vector<ClientId>{1, 2, 3, 4});

  const auto broke = plan_oracle(s, PlanOptions{0.01, false});
  CHECK(broke.stages.empty());
  CHECK(broke.budget_truncated);
  CHECK(broke.final_point == 0);

  CHECK(plan_payment(s) == plan);
  CHECK_THROWS_AS(plan_oracle(test::mirror(3)), std::invalid_argument);
  CHECK_THROWS_AS(plan_homogeneous(s), std::invalid_argument);
}

TEST_CASE("heterogeneous plan reaches the top fixed point") {
  const auto s = test::heterogeneous({2, 3, 4, 5}, {0.05, 0.1, 0.2, 0.3}, 0.5);
  const RealizationMap h(s);
  const auto top = enumerate_fixed_points(h).back().point;
  const auto plan = plan_payment(s);
  CHECK(plan.final_point == top);
  CHECK(plan.total == total_payment(plan));
  const auto efficient = plan_payment(s, PlanOptions{std::nullopt, true});
  CHECK(efficient.total <= plan.total);
}

TEST_CASE("empty schedule totals zero") {
  CHECK(total_payment(PaymentSchedule{}) == 0.0);
}

TEST_CASE("payment writers") {
  const auto plan = plan_homogeneous(test::homogeneous({0.1, 0.2, 5.0}, 10, 1.0));
  std::ostringstream csv;
  write_payment_csv(csv, plan);
  CHECK(csv.str() ==
        "record,stage,at_point,paid_ids,amounts,post_point,total,final_point,budget_truncated\n"
        "stage,0,0,1;2,0.1;0.2,2,,,\n"
        "summary,,,,,,0.30000000000000004,2,false\n");
  std::ostringstream text;
  write_payment_text(text, plan);
  CHECK(text.str().find("budget_truncated false") != std::string::npos);
}
