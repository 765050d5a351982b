#include "fedpart/dynamics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "fedpart/format.hpp"
#include "fedpart/utility.hpp"

namespace fedpart {

namespace {

// Client indices in z order for a positive expectation.
std::vector<std::size_t> z_order(const Scenario& s, Count expectation) {
  const double k = static_cast<double>(expectation);
  std::vector<double> z(s.clients.size());
  for (std::size_t i = 0; i < s.clients.size(); ++i) {
    z[i] = additional_gain(s.clients[i].samples, k, s.sigma2()) - s.clients[i].cost;
  }
  std::vector<std::size_t> order(s.clients.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (z[a] != z[b]) return z[a] > z[b];
    return s.clients[a].id < s.clients[b].id;
  });
  return order;
}

// Indices of the inferred prefix, in z order.
std::vector<std::size_t> inferred_prefix(const Scenario& s, Count expectation) {
  if (expectation <= 0) return {};
  std::vector<std::size_t> prefix;
  Count total = 0;
  for (std::size_t idx : z_order(s, expectation)) {
    prefix.push_back(idx);
    total += s.clients[idx].samples;
    if (total >= expectation) break;
  }
  return prefix;
}

struct Realization {
  std::vector<bool> member;  // by client index
  std::vector<std::optional<double>> utilities;

  std::vector<ClientUtility> by_id(const Scenario& s) const {
    std::vector<ClientUtility> out;
    for (std::size_t i = 0; i < utilities.size(); ++i) {
      if (utilities[i]) out.push_back({s.clients[i].id, *utilities[i]});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
  }
};

Realization realize_homogeneous(const Scenario& s, Count k) {
  const double u = utility_gain_homogeneous(k, s.clients.front().samples, s.sigma2());
  Realization r{std::vector<bool>(s.clients.size()), std::vector<std::optional<double>>(s.clients.size(), u)};
  for (std::size_t i = 0; i < s.clients.size(); ++i) r.member[i] = u >= s.clients[i].cost;
  return r;
}

Realization realize_heterogeneous(const Scenario& s, Count k) {
  Realization r{std::vector<bool>(s.clients.size()), std::vector<std::optional<double>>(s.clients.size())};
  const auto prefix = inferred_prefix(s, k);
  std::vector<Count> samples;
  samples.reserve(prefix.size());
  for (std::size_t idx : prefix) samples.push_back(s.clients[idx].samples);
  for (std::size_t j = 0; j < prefix.size(); ++j) {
    const double u = utility_gain(samples, j, s.sigma2());
    r.utilities[prefix[j]] = u;
    r.member[prefix[j]] = u >= s.clients[prefix[j]].cost;
  }
  return r;
}

// Members evaluate u(N); outsiders evaluate their counterfactual u(N + n_i).
Realization realize_oracle(const Scenario& s, const std::vector<bool>& current, Count total) {
  Realization r{std::vector<bool>(s.clients.size()), std::vector<std::optional<double>>(s.clients.size())};
  for (std::size_t i = 0; i < s.clients.size(); ++i) {
    const Count seen = current[i] ? total : total + s.clients[i].samples;
    const double u = oracle_utility(*s.oracle, seen, s.sigma2());
    r.utilities[i] = u;
    r.member[i] = u >= s.clients[i].cost;
  }
  return r;
}

std::vector<bool> membership(const Scenario& s, std::span<const ClientId> ids) {
  std::vector<bool> member(s.clients.size());
  for (ClientId id : ids) member[s.index_of(id)] = true;
  return member;
}

DynamicsState state_from_membership(const Scenario& s, const std::vector<bool>& member, int step_index) {
  DynamicsState st;
  st.step = step_index;
  for (std::size_t i = 0; i < s.clients.size(); ++i) {
    if (!member[i]) continue;
    st.coalition.push_back(s.clients[i].id);
    st.coalition_samples += s.clients[i].samples;
  }
  std::sort(st.coalition.begin(), st.coalition.end());
  st.expectation = s.mode == UtilityMode::homogeneous ? static_cast<Count>(st.coalition.size())
                                                      : st.coalition_samples;
  return st;
}

}  // namespace

InferredCoalition infer_coalition(const Scenario& scenario, Count expectation) {
  InferredCoalition out;
  for (std::size_t idx : inferred_prefix(scenario, expectation)) {
    out.members.push_back(scenario.clients[idx].id);
    out.samples += scenario.clients[idx].samples;
  }
  out.prefix_length = out.members.size();
  return out;
}

Count h_homogeneous(const Scenario& scenario, Count k) {
  const double u = utility_gain_homogeneous(k, scenario.clients.front().samples, scenario.sigma2());
  Count joined = 0;
  for (const auto& c : scenario.clients) {
    if (c.cost <= u) ++joined;
  }
  return joined;
}

Count h_heterogeneous(const Scenario& scenario, Count k) {
  const auto r = realize_heterogeneous(scenario, k);
  Count total = 0;
  for (std::size_t i = 0; i < scenario.clients.size(); ++i) {
    if (r.member[i]) total += scenario.clients[i].samples;
  }
  return total;
}

Count h_oracle(const Scenario& scenario, Count n) {
  const double u = oracle_utility(*scenario.oracle, n, scenario.sigma2());
  Count total = 0;
  for (const auto& c : scenario.clients) {
    if (u >= c.cost) total += c.samples;
  }
  return total;
}

Count realize(const Scenario& scenario, Count x) {
  switch (scenario.mode) {
    case UtilityMode::homogeneous: return h_homogeneous(scenario, x);
    case UtilityMode::heterogeneous: return h_heterogeneous(scenario, x);
    case UtilityMode::oracle: return h_oracle(scenario, x);
  }
  return 0;
}

RealizationMap::RealizationMap(Scenario scenario)
    : scenario_(std::move(scenario)),
      domain_max_(scenario_.domain_max()),
      mutex_(std::make_unique<std::mutex>()),
      memo_(static_cast<std::size_t>(domain_max_ + 1), Count{-1}) {}

Count RealizationMap::operator()(Count x) const {
  if (x < 0 || x > domain_max_) {
    throw std::out_of_range("realization map evaluated outside [0, " + std::to_string(domain_max_) + "]");
  }
  const auto slot = static_cast<std::size_t>(x);
  {
    std::lock_guard lock(*mutex_);
    if (memo_[slot] >= 0) return memo_[slot];
  }
  const Count value = realize(scenario_, x);
  std::lock_guard lock(*mutex_);
  memo_[slot] = value;
  return value;
}

DynamicsState state_from_expectation(const Scenario& s, Count expectation) {
  if (expectation < 0 || expectation > s.domain_max()) {
    throw std::out_of_range("expectation outside the scenario domain");
  }
  std::vector<bool> member(s.clients.size());
  switch (s.mode) {
    case UtilityMode::homogeneous:
      for (Count i = 0; i < expectation; ++i) member[static_cast<std::size_t>(i)] = true;
      break;
    case UtilityMode::heterogeneous:
      for (std::size_t idx : inferred_prefix(s, expectation)) member[idx] = true;
      break;
    case UtilityMode::oracle: {
      std::vector<std::size_t> order(s.clients.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (s.clients[a].cost != s.clients[b].cost) return s.clients[a].cost < s.clients[b].cost;
        return s.clients[a].id < s.clients[b].id;
      });
      Count total = 0;
      for (std::size_t idx : order) {
        if (total >= expectation) break;
        member[idx] = true;
        total += s.clients[idx].samples;
      }
      break;
    }
  }
  auto st = state_from_membership(s, member, 0);
  if (s.mode == UtilityMode::heterogeneous) st.expectation = expectation;
  return st;
}

DynamicsState state_from_coalition(const Scenario& s, std::vector<ClientId> members) {
  return state_from_membership(s, membership(s, members), 0);
}

DynamicsState initial_state(const Scenario& s) {
  if (const auto* e = std::get_if<InitialExpectation>(&s.initial)) return state_from_expectation(s, e->value);
  if (const auto* c = std::get_if<InitialCoalition>(&s.initial)) return state_from_coalition(s, c->members);
  throw std::invalid_argument("scenario '" + s.name + "' has no initial condition");
}

StepResult step(const DynamicsState& state, const Scenario& s, std::span<const ClientId> subsidized) {
  const auto current = membership(s, state.coalition);
  Realization r;
  switch (s.mode) {
    case UtilityMode::homogeneous: r = realize_homogeneous(s, state.expectation); break;
    case UtilityMode::heterogeneous: r = realize_heterogeneous(s, state.expectation); break;
    case UtilityMode::oracle: r = realize_oracle(s, current, state.coalition_samples); break;
  }
  for (ClientId id : subsidized) r.member[s.index_of(id)] = true;

  StepResult out;
  out.next = state_from_membership(s, r.member, state.step + 1);
  for (std::size_t i = 0; i < s.clients.size(); ++i) {
    if (r.member[i] && !current[i]) out.events.joined.push_back(s.clients[i].id);
    if (!r.member[i] && current[i]) out.events.left.push_back(s.clients[i].id);
  }
  std::sort(out.events.joined.begin(), out.events.joined.end());
  std::sort(out.events.left.begin(), out.events.left.end());
  out.events.utilities = r.by_id(s);
  return out;
}

int default_max_steps(const Scenario& scenario) { return static_cast<int>(scenario.domain_max()) + 10; }

DynamicsTrace simulate(const Scenario& scenario, const DynamicsState& start, std::optional<int> max_steps,
                       std::span<const ClientId> subsidized) {
  const int limit = max_steps.value_or(default_max_steps(scenario));
  if (limit < 1) throw std::invalid_argument("max_steps must be positive");
  DynamicsTrace trace;
  trace.states.push_back(start);
  trace.states.back().step = 0;
  for (int t = 0; t < limit; ++t) {
    auto r = step(trace.states.back(), scenario, subsidized);
    const bool settled = r.next.coalition == trace.states.back().coalition &&
                         r.next.expectation == trace.states.back().expectation;
    trace.states.push_back(std::move(r.next));
    trace.events.push_back(std::move(r.events));
    if (settled) {
      trace.terminal = Terminal::converged;
      return trace;
    }
  }
  trace.terminal = Terminal::max_steps_exceeded;
  return trace;
}

DynamicsTrace simulate(const Scenario& scenario, std::optional<int> max_steps) {
  return simulate(scenario, initial_state(scenario), max_steps);
}

namespace {

struct UtilityRange {
  std::optional<double> min_member;
  std::optional<double> max_nonmember;
};

UtilityRange utility_range(const DynamicsState& state, const StepEvents& events) {
  UtilityRange range;
  for (const auto& [id, u] : events.utilities) {
    if (std::binary_search(state.coalition.begin(), state.coalition.end(), id)) {
      range.min_member = range.min_member ? std::min(*range.min_member, u) : u;
    } else {
      range.max_nonmember = range.max_nonmember ? std::max(*range.max_nonmember, u) : u;
    }
  }
  return range;
}

}  // namespace

void write_trace_csv(std::ostream& out, const DynamicsTrace& trace) {
  out << "step,expectation,coalition_size,coalition_samples,joined_ids,left_ids,"
         "min_member_utility,max_nonmember_utility\n";
  for (std::size_t t = 0; t < trace.states.size(); ++t) {
    const auto& st = trace.states[t];
    out << st.step << ',' << st.expectation << ',' << st.coalition.size() << ',' << st.coalition_samples << ',';
    if (t == 0) {
      out << ",,,\n";
      continue;
    }
    const auto& ev = trace.events[t - 1];
    const auto range = utility_range(st, ev);
    out << join_ids(ev.joined) << ',' << join_ids(ev.left) << ',' << format_number(range.min_member) << ','
        << format_number(range.max_nonmember) << '\n';
  }
}

void write_trace_text(std::ostream& out, const DynamicsTrace& trace) {
  for (std::size_t t = 0; t < trace.states.size(); ++t) {
    const auto& st = trace.states[t];
    out << "t=" << st.step << "  expectation=" << st.expectation << "  coalition={" << join_ids(st.coalition, ',')
        << "}  samples=" << st.coalition_samples;
    if (t > 0) {
      const auto& ev = trace.events[t - 1];
      if (!ev.joined.empty()) out << "  joined={" << join_ids(ev.joined, ',') << "}";
      if (!ev.left.empty()) out << "  left={" << join_ids(ev.left, ',') << "}";
    }
    out << '\n';
  }
  if (trace.converged()) {
    out << "converged at " << trace.last().expectation << " after " << trace.steps() << " steps\n";
  } else {
    out << "max steps exceeded after " << trace.steps() << " steps\n";
  }
}

}  // namespace fedpart
