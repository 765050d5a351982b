#include "fedpart/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "fedpart/utility.hpp"

namespace fedpart {

using nlohmann::json;

ScenarioError::ScenarioError(Kind kind, const std::string& what)
    : std::runtime_error([&] {
        switch (kind) {
          case Kind::schema: return "schema violation: " + what;
          case Kind::invariant: return "invariant violation: " + what;
          case Kind::duplicate_id: return "duplicate id: " + what;
        }
        return what;
      }()),
      kind_(kind) {}

namespace {

[[noreturn]] void schema_error(const std::string& what) {
  throw ScenarioError(ScenarioError::Kind::schema, what);
}

[[noreturn]] void invariant_error(const std::string& what) {
  throw ScenarioError(ScenarioError::Kind::invariant, what);
}

void reject_unknown(const json& object, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
  if (!object.is_object()) schema_error(std::string(where) + " must be an object");
  for (const auto& item : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      schema_error("unknown field '" + item.key() + "' in " + std::string(where));
    }
  }
}

const json& require(const json& object, const char* key, std::string_view where) {
  auto it = object.find(key);
  if (it == object.end()) {
    schema_error("missing field '" + std::string(key) + "' in " + std::string(where));
  }
  return *it;
}

double as_number(const json& value, std::string_view what) {
  if (!value.is_number()) schema_error(std::string(what) + " must be a number");
  return value.get<double>();
}

Count as_integer(const json& value, std::string_view what) {
  if (!value.is_number_integer()) schema_error(std::string(what) + " must be an integer");
  return value.get<Count>();
}

double require_number(const json& object, const char* key, std::string_view where) {
  return as_number(require(object, key, where), std::string(where) + "." + key);
}

double number_or(const json& object, const char* key, double fallback, std::string_view where) {
  auto it = object.find(key);
  return it == object.end() ? fallback : as_number(*it, std::string(where) + "." + key);
}

CostModel parse_cost_model(const json& doc) {
  const std::string where = "cost_model";
  if (!doc.is_object()) schema_error("cost_model must be an object");
  const json& kind_json = require(doc, "kind", where);
  if (!kind_json.is_string()) schema_error("cost_model.kind must be a string");
  const auto kind = kind_json.get<std::string>();
  if (kind == "table") {
    reject_unknown(doc, {"kind", "costs"}, where);
    const json& costs = require(doc, "costs", where);
    if (!costs.is_array()) schema_error("cost_model.costs must be an array");
    TableCost table;
    for (const auto& c : costs) table.costs.push_back(as_number(c, "cost_model.costs[]"));
    return table;
  }
  if (kind == "affine") {
    reject_unknown(doc, {"kind", "c_min", "slope"}, where);
    return AffineCost{require_number(doc, "c_min", where), require_number(doc, "slope", where)};
  }
  if (kind == "power") {
    reject_unknown(doc, {"kind", "base", "scale", "exponent"}, where);
    return PowerCost{require_number(doc, "base", where), require_number(doc, "scale", where),
                     require_number(doc, "exponent", where)};
  }
  if (kind == "mirror-utility") {
    reject_unknown(doc, {"kind", "floor"}, where);
    return MirrorUtilityCost{number_or(doc, "floor", 1e-9, where)};
  }
  schema_error("unknown cost_model.kind '" + kind + "'");
}

OracleSpec parse_oracle(const json& doc) {
  const std::string where = "oracle";
  reject_unknown(doc, {"kind", "params"}, where);
  const json& kind_json = require(doc, "kind", where);
  if (!kind_json.is_string()) schema_error("oracle.kind must be a string");
  const auto kind = kind_json.get<std::string>();
  const json empty = json::object();
  const json& params = doc.contains("params") ? doc.at("params") : empty;
  if (kind == "builtin-homogeneous") {
    reject_unknown(params, {"n_ref"}, "oracle.params");
    const Count n_ref = as_integer(require(params, "n_ref", "oracle.params"), "oracle.params.n_ref");
    if (n_ref < 1) invariant_error("oracle n_ref must be >= 1");
    return BuiltinHomogeneousOracle{n_ref};
  }
  if (kind == "table") {
    reject_unknown(params, {"points"}, "oracle.params");
    const json& points = require(params, "points", "oracle.params");
    if (!points.is_array()) schema_error("oracle.params.points must be an array");
    TableOracle table;
    for (const auto& p : points) {
      if (!p.is_array() || p.size() != 2) schema_error("oracle table entry must be [N, u]");
      table.points.emplace_back(as_integer(p[0], "oracle table N"), as_number(p[1], "oracle table u"));
    }
    for (std::size_t k = 0; k < table.points.size(); ++k) {
      const auto& [n, u] = table.points[k];
      if (n < 0) invariant_error("oracle table N must be >= 0");
      if (!std::isfinite(u) || u < 0.0) invariant_error("oracle table u must be finite and >= 0");
      if (n == 0 && u != 0.0) invariant_error("oracle table must have u(0) = 0");
      if (k > 0) {
        if (n <= table.points[k - 1].first) invariant_error("oracle table N must be strictly increasing");
        if (u < table.points[k - 1].second) invariant_error("oracle table u must be non-decreasing");
      }
    }
    return table;
  }
  if (kind == "log-saturating") {
    reject_unknown(params, {"scale", "rate"}, "oracle.params");
    LogSaturatingOracle spec{require_number(params, "scale", "oracle.params"),
                             require_number(params, "rate", "oracle.params")};
    if (!(spec.scale >= 0.0) || !(spec.rate > 0.0)) {
      invariant_error("log-saturating oracle needs scale >= 0 and rate > 0");
    }
    return spec;
  }
  schema_error("unknown oracle.kind '" + kind + "'");
}

Client parse_client(const json& doc) {
  reject_unknown(doc, {"id", "samples", "cost"}, "client");
  Client c;
  c.id = static_cast<ClientId>(as_integer(require(doc, "id", "client"), "client.id"));
  c.samples = as_integer(require(doc, "samples", "client"), "client.samples");
  c.cost = as_number(require(doc, "cost", "client"), "client.cost");
  return c;
}

void check_non_decreasing_positive(const std::vector<double>& costs) {
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (!std::isfinite(costs[i]) || costs[i] <= 0.0) invariant_error("non-positive cost");
    if (i > 0 && costs[i] < costs[i - 1]) invariant_error("decreasing sequence");
  }
}

struct CostExpander {
  int count;
  std::optional<UtilityContext> context;

  std::vector<double> operator()(const TableCost& m) const {
    if (static_cast<int>(m.costs.size()) != count) {
      invariant_error("cost table has " + std::to_string(m.costs.size()) + " entries, expected " +
                      std::to_string(count));
    }
    return m.costs;
  }
  std::vector<double> operator()(const AffineCost& m) const {
    if (m.c_min < 0.0 || !(m.slope > 0.0)) invariant_error("affine cost needs c_min >= 0, slope > 0");
    std::vector<double> out;
    for (int i = 1; i <= count; ++i) out.push_back(m.c_min + m.slope * i);
    return out;
  }
  std::vector<double> operator()(const PowerCost& m) const {
    std::vector<double> out;
    for (int i = 1; i <= count; ++i) out.push_back(m.base + m.scale * std::pow(static_cast<double>(i), m.exponent));
    return out;
  }
  std::vector<double> operator()(const MirrorUtilityCost& m) const {
    if (!context) invariant_error("mirror-utility costs need a utility context");
    if (!(m.floor > 0.0)) invariant_error("mirror-utility floor must be > 0");
    std::vector<double> out;
    for (int i = 1; i <= count; ++i) {
      out.push_back(i == 1 ? m.floor : utility_gain_homogeneous(i, context->samples, context->sigma_theta_sq));
    }
    return out;
  }
};

}  // namespace

std::vector<double> expand_cost_model(const CostModel& model, int count,
                                      std::optional<UtilityContext> context) {
  if (count < 1) invariant_error("client count must be >= 1");
  auto costs = std::visit(CostExpander{count, context}, model);
  check_non_decreasing_positive(costs);
  return costs;
}

std::string_view to_string(UtilityMode mode) {
  switch (mode) {
    case UtilityMode::homogeneous: return "homogeneous";
    case UtilityMode::heterogeneous: return "heterogeneous";
    case UtilityMode::oracle: return "oracle";
  }
  return "?";
}

UtilityMode parse_utility_mode(std::string_view text) {
  if (text == "homogeneous") return UtilityMode::homogeneous;
  if (text == "heterogeneous") return UtilityMode::heterogeneous;
  if (text == "oracle") return UtilityMode::oracle;
  schema_error("unknown utility_mode '" + std::string(text) + "'");
}

Count Scenario::total_samples() const {
  Count total = 0;
  for (const auto& c : clients) total += c.samples;
  return total;
}

Count Scenario::domain_max() const {
  return mode == UtilityMode::homogeneous ? static_cast<Count>(clients.size()) : total_samples();
}

std::size_t Scenario::index_of(ClientId id) const {
  for (std::size_t i = 0; i < clients.size(); ++i) {
    if (clients[i].id == id) return i;
  }
  throw std::out_of_range("unknown client id " + std::to_string(id));
}

Scenario make_scenario(Scenario s) {
  if (s.clients.empty()) invariant_error("scenario needs at least one client");
  if (!std::isfinite(s.prior.sigma_theta_sq) || s.prior.sigma_theta_sq < 0.0) {
    invariant_error("sigma_theta_sq must be >= 0");
  }
  std::set<ClientId> ids;
  for (const auto& c : s.clients) {
    if (c.samples < 1) invariant_error("client " + std::to_string(c.id) + " has samples < 1");
    if (!std::isfinite(c.cost) || c.cost <= 0.0) {
      invariant_error("client " + std::to_string(c.id) + " has non-positive cost");
    }
    if (!ids.insert(c.id).second) {
      throw ScenarioError(ScenarioError::Kind::duplicate_id, std::to_string(c.id));
    }
  }
  if (s.mode == UtilityMode::homogeneous) {
    for (const auto& c : s.clients) {
      if (c.samples != s.clients.front().samples) {
        invariant_error("homogeneous mode requires equal samples");
      }
    }
    std::stable_sort(s.clients.begin(), s.clients.end(),
                     [](const Client& a, const Client& b) { return a.cost < b.cost; });
  }
  if (s.mode == UtilityMode::oracle) {
    if (!s.oracle) invariant_error("oracle mode requires an oracle spec");
  } else if (s.oracle) {
    invariant_error("oracle spec given outside oracle mode");
  }
  if (const auto* e = std::get_if<InitialExpectation>(&s.initial)) {
    if (e->value < 0 || e->value > s.domain_max()) {
      invariant_error("initial expectation outside [0, " + std::to_string(s.domain_max()) + "]");
    }
  }
  if (auto* c = std::get_if<InitialCoalition>(&s.initial)) {
    if (s.mode != UtilityMode::oracle) invariant_error("initial coalition is only valid in oracle mode");
    std::sort(c->members.begin(), c->members.end());
    if (std::adjacent_find(c->members.begin(), c->members.end()) != c->members.end()) {
      throw ScenarioError(ScenarioError::Kind::duplicate_id, "initial coalition repeats a client");
    }
    for (ClientId id : c->members) {
      if (!ids.count(id)) invariant_error("initial coalition names unknown client " + std::to_string(id));
    }
  }
  return s;
}

Scenario load_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    schema_error(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(doc, {"name", "sigma_theta_sq", "utility_mode", "oracle", "clients", "initial"},
                 "scenario");

  Scenario s;
  const json& name = require(doc, "name", "scenario");
  if (!name.is_string()) schema_error("name must be a string");
  s.name = name.get<std::string>();
  s.prior.sigma_theta_sq = require_number(doc, "sigma_theta_sq", "scenario");
  const json& mode = require(doc, "utility_mode", "scenario");
  if (!mode.is_string()) schema_error("utility_mode must be a string");
  s.mode = parse_utility_mode(mode.get<std::string>());
  if (doc.contains("oracle")) s.oracle = parse_oracle(doc.at("oracle"));

  const json& clients = require(doc, "clients", "scenario");
  if (clients.is_array()) {
    for (const auto& c : clients) s.clients.push_back(parse_client(c));
  } else if (clients.is_object()) {
    reject_unknown(clients, {"count", "samples", "cost_model"}, "clients");
    const Count count = as_integer(require(clients, "count", "clients"), "clients.count");
    const Count samples = as_integer(require(clients, "samples", "clients"), "clients.samples");
    if (count < 1) invariant_error("clients.count must be >= 1");
    if (samples < 1) invariant_error("clients.samples must be >= 1");
    const auto model = parse_cost_model(require(clients, "cost_model", "clients"));
    const auto costs = expand_cost_model(model, static_cast<int>(count),
                                         UtilityContext{samples, s.prior.sigma_theta_sq});
    for (int i = 0; i < static_cast<int>(count); ++i) {
      s.clients.push_back(Client{i + 1, samples, costs[static_cast<std::size_t>(i)]});
    }
  } else {
    schema_error("clients must be an array or a generator object");
  }

  if (doc.contains("initial")) {
    const json& init = doc.at("initial");
    reject_unknown(init, {"expectation", "coalition"}, "initial");
    if (init.contains("expectation") == init.contains("coalition")) {
      schema_error("initial needs exactly one of 'expectation' or 'coalition'");
    }
    if (init.contains("expectation")) {
      s.initial = InitialExpectation{as_integer(init.at("expectation"), "initial.expectation")};
    } else {
      const json& members = init.at("coalition");
      if (!members.is_array()) schema_error("initial.coalition must be an array");
      InitialCoalition coalition;
      for (const auto& m : members) {
        coalition.members.push_back(static_cast<ClientId>(as_integer(m, "initial.coalition[]")));
      }
      s.initial = coalition;
    }
  }
  return make_scenario(std::move(s));
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_scenario(buffer.str());
}

namespace {

json oracle_to_json(const OracleSpec& spec) {
  return std::visit(
      [](const auto& o) -> json {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, BuiltinHomogeneousOracle>) {
          return {{"kind", "builtin-homogeneous"}, {"params", {{"n_ref", o.n_ref}}}};
        } else if constexpr (std::is_same_v<T, TableOracle>) {
          json points = json::array();
          for (const auto& [n, u] : o.points) points.push_back(json::array({n, u}));
          return {{"kind", "table"}, {"params", {{"points", points}}}};
        } else {
          return {{"kind", "log-saturating"}, {"params", {{"scale", o.scale}, {"rate", o.rate}}}};
        }
      },
      spec);
}

}  // namespace

json to_json(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["sigma_theta_sq"] = s.prior.sigma_theta_sq;
  doc["utility_mode"] = std::string(to_string(s.mode));
  if (s.oracle) doc["oracle"] = oracle_to_json(*s.oracle);
  json clients = json::array();
  for (const auto& c : s.clients) {
    clients.push_back({{"id", c.id}, {"samples", c.samples}, {"cost", c.cost}});
  }
  doc["clients"] = clients;
  if (const auto* e = std::get_if<InitialExpectation>(&s.initial)) {
    doc["initial"] = {{"expectation", e->value}};
  } else if (const auto* c = std::get_if<InitialCoalition>(&s.initial)) {
    doc["initial"] = {{"coalition", c->members}};
  }
  return doc;
}

std::string dump_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

}  // namespace fedpart
