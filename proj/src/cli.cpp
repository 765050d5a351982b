#include "fedpart/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "fedpart/dynamics.hpp"
#include "fedpart/equilibria.hpp"
#include "fedpart/model.hpp"
#include "fedpart/payment.hpp"
#include "fedpart/verifier.hpp"

namespace fedpart {

namespace {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string scenario;
  std::string out;
  std::string format;
  std::optional<int> max_steps;
  std::optional<double> budget;
  bool efficient = false;
  std::uint64_t seed = 42;
  int count = 100;
  int max_clients = 12;
  std::string mode = "homogeneous";
  std::string out_dir = ".";
};

void add_common(CLI::App* sub, Options& o, bool needs_scenario) {
  auto* s = sub->add_option("--scenario", o.scenario, "scenario JSON file");
  if (needs_scenario) s->required();
  sub->add_option("--out", o.out, "write data here instead of standard output");
  sub->add_option("--format", o.format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
}

void add_battery(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "generator seed");
  sub->add_option("--count", o.count, "number of scenarios")->check(CLI::NonNegativeNumber);
  sub->add_option("--max-clients", o.max_clients, "largest roster")->check(CLI::Range(1, 15));
  sub->add_option("--mode", o.mode, "utility mode")
      ->check(CLI::IsMember({"homogeneous", "heterogeneous", "oracle"}));
}

// Renders into a buffer first so a failing verb never leaves a partial file.
void emit(const Options& o, std::ostream& out, const std::string& data) {
  if (o.out.empty()) {
    out << data;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw DomainError("cannot open " + o.out + " for writing");
  file << data;
  if (!file) throw DomainError("failed writing " + o.out);
}

bool text(const Options& o, const std::string& fallback = "csv") { return (o.format.empty() ? fallback : o.format) == "text"; }

BatteryLimits limits_of(const Options& o) {
  BatteryLimits limits;
  limits.mode = parse_utility_mode(o.mode);
  limits.max_clients = o.max_clients;
  return limits;
}

int run(const std::string& verb, const Options& o, std::ostream& out, std::ostream& err) {
  std::ostringstream data;
  if (verb == "verify") {
    const auto report = run_battery(o.seed, o.count, limits_of(o));
    if (text(o, "text")) write_report_text(data, report);
    else write_report_csv(data, report);
    emit(o, out, data.str());
    if (!report.passed()) {
      err << "verification failed; see report\n";
      return 1;
    }
    return 0;
  }
  if (verb == "gen") {
    std::filesystem::create_directories(o.out_dir);
    for (const auto& s : generate_battery(o.seed, o.count, limits_of(o))) {
      const auto path = std::filesystem::path(o.out_dir) / (s.name + ".json");
      std::ofstream file(path, std::ios::binary);
      if (!file) throw DomainError("cannot open " + path.string() + " for writing");
      file << dump_scenario(s);
    }
    return 0;
  }

  const Scenario s = load_scenario_file(o.scenario);
  if (verb == "simulate") {
    const auto trace = simulate(s, o.max_steps);
    if (text(o)) write_trace_text(data, trace);
    else write_trace_csv(data, trace);
  } else if (verb == "map") {
    const RealizationMap h(s);
    if (text(o)) {
      for (Count x = 0; x <= h.domain_max(); ++x) data << x << ' ' << h(x) << '\n';
    } else {
      write_h_curve_csv(data, h);
    }
  } else if (verb == "equilibria") {
    const RealizationMap h(s);
    const auto reports = enumerate_fixed_points(h);
    const auto basin = basins(s);
    if (text(o)) write_equilibria_text(data, reports, basin);
    else write_equilibria_csv(data, reports, basin);
  } else if (verb == "basins") {
    const auto basin = basins(s);
    if (text(o)) {
      for (std::size_t x = 0; x < basin.size(); ++x) {
        data << x << " -> " << (basin[x] ? std::to_string(*basin[x]) : "none") << '\n';
      }
    } else {
      write_basins_csv(data, basin);
    }
  } else if (verb == "payment") {
    const auto plan = plan_payment(s, PlanOptions{o.budget, o.efficient});
    if (text(o)) write_payment_text(data, plan);
    else write_payment_csv(data, plan);
  }
  emit(o, out, data.str());
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Participation dynamics and payment planning for federated learning coalitions", "fedpart"};
  app.require_subcommand(1);
  Options o;

  auto* simulate_cmd = app.add_subcommand("simulate", "run the dynamic from the scenario's initial condition");
  add_common(simulate_cmd, o, true);
  simulate_cmd->add_option("--max-steps", o.max_steps, "step limit")->check(CLI::PositiveNumber);

  add_common(app.add_subcommand("map", "realization map h over the whole domain"), o, true);
  add_common(app.add_subcommand("equilibria", "fixed points, their kind and basins"), o, true);
  add_common(app.add_subcommand("basins", "limit of the dynamic from every expectation"), o, true);

  auto* payment_cmd = app.add_subcommand("payment", "payment schedule up to the largest equilibrium");
  add_common(payment_cmd, o, true);
  payment_cmd->add_option("--budget", o.budget, "stop before exceeding this total")->check(CLI::NonNegativeNumber);
  payment_cmd->add_flag("--efficient", o.efficient, "pay only the shortfall of cost over utility");

  auto* verify_cmd = app.add_subcommand("verify", "cross-check a random battery against brute force");
  add_common(verify_cmd, o, false);
  add_battery(verify_cmd, o);

  auto* gen_cmd = app.add_subcommand("gen", "write battery scenarios as JSON files");
  add_battery(gen_cmd, o);
  gen_cmd->add_option("--out-dir", o.out_dir, "directory for the scenario files");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 2;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    return run(verb, o, out, err);
  } catch (const std::runtime_error& e) {  // scenario, infeasible, I/O
    err << "error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace fedpart
