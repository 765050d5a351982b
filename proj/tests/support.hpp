#pragma once

// Scenario builders shared by the test binaries.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fedpart/model.hpp"

namespace fedpart::test {

inline Scenario homogeneous(const std::vector<double>& costs, Count n, double sigma2, Count initial = 0) {
  Scenario s;
  s.name = "homogeneous";
  s.prior.sigma_theta_sq = sigma2;
  s.mode = UtilityMode::homogeneous;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    s.clients.push_back({static_cast<ClientId>(i + 1), n, costs[i]});
  }
  s.initial = InitialExpectation{initial};
  return make_scenario(std::move(s));
}

inline Scenario heterogeneous(const std::vector<Count>& samples, const std::vector<double>& costs, double sigma2) {
  Scenario s;
  s.name = "heterogeneous";
  s.prior.sigma_theta_sq = sigma2;
  s.mode = UtilityMode::heterogeneous;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    s.clients.push_back({static_cast<ClientId>(i + 1), samples[i], costs[i]});
  }
  s.initial = InitialExpectation{0};
  return make_scenario(std::move(s));
}

// Samples 1..4, u(N) = N / 10 on N = 0..10, starting coalition {1, 4}.
inline Scenario four_client_oracle(std::vector<double> costs = {0.05, 0.3, 0.55, 0.9},
                                   std::vector<ClientId> start = {1, 4}) {
  Scenario s;
  s.name = "oracle-four-client";
  s.prior.sigma_theta_sq = 1.0;
  s.mode = UtilityMode::oracle;
  TableOracle table;
  for (Count n = 0; n <= 10; ++n) table.points.emplace_back(n, static_cast<double>(n) / 10.0);
  s.oracle = table;
  for (int i = 0; i < 4; ++i) s.clients.push_back({i + 1, i + 1, costs[static_cast<std::size_t>(i)]});
  s.initial = InitialCoalition{std::move(start)};
  return make_scenario(std::move(s));
}

inline std::string mirror_document(int m = 20, Count n = 5, double sigma2 = 1.0) {
  std::ostringstream doc;
  doc << R"({"name": "mirror", "sigma_theta_sq": )" << sigma2 << R"(, "utility_mode": "homogeneous",
  "clients": {"count": )" << m << R"(, "samples": )" << n << R"(, "cost_model": {"kind": "mirror-utility"}},
  "initial": {"expectation": 0}})";
  return doc.str();
}

inline Scenario mirror(int m = 20, Count n = 5, double sigma2 = 1.0) { return load_scenario(mirror_document(m, n, sigma2)); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace fedpart::test
