#include "fedpart/utility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedpart {

double local_mse(Count n_i, double sigma2) {
  return 1.0 / static_cast<double>(n_i) + sigma2;
}

double coalition_mse(std::span<const Count> samples, std::size_t i, double sigma2) {
  double total = 0.0;
  double others_sq = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double n = static_cast<double>(samples[j]);
    total += n;
    if (j != i) others_sq += n * n;
  }
  const double n_i = static_cast<double>(samples[i]);
  const double rest = total - n_i;
  return 1.0 / total +
         ((others_sq + rest * rest) / (total * total) + 2.0 * n_i / total - 1.0) * sigma2;
}

double utility_gain(std::span<const Count> samples, std::size_t i, double sigma2) {
  double total = 0.0;
  double others_sq = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double n = static_cast<double>(samples[j]);
    total += n;
    if (j != i) others_sq += n * n;
  }
  const double n_i = static_cast<double>(samples[i]);
  const double rest = total - n_i;
  return -1.0 / total + 1.0 / n_i -
         ((others_sq - rest * rest) / (total * total) - 2.0 * rest / total) * sigma2;
}

double utility_gain_homogeneous(Count k, Count n, double sigma2) {
  if (k <= 1) return 0.0;
  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  return (kk - 1.0) / (kk * nn) + (3.0 * kk * kk - 5.0 * kk + 2.0) / (kk * kk) * sigma2;
}

double utility_gain_homogeneous_real(double k, double n, double sigma2) {
  if (k <= 1.0) return 0.0;
  return (k - 1.0) / (k * n) + (3.0 * k * k - 5.0 * k + 2.0) / (k * k) * sigma2;
}

double additional_gain(Count n_i, double total, double sigma2) {
  const double n = static_cast<double>(n_i);
  return 1.0 / n + (2.0 * n * n / (total * total) - 4.0 * n / total) * sigma2;
}

GainSplit gain_split(Count n_i, Count total, double all_sq_sum, double sigma2, double cost) {
  if (total < n_i || n_i < 1) {
    throw std::invalid_argument("gain_split: coalition total smaller than member samples");
  }
  const double nt = static_cast<double>(total);
  GainSplit split;
  split.fixed_gain = -1.0 / nt - (all_sq_sum / (nt * nt) - 3.0) * sigma2;
  split.additional_gain = additional_gain(n_i, nt, sigma2);
  split.z_score = split.additional_gain - cost;
  return split;
}

namespace {

struct OracleEval {
  Count total;
  double sigma2;

  double operator()(const BuiltinHomogeneousOracle& o) const {
    return utility_gain_homogeneous_real(static_cast<double>(total) / static_cast<double>(o.n_ref),
                                         static_cast<double>(o.n_ref), sigma2);
  }
  double operator()(const TableOracle& o) const {
    // last point with N_point <= total
    auto it = std::upper_bound(o.points.begin(), o.points.end(), total,
                               [](Count n, const auto& p) { return n < p.first; });
    if (it == o.points.begin()) return 0.0;
    return std::prev(it)->second;
  }
  double operator()(const LogSaturatingOracle& o) const {
    return o.scale * std::log1p(o.rate * static_cast<double>(total));
  }
};

}  // namespace

double oracle_utility(const OracleSpec& spec, Count total, double sigma2) {
  if (total <= 0) return 0.0;
  return std::visit(OracleEval{total, sigma2}, spec);
}

}  // namespace fedpart
