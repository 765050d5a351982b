#pragma once

// Expected-MSE utility of the federated mean-estimation model.
//
// A client with n_i samples either estimates its mean locally or shares the
// coalition's sample-weighted estimator. Utility gain is the drop in expected
// MSE from joining; all values are in MSE units and compared directly with
// costs. Comparisons against costs are exact (no epsilon) so traces replay
// bit-for-bit.

#include <span>

#include "fedpart/model.hpp"

namespace fedpart {

// 1/n_i + sigma2
double local_mse(Count n_i, double sigma2);

// Expected MSE of the shared estimator for member `i` of the coalition
// described by `samples`.
double coalition_mse(std::span<const Count> samples, std::size_t i, double sigma2);

// Utility gain of member `i`:
//   -1/N + 1/n_i - ((sum_{j!=i} n_j^2 - (N - n_i)^2) / N^2 - 2 (N - n_i) / N) sigma2
// This is the canonical gain; it is not the difference of the two MSE helpers
// above (the two disagree in the sign of the (N - n_i)^2 term).
double utility_gain(std::span<const Count> samples, std::size_t i, double sigma2);

// Equal sample counts, K members:
//   U(K, n) = (K - 1) / (K n) + (3K^2 - 5K + 2) / K^2 * sigma2,  U(0) = U(1) = 0.
double utility_gain_homogeneous(Count k, Count n, double sigma2);

// Same formula on real K; returns 0 for K <= 1 where the formula is not monotone.
double utility_gain_homogeneous_real(double k, double n, double sigma2);

struct GainSplit {
  double fixed_gain = 0.0;       // shared by every member of the coalition
  double additional_gain = 0.0;  // from the member's own samples
  double z_score = 0.0;          // additional_gain - cost
};

// Throws std::invalid_argument when total < n_i.
GainSplit gain_split(Count n_i, Count total, double all_sq_sum, double sigma2, double cost);

// 1/n_i + (2 n_i^2 / N^2 - 4 n_i / N) sigma2 on a real-valued coalition size.
double additional_gain(Count n_i, double total, double sigma2);

// u(0) = 0 and non-decreasing in N for every spec. `sigma2` is only read by
// the builtin homogeneous oracle.
double oracle_utility(const OracleSpec& spec, Count total, double sigma2);

}  // namespace fedpart
