#pragma once

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace mmfair {

/// Gini coefficient  sum_k sum_l |r_k - r_l| / (2 n sum_k r_k).
/// Empty and all-zero vectors have no defined value.
template <typename Derived>
std::optional<typename Derived::Scalar> gini(const Eigen::DenseBase<Derived>& rates) {
  using Scalar = typename Derived::Scalar;
  const auto n = rates.size();
  if (n == 0) return std::nullopt;
  const Scalar total = rates.sum();
  if (!(total > Scalar(0))) return std::nullopt;
  Scalar spread(0);
  for (Eigen::Index k = 0; k < n; ++k) {
    spread += (rates.derived().array() - rates.derived()(k)).abs().sum();
  }
  return spread / (Scalar(2) * Scalar(n) * total);
}

template <typename Scalar>
std::optional<Scalar> gini(std::span<const Scalar> rates) {
  return gini(Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>(
      rates.data(), static_cast<Eigen::Index>(rates.size())));
}

template <typename Scalar>
struct MaxMinMeasure {
  Scalar value = Scalar(0);
  // Set when a zero rate makes the measure degenerate; value is -inf.
  bool degenerate = false;
};

/// Limit of the generalised fairness measure as beta grows without bound:
/// -max_k (sum_l r_l / r_k). Equals -n for n equal rates.
template <typename Derived>
MaxMinMeasure<typename Derived::Scalar> max_min_measure(const Eigen::DenseBase<Derived>& rates) {
  using Scalar = typename Derived::Scalar;
  if (rates.size() == 0 || !(rates.minCoeff() > Scalar(0))) {
    return {-std::numeric_limits<Scalar>::infinity(), true};
  }
  return {-(rates.sum() / rates.minCoeff()), false};
}

template <typename Scalar>
MaxMinMeasure<Scalar> max_min_measure(std::span<const Scalar> rates) {
  return max_min_measure(Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>(
      rates.data(), static_cast<Eigen::Index>(rates.size())));
}

struct MetricsReport {
  double total_throughput = 0.0;
  double mean_throughput = 0.0;
  std::optional<double> gini;
  MaxMinMeasure<double> max_min;
};

inline MetricsReport summarize(std::span<const double> rates) {
  MetricsReport report;
  for (double r : rates) report.total_throughput += r;
  if (!rates.empty()) report.mean_throughput = report.total_throughput / static_cast<double>(rates.size());
  report.gini = gini(rates);
  report.max_min = max_min_measure(rates);
  return report;
}

inline MetricsReport summarize(const std::vector<double>& rates) {
  return summarize(std::span<const double>(rates));
}

}  // namespace mmfair
