#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace roughsel {

struct ClusterMapping {
  std::vector<std::size_t> cluster_to_class;
  std::size_t agreement = 0;
  double mapped_accuracy = 0.0;
  bool exhaustive = false;  // permutation search rather than majority vote

  std::vector<std::size_t> apply(std::span<const std::size_t> cluster_ids) const;
};

constexpr std::size_t kMaxPermutationClusters = 8;

// With as many clusters as classes (and at most kMaxPermutationClusters) the
// class permutation with the highest agreement wins, earliest permutation in
// lexicographic order on ties. Otherwise each cluster takes its majority
// class, ties -> lower class index.
ClusterMapping map_clusters_to_classes(std::span<const std::size_t> cluster_ids,
                                       std::span<const std::size_t> true_classes);
ClusterMapping majority_vote_mapping(std::span<const std::size_t> cluster_ids,
                                     std::span<const std::size_t> true_classes);

struct ConfusionReport {
  std::size_t positive_class = 0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::size_t n = 0;
  // Empty when the class the rate conditions on never occurs.
  std::optional<double> tp_rate, fn_rate, tn_rate, fp_rate;
  double accuracy = 0.0;
  double error = 0.0;
};

// Binary confusion counts against positive_class; every other label counts
// as negative.
ConfusionReport confusion(std::span<const std::size_t> predicted, std::span<const std::size_t> truth,
                          std::size_t positive_class);

struct MetricRow {
  std::string dataset;
  std::string method;
  ConfusionReport report;
};

// Accuracy in units of 1e-4, rounded half away from zero. The printed error
// is 10000 minus this so the two tables always sum to exactly one.
long accuracy_ten_thousandths(double accuracy);
std::string format_fixed4(long ten_thousandths);
std::string format_rate(const std::optional<double>& rate);

// Accuracy and error tables: one row per dataset, one column per method.
std::string metrics_table(const std::vector<MetricRow>& rows);
// Rate table for one method in the TP / FP / TN / FN paired layout.
std::string rate_table(const std::vector<MetricRow>& rows, const std::string& method);
// dataset,method,accuracy,error,... for external plotting.
std::string metrics_csv(const std::vector<MetricRow>& rows);

}  // namespace roughsel
